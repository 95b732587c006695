#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stacklab/game.hpp"
#include "stacklab/sim.hpp"

namespace stacklab {

nlohmann::json game_to_json(const GameInstance& game);
GameInstance game_from_json(const nlohmann::json& j);

// Parses a JSON config document. Unknown keys are rejected; errors carry the
// offending line or key path. The result is validated.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

// Trace columns: run_seed,t,a,b,r_l,r_f,leader_algo,follower_algo.
void write_trace_csv(const std::vector<RunResult>& runs, const SimConfig& config,
                     const std::filesystem::path& path);
// Summary columns: checkpoint_t,metric,mean,std,n_seeds.
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

// 12 significant digits, the CSV number format.
std::string format_number(double v);

}  // namespace stacklab
