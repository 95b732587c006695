// Command-line driver: runs a JSON config or a named experiment preset and
// writes trace/summary CSV plus a JSON report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stacklab/errors.hpp"
#include "stacklab/io.hpp"
#include "stacklab/presets.hpp"
#include "stacklab/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stacklab;

namespace {

enum ExitCode { kOk = 0, kExpectationFailed = 1, kUsage = 2, kRuntime = 3 };

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw ConfigError("bad seed '" + item + "'");
    seeds.push_back(v);
  }
  if (seeds.empty()) throw ConfigError("--seeds needs at least one seed");
  return seeds;
}

void write_json(const json& j, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void report_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated Stackelberg game simulator with learning leaders and manipulating followers"};
  std::string config_path, preset, out_dir = "stacklab_out", seeds_csv;
  std::int64_t horizon = 0, trace_every = -1;
  bool noiseless = false, theorem_schedule = false, list = false;
  int threads = 1;
  app.add_option("--config", config_path, "JSON simulation config");
  app.add_option("--preset", preset, "named experiment preset");
  app.add_option("--out", out_dir, "output directory (STACKLAB_OUT overrides)");
  app.add_option("--seeds", seeds_csv, "comma-separated run seeds");
  app.add_option("--horizon", horizon, "number of rounds T")->check(CLI::PositiveNumber);
  app.add_flag("--noiseless", noiseless, "players receive mean rewards instead of Bernoulli draws");
  app.add_option("--threads", threads, "parallel runs per batch")->check(CLI::PositiveNumber);
  app.add_option("--trace-every", trace_every, "record every k-th round in the trace CSV (0: none)");
  app.add_flag("--theorem-schedule", theorem_schedule, "EXP3 alpha = eta = T^(-1/3) in presets");
  app.add_flag("--list-presets", list, "print preset names and exit");
  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("STACKLAB_OUT"); env && *env) out_dir = env;

  if (list) {
    for (const auto& name : preset_names()) std::cout << name << '\n';
    return kOk;
  }
  if (config_path.empty() == preset.empty()) {
    report_error("usage", "give exactly one of --config or --preset");
    return kUsage;
  }

  try {
    std::optional<std::vector<std::uint64_t>> seeds;
    if (!seeds_csv.empty()) seeds = parse_seed_list(seeds_csv);

    if (!config_path.empty()) {
      SimConfig cfg = load_config(config_path);
      if (seeds) cfg.seeds = *seeds;
      if (horizon > 0) {
        cfg.horizon = horizon;
        cfg.checkpoints.clear();
      }
      if (noiseless) cfg.noise = NoiseMode::kNoiseless;
      if (trace_every >= 0) cfg.trace_every = trace_every;
      cfg.validate();
      const BatchResult result = batch_run(cfg, threads);
      const fs::path out(out_dir);
      write_trace_csv(result.runs, cfg, out / "trace.csv");
      write_summary_csv(result.summary, out / "summary.csv");
      json report{{"passed", true}, {"T", cfg.horizon}, {"n_seeds", cfg.seeds.size()}};
      report["final"] = json::array();
      for (const auto& r : result.runs)
        report["final"].push_back({{"seed", r.metrics.seed},
                                   {"follower_avg_reward", r.metrics.final.follower_avg_reward},
                                   {"leader_avg_reward", r.metrics.final.leader_avg_reward},
                                   {"trailing_hit_rate", r.metrics.final.trailing_hit_rate},
                                   {"last_pair", {r.metrics.last_pair.a, r.metrics.last_pair.b}},
                                   {"fallback_rounds", r.metrics.fallback_rounds}});
      write_json(report, out / "report.json");
      std::cout << "wrote " << (out / "summary.csv").string() << '\n';
      return kOk;
    }

    const ExperimentPreset p = make_preset(preset);
    PresetOptions opts;
    if (horizon > 0) opts.horizon = horizon;
    opts.seeds = seeds;
    opts.noiseless = noiseless;
    opts.theorem_schedule = theorem_schedule;
    opts.threads = threads;
    ExperimentPreset runnable = p;
    if (trace_every >= 0)
      for (auto& r : runnable.runs) r.config.trace_every = trace_every;
    const PresetOutcome outcome = run_preset(runnable, opts);
    const fs::path out = fs::path(out_dir) / outcome.name;
    for (const auto& b : outcome.batches) {
      write_trace_csv(b.result.runs, b.config, out / (b.label + "_trace.csv"));
      write_summary_csv(b.result.summary, out / (b.label + "_summary.csv"));
    }
    const json report = outcome_to_json(outcome);
    write_json(report, out / "report.json");
    for (const auto& c : outcome.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": observed " << c.observed << ' ' << c.relation << ' '
                << c.expected << (c.relation == "==" ? " +/- " + std::to_string(c.tolerance) : "") << '\n';
    std::cout << "values " << report["values"].dump() << '\n';
    if (!outcome.passed()) {
      std::cerr << json{{"error", "expectation"}, {"report", (out / "report.json").string()}}.dump() << '\n';
      return kExpectationFailed;
    }
    return kOk;
  } catch (const ConfigError& e) {
    report_error("config", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return kRuntime;
  }
}
