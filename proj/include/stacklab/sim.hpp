#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stacklab/follower.hpp"
#include "stacklab/game.hpp"
#include "stacklab/gaps.hpp"

namespace stacklab {

enum class LeaderAlgo { kExp3, kUcbe, kUcb };
enum class FollowerAlgo { kUcb, kFbm, kFmucb, kFbmPessimistic };
enum class NoiseMode { kBernoulli, kNoiseless };

std::string to_string(LeaderAlgo algo);
std::string to_string(FollowerAlgo algo);
std::string to_string(Information info);
std::string to_string(NoiseMode mode);

// Either explicit matrices or a seeded uniform random game.
struct GameSource {
  std::optional<GameInstance> explicit_game;
  int A = 5;
  int B = 5;
  std::uint64_t seed = 0;

  GameInstance resolve() const;
};

struct LeaderParams {
  LeaderAlgo algo = LeaderAlgo::kExp3;
  std::optional<double> alpha;  // default T^(-1/3)
  std::optional<double> eta;    // default T^(-1/3)
  std::optional<double> s0;     // explicit UCBE bonus; overrides the formula
  double s0_multiplier = 1.0;
  std::optional<double> epsilon;  // default taken from the game's gap profile
  double delta = 0.01;
};

struct FollowerParams {
  FollowerAlgo algo = FollowerAlgo::kUcb;
  double delta = 0.01;
  Information info = Information::kLimited;
};

struct SimConfig {
  GameSource game;
  LeaderParams leader;
  FollowerParams follower;
  std::int64_t horizon = 1000;
  std::vector<std::uint64_t> seeds{1};
  NoiseMode noise = NoiseMode::kBernoulli;
  std::int64_t trace_every = 0;  // 0 records no per-round trace
  std::int64_t window = 1000;    // trailing window for hit rates
  std::vector<std::int64_t> checkpoints;  // empty: 1-2-5 spacing plus T

  // Throws ConfigError naming the broken invariant.
  void validate() const;
  std::vector<std::int64_t> resolved_checkpoints() const;
};

// Oracle quantities every run is scored against.
struct GroundTruth {
  GameInstance game;
  GapProfile<double> gaps;
  ResponseFunction best_response;
  ManipulationPlan best_manipulation;  // greedy FBM plan, target equals the oracle's
  std::optional<ManipulationPlan> pessimistic;

  explicit GroundTruth(GameInstance g);
};

struct RoundRecord {
  std::int64_t t = 0;
  int a = 0;
  int b = 0;
  double r_l = 0;
  double r_f = 0;
  std::uint64_t leader_distribution_hash = 0;  // EXP3 only
  std::optional<ActionPair> plan_target;       // manipulating followers only
  bool fallback = false;
};

struct MetricPoint {
  std::int64_t t = 0;
  double action_regret = 0;    // sum of mu_l(se) - mu_l(a_t, F_br(a_t)), nonnegative terms
  double realized_regret = 0;  // sum of mu_l(se) - mu_l(a_t, b_t), signed terms
  double follower_regret = 0;  // sum of mu_f(a_t, F_br(a_t)) - mu_f(a_t, b_t)
  double follower_avg_reward = 0;
  double leader_avg_reward = 0;
  std::int64_t wrong_manipulation = 0;  // rounds with b_t != F_opt(a_t)
  double trailing_hit_rate = 0;
};

struct RunMetrics {
  std::uint64_t seed = 0;
  ActionPair target;  // SE for best response, manipulation pair otherwise
  ActionPair last_pair;
  bool last_hit = false;
  MetricPoint final;
  std::vector<MetricPoint> series;
  std::vector<std::int64_t> leader_counts;
  std::int64_t fallback_rounds = 0;
  std::optional<ManipulationPlan> final_plan;  // FMUCB plan after the last update
};

struct RunResult {
  std::vector<RoundRecord> trace;
  RunMetrics metrics;
};

RunResult run_game(const SimConfig& config, const GroundTruth& truth, std::uint64_t seed);
RunResult run_game(const SimConfig& config, std::uint64_t seed);

struct SummaryRow {
  std::int64_t checkpoint_t;
  std::string metric;
  double mean;
  double std;
  int n_seeds;
  bool operator==(const SummaryRow&) const = default;
};

struct BatchResult {
  std::vector<RunResult> runs;  // in seed-list order
  std::vector<SummaryRow> summary;
};

// Runs every seed (up to `threads` at a time) and reduces each metric at each
// checkpoint to mean and population standard deviation.
BatchResult batch_run(const SimConfig& config, int threads = 1);

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs);

struct NonconvergenceReport {
  double fraction_a2 = 0;
  double realized_regret = 0;
  double average_realized_regret = 0;
  double trailing_hit_rate = 0;
};

// Plays the two-action lock-out game noiselessly, UCB follower against the
// given leader index policy.
NonconvergenceReport nonconvergence_probe(std::int64_t horizon, LeaderAlgo leader = LeaderAlgo::kUcb,
                                          double delta = 0.01, std::uint64_t seed = 1,
                                          std::optional<double> s0 = std::nullopt);

}  // namespace stacklab
