#include "stacklab/presets.hpp"

#include <cmath>

#include "stacklab/errors.hpp"
#include "stacklab/gaps.hpp"

namespace stacklab {

namespace {

constexpr std::uint64_t kFigureGameSeed = 1;

SimConfig base(GameSource game, std::int64_t horizon) {
  SimConfig c;
  c.game = std::move(game);
  c.horizon = horizon;
  c.seeds = {1, 2, 3, 4, 5};
  return c;
}

GameSource named(GameInstance g) {
  GameSource s;
  s.explicit_game = std::move(g);
  return s;
}

GameSource random_source(std::uint64_t seed) {
  GameSource s;
  s.A = 5;
  s.B = 5;
  s.seed = seed;
  return s;
}

SimConfig with_exp3(SimConfig c, double alpha, double eta) {
  c.leader = {};
  c.leader.algo = LeaderAlgo::kExp3;
  c.leader.alpha = alpha;
  c.leader.eta = eta;
  return c;
}

SimConfig with_leader(SimConfig c, LeaderAlgo algo) {
  c.leader = {};
  c.leader.algo = algo;
  return c;
}

SimConfig with_follower(SimConfig c, FollowerAlgo algo, Information info) {
  c.follower = {algo, 0.01, info};
  return c;
}

ExpectationCheck near(std::string name, double observed, double expected, double tol, std::string basis) {
  return {std::move(name), observed, expected, tol, "==", std::move(basis),
          std::abs(observed - expected) <= tol};
}

ExpectationCheck at_least(std::string name, double observed, double bound, std::string basis) {
  return {std::move(name), observed, bound, 0.0, ">=", std::move(basis), observed >= bound};
}

ExpectationCheck at_most(std::string name, double observed, double bound, std::string basis) {
  return {std::move(name), observed, bound, 0.0, "<=", std::move(basis), observed <= bound};
}

double follower_avg(const BatchResult& b) {
  return mean_final(b, [](const RunMetrics& m) { return m.final.follower_avg_reward; });
}

double hit_rate(const BatchResult& b) {
  return mean_final(b, [](const RunMetrics& m) { return m.final.trailing_hit_rate; });
}

ExperimentPreset table1_example() {
  ExperimentPreset p;
  p.name = "table1-example";
  p.description = "2x2 manipulation example: EXP3 leader against best-response and FBM followers";
  const SimConfig c = with_exp3(base(named(table1_game()), 100000), 0.01, 0.001);
  SimConfig noiseless = c;
  noiseless.noise = NoiseMode::kNoiseless;
  p.runs = {{"exp3-ucb", with_follower(noiseless, FollowerAlgo::kUcb, Information::kLimited)},
            {"exp3-fbm", with_follower(noiseless, FollowerAlgo::kFbm, Information::kOmniscient)}};
  p.evaluate = [](PresetOutcome& o) {
    const GameInstance game = table1_game();
    const auto gaps = gap_profile(game);
    o.checks.push_back(near("manipulation_gap", gaps.manipulation_gap, 0.9, 1e-12, "table value 1 - 0.1"));
    o.checks.push_back(near("fm_leader_action", gaps.fm.a, 1, 0, "manipulation pair (a2,b1)"));
    o.checks.push_back(near("fm_follower_action", gaps.fm.b, 0, 0, "manipulation pair (a2,b1)"));
    o.checks.push_back(
        at_least("fbm_trailing_hit_rate", hit_rate(o.batch("exp3-fbm").result), 0.9, "last-iterate convergence"));
    o.checks.push_back(
        at_least("ucb_trailing_hit_rate", hit_rate(o.batch("exp3-ucb").result), 0.9, "last-iterate convergence"));
    o.extra["advantage"] = follower_avg(o.batch("exp3-fbm").result) - follower_avg(o.batch("exp3-ucb").result);
  };
  return p;
}

ExperimentPreset nonconvergence() {
  ExperimentPreset p;
  p.name = "nonconvergence-ucb-ucb";
  p.description = "UCB-UCB lock-out game, noiseless rewards, with the UCBE-UCB contrast";
  SimConfig c = base(named(nonconvergence_game()), 1000000);
  c.noise = NoiseMode::kNoiseless;
  c.seeds = {1};
  p.runs = {{"ucb-ucb", with_follower(with_leader(c, LeaderAlgo::kUcb), FollowerAlgo::kUcb, Information::kLimited)},
            {"ucbe-ucb", with_follower(with_leader(c, LeaderAlgo::kUcbe), FollowerAlgo::kUcb, Information::kLimited)}};
  p.evaluate = [](PresetOutcome& o) {
    const auto& ucb = o.batch("ucb-ucb");
    const double T = static_cast<double>(ucb.config.horizon);
    const double frac = mean_final(ucb.result, [&](const RunMetrics& m) { return m.leader_counts[1] / T; });
    const double regret = mean_final(ucb.result, [&](const RunMetrics& m) { return m.final.realized_regret / T; });
    o.checks.push_back(at_most("ucb_fraction_a2", frac, 0.3, "optimal action played O(log T) times"));
    o.checks.push_back(at_least("ucb_average_realized_regret", regret, 0.02, "regret linear in T"));
    const auto& ucbe = o.batch("ucbe-ucb");
    o.extra["ucbe_fraction_a2"] =
        mean_final(ucbe.result, [&](const RunMetrics& m) { return m.leader_counts[1] / T; });
    o.extra["ucbe_trailing_hit_rate"] = hit_rate(ucbe.result);
  };
  return p;
}

ExperimentPreset fig_a() {
  ExperimentPreset p;
  p.name = "fig-a-limited";
  p.description = "random 5x5 game, limited information: EXP3-UCB and UCBE-UCB leader regret";
  const SimConfig c = base(random_source(kFigureGameSeed), 200000);
  p.runs = {{"exp3-ucb", with_follower(with_exp3(c, 0.01, 0.001), FollowerAlgo::kUcb, Information::kLimited)},
            {"ucbe-ucb", with_follower(with_leader(c, LeaderAlgo::kUcbe), FollowerAlgo::kUcb, Information::kLimited)}};
  p.evaluate = [](PresetOutcome& o) {
    for (const auto& b : o.batches)
      o.extra[b.label + "_avg_action_regret"] =
          mean_final(b.result, [&](const RunMetrics& m) { return m.final.action_regret / double(m.final.t); });
  };
  return p;
}

ExperimentPreset fig_b() {
  ExperimentPreset p;
  p.name = "fig-b-omniscient";
  p.description = "random 5x5 game, omniscient follower: best response against FBM under EXP3";
  const SimConfig c = with_exp3(base(random_source(kFigureGameSeed), 200000), 0.01, 0.001);
  p.runs = {{"exp3-ucb", with_follower(c, FollowerAlgo::kUcb, Information::kLimited)},
            {"exp3-fbm", with_follower(c, FollowerAlgo::kFbm, Information::kOmniscient)}};
  p.evaluate = [](PresetOutcome& o) {
    const auto gaps = gap_profile(o.batch("exp3-fbm").config.game.resolve());
    const double adv = follower_avg(o.batch("exp3-fbm").result) - follower_avg(o.batch("exp3-ucb").result);
    o.checks.push_back(near("advantage_vs_oracle_gap", adv, gaps.manipulation_gap, 0.05, "oracle Gap of this game"));
    o.checks.push_back(at_least("oracle_gap_nonnegative", gaps.manipulation_gap, 0.0, "Gap >= 0"));
  };
  return p;
}

ExperimentPreset fig_c() {
  ExperimentPreset p;
  p.name = "fig-c-noisy-side";
  p.description = "random 5x5 game, noisy side information: UCB against FMUCB under EXP3 and UCBE";
  const SimConfig c = base(random_source(kFigureGameSeed), 200000);
  const SimConfig exp3 = with_exp3(c, 0.1, 0.001);
  const SimConfig ucbe = with_leader(c, LeaderAlgo::kUcbe);
  p.runs = {{"exp3-ucb", with_follower(exp3, FollowerAlgo::kUcb, Information::kLimited)},
            {"exp3-fmucb", with_follower(exp3, FollowerAlgo::kFmucb, Information::kSide)},
            {"ucbe-ucb", with_follower(ucbe, FollowerAlgo::kUcb, Information::kLimited)},
            {"ucbe-fmucb", with_follower(ucbe, FollowerAlgo::kFmucb, Information::kSide)}};
  p.evaluate = [](PresetOutcome& o) {
    const auto gaps = gap_profile(o.batch("exp3-fmucb").config.game.resolve());
    o.extra["oracle_gap"] = gaps.manipulation_gap;
    for (const char* leader : {"exp3", "ucbe"}) {
      const std::string l(leader);
      o.extra[l + "_advantage"] =
          follower_avg(o.batch(l + "-fmucb").result) - follower_avg(o.batch(l + "-ucb").result);
    }
  };
  return p;
}

ExperimentPreset fmucb_theory_delta() {
  ExperimentPreset p;
  p.name = "fmucb-theory-delta";
  p.description = "random 5x5 game, UCBE leader against FMUCB with delta = T^-3 for both players";
  const std::int64_t T = 200000;
  const double delta = std::pow(static_cast<double>(T), -3.0);
  SimConfig c = with_leader(base(random_source(kFigureGameSeed), T), LeaderAlgo::kUcbe);
  c.leader.delta = delta;
  c = with_follower(c, FollowerAlgo::kFmucb, Information::kSide);
  c.follower.delta = delta;
  p.runs = {{"ucbe-fmucb", c}};
  p.evaluate = [](PresetOutcome& o) {
    const auto& b = o.batch("ucbe-fmucb");
    const auto fm = gap_profile(b.config.game.resolve()).fm;
    int matches = 0;
    for (const auto& r : b.result.runs) matches += r.metrics.final_plan && r.metrics.final_plan->target == fm;
    o.extra["final_plan_matches"] = matches;
    o.extra["runs"] = b.result.runs.size();
  };
  return p;
}

}  // namespace

bool PresetOutcome::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const LabeledBatch& PresetOutcome::batch(const std::string& label) const {
  for (const auto& b : batches)
    if (b.label == label) return b;
  throw ConfigError("preset has no run labeled '" + label + "'");
}

std::vector<std::string> preset_names() {
  return {"table1-example", "nonconvergence-ucb-ucb", "fig-a-limited", "fig-b-omniscient", "fig-c-noisy-side",
          "fmucb-theory-delta"};
}

ExperimentPreset make_preset(const std::string& name) {
  if (name == "table1-example") return table1_example();
  if (name == "nonconvergence-ucb-ucb") return nonconvergence();
  if (name == "fig-a-limited") return fig_a();
  if (name == "fig-b-omniscient") return fig_b();
  if (name == "fig-c-noisy-side") return fig_c();
  if (name == "fmucb-theory-delta") return fmucb_theory_delta();
  throw ConfigError("unknown preset '" + name + "'");
}

double mean_final(const BatchResult& batch, const std::function<double(const RunMetrics&)>& get) {
  double s = 0;
  for (const auto& r : batch.runs) s += get(r.metrics);
  return batch.runs.empty() ? 0.0 : s / static_cast<double>(batch.runs.size());
}

PresetOutcome run_preset(const ExperimentPreset& preset, const PresetOptions& options) {
  PresetOutcome out;
  out.name = preset.name;
  for (PresetRun run : preset.runs) {
    SimConfig& c = run.config;
    if (options.horizon) c.horizon = *options.horizon;
    if (options.seeds) c.seeds = *options.seeds;
    if (options.noiseless) c.noise = NoiseMode::kNoiseless;
    if (options.theorem_schedule && c.leader.algo == LeaderAlgo::kExp3) {
      c.leader.alpha.reset();
      c.leader.eta.reset();
    }
    c.checkpoints.clear();
    out.batches.push_back({run.label, c, batch_run(c, options.threads)});
  }
  if (preset.evaluate) preset.evaluate(out);
  return out;
}

nlohmann::json outcome_to_json(const PresetOutcome& o) {
  nlohmann::json j;
  j["preset"] = o.name;
  j["passed"] = o.passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : o.checks)
    j["checks"].push_back({{"name", c.name},
                           {"observed", c.observed},
                           {"expected", c.expected},
                           {"tolerance", c.tolerance},
                           {"relation", c.relation},
                           {"basis", c.basis},
                           {"passed", c.passed}});
  j["runs"] = nlohmann::json::array();
  for (const auto& b : o.batches) {
    j["runs"].push_back({{"label", b.label},
                         {"leader", to_string(b.config.leader.algo)},
                         {"follower", to_string(b.config.follower.algo)},
                         {"T", b.config.horizon},
                         {"n_seeds", b.config.seeds.size()},
                         {"follower_avg_reward", follower_avg(b.result)},
                         {"trailing_hit_rate", hit_rate(b.result)}});
  }
  j["values"] = o.extra.is_null() ? nlohmann::json::object() : o.extra;
  return j;
}

}  // namespace stacklab
