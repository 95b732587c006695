#include "stacklab/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <functional>
#include <thread>
#include <variant>

#include "stacklab/errors.hpp"
#include "stacklab/leader.hpp"
#include "stacklab/manipulation.hpp"

namespace stacklab {

std::string to_string(LeaderAlgo algo) {
  switch (algo) {
    case LeaderAlgo::kExp3: return "exp3";
    case LeaderAlgo::kUcbe: return "ucbe";
    case LeaderAlgo::kUcb: return "ucb";
  }
  return "?";
}

std::string to_string(FollowerAlgo algo) {
  switch (algo) {
    case FollowerAlgo::kUcb: return "ucb";
    case FollowerAlgo::kFbm: return "fbm";
    case FollowerAlgo::kFmucb: return "fmucb";
    case FollowerAlgo::kFbmPessimistic: return "fbm_pessimistic";
  }
  return "?";
}

std::string to_string(Information info) {
  switch (info) {
    case Information::kLimited: return "limited";
    case Information::kSide: return "side";
    case Information::kOmniscient: return "omniscient";
  }
  return "?";
}

std::string to_string(NoiseMode mode) {
  return mode == NoiseMode::kBernoulli ? "bernoulli" : "noiseless";
}

GameInstance GameSource::resolve() const {
  if (explicit_game) return *explicit_game;
  RngStream rng(seed);
  return random_game(A, B, rng);
}

void SimConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon T must be >= 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (trace_every < 0) throw ConfigError("trace_every must be >= 0");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (!game.explicit_game && (game.A < 1 || game.B < 1)) throw ConfigError("random game needs A, B >= 1");

  const auto& l = leader;
  if (l.alpha && !(*l.alpha >= 0.0 && *l.alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  if (l.eta && !(*l.eta > 0.0)) throw ConfigError("eta must be > 0");
  if (l.s0 && !(*l.s0 >= 0.0)) throw ConfigError("s0 must be >= 0");
  if (!(l.s0_multiplier > 0.0)) throw ConfigError("s0_multiplier must be > 0");
  if (l.epsilon && !(*l.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(l.delta > 0.0)) throw ConfigError("leader delta must be > 0");
  if (!(follower.delta > 0.0)) throw ConfigError("follower delta must be > 0");

  const Information info = follower.info;
  switch (follower.algo) {
    case FollowerAlgo::kUcb:
      if (info == Information::kOmniscient)
        throw ConfigError("follower ucb learns from samples; use information limited or side");
      break;
    case FollowerAlgo::kFbm:
      if (info != Information::kOmniscient) throw ConfigError("follower fbm requires information omniscient");
      break;
    case FollowerAlgo::kFbmPessimistic:
      if (info != Information::kOmniscient)
        throw ConfigError("follower fbm_pessimistic requires information omniscient");
      break;
    case FollowerAlgo::kFmucb:
      if (info != Information::kSide) throw ConfigError("follower fmucb requires information side");
      break;
  }

  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon)
      throw ConfigError("checkpoints must lie in [1, T]");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
      throw ConfigError("checkpoints must be strictly increasing");
  }
}

std::vector<std::int64_t> SimConfig::resolved_checkpoints() const {
  if (!checkpoints.empty()) return checkpoints;
  std::vector<std::int64_t> out;
  for (std::int64_t decade = 1; decade <= horizon; decade *= 10) {
    for (std::int64_t m : {1, 2, 5}) {
      const std::int64_t t = m * decade;
      if (t < horizon) out.push_back(t);
    }
    if (decade > horizon / 10) break;
  }
  out.push_back(horizon);
  return out;
}

GroundTruth::GroundTruth(GameInstance g)
    : game(std::move(g)),
      gaps(gap_profile(game)),
      best_response(best_response_function(game)),
      best_manipulation(fbm_solve(game)) {
  try {
    pessimistic = pessimistic_fbm_solve(game);
  } catch (const DegenerateGameError&) {
  }
}

namespace {

using Leader = std::variant<Exp3Leader, UcbeLeader, UcbLeader>;

Leader make_leader(const SimConfig& cfg, const GroundTruth& truth) {
  const auto& p = cfg.leader;
  const int A = truth.game.A(), B = truth.game.B();
  const double T = static_cast<double>(cfg.horizon);
  switch (p.algo) {
    case LeaderAlgo::kExp3:
      return Exp3Leader(A, p.alpha.value_or(exp3_theorem_rate(T)), p.eta.value_or(exp3_theorem_rate(T)));
    case LeaderAlgo::kUcbe: {
      double s0 = 0.0;
      if (p.s0) {
        s0 = *p.s0;
      } else {
        const bool manipulating = cfg.follower.algo != FollowerAlgo::kUcb;
        const double eps = p.epsilon.value_or(manipulating ? truth.gaps.side_epsilon()
                                                           : truth.gaps.limited_epsilon());
        s0 = ucbe_bonus(A, B, T, p.delta, eps, p.s0_multiplier);
      }
      return UcbeLeader(A, s0);
    }
    case LeaderAlgo::kUcb:
      return UcbLeader(A, T, p.delta);
  }
  throw ConfigError("unknown leader algorithm");
}

std::uint64_t hash_distribution(const Eigen::VectorXd& dist) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < dist.size(); ++i) {
    unsigned char bytes[sizeof(double)];
    const double v = dist(i);
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

ActionPair target_for(const SimConfig& cfg, const GroundTruth& truth) {
  switch (cfg.follower.algo) {
    case FollowerAlgo::kUcb: return truth.gaps.se;
    case FollowerAlgo::kFbm:
    case FollowerAlgo::kFmucb: return truth.gaps.fm;
    case FollowerAlgo::kFbmPessimistic:
      if (!truth.pessimistic) throw DegenerateGameError("no pessimistic manipulation for this game");
      return truth.pessimistic->target;
  }
  return truth.gaps.se;
}

const ResponseFunction& reference_response(const SimConfig& cfg, const GroundTruth& truth) {
  if (cfg.follower.algo == FollowerAlgo::kFbmPessimistic && truth.pessimistic)
    return truth.pessimistic->response;
  return truth.best_manipulation.response;
}

}  // namespace

RunResult run_game(const SimConfig& cfg, const GroundTruth& truth, std::uint64_t seed) {
  cfg.validate();
  const GameInstance& game = truth.game;
  const int A = game.A(), B = game.B();
  const auto& ml = game.mu_l();
  const auto& mf = game.mu_f();
  const bool noisy = cfg.noise == NoiseMode::kBernoulli;
  const FollowerAlgo falgo = cfg.follower.algo;
  const Information info = cfg.follower.info;

  const RngStream root(seed);
  RngStream leader_sample = root.substream("leader-sample");
  RngStream leader_reward = root.substream("leader-reward");
  RngStream follower_reward = root.substream("follower-reward");

  Leader leader = make_leader(cfg, truth);

  std::optional<FollowerBanditState> fstate;
  std::optional<ManipulationPlan> fixed_plan;
  switch (falgo) {
    case FollowerAlgo::kUcb:
    case FollowerAlgo::kFmucb:
      fstate.emplace(A, B, static_cast<double>(cfg.horizon), cfg.follower.delta, info);
      break;
    case FollowerAlgo::kFbm:
      fixed_plan = truth.best_manipulation;
      break;
    case FollowerAlgo::kFbmPessimistic:
      if (!truth.pessimistic) throw DegenerateGameError("no pessimistic manipulation for this game");
      fixed_plan = truth.pessimistic;
      break;
  }

  RunResult out;
  RunMetrics& m = out.metrics;
  m.seed = seed;
  m.target = target_for(cfg, truth);
  m.leader_counts.assign(static_cast<std::size_t>(A), 0);
  const ResponseFunction& reference = reference_response(cfg, truth);
  const double se_value = ml(truth.gaps.se.a, truth.gaps.se.b);
  const auto checkpoints = cfg.resolved_checkpoints();
  std::size_t next_checkpoint = 0;

  std::vector<char> window(static_cast<std::size_t>(cfg.window), 0);
  std::int64_t window_hits = 0;
  double sum_f = 0, sum_l = 0;
  MetricPoint cur;

  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    const int a = std::visit([&](auto& l) { return l.select(leader_sample); }, leader);

    int b = 0;
    RoundRecord rec;
    if (fixed_plan) {
      b = fixed_plan->response(a);
    } else if (falgo == FollowerAlgo::kUcb) {
      b = ucb_respond(*fstate, a);
    } else {
      const FmucbPlan plan = fmucb_plan(*fstate);
      b = plan.plan.response(a);
      rec.plan_target = plan.plan.target;
      rec.fallback = plan.fallback;
      m.fallback_rounds += plan.fallback;
    }

    const double r_l = noisy ? (leader_reward.bernoulli(ml(a, b)) ? 1.0 : 0.0) : ml(a, b);
    const double r_f = noisy ? (follower_reward.bernoulli(mf(a, b)) ? 1.0 : 0.0) : mf(a, b);

    std::visit([&](auto& l) { l.update(a, r_l); }, leader);
    if (fstate) {
      if (info == Information::kLimited)
        fstate->update({a, b}, r_f);
      else
        fstate->update({a, b}, r_f, r_l);
    }

    ++m.leader_counts[static_cast<std::size_t>(a)];
    const int br = truth.best_response(a);
    cur.t = t;
    cur.action_regret += se_value - ml(a, br);
    cur.realized_regret += se_value - ml(a, b);
    cur.follower_regret += mf(a, br) - mf(a, b);
    cur.wrong_manipulation += b != reference(a);
    sum_f += mf(a, b);
    sum_l += ml(a, b);

    const bool hit = a == m.target.a && b == m.target.b;
    char& slot = window[static_cast<std::size_t>((t - 1) % cfg.window)];
    window_hits += hit - slot;
    slot = hit;
    m.last_pair = {a, b};
    m.last_hit = hit;

    if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      cur.follower_avg_reward = sum_f / static_cast<double>(t);
      cur.leader_avg_reward = sum_l / static_cast<double>(t);
      cur.trailing_hit_rate =
          static_cast<double>(window_hits) / static_cast<double>(std::min<std::int64_t>(t, cfg.window));
      m.series.push_back(cur);
      ++next_checkpoint;
    }

    if (cfg.trace_every > 0 && (t % cfg.trace_every == 0 || t == 1)) {
      rec.t = t;
      rec.a = a;
      rec.b = b;
      rec.r_l = r_l;
      rec.r_f = r_f;
      if (const auto* e = std::get_if<Exp3Leader>(&leader))
        rec.leader_distribution_hash = hash_distribution(e->sampling_distribution());
      out.trace.push_back(rec);
    }
  }

  m.final = m.series.back();
  if (falgo == FollowerAlgo::kFmucb) m.final_plan = fmucb_plan(*fstate).plan;
  return out;
}

RunResult run_game(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  return run_game(config, GroundTruth(config.game.resolve()), seed);
}

namespace {

struct MetricField {
  const char* name;
  std::function<double(const MetricPoint&)> get;
};

const std::vector<MetricField>& metric_fields() {
  static const std::vector<MetricField> fields = {
      {"cum_action_regret", [](const MetricPoint& p) { return p.action_regret; }},
      {"cum_realized_regret", [](const MetricPoint& p) { return p.realized_regret; }},
      {"cum_follower_regret", [](const MetricPoint& p) { return p.follower_regret; }},
      {"avg_action_regret", [](const MetricPoint& p) { return p.action_regret / p.t; }},
      {"avg_realized_regret", [](const MetricPoint& p) { return p.realized_regret / p.t; }},
      {"follower_avg_reward", [](const MetricPoint& p) { return p.follower_avg_reward; }},
      {"leader_avg_reward", [](const MetricPoint& p) { return p.leader_avg_reward; }},
      {"wrong_manipulation_rounds", [](const MetricPoint& p) { return double(p.wrong_manipulation); }},
      {"trailing_hit_rate", [](const MetricPoint& p) { return p.trailing_hit_rate; }},
  };
  return fields;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs) {
  std::vector<SummaryRow> rows;
  if (runs.empty()) return rows;
  const auto& series = runs.front().metrics.series;
  for (std::size_t k = 0; k < series.size(); ++k) {
    for (const auto& field : metric_fields()) {
      const double first = field.get(runs.front().metrics.series[k]);
      bool constant = true;
      double mean = 0;
      for (const auto& r : runs) {
        const double v = field.get(r.metrics.series[k]);
        constant = constant && v == first;
        mean += v;
      }
      mean = constant ? first : mean / static_cast<double>(runs.size());
      double var = 0;
      for (const auto& r : runs) {
        const double d = field.get(r.metrics.series[k]) - mean;
        var += d * d;
      }
      var /= static_cast<double>(runs.size());
      rows.push_back({series[k].t, field.name, mean, std::sqrt(var), static_cast<int>(runs.size())});
    }
  }
  return rows;
}

BatchResult batch_run(const SimConfig& config, int threads) {
  config.validate();
  const GroundTruth truth(config.game.resolve());
  BatchResult out;
  out.runs.resize(config.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.seeds.size(); i = next++)
      out.runs[i] = run_game(config, truth, config.seeds[i]);
  };
  const int n = std::clamp<int>(threads, 1, static_cast<int>(config.seeds.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  out.summary = summarize(out.runs);
  return out;
}

NonconvergenceReport nonconvergence_probe(std::int64_t horizon, LeaderAlgo leader, double delta,
                                          std::uint64_t seed, std::optional<double> s0) {
  SimConfig cfg;
  cfg.game.explicit_game = nonconvergence_game();
  cfg.leader.algo = leader;
  cfg.leader.delta = delta;
  cfg.leader.s0 = s0;
  cfg.follower = {FollowerAlgo::kUcb, delta, Information::kLimited};
  cfg.horizon = horizon;
  cfg.seeds = {seed};
  cfg.noise = NoiseMode::kNoiseless;
  cfg.checkpoints = {horizon};
  const RunResult r = run_game(cfg, seed);

  NonconvergenceReport rep;
  rep.fraction_a2 = static_cast<double>(r.metrics.leader_counts[1]) / static_cast<double>(horizon);
  rep.realized_regret = r.metrics.final.realized_regret;
  rep.average_realized_regret = rep.realized_regret / static_cast<double>(horizon);
  rep.trailing_hit_rate = r.metrics.final.trailing_hit_rate;
  return rep;
}

}  // namespace stacklab
