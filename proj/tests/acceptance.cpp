// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stacklab/follower.hpp"
#include "stacklab/gaps.hpp"
#include "stacklab/leader.hpp"
#include "stacklab/manipulation.hpp"
#include "stacklab/oracles.hpp"
#include "stacklab/sim.hpp"

using namespace stacklab;

namespace {

// Pinned tolerances and limits.
constexpr double kHitRate = 0.9;
constexpr double kRewardTol = 0.05;
constexpr double kGapTol = 0.05;
constexpr int kGapGames = 50;
constexpr int kGapRequired = 45;
constexpr int kOracleGames = 200;
constexpr double kLockoutFraction = 0.3;
constexpr double kLockoutRegret = 0.02;
constexpr int kFmucbGames = 20;
constexpr int kFmucbRequired = 18;
constexpr double kSigmas = 3.0;

struct Verdict {
  bool passed = true;
  std::string detail;
};

void note(Verdict& v, bool ok, const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += buf;
  v.passed = v.passed && ok;
}

SimConfig table1_run(FollowerAlgo follower, Information info, NoiseMode noise, std::int64_t T) {
  SimConfig c;
  c.game.explicit_game = table1_game();
  c.leader = {LeaderAlgo::kExp3, 0.01, 0.001};
  c.follower = {follower, 0.01, info};
  c.horizon = T;
  c.seeds = {1, 2, 3, 4, 5};
  c.noise = noise;
  c.checkpoints = {T};
  return c;
}

Verdict c1() {
  Verdict v;
  const auto batch = batch_run(table1_run(FollowerAlgo::kFbm, Information::kOmniscient, NoiseMode::kNoiseless, 100'000));
  for (const auto& r : batch.runs) {
    const auto& m = r.metrics.final;
    note(v, m.trailing_hit_rate >= kHitRate, "seed %llu hit %.4f", (unsigned long long)r.metrics.seed,
         m.trailing_hit_rate);
    note(v, std::abs(m.follower_avg_reward - 1.0) <= kRewardTol, "avg_f %.4f", m.follower_avg_reward);
  }
  return v;
}

Verdict c2() {
  Verdict v;
  const auto batch = batch_run(table1_run(FollowerAlgo::kUcb, Information::kLimited, NoiseMode::kBernoulli, 200'000));
  for (const auto& r : batch.runs) {
    const auto& m = r.metrics.final;
    note(v, m.trailing_hit_rate >= kHitRate, "seed %llu hit %.4f", (unsigned long long)r.metrics.seed,
         m.trailing_hit_rate);
    note(v, std::abs(m.follower_avg_reward - 0.1) <= kRewardTol, "avg_f %.4f", m.follower_avg_reward);
  }
  return v;
}

Verdict c3() {
  Verdict v;
  int close = 0, nonnegative = 0;
  for (int g = 1; g <= kGapGames; ++g) {
    SimConfig c;
    c.game.seed = static_cast<std::uint64_t>(g);
    c.leader = {LeaderAlgo::kExp3, 0.01, 0.001};
    c.horizon = 200'000;
    c.checkpoints = {c.horizon};
    const GroundTruth truth(c.game.resolve());
    c.follower = {FollowerAlgo::kFbm, 0.01, Information::kOmniscient};
    const double fbm = run_game(c, truth, 1).metrics.final.follower_avg_reward;
    c.follower = {FollowerAlgo::kUcb, 0.01, Information::kLimited};
    const double ucb = run_game(c, truth, 1).metrics.final.follower_avg_reward;
    close += std::abs((fbm - ucb) - truth.gaps.manipulation_gap) <= kGapTol;
    nonnegative += truth.gaps.manipulation_gap >= 0;
  }
  note(v, close >= kGapRequired, "advantage within %.2f of Gap in %d/%d games", kGapTol, close, kGapGames);
  note(v, nonnegative == kGapGames, "Gap >= 0 in %d/%d games", nonnegative, kGapGames);
  return v;
}

Verdict c4() {
  Verdict v;
  RngStream rng(20240);
  int fbm_bad = 0, pess_bad = 0;
  for (int i = 0; i < kOracleGames; ++i) {
    const int A = 2 + static_cast<int>(rng.uniform01() * 3);
    const int B = 2 + static_cast<int>(rng.uniform01() * 3);
    const auto g = random_game(A, B, rng);
    fbm_bad += fbm_solve(g).target != best_manipulation_oracle(g).target;
    pess_bad += pessimistic_fbm_solve(g).target != pessimistic_oracle(g).plan.target;
  }
  note(v, fbm_bad == 0, "fbm mismatches %d/%d", fbm_bad, kOracleGames);
  note(v, pess_bad == 0, "pessimistic mismatches %d/%d", pess_bad, kOracleGames);
  return v;
}

Verdict c5() {
  Verdict v;
  const auto ucb = nonconvergence_probe(1'000'000, LeaderAlgo::kUcb, 0.01);
  note(v, ucb.fraction_a2 <= kLockoutFraction, "ucb-ucb a2 fraction %.4f", ucb.fraction_a2);
  note(v, ucb.average_realized_regret >= kLockoutRegret, "ucb-ucb avg regret %.4f", ucb.average_realized_regret);
  const auto ucbe = nonconvergence_probe(1'000'000, LeaderAlgo::kUcbe, 0.01);
  note(v, ucbe.trailing_hit_rate >= kHitRate, "ucbe-ucb hit %.4f", ucbe.trailing_hit_rate);
  return v;
}

Verdict c6() {
  Verdict v;
  int plan_ok = 0, sublinear = 0;
  for (int g = 1; g <= kFmucbGames; ++g) {
    SimConfig c;
    c.game.seed = static_cast<std::uint64_t>(g);
    c.leader.algo = LeaderAlgo::kUcbe;
    c.follower = {FollowerAlgo::kFmucb, 0.01, Information::kSide};
    c.horizon = 200'000;
    c.checkpoints = {20'000, 200'000};
    const GroundTruth truth(c.game.resolve());
    const auto m = run_game(c, truth, 1).metrics;
    plan_ok += m.final_plan && m.final_plan->target == best_manipulation_oracle(truth.game).target;
    const double early = m.series[0].wrong_manipulation / 20'000.0;
    const double late = m.series[1].wrong_manipulation / 200'000.0;
    sublinear += late < early;
  }
  note(v, plan_ok >= kFmucbRequired, "final plan matches oracle in %d/%d", plan_ok, kFmucbGames);
  note(v, sublinear >= kFmucbRequired, "T_fw/T decreasing in %d/%d", sublinear, kFmucbGames);
  return v;
}

Verdict c7() {
  Verdict v;
  RngStream rng(7);

  int simplex_bad = 0;
  for (int A : {2, 5, 10}) {
    Exp3Leader leader(A, 0.05, 0.2);
    for (int t = 0; t < 100'000; ++t) {
      const int a = leader.select(rng);
      leader.update(a, rng.uniform01());
      const Eigen::VectorXd p = leader.sampling_distribution();
      simplex_bad += std::abs(p.sum() - 1.0) > 1e-9 || p.minCoeff() < 0.05 / A - 1e-12 || !p.allFinite();
    }
  }
  note(v, simplex_bad == 0, "exp3 simplex/floor violations %d", simplex_bad);

  int range_bad = 0;
  {
    UcbLeader ucb(4, 1e5, 0.01);
    UcbeLeader ucbe(4, 50.0);
    for (int t = 1; t <= 100'000; ++t) {
      for (IndexLeader* l : {static_cast<IndexLeader*>(&ucb), static_cast<IndexLeader*>(&ucbe)}) {
        const int a = l->select();
        l->update(a, rng.bernoulli(0.2 + 0.2 * a) ? 1.0 : 0.0);
        std::int64_t n = 0;
        for (int k = 0; k < 4; ++k) {
          n += l->count(k);
          range_bad += l->mean(k) < 0.0 || l->mean(k) > 1.0;
        }
        range_bad += n != t;
      }
    }
  }
  note(v, range_bad == 0, "index mean/count violations %d", range_bad);

  int collapse_bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_game(2 + i % 4, 2 + (i / 4) % 4, rng);
    FollowerBanditState s(g.A(), g.B(), 1e5, 0.01, Information::kSide);
    const std::int64_t n = std::int64_t(1) << 50;
    s.set_statistics(FollowerBanditState::CountMatrix::Constant(g.A(), g.B(), n), g.mu_f() * double(n),
                     g.mu_l() * double(n));
    collapse_bad += !(fmucb_plan(s).plan == fbm_solve(g));
  }
  note(v, collapse_bad == 0, "fmucb collapse mismatches %d/100", collapse_bad);

  const Eigen::Vector4d mu(0.1, 0.4, 0.6, 0.9);
  const double eta = 0.05;
  Exp3Leader base(4, 0.1, eta);
  Eigen::VectorXd y(4);
  y << 0.5, -0.5, 0.0, 1.5;
  base.set_scores(y);
  const int trials = 1'000'000;
  Eigen::Vector4d sum = Eigen::Vector4d::Zero(), sum_sq = Eigen::Vector4d::Zero();
  for (int i = 0; i < trials; ++i) {
    Exp3Leader l = base;
    const int a = l.select(rng);
    l.update(a, rng.bernoulli(mu(a)) ? 1.0 : 0.0);
    const Eigen::Vector4d inc = l.scores() - y;
    sum += inc;
    sum_sq += inc.cwiseProduct(inc);
  }
  int biased = 0;
  for (int a = 0; a < 4; ++a) {
    const double mean = sum(a) / trials;
    const double se = std::sqrt((sum_sq(a) / trials - mean * mean) / trials);
    biased += std::abs(mean - eta * mu(a)) > kSigmas * se;
  }
  note(v, biased == 0, "estimator components outside %.0f sigma %d/4", kSigmas, biased);
  return v;
}

struct Criterion {
  const char* id;
  const char* title;
  double time_limit;  // seconds; <= 0 means none
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"C1", "two-by-two convergence under manipulation", 5, c1},
      {"C2", "two-by-two equilibrium convergence with a best-responding follower", 10, c2},
      {"C3", "manipulation advantage equals the oracle gap", 0, c3},
      {"C4", "greedy solvers match the exhaustive oracles", 30, c4},
      {"C5", "lock-out game: UCB fails, UCBE converges", 60, c5},
      {"C6", "FMUCB learns the manipulation plan", 0, c6},
      {"C7", "learner invariant suite", 60, c7},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0) note(v, secs < c.time_limit, "runtime %.2fs (limit %.0fs)", secs, c.time_limit);
    else note(v, true, "runtime %.2fs", secs);
    std::printf("%s %s %s: %s\n", v.passed ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.passed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
