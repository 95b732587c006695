#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "stacklab/game.hpp"

namespace stacklab {

// What the follower learns about rewards each round.
enum class Information {
  kLimited,     // own noisy reward only
  kSide,        // own and the leader's noisy rewards
  kOmniscient,  // exact mean matrices of both players
};

// Per-pair bandit statistics kept by a learning follower. Leader rewards
// are only accepted (and only ever nonzero) in the side-information setting.
class FollowerBanditState {
 public:
  using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

  FollowerBanditState(int A, int B, double horizon, double delta, Information info);

  void update(ActionPair p, double r_f, std::optional<double> r_l = std::nullopt);

  int A() const { return static_cast<int>(counts_.rows()); }
  int B() const { return static_cast<int>(counts_.cols()); }
  Information information() const { return info_; }
  double horizon() const { return horizon_; }
  double delta() const { return delta_; }

  std::int64_t count(int a, int b) const { return counts_(a, b); }
  double mean_f(int a, int b) const { return sum_f_(a, b) / guarded(a, b); }
  double mean_l(int a, int b) const;
  const CountMatrix& counts() const { return counts_; }

  // sqrt(2 log(T/delta) / max(1,n)), the best-response UCB width.
  double ucb_width(int a, int b) const { return std::sqrt(ucb_radicand_ / guarded(a, b)); }
  // sqrt(2 log(ABT/delta) / max(1,n)), the manipulation confidence width.
  double fmucb_width(int a, int b) const { return std::sqrt(fmucb_radicand_ / guarded(a, b)); }

  // Upper confidence bound on follower reward and lower confidence bound on
  // leader reward, both with the manipulation width.
  Eigen::MatrixXd follower_upper() const;
  Eigen::MatrixXd leader_lower() const;

  // Replaces the raw statistics, for tests and warm starts.
  void set_statistics(const CountMatrix& counts, const Eigen::MatrixXd& sum_f,
                      const Eigen::MatrixXd& sum_l);

 private:
  double guarded(int a, int b) const {
    return static_cast<double>(std::max<std::int64_t>(1, counts_(a, b)));
  }

  CountMatrix counts_;
  Eigen::MatrixXd sum_f_;
  Eigen::MatrixXd sum_l_;
  double horizon_;
  double delta_;
  Information info_;
  double ucb_radicand_;
  double fmucb_radicand_;
};

// Optimistic best response to a_t from the follower's own statistics.
int ucb_respond(const FollowerBanditState& state, int a_t);

struct FmucbPlan {
  ManipulationPlan plan;
  // Every candidate was eliminated; the plan is built around the last one.
  bool fallback = false;
  int eliminated = 0;
};

// One round of manipulation planning from confidence bounds. The candidate
// set starts from all pairs on every call.
FmucbPlan fmucb_plan(const FollowerBanditState& state);

int fmucb_respond(const FollowerBanditState& state, int a_t);

}  // namespace stacklab
