#include "stacklab/follower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stacklab/errors.hpp"
#include "stacklab/manipulation.hpp"

namespace stacklab {

namespace {

void check_reward(double r, const char* who) {
  if (!(r >= 0.0 && r <= 1.0))
    throw ContractViolation(std::string(who) + " reward " + std::to_string(r) + " outside [0,1]");
}

}  // namespace

FollowerBanditState::FollowerBanditState(int A, int B, double horizon, double delta, Information info)
    : counts_(CountMatrix::Zero(A, B)),
      sum_f_(Eigen::MatrixXd::Zero(A, B)),
      sum_l_(Eigen::MatrixXd::Zero(A, B)),
      horizon_(horizon),
      delta_(delta),
      info_(info) {
  if (A < 1 || B < 1) throw ContractViolation("follower state needs A, B >= 1");
  if (info == Information::kOmniscient)
    throw ConfigError("an omniscient follower keeps no bandit statistics");
  if (!(horizon >= 1.0)) throw ContractViolation("horizon must be at least 1");
  if (!(delta > 0.0)) throw ContractViolation("delta must be positive");
  ucb_radicand_ = std::max(0.0, 2.0 * std::log(horizon / delta));
  fmucb_radicand_ = std::max(0.0, 2.0 * std::log(A * B * horizon / delta));
}

double FollowerBanditState::mean_l(int a, int b) const {
  if (info_ == Information::kLimited)
    throw ConfigError("leader rewards are not observable with limited information");
  return sum_l_(a, b) / guarded(a, b);
}

void FollowerBanditState::update(ActionPair p, double r_f, std::optional<double> r_l) {
  if (p.a < 0 || p.a >= A() || p.b < 0 || p.b >= B())
    throw IndexError("follower update at (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                     ") out of range");
  check_reward(r_f, "follower");
  if (info_ == Information::kLimited && r_l)
    throw ConfigError("leader reward supplied to a limited-information follower");
  if (info_ == Information::kSide && !r_l)
    throw ConfigError("side-information follower needs the leader reward");
  if (r_l) check_reward(*r_l, "leader");
  ++counts_(p.a, p.b);
  sum_f_(p.a, p.b) += r_f;
  if (r_l) sum_l_(p.a, p.b) += *r_l;
}

Eigen::MatrixXd FollowerBanditState::follower_upper() const {
  const Eigen::ArrayXXd n = counts_.cast<double>().array().max(1.0);
  return (sum_f_.array() / n + (fmucb_radicand_ / n).sqrt()).matrix();
}

Eigen::MatrixXd FollowerBanditState::leader_lower() const {
  if (info_ == Information::kLimited)
    throw ConfigError("leader rewards are not observable with limited information");
  const Eigen::ArrayXXd n = counts_.cast<double>().array().max(1.0);
  return (sum_l_.array() / n - (fmucb_radicand_ / n).sqrt()).matrix();
}

void FollowerBanditState::set_statistics(const CountMatrix& counts, const Eigen::MatrixXd& sum_f,
                                         const Eigen::MatrixXd& sum_l) {
  if (counts.rows() != A() || counts.cols() != B() || sum_f.rows() != A() || sum_f.cols() != B() ||
      sum_l.rows() != A() || sum_l.cols() != B())
    throw ContractViolation("statistics have wrong shape");
  if ((counts.array() < 0).any()) throw ContractViolation("counts must be nonnegative");
  if (info_ == Information::kLimited && (sum_l.array() != 0.0).any())
    throw ConfigError("leader rewards supplied to a limited-information follower");
  counts_ = counts;
  sum_f_ = sum_f;
  sum_l_ = sum_l;
}

int ucb_respond(const FollowerBanditState& state, int a_t) {
  if (a_t < 0 || a_t >= state.A()) throw IndexError("leader action " + std::to_string(a_t) + " out of range");
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < state.B(); ++b) {
    const double v = state.mean_f(a_t, b) + state.ucb_width(a_t, b);
    if (v > best_value) {
      best = b;
      best_value = v;
    }
  }
  return best;
}

FmucbPlan fmucb_plan(const FollowerBanditState& state) {
  const int A = state.A(), B = state.B();
  const Eigen::MatrixXd upper_f = state.follower_upper();
  const Eigen::MatrixXd lower_l = state.leader_lower();

  // Lowest leader confidence bound per row; independent of the candidate.
  ResponseFunction pessimistic{std::vector<int>(static_cast<std::size_t>(A))};
  Eigen::VectorXd row_low(A);
  for (int a = 0; a < A; ++a) {
    pessimistic.map[a] = detail::argmin_first(lower_l.row(a));
    row_low(a) = lower_l(a, pessimistic(a));
  }

  Matrix<bool> alive = Matrix<bool>::Constant(A, B, true);
  FmucbPlan out;
  ActionPair cand{0, 0};
  for (int remaining = A * B; remaining > 0; --remaining) {
    cand = detail::argmax_candidate(upper_f, alive);
    double competitor = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a)
      if (a != cand.a) competitor = std::max(competitor, row_low(a));
    if (!(competitor >= state.mean_l(cand.a, cand.b))) {
      out.plan = {detail::with_target(pessimistic, cand), cand};
      return out;
    }
    alive(cand.a, cand.b) = false;
    ++out.eliminated;
  }
  out.plan = {detail::with_target(pessimistic, cand), cand};
  out.fallback = true;
  return out;
}

int fmucb_respond(const FollowerBanditState& state, int a_t) {
  if (a_t < 0 || a_t >= state.A()) throw IndexError("leader action " + std::to_string(a_t) + " out of range");
  return fmucb_plan(state).plan.response(a_t);
}

}  // namespace stacklab
