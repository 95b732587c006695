#include "stacklab/leader.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stacklab/errors.hpp"

namespace stacklab {

namespace {

void check_reward(double reward) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw ContractViolation("reward " + std::to_string(reward) + " outside [0,1]");
}

}  // namespace

Exp3Leader::Exp3Leader(int num_actions, double alpha, double eta)
    : alpha_(alpha),
      eta_(eta),
      y_(Eigen::VectorXd::Zero(num_actions)),
      x_(Eigen::VectorXd::Constant(num_actions, 1.0 / num_actions)) {
  if (num_actions < 1) throw ContractViolation("EXP3 needs at least one action");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("EXP3 alpha must lie in [0,1]");
  if (!(eta > 0.0)) throw ContractViolation("EXP3 eta must be positive");
}

Eigen::VectorXd Exp3Leader::softmax(const Eigen::VectorXd& y) {
  Eigen::VectorXd e = (y.array() - y.maxCoeff()).exp();
  return e / e.sum();
}

Eigen::VectorXd Exp3Leader::sampling_distribution() const {
  return (1.0 - alpha_) * x_.array() + alpha_ / num_actions();
}

double Exp3Leader::sampling_probability(int a) const {
  return (1.0 - alpha_) * x_(a) + alpha_ / num_actions();
}

int Exp3Leader::select(RngStream& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  int last_positive = 0;
  for (int a = 0; a < num_actions(); ++a) {
    const double p = sampling_probability(a);
    if (p > 0.0) last_positive = a;
    acc += p;
    if (u < acc) return a;
  }
  // Rounding left the cumulative sum just short of 1.
  return last_positive;
}

void Exp3Leader::update(int a, double reward) {
  if (a < 0 || a >= num_actions()) throw IndexError("EXP3 action " + std::to_string(a) + " out of range");
  check_reward(reward);
  ++rounds_;
  if (reward == 0.0) return;
  y_(a) += eta_ * reward / sampling_probability(a);
  x_ = softmax(y_);
}

void Exp3Leader::set_scores(const Eigen::VectorXd& y) {
  if (y.size() != y_.size()) throw ContractViolation("score vector has wrong length");
  y_ = y;
  x_ = softmax(y_);
}

IndexLeader::IndexLeader(int num_actions, double radicand)
    : counts_(Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(num_actions)),
      sums_(Eigen::VectorXd::Zero(num_actions)),
      radicand_(radicand) {
  if (num_actions < 1) throw ContractViolation("index policy needs at least one action");
  if (!(radicand >= 0.0)) throw ContractViolation("exploration bonus must be nonnegative");
}

double IndexLeader::mean(int a) const {
  return sums_(a) / static_cast<double>(std::max<std::int64_t>(1, counts_(a)));
}

double IndexLeader::index(int a) const {
  const double n = static_cast<double>(std::max<std::int64_t>(1, counts_(a)));
  return sums_(a) / n + std::sqrt(radicand_ / n);
}

int IndexLeader::select() const {
  int best = 0;
  double best_index = index(0);
  for (int a = 1; a < num_actions(); ++a) {
    const double v = index(a);
    if (v > best_index) {
      best = a;
      best_index = v;
    }
  }
  return best;
}

void IndexLeader::update(int a, double reward) {
  if (a < 0 || a >= num_actions()) throw IndexError("leader action " + std::to_string(a) + " out of range");
  check_reward(reward);
  ++counts_(a);
  sums_(a) += reward;
}

void IndexLeader::set_statistics(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>& counts,
                                 const Eigen::VectorXd& sums) {
  if (counts.size() != counts_.size() || sums.size() != sums_.size())
    throw ContractViolation("statistics have wrong length");
  if ((counts.array() < 0).any()) throw ContractViolation("counts must be nonnegative");
  counts_ = counts;
  sums_ = sums;
}

UcbeLeader::UcbeLeader(int num_actions, double s0) : IndexLeader(num_actions, s0) {}

UcbLeader::UcbLeader(int num_actions, double horizon, double delta)
    : IndexLeader(num_actions, std::max(0.0, 2.0 * std::log(horizon / delta))) {}

double ucbe_bonus(int A, int B, double horizon, double delta, double epsilon, double multiplier) {
  if (std::isinf(epsilon)) return 0.0;
  if (!(epsilon > 0.0)) throw ContractViolation("UCBE epsilon must be positive");
  return multiplier * B / (epsilon * epsilon * epsilon) * std::log(A * B * horizon / delta);
}

double exp3_theorem_rate(double horizon) { return std::pow(horizon, -1.0 / 3.0); }

}  // namespace stacklab
