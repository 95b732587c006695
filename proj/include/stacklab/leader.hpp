#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "stacklab/rng.hpp"

namespace stacklab {

// EXP3 with an explicit uniform-exploration floor. Actions are drawn from
// (1 - alpha) * softmax(y) + alpha / A, and the played action's score y(a)
// accumulates eta times the importance-weighted reward.
class Exp3Leader {
 public:
  Exp3Leader(int num_actions, double alpha, double eta);

  int select(RngStream& rng);
  void update(int a, double reward);

  int num_actions() const { return static_cast<int>(y_.size()); }
  double alpha() const { return alpha_; }
  double eta() const { return eta_; }
  std::int64_t rounds() const { return rounds_; }
  const Eigen::VectorXd& scores() const { return y_; }
  const Eigen::VectorXd& weights() const { return x_; }
  Eigen::VectorXd sampling_distribution() const;
  double sampling_probability(int a) const;

  // Sets y directly and recomputes the weights.
  void set_scores(const Eigen::VectorXd& y);

  // Max-shifted softmax.
  static Eigen::VectorXd softmax(const Eigen::VectorXd& y);

 private:
  double alpha_;
  double eta_;
  Eigen::VectorXd y_;
  Eigen::VectorXd x_;
  std::int64_t rounds_ = 0;
};

// Arm statistics shared by the two index policies below. The index of arm a
// is mean(a) + sqrt(radicand / max(1, n(a))); unvisited arms have mean 0.
class IndexLeader {
 public:
  IndexLeader(int num_actions, double radicand);

  // Lowest-index argmax of the index.
  int select() const;
  int select(RngStream&) const { return select(); }
  void update(int a, double reward);

  double index(int a) const;
  double mean(int a) const;
  std::int64_t count(int a) const { return counts_(a); }
  double sum(int a) const { return sums_(a); }
  double radicand() const { return radicand_; }
  int num_actions() const { return static_cast<int>(counts_.size()); }

  // Loads raw statistics, for tests and warm starts.
  void set_statistics(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>& counts,
                      const Eigen::VectorXd& sums);

 private:
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> counts_;
  Eigen::VectorXd sums_;
  double radicand_;
};

// UCB with an enlarged exploration bonus S0.
class UcbeLeader : public IndexLeader {
 public:
  UcbeLeader(int num_actions, double s0);
  double s0() const { return radicand(); }
};

// Vanilla UCB with radicand 2 log(T / delta).
class UcbLeader : public IndexLeader {
 public:
  UcbLeader(int num_actions, double horizon, double delta);
};

// S0 = multiplier * B / eps^3 * log(A B T / delta). An infinite eps (no
// competing alternatives) gives S0 = 0.
double ucbe_bonus(int A, int B, double horizon, double delta, double epsilon, double multiplier = 1.0);

// Horizon-dependent EXP3 schedule alpha = eta = T^(-1/3).
double exp3_theorem_rate(double horizon);

}  // namespace stacklab
