#pragma once

#include <Eigen/Dense>

#include <compare>
#include <limits>
#include <string>
#include <vector>

#include "stacklab/errors.hpp"
#include "stacklab/rng.hpp"

namespace stacklab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Player { kLeader, kFollower };

struct ActionPair {
  int a = 0;
  int b = 0;
  auto operator<=>(const ActionPair&) const = default;
};

// Follower response F: entry a is the follower action played against a.
struct ResponseFunction {
  std::vector<int> map;

  int operator()(int a) const { return map[static_cast<std::size_t>(a)]; }
  int size() const { return static_cast<int>(map.size()); }
  bool operator==(const ResponseFunction&) const = default;
};

// Response function together with the joint action it induces.
struct ManipulationPlan {
  ResponseFunction response;
  ActionPair target;
  bool operator==(const ManipulationPlan&) const = default;
};

// Two-player bimatrix game with mean rewards in [0,1]. Rows are leader
// actions, columns follower actions.
template <typename Scalar>
class Game {
 public:
  using MatrixType = Matrix<Scalar>;

  Game(MatrixType mu_l, MatrixType mu_f) : mu_l_(std::move(mu_l)), mu_f_(std::move(mu_f)) {
    if (mu_l_.rows() < 1 || mu_l_.cols() < 1)
      throw ContractViolation("game needs at least one action per player");
    if (mu_l_.rows() != mu_f_.rows() || mu_l_.cols() != mu_f_.cols())
      throw ContractViolation("leader and follower matrices differ in shape");
    auto in_unit = [](const MatrixType& m) {
      return (m.array() >= Scalar(0)).all() && (m.array() <= Scalar(1)).all();
    };
    if (!in_unit(mu_l_) || !in_unit(mu_f_))
      throw ContractViolation("mean rewards must lie in [0,1]");
  }

  int A() const { return static_cast<int>(mu_l_.rows()); }
  int B() const { return static_cast<int>(mu_l_.cols()); }
  const MatrixType& mu_l() const { return mu_l_; }
  const MatrixType& mu_f() const { return mu_f_; }
  const MatrixType& mu(Player who) const { return who == Player::kLeader ? mu_l_ : mu_f_; }

  bool contains(ActionPair p) const { return p.a >= 0 && p.a < A() && p.b >= 0 && p.b < B(); }

  void check(ActionPair p) const {
    if (!contains(p))
      throw IndexError("action pair (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                       ") outside " + std::to_string(A()) + "x" + std::to_string(B()) + " game");
  }
  void check_leader(int a) const {
    if (a < 0 || a >= A()) throw IndexError("leader action " + std::to_string(a) + " out of range");
  }

  bool operator==(const Game&) const = default;

 private:
  MatrixType mu_l_;
  MatrixType mu_f_;
};

using GameInstance = Game<double>;

// Bernoulli draw with mean mu_who(a,b). Consumes exactly one draw.
template <typename Scalar>
Scalar sample_reward(const Game<Scalar>& game, ActionPair p, Player who, RngStream& rng) {
  game.check(p);
  const double mean = static_cast<double>(game.mu(who)(p.a, p.b));
  return rng.bernoulli(mean) ? Scalar(1) : Scalar(0);
}

namespace detail {

// First index of the row maximum (or minimum), i.e. lowest-index tie-break.
template <typename Derived>
int argmax_first(const Eigen::DenseBase<Derived>& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

template <typename Derived>
int argmin_first(const Eigen::DenseBase<Derived>& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v(i) < v(best)) best = i;
  return best;
}

template <typename Derived>
int count_equal(const Eigen::DenseBase<Derived>& v, typename Derived::Scalar x) {
  int n = 0;
  for (int i = 0; i < v.size(); ++i) n += v(i) == x;
  return n;
}

}  // namespace detail

template <typename Scalar>
int best_response(const Game<Scalar>& game, int a) {
  game.check_leader(a);
  return detail::argmax_first(game.mu_f().row(a));
}

// Follower action minimizing the leader's reward against a.
template <typename Scalar>
int worst_response(const Game<Scalar>& game, int a) {
  game.check_leader(a);
  return detail::argmin_first(game.mu_l().row(a));
}

template <typename Scalar>
ResponseFunction best_response_function(const Game<Scalar>& game) {
  ResponseFunction f{std::vector<int>(static_cast<std::size_t>(game.A()))};
  for (int a = 0; a < game.A(); ++a) f.map[a] = best_response(game, a);
  return f;
}

template <typename Scalar>
ResponseFunction worst_response_function(const Game<Scalar>& game) {
  ResponseFunction f{std::vector<int>(static_cast<std::size_t>(game.A()))};
  for (int a = 0; a < game.A(); ++a) f.map[a] = worst_response(game, a);
  return f;
}

// Leader value mu_l(a, F(a)) per leader action.
template <typename Scalar>
Vector<Scalar> leader_values(const Game<Scalar>& game, const ResponseFunction& f) {
  Vector<Scalar> v(game.A());
  for (int a = 0; a < game.A(); ++a) v(a) = game.mu_l()(a, f(a));
  return v;
}

struct EquilibriumResult {
  ActionPair pair;
  bool unique_leader_action = true;
  bool unique_best_responses = true;

  bool unique() const { return unique_leader_action && unique_best_responses; }
};

template <typename Scalar>
EquilibriumResult stackelberg_equilibrium(const Game<Scalar>& game) {
  EquilibriumResult out;
  const ResponseFunction br = best_response_function(game);
  for (int a = 0; a < game.A(); ++a) {
    const auto row = game.mu_f().row(a);
    if (detail::count_equal(row, row(br(a))) > 1) out.unique_best_responses = false;
  }
  const Vector<Scalar> values = leader_values(game, br);
  const int a_se = detail::argmax_first(values);
  out.unique_leader_action = detail::count_equal(values, values(a_se)) == 1;
  out.pair = {a_se, br(a_se)};
  return out;
}

// Two-action example where manipulation moves play from (a1,b1) to (a2,b1).
inline GameInstance table1_game() {
  Matrix<double> mu_l(2, 2), mu_f(2, 2);
  mu_l << 0.3, 0.1, 0.2, 0.3;
  mu_f << 0.1, 0.05, 1.0, 0.1;
  return {mu_l, mu_f};
}

// Game on which UCB-UCB locks the leader out of its equilibrium action a2.
inline GameInstance nonconvergence_game() {
  Matrix<double> mu_l(2, 2), mu_f(2, 2);
  mu_l << 0.95, 0.9, 1.0, 0.0;
  mu_f << 0.3, 0.2, 0.8, 0.79;
  return {mu_l, mu_f};
}

}  // namespace stacklab
