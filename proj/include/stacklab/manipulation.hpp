#pragma once

#include <limits>
#include <vector>

#include "stacklab/game.hpp"

namespace stacklab {

// Strict leader-optimality of the plan's target under its own response.
template <typename Scalar>
bool is_qualified(const Game<Scalar>& game, const ManipulationPlan& plan) {
  const ResponseFunction& f = plan.response;
  if (f.size() != game.A() || f(plan.target.a) != plan.target.b) return false;
  const Scalar own = game.mu_l()(plan.target.a, plan.target.b);
  for (int a = 0; a < game.A(); ++a)
    if (a != plan.target.a && game.mu_l()(a, f(a)) >= own) return false;
  return true;
}

namespace detail {

// Row-major argmax of m over entries still in the candidate mask.
template <typename Scalar>
ActionPair argmax_candidate(const Matrix<Scalar>& m, const Matrix<bool>& alive) {
  ActionPair best{-1, -1};
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b)
      if (alive(a, b) && (best.a < 0 || m(a, b) > m(best.a, best.b))) best = {a, b};
  return best;
}

inline ResponseFunction with_target(ResponseFunction base, ActionPair target) {
  base.map[static_cast<std::size_t>(target.a)] = target.b;
  return base;
}

}  // namespace detail

// Greedy best manipulation for a follower that knows both mean matrices.
// Candidates are visited in decreasing follower reward; every other leader
// action is answered with its worst response, and the first candidate that
// strictly beats all of them is returned. Eliminated candidates are appended
// to `eliminated` when given.
template <typename Scalar>
ManipulationPlan fbm_solve(const Game<Scalar>& game, std::vector<ActionPair>* eliminated = nullptr) {
  const ResponseFunction wr = worst_response_function(game);
  const Vector<Scalar> floor = leader_values(game, wr);
  Matrix<bool> alive = Matrix<bool>::Constant(game.A(), game.B(), true);

  for (int remaining = game.A() * game.B(); remaining > 0; --remaining) {
    const ActionPair cand = detail::argmax_candidate(game.mu_f(), alive);
    Scalar competitor = -std::numeric_limits<Scalar>::infinity();
    for (int a = 0; a < game.A(); ++a)
      if (a != cand.a) competitor = std::max(competitor, floor(a));
    if (game.mu_l()(cand.a, cand.b) > competitor) return {detail::with_target(wr, cand), cand};
    alive(cand.a, cand.b) = false;
    if (eliminated) eliminated->push_back(cand);
  }
  throw DegenerateGameError("FBM eliminated every candidate pair");
}

// Best manipulation against a leader that breaks ties in its own reward
// against the follower. Same candidate order as fbm_solve; tracks the best
// pessimistic pair seen and stops once no remaining candidate can beat it.
template <typename Scalar>
ManipulationPlan pessimistic_fbm_solve(const Game<Scalar>& game) {
  const int A = game.A();
  // Among the leader-minimizing responses, prefer the one the follower likes
  // most: it only matters when that action lands in the leader's argmax set.
  ResponseFunction wr{std::vector<int>(static_cast<std::size_t>(A))};
  for (int a = 0; a < A; ++a) {
    const Scalar low = game.mu_l().row(a).minCoeff();
    int pick = -1;
    for (int b = 0; b < game.B(); ++b)
      if (game.mu_l()(a, b) == low && (pick < 0 || game.mu_f()(a, b) > game.mu_f()(a, pick))) pick = b;
    wr.map[a] = pick;
  }

  Matrix<bool> alive = Matrix<bool>::Constant(A, game.B(), true);
  bool have = false;
  ManipulationPlan incumbent;
  for (int remaining = A * game.B(); remaining > 0; --remaining) {
    const ActionPair cand = detail::argmax_candidate(game.mu_f(), alive);
    const auto incumbent_value = [&] {
      return game.mu_f()(incumbent.target.a, incumbent.target.b);
    };
    if (have && !(incumbent_value() < game.mu_f()(cand.a, cand.b))) break;

    const ResponseFunction f = detail::with_target(wr, cand);
    const Vector<Scalar> values = leader_values(game, f);
    const Scalar top = values.maxCoeff();
    if (values(cand.a) == top) {
      int worst = -1;
      for (int a = 0; a < A; ++a)
        if (values(a) == top && (worst < 0 || game.mu_f()(a, f(a)) < game.mu_f()(worst, f(worst))))
          worst = a;
      const ActionPair pess{worst, f(worst)};
      const Scalar v = game.mu_f()(pess.a, pess.b);
      if (!have || v > incumbent_value() || (v == incumbent_value() && pess < incumbent.target)) {
        incumbent = {f, pess};
        have = true;
      }
    }
    alive(cand.a, cand.b) = false;
  }
  if (!have) throw DegenerateGameError("no candidate entered the leader's argmax set");
  return incumbent;
}

}  // namespace stacklab
