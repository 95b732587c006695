#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "stacklab/game.hpp"
#include "stacklab/manipulation.hpp"
#include "stacklab/oracles.hpp"

namespace stacklab {

// Reported for a gap whose minimization set is empty (for example delta2 in
// a game with one leader action). Downstream minima stay well defined.
template <typename Scalar>
inline constexpr Scalar kNoGap = std::numeric_limits<Scalar>::infinity();

template <typename Scalar>
struct GapProfile {
  Scalar delta1;  // follower best-response gap
  Scalar delta2;  // leader gap to the equilibrium under best responses
  Scalar delta3;  // leader gap to the manipulation pair under worst responses
  Scalar delta4;  // follower gap below the manipulation pair
  Scalar delta5;  // leader gap above each worst response
  Scalar delta6;  // infeasibility margin of pairs the follower prefers to the manipulation pair
  Scalar manipulation_gap;
  ActionPair se;
  ActionPair fm;

  Scalar limited_epsilon() const { return std::min(delta1, delta2); }
  Scalar side_epsilon() const { return std::min({delta4, delta5, delta6}); }
};

// Pairs (a,b) that some response function can make strictly leader-optimal:
// mu_l(a,b) must beat every other action's worst response.
template <typename Scalar>
std::vector<ActionPair> qualifiable_pairs(const Game<Scalar>& game) {
  const Vector<Scalar> floor = leader_values(game, worst_response_function(game));
  std::vector<ActionPair> out;
  for (int a = 0; a < game.A(); ++a) {
    Scalar competitor = -std::numeric_limits<Scalar>::infinity();
    for (int k = 0; k < game.A(); ++k)
      if (k != a) competitor = std::max(competitor, floor(k));
    for (int b = 0; b < game.B(); ++b)
      if (game.mu_l()(a, b) > competitor) out.push_back({a, b});
  }
  return out;
}

// Whether exactly one qualifiable pair attains the best follower reward.
template <typename Scalar>
bool unique_best_manipulation(const Game<Scalar>& game) {
  const auto pairs = qualifiable_pairs(game);
  if (pairs.empty()) return false;
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (auto p : pairs) best = std::max(best, game.mu_f()(p.a, p.b));
  int hits = 0;
  for (auto p : pairs) hits += game.mu_f()(p.a, p.b) == best;
  return hits == 1;
}

// The best manipulation pair comes from the exhaustive oracle while B^A is
// within the enumeration cap, and from the greedy solver beyond it.
template <typename Scalar>
GapProfile<Scalar> gap_profile(const Game<Scalar>& game, std::uint64_t cap = kDefaultEnumerationCap) {
  const int A = game.A(), B = game.B();
  const auto& ml = game.mu_l();
  const auto& mf = game.mu_f();
  const Scalar none = kNoGap<Scalar>;
  GapProfile<Scalar> g{none, none, none, none, none, none, Scalar(0), {}, {}};

  const ResponseFunction br = best_response_function(game);
  const ResponseFunction wr = worst_response_function(game);
  g.se = stackelberg_equilibrium(game).pair;
  g.fm = response_function_count(A, B, cap) <= cap ? best_manipulation_oracle(game, cap).target
                                                   : fbm_solve(game).target;

  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) {
      if (b != br(a)) g.delta1 = std::min(g.delta1, mf(a, br(a)) - mf(a, b));
      if (b != wr(a)) g.delta5 = std::min(g.delta5, ml(a, b) - ml(a, wr(a)));
    }

  const Scalar se_value = ml(g.se.a, g.se.b);
  const Scalar fm_leader = ml(g.fm.a, g.fm.b);
  for (int a = 0; a < A; ++a) {
    if (a != g.se.a) g.delta2 = std::min(g.delta2, se_value - ml(a, br(a)));
    if (a != g.fm.a) g.delta3 = std::min(g.delta3, fm_leader - ml(a, wr(a)));
  }

  const Scalar fm_value = mf(g.fm.a, g.fm.b);
  for (int ak = 0; ak < A; ++ak) {
    Scalar competitor = -std::numeric_limits<Scalar>::infinity();
    for (int a = 0; a < A; ++a)
      if (a != ak) competitor = std::max(competitor, ml(a, wr(a)));
    for (int bk = 0; bk < B; ++bk) {
      if (mf(ak, bk) < fm_value) g.delta4 = std::min(g.delta4, fm_value - mf(ak, bk));
      if (mf(ak, bk) > fm_value && A > 1) g.delta6 = std::min(g.delta6, competitor - ml(ak, bk));
    }
  }

  g.manipulation_gap = fm_value - mf(g.se.a, g.se.b);
  return g;
}

// Uniform (0,1) means, resampled until best responses, worst responses, the
// equilibrium and the best manipulation pair are all unique.
inline GameInstance random_game(int A, int B, RngStream& rng, int max_attempts = 100) {
  if (A < 1 || B < 1) throw ContractViolation("random_game needs A, B >= 1");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Matrix<double> mu_l(A, B), mu_f(A, B);
    for (int a = 0; a < A; ++a)
      for (int b = 0; b < B; ++b) mu_l(a, b) = rng.uniform_open01();
    for (int a = 0; a < A; ++a)
      for (int b = 0; b < B; ++b) mu_f(a, b) = rng.uniform_open01();
    GameInstance game(std::move(mu_l), std::move(mu_f));

    bool unique_wr = true;
    for (int a = 0; a < A; ++a) {
      const auto row = game.mu_l().row(a);
      unique_wr = unique_wr && detail::count_equal(row, row.minCoeff()) == 1;
    }
    if (unique_wr && stackelberg_equilibrium(game).unique() && unique_best_manipulation(game))
      return game;
  }
  throw GenerationError("no game with unique equilibria after " + std::to_string(max_attempts) +
                        " attempts");
}

}  // namespace stacklab
