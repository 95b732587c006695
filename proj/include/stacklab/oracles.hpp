#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stacklab/game.hpp"

namespace stacklab {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

template <typename Scalar>
struct ScoredPlan {
  ManipulationPlan plan;
  Scalar value;
};

// B^A, saturating at cap + 1.
inline std::uint64_t response_function_count(int A, int B, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (int i = 0; i < A; ++i) {
    if (n > (cap + 1) / static_cast<std::uint64_t>(B)) return cap + 1;
    n *= static_cast<std::uint64_t>(B);
  }
  return n;
}

// Calls fn(F) for every response function in lexicographic order
// (F(0) most significant). Returns the number of functions visited.
template <typename Fn>
std::uint64_t for_each_response_function(int A, int B, std::uint64_t cap, Fn&& fn) {
  if (response_function_count(A, B, cap) > cap)
    throw SizeError("B^A response functions exceed enumeration cap " + std::to_string(cap));
  ResponseFunction f{std::vector<int>(static_cast<std::size_t>(A), 0)};
  std::uint64_t visited = 0;
  while (true) {
    fn(static_cast<const ResponseFunction&>(f));
    ++visited;
    int pos = A - 1;
    while (pos >= 0 && ++f.map[pos] == B) f.map[pos--] = 0;
    if (pos < 0) return visited;
  }
}

// Every F whose induced leader argmax is unique, scored by the follower's
// reward at the induced pair.
template <typename Scalar>
std::vector<ScoredPlan<Scalar>> enumerate_manipulations(const Game<Scalar>& game,
                                                        std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<ScoredPlan<Scalar>> out;
  for_each_response_function(game.A(), game.B(), cap, [&](const ResponseFunction& f) {
    const Vector<Scalar> values = leader_values(game, f);
    const int top = detail::argmax_first(values);
    if (detail::count_equal(values, values(top)) != 1) return;
    const ActionPair target{top, f(top)};
    out.push_back({{f, target}, game.mu_f()(target.a, target.b)});
  });
  return out;
}

// Highest-value qualified manipulation; ties go to the lowest target pair.
template <typename Scalar>
ScoredPlan<Scalar> best_manipulation_oracle_scored(const Game<Scalar>& game,
                                                   std::uint64_t cap = kDefaultEnumerationCap) {
  const auto plans = enumerate_manipulations(game, cap);
  if (plans.empty()) throw DegenerateGameError("no response function induces a unique leader argmax");
  const ScoredPlan<Scalar>* best = &plans.front();
  for (const auto& p : plans) {
    if (p.value > best->value || (p.value == best->value && p.plan.target < best->plan.target))
      best = &p;
  }
  return *best;
}

template <typename Scalar>
ManipulationPlan best_manipulation_oracle(const Game<Scalar>& game,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  return best_manipulation_oracle_scored(game, cap).plan;
}

// max over F of min over Q(F) = argmax_a mu_l(a,F(a)) of mu_f(a,F(a)).
// The target is the pessimistic pair; ties go to the lowest target pair.
template <typename Scalar>
ScoredPlan<Scalar> pessimistic_oracle(const Game<Scalar>& game,
                                      std::uint64_t cap = kDefaultEnumerationCap) {
  bool have = false;
  ScoredPlan<Scalar> best{{}, Scalar(0)};
  for_each_response_function(game.A(), game.B(), cap, [&](const ResponseFunction& f) {
    const Vector<Scalar> values = leader_values(game, f);
    const Scalar top = values.maxCoeff();
    int worst = -1;
    for (int a = 0; a < game.A(); ++a) {
      if (values(a) != top) continue;
      if (worst < 0 || game.mu_f()(a, f(a)) < game.mu_f()(worst, f(worst))) worst = a;
    }
    const ActionPair target{worst, f(worst)};
    const Scalar value = game.mu_f()(target.a, target.b);
    if (!have || value > best.value || (value == best.value && target < best.plan.target)) {
      best = {{f, target}, value};
      have = true;
    }
  });
  return best;
}

}  // namespace stacklab
