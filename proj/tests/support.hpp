#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "stacklab/game.hpp"
#include "stacklab/rng.hpp"

namespace testsupport {

using stacklab::ActionPair;
using stacklab::GameInstance;
using stacklab::RngStream;

inline GameInstance make_game(std::initializer_list<std::initializer_list<double>> l,
                              std::initializer_list<std::initializer_list<double>> f) {
  const int A = static_cast<int>(l.size());
  const int B = static_cast<int>(l.begin()->size());
  Eigen::MatrixXd ml(A, B), mf(A, B);
  int i = 0;
  for (auto row : l) {
    int j = 0;
    for (double v : row) ml(i, j++) = v;
    ++i;
  }
  i = 0;
  for (auto row : f) {
    int j = 0;
    for (double v : row) mf(i, j++) = v;
    ++i;
  }
  return {ml, mf};
}

// Unfiltered uniform game, optionally quantized to `levels` values so ties occur.
inline GameInstance arbitrary_game(int A, int B, RngStream& rng, int levels = 0) {
  Eigen::MatrixXd ml(A, B), mf(A, B);
  auto draw = [&] {
    const double u = rng.uniform01();
    return levels > 0 ? static_cast<int>(u * levels) / static_cast<double>(levels) : u;
  };
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) ml(a, b) = draw();
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) mf(a, b) = draw();
  return {ml, mf};
}

// Brute-force reference quantities written without the library's helpers.

inline int ref_best_response(const GameInstance& g, int a) {
  int best = 0;
  for (int b = 1; b < g.B(); ++b)
    if (g.mu_f()(a, b) > g.mu_f()(a, best)) best = b;
  return best;
}

inline int ref_worst_response(const GameInstance& g, int a) {
  int worst = 0;
  for (int b = 1; b < g.B(); ++b)
    if (g.mu_l()(a, b) < g.mu_l()(a, worst)) worst = b;
  return worst;
}

inline ActionPair ref_equilibrium(const GameInstance& g) {
  int best = 0;
  for (int a = 1; a < g.A(); ++a)
    if (g.mu_l()(a, ref_best_response(g, a)) > g.mu_l()(best, ref_best_response(g, best))) best = a;
  return {best, ref_best_response(g, best)};
}

inline void ref_for_each_function(int A, int B, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> f(static_cast<std::size_t>(A), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == A) {
      fn(f);
      return;
    }
    for (int b = 0; b < B; ++b) {
      f[static_cast<std::size_t>(i)] = b;
      rec(i + 1);
    }
  };
  rec(0);
}

struct RefManipulation {
  bool found = false;
  double value = -1;
  ActionPair target;
};

// max over F with strict unique leader argmax of mu_f at the induced pair.
inline RefManipulation ref_best_manipulation(const GameInstance& g) {
  RefManipulation out;
  ref_for_each_function(g.A(), g.B(), [&](const std::vector<int>& f) {
    int top = 0;
    for (int a = 1; a < g.A(); ++a)
      if (g.mu_l()(a, f[a]) > g.mu_l()(top, f[top])) top = a;
    for (int a = 0; a < g.A(); ++a)
      if (a != top && g.mu_l()(a, f[a]) == g.mu_l()(top, f[top])) return;
    const double v = g.mu_f()(top, f[top]);
    const ActionPair t{top, f[top]};
    if (!out.found || v > out.value || (v == out.value && t < out.target)) out = {true, v, t};
  });
  return out;
}

// max over F of min over the leader's argmax set of mu_f.
inline double ref_pessimistic_value(const GameInstance& g) {
  double best = -1;
  ref_for_each_function(g.A(), g.B(), [&](const std::vector<int>& f) {
    double top = -1;
    for (int a = 0; a < g.A(); ++a) top = std::max(top, g.mu_l()(a, f[a]));
    double worst = 2;
    for (int a = 0; a < g.A(); ++a)
      if (g.mu_l()(a, f[a]) == top) worst = std::min(worst, g.mu_f()(a, f[a]));
    best = std::max(best, worst);
  });
  return best;
}

}  // namespace testsupport
