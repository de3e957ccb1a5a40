#pragma once

#include <initializer_list>
#include <random>

#include "relbetti/algebra.hpp"

namespace rbtest {

using namespace relbetti;

inline GScalar q(int64_t n, int64_t d = 1) { return GScalar(Rational(n, d)); }

inline SVec vec(std::initializer_list<std::pair<Index, GScalar>> xs) {
  std::vector<SEntry> e;
  for (const auto& [i, v] : xs) e.push_back({i, v});
  return svec_from_pairs(e);
}

// The R2 cocycle with s(0,1,0) = s(1,0,1) = -1, the only nontrivial
// normalized one on two points.
inline TwoCocycle r2_sign_cocycle() {
  TwoCocycle s;
  s.values[{0, 1, 0}] = q(-1);
  s.values[{1, 0, 1}] = q(-1);
  return s;
}

// Direct sums of small matrix and group algebras with random weights.
inline Extension random_extension(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 5);
  auto one = [&]() -> Extension {
    switch (pick(rng)) {
      case 0: return matrix_over_diagonal(2);
      case 1: return matrix_over_scalars(2);
      case 2: return group_algebra(FiniteGroup::cyclic(2));
      case 3: return convolution_algebra(build::pair_relation(FiniteMeasuredSpace::uniform(2)));
      case 4: return group_algebra(FiniteGroup::cyclic(3));
      default: return full_extension(matrix_algebra(1));
    }
  };
  if (pick(rng) % 2 == 0) return one();
  int w = 1 + pick(rng) % 3;
  return weighted_sum({one(), one()}, {Rational(w, 4), Rational(4 - w, 4)}, SumMode::componentwise);
}

inline FiniteGroupoid pair_groupoid(size_t n) { return build::pair_relation(FiniteMeasuredSpace::uniform(n)); }

// C2 acting on two points by the swap.
inline FiniteGroupoid swap_action() {
  return build::action_groupoid(FiniteGroup::cyclic(2), FiniteMeasuredSpace::uniform(2), {{0, 1}, {1, 0}});
}

inline FiniteGroupoid partition_21() {
  return build::partition_relation(FiniteMeasuredSpace::uniform(3), {{0, 1}, {2}});
}

}  // namespace rbtest
