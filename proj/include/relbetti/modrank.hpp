#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relbetti/matrix.hpp"

namespace relbetti {

// Arithmetic modulo the prime p = 998244353 (p = 1 mod 4), with i mapped to
// a fixed square root of -1. Reduction is a ring map Z[i][1/d] -> F_p for
// denominators d prime to p, so rank_p(M) <= rank(M) over Q(i).
namespace modp {

constexpr uint32_t kPrime = 998244353u;

uint32_t sqrt_minus_one();
uint32_t inv(uint32_t a);
// Image of a Gaussian rational; nullopt if a denominator vanishes mod p.
std::optional<uint32_t> reduce(const GScalar& s);

}  // namespace modp

// Rank of m over F_p, stopping early once `cap` is reached. Returns nullopt
// if some entry cannot be reduced.
std::optional<size_t> rank_mod_p(const SparseMatrix& m, size_t cap = SIZE_MAX);

// Connected components of the bipartite row/column support graph.
struct BlockSplit {
  std::vector<std::vector<Index>> row_blocks;
  std::vector<std::vector<Index>> col_blocks;
};
BlockSplit split_blocks(const SparseMatrix& m);
SparseMatrix extract_block(const SparseMatrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols);

}  // namespace relbetti
