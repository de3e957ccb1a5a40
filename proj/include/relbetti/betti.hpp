#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relbetti/complexes.hpp"

namespace relbetti {

// von Neumann dimension of a finite module: the trace of the projection onto
// the orthogonal complement of the kernel of a free cover F^k -> M. The
// cover is built on `generators` (default: the basis of M), which must
// generate M.
Rational vn_dimension(const TracialStarAlgebra& f, const FiniteModule& m,
                      const std::vector<SVec>* generators = nullptr);

struct BettiTable {
  std::string pipeline;
  size_t degree_cap = 0;               // N; entries for degrees 0..N-1
  std::vector<Rational> betti;
  std::vector<Index> homology_dims;    // complex dimension of H_n
  std::vector<bool> certified_by_ranks;
  std::vector<std::pair<std::string, std::string>> metadata;
};

struct BettiOptions {
  FiberSquareOptions square;
  // Generators of the fiber square; canonical ones when empty.
  std::vector<std::pair<SVec, SVec>> generators;
};

// beta_n = dim over the fiber square of H_n of the Hochschild complex with
// coefficients A (x)_B A, n = 0..N-1. Degree 0 is computed twice: as a
// quotient and inside A (x)_B A as an orthogonal complement.
BettiTable betti_hochschild(const Extension& e, size_t n, const BettiOptions& opt = {});

// beta_n = dim over C G of H_n of the classifying complex C(EG), whose
// degree-0 homology is L^inf X with the dot-product action.
BettiTable betti_sauer(const FiniteGroupoid& g, size_t n);

// Betti numbers of the normalizer span of the given unitaries over B.
BettiTable residual_betti(const Extension& e, const std::vector<SVec>& unitaries, size_t n);

// Both sides of one identity, degree by degree.
struct TheoremReport {
  std::string theorem;
  std::vector<Rational> lhs, rhs;
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<std::string> failures;  // side conditions that did not hold
  bool equal() const { return lhs == rhs && failures.empty(); }
  // rhs - lhs per degree.
  std::vector<Rational> discrepancy() const;
};

// beta(pAp / pBp) against beta(A/B) / tr_B(E(p)^2). Requires p to be a
// projection commuting with B, and A a factor or p central in B unless
// `extended_scope` is set.
TheoremReport verify_compression(const Extension& e, const SVec& p, size_t n, bool extended_scope = false);
// beta(sum alpha_k A_k / sum B_k) against sum alpha_k beta(A_k / B_k).
TheoremReport verify_directed_sum(const std::vector<Extension>& parts, const std::vector<Rational>& weights, size_t n);
// beta(sum alpha_k A_k / B) against sum alpha_k^2 beta(A_k / B).
TheoremReport verify_central_quadratic(const std::vector<Extension>& parts, const std::vector<Rational>& weights,
                                       size_t n);
// betti_sauer(G) against betti_hochschild(C G / L^inf X).
TheoremReport verify_groupoid_equality(const FiniteGroupoid& g, size_t n);
// Residual Betti numbers of C R_sigma over L^inf X with the bisection
// unitaries, against betti_sauer(R); with a cocycle the untwisted table is
// compared as well.
TheoremReport verify_residual(const FiniteGroupoid& r, const TwoCocycle* sigma, size_t n);

}  // namespace relbetti
