#pragma once

#include <string>
#include <vector>

#include "relbetti/linalg.hpp"
#include "relbetti/multibundle.hpp"

namespace relbetti {

// Functions on the carrier of a multibundle. Every bundle map pi makes it a
// module over functions on the base, acting diagonally.
struct CModule {
  MultiBundle bundle;

  Index dim() const { return Index(bundle.size); }
  // Multiplication by f o pi.
  SparseMatrix action(const std::string& pi, const std::vector<GScalar>& f) const;
  // (f*g)(x) = sum_{pi(u)=x} conj(f(u)) g(u)
  std::vector<GScalar> inner(const std::string& pi, const SVec& f, const SVec& g) const;
  // Scalar form sum_x mu(x) (f*g)(x).
  GMatrix scalar_gram(const std::string& pi) const;
};

CModule c_module(const MultiBundle& u);

struct ModuleMap {
  SparseMatrix matrix;
  // (domain map, codomain map) pairs the matrix intertwines; checked.
  std::vector<std::pair<std::string, std::string>> intertwines;
};

// phi: carrier of u -> carrier of v must be a morphism: every map of v
// pulled back along phi is a map of u. Sends delta_a to delta_{phi(a)}.
ModuleMap pushforward(const MultiBundle& u, const MultiBundle& v, const std::vector<Index>& phi);

struct StarIso {
  FiberProduct product;
  QuotientMap quotient;     // C[U] (x) C[V] balanced over the base
  SparseMatrix iso;         // quotient coordinates -> C[U * V]
  GMatrix source_gram;      // scalar form on the quotient
  GMatrix target_gram;      // scalar form of C[U * V] along the merged map
};
// Balanced tensor realized as quotient by the radical of the scalar form,
// with the balancing relations asserted to span that radical.
StarIso star_iso(const MultiBundle& u, const std::string& pi, const MultiBundle& v, const std::string& sigma);

struct InvariantsCoinvariants {
  std::vector<SVec> invariants;  // basis of {f : (a o pi - a o sigma) f = 0}
  QuotientMap coinvariants;      // C[U] / span{(a o pi - a o sigma) f}
  GMatrix psi;                   // inclusion followed by the quotient map
  std::vector<Index> support;    // U^{pi sigma}
};
InvariantsCoinvariants invariants_coinvariants(const MultiBundle& u, const std::string& pi, const std::string& sigma);

// C[U] = sum_k C[Y_k] over a partition on whose parts every bundle map is
// injective; returns the parts after checking the direct sum.
std::vector<std::vector<Index>> decomposition_witness(const MultiBundle& u);

}  // namespace relbetti
