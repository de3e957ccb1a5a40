#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relbetti/groupoid.hpp"
#include "relbetti/linalg.hpp"
#include "relbetti/matrix.hpp"

namespace relbetti {

// Finite-dimensional *-algebra given by structure constants on a basis, with
// a trace functional.
class TracialStarAlgebra {
 public:
  TracialStarAlgebra() = default;
  // products[i * dim + j] = e_i e_j; star[i] = (e_i)^*, extended antilinearly.
  TracialStarAlgebra(std::vector<std::string> labels, std::vector<SVec> products, SVec unit, std::vector<SVec> star,
                     std::vector<GScalar> trace);

  Index dim() const { return Index(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index i) const { return labels_[i]; }
  std::optional<Index> find(const std::string& label) const;
  const SVec& product(Index i, Index j) const { return prod_[size_t(i) * dim() + j]; }
  const SVec& unit() const { return unit_; }
  const std::vector<GScalar>& trace_vector() const { return trace_; }

  SVec mul(const SVec& a, const SVec& b) const;
  SVec star(const SVec& a) const;
  GScalar tr(const SVec& a) const;
  // <e_i | e_j> = tr(e_i^* e_j)
  GMatrix gns_gram() const;
  SparseMatrix left_mult(const SVec& a) const;
  SparseMatrix right_mult(const SVec& a) const;
  SVec commutator(const SVec& a, const SVec& b) const { return svec_sub(mul(a, b), mul(b, a)); }
  // Basis of the center.
  std::vector<SVec> center() const;
  bool is_factor() const { return center().size() == 1; }

  // Associativity, units, star laws, trace property and normalization, and
  // positivity of the GNS form (which certifies semisimplicity).
  ValidationReport validate() const;

 private:
  std::vector<std::string> labels_;
  std::vector<SVec> prod_;
  SVec unit_;
  std::vector<SVec> star_;
  std::vector<GScalar> trace_;
};

// A/B: B is a unital *-subalgebra given by a basis of vectors in A; E is the
// GNS-orthogonal projection onto B.
struct Extension {
  TracialStarAlgebra algebra;
  std::vector<SVec> sub;
  GMatrix expectation;
  // Unitaries of A normalizing B, used as the canonical generating family for
  // fiber squares and normalizer spans.
  std::vector<SVec> known_unitaries;
  std::string name;

  Index dim() const { return algebra.dim(); }
  SVec expect(const SVec& a) const { return dense_apply(expectation, a); }
  // Orthonormal-free description of B as its own algebra (basis = sub).
  TracialStarAlgebra sub_algebra() const;
  // Coordinates of an element of B against `sub`.
  SVec sub_coordinates(const SVec& b) const;
  bool in_sub(const SVec& a) const;
  bool commutes_with_sub(const SVec& a) const;
  bool in_center_of_sub(const SVec& a) const { return in_sub(a) && commutes_with_sub(a); }

  ValidationReport validate() const;
};

// Builds E as the orthogonal projection onto span(sub) and checks that B is a
// unital *-subalgebra.
Extension conditional_expectation(TracialStarAlgebra a, std::vector<SVec> sub);

// Identity E(u a u^*) = u E(a) u^* (standard) versus E(u a u^*) = u^* E(a) u
// (as printed), checked on every basis element a.
struct ExpectationConjugationReport {
  bool standard_holds = true;
  bool printed_holds = true;
  std::string standard_witness, printed_witness;
};
ExpectationConjugationReport check_expectation_conjugation(const Extension& e, const SVec& u);

bool is_unitary(const TracialStarAlgebra& a, const SVec& u);
bool is_projection(const TracialStarAlgebra& a, const SVec& p);

// ------------------------------------------------------------ builders

// n x n matrices, basis e_ij, normalized trace.
TracialStarAlgebra matrix_algebra(Index n);
// Index of e_ij in matrix_algebra(n).
inline Index matrix_unit(Index n, Index i, Index j) { return i * n + j; }

Extension scalar_extension(const TracialStarAlgebra& a);
Extension full_extension(const TracialStarAlgebra& a);
// M_n over its diagonal.
Extension matrix_over_diagonal(Index n);
Extension matrix_over_scalars(Index n);

// Basis = groupoid elements, B = functions on the units, E = restriction.
Extension convolution_algebra(const FiniteGroupoid& g);
// Group algebra over the scalars.
Extension group_algebra(const FiniteGroup& g);

// Cocycle on the composable triples (x, y, z) of an equivalence relation.
// Missing triples take the value 1.
struct TwoCocycle {
  std::map<std::array<Atom, 3>, GScalar> values;
  GScalar operator()(Atom x, Atom y, Atom z) const;
};
ValidationReport validate_cocycle(const FiniteGroupoid& r, const TwoCocycle& s);
// (ab)(x,z) = sum_y a(x,y) b(y,z) s(x,y,z) on the relation's algebra.
Extension twisted_convolution(const FiniteGroupoid& r, const TwoCocycle& s);
// s(x,y,z) = c(y,z) c(x,z)^{-1} c(x,y) for c given on pairs (missing = 1).
TwoCocycle coboundary(const FiniteGroupoid& r, const std::map<std::pair<Atom, Atom>, GScalar>& c);

enum class SumMode { componentwise, central };
// Componentwise: A = sum A_n, B = sum B_n, tr = sum alpha_n tr_n.
// Central: all summands share the same commutative B (equal sub bases up to
// order), embedded diagonally.
Extension weighted_sum(const std::vector<Extension>& parts, const std::vector<Rational>& weights, SumMode mode);

struct Compression {
  Extension ext;
  std::vector<SVec> basis_in_parent;  // basis of pAp in the coordinates of A
  SVec p;
};
// pAp with normalized trace over pBp. Requires p = p^* = p^2 in B' n A.
Compression compression(const Extension& e, const SVec& p);

// Smallest *-subalgebra containing B and the given unitaries; each must
// normalize B.
std::vector<SVec> normalizer_span(const Extension& e, const std::vector<SVec>& unitaries);
Extension normalizer_extension(const Extension& e, const std::vector<SVec>& unitaries);

// Groupoid morphism phi: G -> H on the same base induces C[phi]; checks trace
// preservation and E-intertwining on basis elements.
bool check_convolution_functor(const FiniteGroupoid& g, const FiniteGroupoid& h, const std::vector<Elem>& map);

}  // namespace relbetti
