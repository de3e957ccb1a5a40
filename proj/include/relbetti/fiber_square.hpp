#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relbetti/tensor.hpp"

namespace relbetti {

// The S-condition u^* x u = v x v^* on the basis of B. With `alternative`
// the reading u x u^* = v^* x v is tested instead. Returns the label of a
// failing basis element of B, if any.
std::optional<std::string> s_condition_witness(const Extension& a, const Extension& c, const SVec& u, const SVec& v,
                                               bool alternative = false);

// (u * v)(a (x) b) = a u (x) v b on the balanced tensor. Checks unitarity,
// the S-condition, well-definedness and commutation with both actions.
SparseMatrix star_operator(const BalancedTensor& t, const SVec& u, const SVec& v, bool alternative = false);

// a (x) b -> a x (x) b and a (x) b -> a (x) x b for x in the center of B.
SparseMatrix right_by_sub(const BalancedTensor& t, const SVec& x);
SparseMatrix left_by_sub(const BalancedTensor& t, const SVec& x);

struct FiberSquareOptions {
  size_t dimension_bound = 4096;
  bool alternative_s_condition = false;
};

class FiberSquare {
 public:
  BalancedTensor tensor;
  std::vector<std::pair<SVec, SVec>> generators;
  std::vector<SparseMatrix> basis;  // reduced echelon rows of the span
  TracialStarAlgebra algebra;       // structure constants in `basis`

  Index dim() const { return Index(basis.size()); }
  bool contains(const SparseMatrix& t) const;
  // Coordinates against `basis`.
  SVec coordinates(const SparseMatrix& t) const;
  SparseMatrix element(const SVec& coords) const;
  // Adjoint with respect to the tensor form.
  SparseMatrix adjoint(const SparseMatrix& t) const;
  // <1 (x) 1 | T (1 (x) 1)>
  GScalar phi(const SparseMatrix& t) const;
  // T -> T(1 (x) 1), one column per basis element.
  SparseMatrix evaluation() const;

  EchelonBasis span;  // vectorized operators, column-major
};

// Pairs (u, v) with u, v among the known unitaries of A and C (with their
// stars and 1) satisfying the S-condition.
std::vector<std::pair<SVec, SVec>> canonical_generators(const Extension& a, const Extension& c, bool alternative = false);

FiberSquare fiber_square(const Extension& a, const Extension& c, std::vector<std::pair<SVec, SVec>> generators,
                         const FiberSquareOptions& opt = {});
FiberSquare fiber_square(const Extension& a, const FiberSquareOptions& opt = {});

// Vectors x with b x = x b for all b in B.
std::vector<SVec> sub_invariant_vectors(const BalancedTensor& t);

// tr(p * p) computed in the fiber square and tr_B(E(p)^2); p must commute
// with B.
struct ProjectionTraceCheck {
  GScalar square_side, sub_side;
  bool in_square = false;
  bool equal() const { return in_square && square_side == sub_side; }
};
ProjectionTraceCheck projection_trace_identity(const FiberSquare& f, const SVec& p);

struct GroupoidFiberSquare {
  FiberSquare square;
  Enveloping env;
  SparseMatrix evaluation;  // fiber square coordinates -> C(G^e)
  Index missing_dimension = 0;
};
// Builds the fiber square of C G / L^inf X (or the twisted algebra for an
// equivalence relation with a cocycle) from the canonical generators and
// verifies that evaluation at 1 (x) 1 is an isomorphism of tracial
// *-algebras onto C(G^e) fixing the diagonal.
GroupoidFiberSquare groupoid_fiber_square(const FiniteGroupoid& g, const TwoCocycle* sigma = nullptr,
                                          const FiberSquareOptions& opt = {});

// Exact comparison of the fiber squares of C R_sigma and C R through
// evaluation at 1 (x) 1, which lands in C[R^(2)] for both.
struct CocycleComparison {
  bool identical = false;
  bool operator_spans_equal = false;
  Index twisted_dim = 0, untwisted_dim = 0;
  std::string detail;
};
CocycleComparison compare_twisted_fiber_square(const FiniteGroupoid& r, const TwoCocycle& sigma,
                                               const FiberSquareOptions& opt = {});

}  // namespace relbetti
