#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "relbetti/algebra.hpp"
#include "relbetti/linalg.hpp"

namespace relbetti {

// Finite-dimensional A-bimodule: left[i] and right[i] are the actions of the
// basis element e_i of A.
struct Bimodule {
  Index dim = 0;
  std::vector<SparseMatrix> left, right;

  SVec act_left(const SVec& a, const SVec& m) const;
  SVec act_right(const SVec& m, const SVec& a) const;
  // Commuting actions that respect the structure constants of A.
  ValidationReport validate(const TracialStarAlgebra& a) const;
};

Bimodule regular_bimodule(const TracialStarAlgebra& a);

// A (x)_B C as the quotient of A (x) C by the balancing relations
// a b (x) c - a (x) b c; the radical of the hermitian form is asserted to
// coincide with their span.
class BalancedTensor {
 public:
  BalancedTensor() = default;
  BalancedTensor(const Extension& a, const Extension& c);

  const Extension& left() const { return *a_; }
  const Extension& right() const { return *c_; }
  Index dim() const { return quotient_.dim(); }
  const QuotientMap& quotient() const { return quotient_; }
  // Form on the quotient basis.
  const GMatrix& gram() const { return gram_; }
  const SVec& one_one() const { return one_one_; }
  // x (x) y for x in A and y in C, in quotient coordinates.
  SVec tensor(const SVec& x, const SVec& y) const;
  // Basis tensor (i, j) of quotient basis vector k.
  std::pair<Index, Index> word(Index k) const;
  // Matrix of the operator determined on basis tensors e_i (x) e_j, given as
  // an ambient vector. Checks that the balancing relations are preserved.
  SparseMatrix induced_operator(const std::function<SVec(Index, Index)>& on_basis) const;
  // Left action of A (indexed by its basis) and right action of C.
  const Bimodule& actions() const { return actions_; }
  // The same actions as an A-bimodule; requires A = C.
  Bimodule outer_bimodule() const;
  // Ambient coordinates of x (x) y in A (x) C.
  SVec ambient(const SVec& x, const SVec& y) const;
  GScalar inner(const SVec& x, const SVec& y) const;

 private:
  std::shared_ptr<const Extension> a_, c_;
  QuotientMap quotient_;
  GMatrix gram_;
  SVec one_one_;
  Bimodule actions_;
};

// The three expressions of the hermitian form on A (x) C at basis tensors;
// they must agree entrywise.
struct TensorFormCheck {
  GMatrix via_b, via_c, via_a;
};
TensorFormCheck tensor_form_expressions(const Extension& a, const Extension& c);

// Same subalgebra B with the same structure and trace, matched by position.
bool same_subalgebra(const Extension& a, const Extension& c);

// Levels M (x)_B A^{(x)_B k}, k = 0, 1, ..., built on demand. Quotient bases
// are pure tensors of basis elements ("words" m, a_1, ..., a_k).
class TensorTower {
 public:
  TensorTower(const Extension& ext, Bimodule m);

  const Extension& ext() const { return ext_; }
  const Bimodule& base() const { return m_; }
  void build(size_t k);
  size_t levels() const { return levels_.size(); }
  Index dim(size_t k) const;
  std::vector<Index> word(size_t k, Index kept) const;
  // x (level k) (x) a -> level k + 1.
  SVec extend(size_t k, const SVec& x, const SVec& a) const;
  // m (x) a_1 (x) ... (x) a_k.
  SVec pure(const SVec& m, const std::vector<SVec>& as) const;
  SVec act_left(size_t k, const SVec& a, Index kept) const;
  SVec act_right(size_t k, Index kept, const SVec& a) const;
  // Operator T (x) id on level k for an operator T of M.
  SparseMatrix lift(size_t k, const SparseMatrix& t) const;
  // Quotient of level k by span{b x - x b : b in B}.
  const QuotientMap& coinvariants(size_t k);

 private:
  struct Level {
    QuotientMap quotient;                       // over ambient dim(k-1) * dim A
    std::vector<std::pair<Index, Index>> parent;  // kept -> (previous kept, a)
  };
  Extension ext_;
  Bimodule m_;
  std::vector<Level> levels_;  // levels_[k-1] is level k
  std::vector<std::unique_ptr<QuotientMap>> coinv_;
};

}  // namespace relbetti
