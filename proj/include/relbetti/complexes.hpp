#pragma once

#include <memory>
#include <string>
#include <vector>

#include "relbetti/fiber_square.hpp"
#include "relbetti/multibundle.hpp"
#include "relbetti/tensor.hpp"

namespace relbetti {

// Finite-dimensional left module: action[k] is the action of basis element
// k of the coefficient algebra.
struct FiniteModule {
  Index dim = 0;
  std::vector<SparseMatrix> action;
  // Representation of the structure constants and unit acting as identity.
  ValidationReport validate(const TracialStarAlgebra& f) const;
};

FiniteModule regular_module(const TracialStarAlgebra& f);
FiniteModule direct_sum(const FiniteModule& a, const FiniteModule& b);

struct PresimplicialModule {
  std::string name;
  std::vector<Index> dims;                        // degrees 0..N
  std::vector<std::vector<SparseMatrix>> faces;   // faces[n][i], degree n -> n-1; faces[0] empty
  // action[n] is empty unless the coefficient action was built at degree n.
  std::vector<std::vector<SparseMatrix>> action;
  // Basis labels as index tuples (words or groupoid tuples).
  std::vector<std::vector<std::vector<Index>>> words;

  size_t top() const { return dims.size() - 1; }
  // pi_i pi_j = pi_{j-1} pi_i for i < j, and faces intertwine the action
  // wherever it is present on both degrees.
  ValidationReport validate() const;
};

struct ChainComplex {
  std::vector<Index> dims;
  std::vector<SparseMatrix> d;  // d[n]: degree n -> n-1; d[0] is 0 x dims[0]
  ValidationReport validate() const;  // d_n d_{n+1} = 0
};

ChainComplex boundary(const PresimplicialModule& p);

// A complex with an augmentation C_0 -> C_{-1} and a contracting homotopy:
// homotopy[0] maps C_{-1} -> C_0 and homotopy[n+1] maps C_n -> C_{n+1}.
struct AugmentedComplex {
  PresimplicialModule module;
  Index base_dim = 0;
  SparseMatrix augmentation;
  std::vector<SparseMatrix> homotopy;
};

// e h_{-1} = id and d_{n+1} h_n + h_{n-1} d_n = id for n = 0..N-1 (d_0 = e).
ValidationReport check_contraction(const AugmentedComplex& c);

// K_n = A (x)_B ... (x)_B A (n + 2 factors), faces merging neighbours,
// augmentation by multiplication and homotopy r(x) = 1 (x) x.
AugmentedComplex bar_complex(const Extension& e, size_t n);

struct HochschildComplex {
  PresimplicialModule module;
  std::shared_ptr<TensorTower> tower;
  // Degree-1 boundary landing in M itself (before passing to coinvariants).
  SparseMatrix boundary_into_m;
};

// C_n = coinvariants of M (x)_B A^{(x)_B n}. Operators on M commuting with
// both actions (`m_ops`) are lifted to a module action on degrees
// 0..action_degree.
HochschildComplex hochschild_complex(const Extension& e, const Bimodule& m, size_t n,
                                     const std::vector<SparseMatrix>* m_ops = nullptr, size_t action_degree = 0);

// Z_n = C_{n+1}(A/B : A) with faces z_{n,i} = h_{n+1,i+1}; augmentation
// onto A/[B,A] and homotopy s(c_0 (x) c_1 ...) = c_0 (x) 1 (x) c_1 ....
AugmentedComplex acyclic_complex(const Extension& e, size_t n);

struct L2Complex {
  FiberSquare square;
  HochschildComplex complex;  // coefficients A (x)_B A with the fiber-square action
  HermitianForm m_form;       // tensor form on A (x)_B A
};
// The fiber square is built from the canonical generators unless given.
L2Complex l2_complex(const Extension& e, size_t n, const FiberSquare* square = nullptr);

// The geometric complexes C[X_n] with pushforward faces. The classifying
// complex carries the left C G action and the acyclic one the C(G^e)
// action.
PresimplicialModule geometric_complex(const FiniteGroupoid& g, SpaceKind kind, size_t n);

// Basis bijections between geometric and algebraic complexes, checked to be
// permutations commuting with every face map.
struct ComplexComparison {
  bool isomorphic = false;
  std::vector<Index> dims_geometric, dims_algebraic;
  std::string detail;
};
// bar: geometric bar vs bar_complex(C G / L^inf). cyclic: cyclic complex vs
// hochschild_complex(C G / L^inf, C G). acyclic: Z G vs acyclic_complex and
// vs the Hochschild complex with coefficients C G (x)_{L^inf} C G.
ComplexComparison compare_geometric(const FiniteGroupoid& g, SpaceKind kind, size_t n);

// Z_n built with M = A (x)_B A against the shifted Hochschild complex of A:
// equality of all face matrices.
bool acyclic_matches_shifted_hochschild(const Extension& e, size_t n);

struct ThetaReport {
  bool bijective = true;
  bool inverse_two_sided = true;
  bool faces_commute = true;
  bool equivariant = true;
  bool module_map = true;
  bool degree0_diagonal = true;
  std::vector<Index> dims;
  std::string witness;
  bool ok() const {
    return bijective && inverse_two_sided && faces_commute && equivariant && module_map && degree0_diagonal;
  }
};
ThetaReport theta_iso(const FiniteGroupoid& g, size_t n);

struct RankInfo {
  size_t value = 0;
  bool exact = false;  // false: lower bound over F_p
};
RankInfo certified_rank(const SparseMatrix& m, size_t cap = SIZE_MAX);

struct HomologyResult {
  size_t degree = 0;
  Index dim = 0;
  size_t rank_out = 0, rank_in = 0;  // ranks of d_n and d_{n+1}
  bool certified_by_ranks = false;   // zero, deduced from rank bounds
  bool has_module = false;
  FiniteModule module;
};

// H_n = ker d_n / im d_{n+1} with the induced action (when the action is
// present at degree n). Requires n < N.
HomologyResult homology(const PresimplicialModule& p, const ChainComplex& c, size_t n);

// Degree-0 homology realized inside a space with a form: the orthogonal
// complement of `image` (columns), with the restricted action.
FiniteModule orthogonal_complement_module(const HermitianForm& form, const std::vector<SVec>& image,
                                          const std::vector<SparseMatrix>& action);

}  // namespace relbetti
