#pragma once

#include <optional>
#include <vector>

#include "relbetti/matrix.hpp"

namespace relbetti {

// Incrementally maintained reduced row echelon basis of a subspace of
// GScalar^n. Rows are normalized (pivot entry 1) and every row vanishes on
// every other row's pivot, so coordinates can be read off pivot entries.
class EchelonBasis {
 public:
  explicit EchelonBasis(Index ambient = 0) : n_(ambient), row_of_col_(ambient, -1) {}

  Index ambient() const { return n_; }
  size_t dim() const { return rows_.size(); }

  // Returns true if v enlarged the span.
  bool insert(const SVec& v);
  // v minus its component along the span, expressed with no pivot entries.
  SVec reduce(const SVec& v) const;
  bool contains(const SVec& v) const { return reduce(v).empty(); }
  // Coordinates of v (assumed in the span) against rows in insertion order.
  SVec coordinates(const SVec& v) const;

  const std::vector<SVec>& rows() const { return rows_; }
  const std::vector<Index>& pivots() const { return pivot_of_row_; }
  bool is_pivot(Index c) const { return row_of_col_[c] >= 0; }
  int row_of_pivot(Index c) const { return row_of_col_[c]; }
  std::vector<Index> non_pivots() const;

 private:
  Index n_;
  std::vector<SVec> rows_;
  std::vector<Index> pivot_of_row_;
  std::vector<int> row_of_col_;
};

// Quotient V / W with representatives at the non-pivot coordinates of the
// echelon basis of W.
class QuotientMap {
 public:
  QuotientMap() = default;
  explicit QuotientMap(EchelonBasis relations);

  Index ambient() const { return rel_.ambient(); }
  Index dim() const { return Index(kept_.size()); }
  const std::vector<Index>& kept() const { return kept_; }
  const EchelonBasis& relations() const { return rel_; }
  // Ambient vector -> quotient coordinates.
  SVec reduce(const SVec& v) const;
  // Quotient coordinates of the ambient basis vector e_c.
  SVec reduce_basis(Index c) const;
  // Representative of quotient basis vector k in the ambient space.
  Index representative(Index k) const { return kept_[k]; }
  int kept_index(Index c) const { return kept_pos_[c]; }

 private:
  EchelonBasis rel_;
  std::vector<Index> kept_;
  std::vector<int> kept_pos_;
};

size_t rank(const GMatrix& m);
size_t rank(const SparseMatrix& m);

// Columns form a basis of ker m.
GMatrix kernel_basis(const GMatrix& m);
std::vector<SVec> kernel_basis(const SparseMatrix& m);

std::optional<GMatrix> inverse(const GMatrix& m);
// Some solution x of m x = b, if one exists.
std::optional<SVec> solve(const GMatrix& m, const SVec& b);

// Column-space basis (pivot columns of m).
std::vector<Index> independent_columns(const std::vector<SVec>& cols, Index ambient);

class HermitianForm {
 public:
  explicit HermitianForm(GMatrix gram);
  const GMatrix& gram() const { return gram_; }
  Index dim() const { return gram_.rows(); }
  bool is_hermitian() const;
  // Pivoted symmetric elimination: every pivot real and nonnegative and no
  // zero pivot with a nonzero row remainder.
  bool is_positive_semidefinite() const;
  bool is_positive_definite() const;
  GScalar operator()(const SVec& x, const SVec& y) const;

 private:
  GMatrix gram_;
};

GMatrix radical(const HermitianForm& f);
// Form-orthogonal projection onto span of the columns of s.
GMatrix orth_projection(const HermitianForm& f, const GMatrix& s);

}  // namespace relbetti
