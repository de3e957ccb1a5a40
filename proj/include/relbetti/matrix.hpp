#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relbetti/scalar.hpp"

namespace relbetti {

using Index = uint32_t;

struct SEntry {
  Index i;
  GScalar v;
  friend bool operator==(const SEntry& a, const SEntry& b) { return a.i == b.i && a.v == b.v; }
};

// Sparse vector: entries sorted by index, no explicit zeros.
using SVec = std::vector<SEntry>;

SVec svec_unit(Index i);
// Sum of a*x over the given terms, merged and pruned.
SVec svec_combine(const std::vector<std::pair<GScalar, const SVec*>>& terms);
SVec svec_add(const SVec& x, const SVec& y);
SVec svec_sub(const SVec& x, const SVec& y);
SVec svec_scale(const SVec& x, const GScalar& a);
SVec svec_conj(const SVec& x);
// Builds a sorted, zero-free vector from arbitrary (index, value) pairs.
SVec svec_from_pairs(std::vector<SEntry> pairs);
const GScalar* svec_find(const SVec& x, Index i);
// sum conj(x_k) y_k
GScalar svec_dot(const SVec& x, const SVec& y);

class GMatrix;

// Column-major sparse matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(cols) {}
  static SparseMatrix identity(Index n);
  static SparseMatrix from_columns(Index rows, std::vector<SVec> cols);
  static SparseMatrix from_dense(const GMatrix& m);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const SVec& col(Index j) const { return data_[j]; }
  SVec& col(Index j) { return data_[j]; }
  const std::vector<SVec>& columns() const { return data_; }
  size_t nnz() const;

  GScalar at(Index i, Index j) const;
  SVec apply(const SVec& x) const;
  SparseMatrix adjoint() const;
  SparseMatrix transpose() const;
  GMatrix to_dense() const;
  bool is_zero() const;

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
  SparseMatrix scaled(const GScalar& s) const;
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<SVec> data_;
};

// Row-major dense matrix.
class GMatrix {
 public:
  GMatrix() = default;
  GMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}
  static GMatrix identity(Index n);
  static GMatrix from_rows(const std::vector<std::vector<GScalar>>& rows);
  static GMatrix from_columns(Index rows, const std::vector<SVec>& cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  GScalar& operator()(Index i, Index j) { return data_[size_t(i) * cols_ + j]; }
  const GScalar& operator()(Index i, Index j) const { return data_[size_t(i) * cols_ + j]; }

  GMatrix adjoint() const;
  GMatrix transpose() const;
  SVec column(Index j) const;
  std::vector<SVec> columns() const;
  SVec row(Index i) const;
  bool is_zero() const;
  GScalar trace() const;

  friend GMatrix operator*(const GMatrix& a, const GMatrix& b);
  friend GMatrix operator+(const GMatrix& a, const GMatrix& b);
  friend GMatrix operator-(const GMatrix& a, const GMatrix& b);
  GMatrix scaled(const GScalar& s) const;
  friend bool operator==(const GMatrix& a, const GMatrix& b);

  std::string to_string() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<GScalar> data_;
};

SVec dense_apply(const GMatrix& m, const SVec& x);

}  // namespace relbetti
