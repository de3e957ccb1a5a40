#include "relbetti/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "relbetti/error.hpp"

namespace relbetti {

SVec svec_unit(Index i) { return SVec{SEntry{i, GScalar(1)}}; }

SVec svec_from_pairs(std::vector<SEntry> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const SEntry& a, const SEntry& b) { return a.i < b.i; });
  SVec out;
  out.reserve(pairs.size());
  for (auto& e : pairs) {
    if (!out.empty() && out.back().i == e.i) {
      out.back().v += e.v;
    } else {
      if (!out.empty() && out.back().v.is_zero()) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && out.back().v.is_zero()) out.pop_back();
  return out;
}

SVec svec_combine(const std::vector<std::pair<GScalar, const SVec*>>& terms) {
  if (terms.size() == 1) return svec_scale(*terms[0].second, terms[0].first);
  std::vector<SEntry> pairs;
  size_t total = 0;
  for (const auto& t : terms) total += t.second->size();
  pairs.reserve(total);
  for (const auto& [a, x] : terms) {
    if (a.is_zero()) continue;
    for (const auto& e : *x) pairs.push_back(SEntry{e.i, a.is_one() ? e.v : a * e.v});
  }
  return svec_from_pairs(std::move(pairs));
}

namespace {
template <bool Subtract>
SVec merge(const SVec& x, const SVec& y) {
  SVec out;
  out.reserve(x.size() + y.size());
  size_t a = 0, b = 0;
  while (a < x.size() || b < y.size()) {
    if (b == y.size() || (a < x.size() && x[a].i < y[b].i)) {
      out.push_back(x[a++]);
    } else if (a == x.size() || y[b].i < x[a].i) {
      out.push_back(SEntry{y[b].i, Subtract ? -y[b].v : y[b].v});
      ++b;
    } else {
      GScalar v = Subtract ? x[a].v - y[b].v : x[a].v + y[b].v;
      if (!v.is_zero()) out.push_back(SEntry{x[a].i, std::move(v)});
      ++a;
      ++b;
    }
  }
  return out;
}
}  // namespace

SVec svec_add(const SVec& x, const SVec& y) { return merge<false>(x, y); }
SVec svec_sub(const SVec& x, const SVec& y) { return merge<true>(x, y); }

SVec svec_scale(const SVec& x, const GScalar& a) {
  if (a.is_zero()) return {};
  if (a.is_one()) return x;
  SVec out;
  out.reserve(x.size());
  for (const auto& e : x) out.push_back(SEntry{e.i, e.v * a});
  return out;
}

SVec svec_conj(const SVec& x) {
  SVec out;
  out.reserve(x.size());
  for (const auto& e : x) out.push_back(SEntry{e.i, e.v.conj()});
  return out;
}

const GScalar* svec_find(const SVec& x, Index i) {
  auto it = std::lower_bound(x.begin(), x.end(), i, [](const SEntry& e, Index k) { return e.i < k; });
  if (it == x.end() || it->i != i) return nullptr;
  return &it->v;
}

GScalar svec_dot(const SVec& x, const SVec& y) {
  GScalar s;
  size_t a = 0, b = 0;
  while (a < x.size() && b < y.size()) {
    if (x[a].i < y[b].i) {
      ++a;
    } else if (y[b].i < x[a].i) {
      ++b;
    } else {
      s += x[a].v.conj() * y[b].v;
      ++a;
      ++b;
    }
  }
  return s;
}

// ---------------------------------------------------------------- sparse

SparseMatrix SparseMatrix::identity(Index n) {
  SparseMatrix m(n, n);
  for (Index j = 0; j < n; ++j) m.data_[j] = svec_unit(j);
  return m;
}

SparseMatrix SparseMatrix::from_columns(Index rows, std::vector<SVec> cols) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = Index(cols.size());
  m.data_ = std::move(cols);
  for (const auto& c : m.data_) {
    if (!c.empty() && c.back().i >= rows) throw InvariantError("sparse column entry out of range");
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const GMatrix& d) { return from_columns(d.rows(), d.columns()); }

size_t SparseMatrix::nnz() const {
  size_t n = 0;
  for (const auto& c : data_) n += c.size();
  return n;
}

GScalar SparseMatrix::at(Index i, Index j) const {
  const GScalar* v = svec_find(data_[j], i);
  return v ? *v : GScalar();
}

SVec SparseMatrix::apply(const SVec& x) const {
  std::vector<std::pair<GScalar, const SVec*>> terms;
  terms.reserve(x.size());
  for (const auto& e : x) terms.emplace_back(e.v, &data_[e.i]);
  if (terms.empty()) return {};
  return svec_combine(terms);
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::vector<SEntry>> rows(rows_);
  for (Index j = 0; j < cols_; ++j) {
    for (const auto& e : data_[j]) rows[e.i].push_back(SEntry{j, e.v});
  }
  SparseMatrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) t.data_[i] = std::move(rows[i]);
  return t;
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix t = transpose();
  for (auto& c : t.data_) {
    for (auto& e : c) e.v = e.v.conj();
  }
  return t;
}

GMatrix SparseMatrix::to_dense() const {
  GMatrix d(rows_, cols_);
  for (Index j = 0; j < cols_; ++j) {
    for (const auto& e : data_[j]) d(e.i, j) = e.v;
  }
  return d;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const SVec& c) { return c.empty(); });
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw InvariantError("sparse product dimension mismatch");
  SparseMatrix c(a.rows_, b.cols_);
  for (Index j = 0; j < b.cols_; ++j) c.data_[j] = a.apply(b.data_[j]);
  return c;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvariantError("sparse sum dimension mismatch");
  SparseMatrix c(a.rows_, a.cols_);
  for (Index j = 0; j < a.cols_; ++j) c.data_[j] = svec_add(a.data_[j], b.data_[j]);
  return c;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvariantError("sparse difference dimension mismatch");
  SparseMatrix c(a.rows_, a.cols_);
  for (Index j = 0; j < a.cols_; ++j) c.data_[j] = svec_sub(a.data_[j], b.data_[j]);
  return c;
}

SparseMatrix SparseMatrix::scaled(const GScalar& s) const {
  SparseMatrix c(rows_, cols_);
  for (Index j = 0; j < cols_; ++j) c.data_[j] = svec_scale(data_[j], s);
  return c;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (Index j = 0; j < a.cols_; ++j) {
    const SVec& x = a.data_[j];
    const SVec& y = b.data_[j];
    if (x.size() != y.size()) return false;
    for (size_t k = 0; k < x.size(); ++k) {
      if (x[k].i != y[k].i || !(x[k].v == y[k].v)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- dense

GMatrix GMatrix::identity(Index n) {
  GMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = GScalar(1);
  return m;
}

GMatrix GMatrix::from_rows(const std::vector<std::vector<GScalar>>& rows) {
  if (rows.empty()) return GMatrix();
  GMatrix m(Index(rows.size()), Index(rows[0].size()));
  for (Index i = 0; i < m.rows_; ++i) {
    if (rows[i].size() != m.cols_) throw InvariantError("ragged matrix rows");
    for (Index j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

GMatrix GMatrix::from_columns(Index rows, const std::vector<SVec>& cols) {
  GMatrix m(rows, Index(cols.size()));
  for (Index j = 0; j < m.cols_; ++j) {
    for (const auto& e : cols[j]) m(e.i, j) = e.v;
  }
  return m;
}

GMatrix GMatrix::adjoint() const {
  GMatrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j).conj();
  }
  return t;
}

GMatrix GMatrix::transpose() const {
  GMatrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

SVec GMatrix::column(Index j) const {
  SVec c;
  for (Index i = 0; i < rows_; ++i) {
    if (!(*this)(i, j).is_zero()) c.push_back(SEntry{i, (*this)(i, j)});
  }
  return c;
}

std::vector<SVec> GMatrix::columns() const {
  std::vector<SVec> out(cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) {
      if (!(*this)(i, j).is_zero()) out[j].push_back(SEntry{i, (*this)(i, j)});
    }
  }
  return out;
}

SVec GMatrix::row(Index i) const {
  SVec r;
  for (Index j = 0; j < cols_; ++j) {
    if (!(*this)(i, j).is_zero()) r.push_back(SEntry{j, (*this)(i, j)});
  }
  return r;
}

bool GMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const GScalar& s) { return s.is_zero(); });
}

GScalar GMatrix::trace() const {
  GScalar t;
  for (Index i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

GMatrix operator*(const GMatrix& a, const GMatrix& b) {
  if (a.cols_ != b.rows_) throw InvariantError("dense product dimension mismatch");
  GMatrix c(a.rows_, b.cols_);
  for (Index i = 0; i < a.rows_; ++i) {
    for (Index k = 0; k < a.cols_; ++k) {
      const GScalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (Index j = 0; j < b.cols_; ++j) {
        const GScalar& y = b(k, j);
        if (!y.is_zero()) c(i, j) += x * y;
      }
    }
  }
  return c;
}

GMatrix operator+(const GMatrix& a, const GMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvariantError("dense sum dimension mismatch");
  GMatrix c = a;
  for (size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
  return c;
}

GMatrix operator-(const GMatrix& a, const GMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvariantError("dense difference dimension mismatch");
  GMatrix c = a;
  for (size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
  return c;
}

GMatrix GMatrix::scaled(const GScalar& s) const {
  GMatrix c = *this;
  for (auto& x : c.data_) x *= s;
  return c;
}

bool operator==(const GMatrix& a, const GMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string GMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (Index i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (Index j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

SVec dense_apply(const GMatrix& m, const SVec& x) {
  std::vector<GScalar> acc(m.rows());
  for (const auto& e : x) {
    for (Index i = 0; i < m.rows(); ++i) {
      const GScalar& a = m(i, e.i);
      if (!a.is_zero()) acc[i] += a * e.v;
    }
  }
  SVec out;
  for (Index i = 0; i < m.rows(); ++i) {
    if (!acc[i].is_zero()) out.push_back(SEntry{i, std::move(acc[i])});
  }
  return out;
}

}  // namespace relbetti
