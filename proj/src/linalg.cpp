#include "relbetti/linalg.hpp"

#include <algorithm>

#include "relbetti/error.hpp"

namespace relbetti {

// ------------------------------------------------------------ echelon basis

SVec EchelonBasis::reduce(const SVec& v) const {
  std::vector<std::pair<GScalar, const SVec*>> terms;
  terms.emplace_back(GScalar(1), &v);
  for (const auto& e : v) {
    int r = row_of_col_[e.i];
    if (r >= 0) terms.emplace_back(-e.v, &rows_[size_t(r)]);
  }
  if (terms.size() == 1) return v;
  return svec_combine(terms);
}

bool EchelonBasis::insert(const SVec& v) {
  SVec r = reduce(v);
  if (r.empty()) return false;
  Index p = r.front().i;
  GScalar lead = r.front().v;
  if (!lead.is_one()) r = svec_scale(r, GScalar(1) / lead);
  for (auto& row : rows_) {
    const GScalar* c = svec_find(row, p);
    if (c) row = svec_sub(row, svec_scale(r, *c));
  }
  row_of_col_[p] = int(rows_.size());
  pivot_of_row_.push_back(p);
  rows_.push_back(std::move(r));
  return true;
}

SVec EchelonBasis::coordinates(const SVec& v) const {
  SVec c;
  for (const auto& e : v) {
    int r = row_of_col_[e.i];
    if (r >= 0) c.push_back(SEntry{Index(r), e.v});
  }
  std::sort(c.begin(), c.end(), [](const SEntry& a, const SEntry& b) { return a.i < b.i; });
  return c;
}

std::vector<Index> EchelonBasis::non_pivots() const {
  std::vector<Index> out;
  for (Index c = 0; c < n_; ++c) {
    if (row_of_col_[c] < 0) out.push_back(c);
  }
  return out;
}

QuotientMap::QuotientMap(EchelonBasis relations) : rel_(std::move(relations)) {
  kept_ = rel_.non_pivots();
  kept_pos_.assign(rel_.ambient(), -1);
  for (size_t k = 0; k < kept_.size(); ++k) kept_pos_[kept_[k]] = int(k);
}

SVec QuotientMap::reduce(const SVec& v) const {
  SVec r = rel_.reduce(v);
  for (auto& e : r) e.i = Index(kept_pos_[e.i]);
  return r;
}

SVec QuotientMap::reduce_basis(Index c) const {
  if (kept_pos_[c] >= 0) return svec_unit(Index(kept_pos_[c]));
  return reduce(svec_unit(c));
}

// ------------------------------------------------------------ elimination

namespace {

// Semi-echelon structure keyed by leading index, used for rank and column
// independence where back-substitution is unnecessary.
class SemiEchelon {
 public:
  explicit SemiEchelon(Index n) : row_of_lead_(n, -1) {}

  bool insert(SVec v) {
    size_t pos = 0;
    while (pos < v.size()) {
      int r = row_of_lead_[v[pos].i];
      if (r < 0) {
        ++pos;
        continue;
      }
      GScalar c = v[pos].v;
      v = svec_sub(v, svec_scale(rows_[size_t(r)], c));
    }
    if (v.empty()) return false;
    GScalar lead = v.front().v;
    if (!lead.is_one()) v = svec_scale(v, GScalar(1) / lead);
    row_of_lead_[v.front().i] = int(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }
  size_t rank() const { return rows_.size(); }

 private:
  std::vector<int> row_of_lead_;
  std::vector<SVec> rows_;
};

}  // namespace

size_t rank(const SparseMatrix& m) {
  // Insert the shorter side.
  if (m.cols() <= m.rows()) {
    SemiEchelon se(m.rows());
    for (Index j = 0; j < m.cols(); ++j) se.insert(m.col(j));
    return se.rank();
  }
  SparseMatrix t = m.transpose();
  SemiEchelon se(t.rows());
  for (Index j = 0; j < t.cols(); ++j) se.insert(t.col(j));
  return se.rank();
}

size_t rank(const GMatrix& m) { return rank(SparseMatrix::from_dense(m)); }

std::vector<Index> independent_columns(const std::vector<SVec>& cols, Index ambient) {
  SemiEchelon se(ambient);
  std::vector<Index> out;
  for (Index j = 0; j < cols.size(); ++j) {
    if (se.insert(cols[j])) out.push_back(j);
  }
  return out;
}

std::vector<SVec> kernel_basis(const SparseMatrix& m) {
  SparseMatrix t = m.transpose();  // columns of t are rows of m
  EchelonBasis eb(m.cols());
  for (Index i = 0; i < t.cols(); ++i) eb.insert(t.col(i));
  std::vector<SVec> out;
  const auto& rows = eb.rows();
  const auto& piv = eb.pivots();
  // Column index -> list of (row, value) for quick assembly.
  std::vector<std::vector<std::pair<Index, GScalar>>> by_col(m.cols());
  for (Index r = 0; r < rows.size(); ++r) {
    for (const auto& e : rows[r]) {
      if (e.i != piv[r]) by_col[e.i].emplace_back(r, e.v);
    }
  }
  for (Index f : eb.non_pivots()) {
    std::vector<SEntry> pairs;
    pairs.push_back(SEntry{f, GScalar(1)});
    for (const auto& [r, v] : by_col[f]) pairs.push_back(SEntry{piv[r], -v});
    out.push_back(svec_from_pairs(std::move(pairs)));
  }
  return out;
}

GMatrix kernel_basis(const GMatrix& m) {
  return GMatrix::from_columns(m.cols(), kernel_basis(SparseMatrix::from_dense(m)));
}

std::optional<GMatrix> inverse(const GMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  Index n = m.rows();
  GMatrix a = m;
  GMatrix inv = GMatrix::identity(n);
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return std::nullopt;
    if (p != c) {
      for (Index j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    }
    GScalar s = GScalar(1) / a(c, c);
    for (Index j = 0; j < n; ++j) {
      if (!a(c, j).is_zero()) a(c, j) *= s;
      if (!inv(c, j).is_zero()) inv(c, j) *= s;
    }
    for (Index r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      GScalar f = a(r, c);
      for (Index j = 0; j < n; ++j) {
        if (!a(c, j).is_zero()) a(r, j) -= f * a(c, j);
        if (!inv(c, j).is_zero()) inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::optional<SVec> solve(const GMatrix& m, const SVec& b) {
  // Row-reduce [m | b] via an echelon basis of augmented rows.
  Index n = m.cols();
  EchelonBasis eb(n + 1);
  for (Index i = 0; i < m.rows(); ++i) {
    SVec row = m.row(i);
    const GScalar* bi = svec_find(b, i);
    if (bi) row.push_back(SEntry{n, *bi});
    eb.insert(row);
  }
  if (eb.is_pivot(n)) return std::nullopt;
  SVec x;
  const auto& rows = eb.rows();
  const auto& piv = eb.pivots();
  for (size_t r = 0; r < rows.size(); ++r) {
    const GScalar* v = svec_find(rows[r], n);
    if (v) x.push_back(SEntry{piv[r], *v});
  }
  std::sort(x.begin(), x.end(), [](const SEntry& a, const SEntry& c) { return a.i < c.i; });
  return x;
}

// ------------------------------------------------------------ forms

HermitianForm::HermitianForm(GMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw PreconditionError("gram matrix is not square");
}

bool HermitianForm::is_hermitian() const { return gram_ == gram_.adjoint(); }

bool HermitianForm::is_positive_semidefinite() const {
  if (!is_hermitian()) return false;
  Index n = dim();
  GMatrix a = gram_;
  std::vector<bool> done(n, false);
  for (Index step = 0; step < n; ++step) {
    Index p = n;
    for (Index i = 0; i < n; ++i) {
      if (!done[i] && !a(i, i).is_zero()) {
        p = i;
        break;
      }
    }
    if (p == n) {
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          if (!done[i] && !done[j] && !a(i, j).is_zero()) return false;
        }
      }
      return true;
    }
    if (!a(p, p).is_real() || a(p, p).re.sign() < 0) return false;
    done[p] = true;
    GScalar inv = GScalar(1) / a(p, p);
    for (Index i = 0; i < n; ++i) {
      if (done[i] || a(i, p).is_zero()) continue;
      GScalar f = a(i, p) * inv;
      for (Index j = 0; j < n; ++j) {
        if (!done[j] && !a(p, j).is_zero()) a(i, j) -= f * a(p, j);
      }
    }
  }
  return true;
}

bool HermitianForm::is_positive_definite() const {
  return is_positive_semidefinite() && rank(gram_) == dim();
}

GScalar HermitianForm::operator()(const SVec& x, const SVec& y) const {
  return svec_dot(x, dense_apply(gram_, y));
}

GMatrix radical(const HermitianForm& f) {
  if (!f.is_hermitian()) throw PreconditionError("form is not hermitian");
  return kernel_basis(f.gram());
}

GMatrix orth_projection(const HermitianForm& f, const GMatrix& s) {
  if (s.rows() != f.dim()) throw PreconditionError("projection span has wrong ambient dimension");
  if (rank(s) != s.cols()) throw PreconditionError("projection span columns are dependent");
  GMatrix sh_g = s.adjoint() * f.gram();
  auto inv = inverse(sh_g * s);
  if (!inv) throw PreconditionError("form is degenerate on the projection span");
  return s * (*inv * sh_g);
}

}  // namespace relbetti
