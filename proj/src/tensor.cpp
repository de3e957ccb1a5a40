#include "relbetti/tensor.hpp"

#include "relbetti/error.hpp"

namespace relbetti {

namespace {

SVec apply_combination(const std::vector<SparseMatrix>& ops, const SVec& coeffs, const SVec& x) {
  std::vector<SVec> parts;
  parts.reserve(coeffs.size());
  for (const auto& c : coeffs) parts.push_back(ops[c.i].apply(x));
  std::vector<std::pair<GScalar, const SVec*>> terms;
  for (size_t k = 0; k < coeffs.size(); ++k) terms.emplace_back(coeffs[k].v, &parts[k]);
  return svec_combine(terms);
}

// Ambient coordinates of x (x) y in a space with row length `width`.
SVec ambient_tensor(const SVec& x, const SVec& y, Index width) {
  std::vector<SEntry> out;
  out.reserve(x.size() * y.size());
  for (const auto& p : x)
    for (const auto& q : y) out.push_back({p.i * width + q.i, p.v * q.v});
  return svec_from_pairs(std::move(out));
}

// Structure of B in the basis `sub`: products and stars in sub
// coordinates, traces, unit coordinates.
struct SubStructure {
  std::vector<SVec> prod, star;
  std::vector<GScalar> tr;
  SVec unit;
  bool operator==(const SubStructure&) const = default;
};

SubStructure sub_structure(const Extension& e) {
  SubStructure s;
  const auto& a = e.algebra;
  for (const auto& x : e.sub) {
    for (const auto& y : e.sub) s.prod.push_back(e.sub_coordinates(a.mul(x, y)));
    s.star.push_back(e.sub_coordinates(a.star(x)));
    s.tr.push_back(a.tr(x));
  }
  s.unit = e.sub_coordinates(a.unit());
  return s;
}

SVec embed_sub(const Extension& e, const SVec& coords) {
  std::vector<std::pair<GScalar, const SVec*>> terms;
  for (const auto& c : coords) terms.emplace_back(c.v, &e.sub[c.i]);
  return svec_combine(terms);
}

bool is_unit_vector(const TracialStarAlgebra& a, const SVec& b) { return b == a.unit(); }

}  // namespace

// ------------------------------------------------------------ bimodules

SVec Bimodule::act_left(const SVec& a, const SVec& m) const { return apply_combination(left, a, m); }
SVec Bimodule::act_right(const SVec& m, const SVec& a) const { return apply_combination(right, a, m); }

ValidationReport Bimodule::validate(const TracialStarAlgebra& a) const {
  ValidationReport rep;
  Index d = a.dim();
  if (left.size() != d || right.size() != d) {
    rep.violations.push_back({"action count", "expected one operator per basis element"});
    return rep;
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const SVec& ij = a.product(i, j);
      for (Index x = 0; x < dim; ++x) {
        SVec ex = svec_unit(x);
        if (left[i].apply(left[j].apply(ex)) != act_left(ij, ex))
          rep.violations.push_back({"left action", a.label(i) + "," + a.label(j)});
        if (right[j].apply(right[i].apply(ex)) != act_right(ex, ij))
          rep.violations.push_back({"right action", a.label(i) + "," + a.label(j)});
        if (left[i].apply(right[j].apply(ex)) != right[j].apply(left[i].apply(ex)))
          rep.violations.push_back({"actions commute", a.label(i) + "," + a.label(j)});
        if (!rep.ok()) return rep;
      }
    }
  }
  SVec one = a.unit();
  for (Index x = 0; x < dim; ++x) {
    SVec ex = svec_unit(x);
    if (act_left(one, ex) != ex || act_right(ex, one) != ex) {
      rep.violations.push_back({"unit acts as identity", std::to_string(x)});
      break;
    }
  }
  return rep;
}

Bimodule regular_bimodule(const TracialStarAlgebra& a) {
  Bimodule m;
  m.dim = a.dim();
  for (Index i = 0; i < a.dim(); ++i) {
    m.left.push_back(a.left_mult(svec_unit(i)));
    m.right.push_back(a.right_mult(svec_unit(i)));
  }
  return m;
}

// ------------------------------------------------------------ balanced tensor

bool same_subalgebra(const Extension& a, const Extension& c) {
  if (a.sub.size() != c.sub.size()) return false;
  return sub_structure(a) == sub_structure(c);
}

TensorFormCheck tensor_form_expressions(const Extension& a, const Extension& c) {
  if (!same_subalgebra(a, c)) throw PreconditionError("extensions do not share the subalgebra B");
  const auto& A = a.algebra;
  const auto& C = c.algebra;
  Index da = A.dim(), dc = C.dim();
  Index nb = Index(a.sub.size());
  // ea[i][k] = E(e_i^* e_k), ec[l][j] = E(e_l e_j^*), both in B coordinates.
  std::vector<SVec> ea(size_t(da) * da), ec(size_t(dc) * dc);
  for (Index i = 0; i < da; ++i)
    for (Index k = 0; k < da; ++k)
      ea[size_t(i) * da + k] = a.sub_coordinates(a.expect(A.mul(A.star(svec_unit(i)), svec_unit(k))));
  for (Index l = 0; l < dc; ++l)
    for (Index j = 0; j < dc; ++j)
      ec[size_t(l) * dc + j] = c.sub_coordinates(c.expect(C.mul(svec_unit(l), C.star(svec_unit(j)))));
  GMatrix tb(nb, nb);
  for (Index p = 0; p < nb; ++p)
    for (Index q = 0; q < nb; ++q) tb(p, q) = A.tr(A.mul(a.sub[p], a.sub[q]));

  Index n = da * dc;
  TensorFormCheck out{GMatrix(n, n), GMatrix(n, n), GMatrix(n, n)};
  for (Index i = 0; i < da; ++i) {
    SVec ai_star = A.star(svec_unit(i));
    for (Index j = 0; j < dc; ++j) {
      SVec bj_star = C.star(svec_unit(j));
      for (Index k = 0; k < da; ++k) {
        const SVec& eak = ea[size_t(i) * da + k];
        SVec eak_c = embed_sub(c, eak);
        SVec left_c = C.mul(bj_star, eak_c);
        for (Index l = 0; l < dc; ++l) {
          const SVec& ecl = ec[size_t(l) * dc + j];
          GScalar v1;
          for (const auto& x : ecl)
            for (const auto& y : eak) v1 += x.v * y.v * tb(x.i, y.i);
          GScalar v2 = C.tr(C.mul(left_c, svec_unit(l)));
          GScalar v3 = A.tr(A.mul(A.mul(svec_unit(k), embed_sub(a, ecl)), ai_star));
          Index r = i * dc + j, s = k * dc + l;
          out.via_b(r, s) = v1;
          out.via_c(r, s) = v2;
          out.via_a(r, s) = v3;
        }
      }
    }
  }
  return out;
}

BalancedTensor::BalancedTensor(const Extension& a, const Extension& c)
    : a_(std::make_shared<Extension>(a)), c_(std::make_shared<Extension>(c)) {
  for (const Extension* e : {&a, &c}) {
    auto rep = e->validate();
    if (!rep.ok()) throw PreconditionError("not a tracial extension: " + rep.violations.front().axiom, {rep.violations.front().witness});
    auto arep = e->algebra.validate();
    if (!arep.ok()) throw PreconditionError("not a tracial algebra: " + arep.violations.front().axiom, {arep.violations.front().witness});
  }
  auto forms = tensor_form_expressions(a, c);
  RB_CHECK(forms.via_b == forms.via_c && forms.via_b == forms.via_a, "the three expressions of the tensor form disagree");

  const auto& A = a.algebra;
  const auto& C = c.algebra;
  Index da = A.dim(), dc = C.dim(), n = da * dc;
  EchelonBasis rel(n);
  for (size_t k = 0; k < a.sub.size(); ++k) {
    if (is_unit_vector(A, a.sub[k])) continue;
    for (Index i = 0; i < da; ++i) {
      SVec ib = A.mul(svec_unit(i), a.sub[k]);
      for (Index j = 0; j < dc; ++j) {
        SVec bj = C.mul(c.sub[k], svec_unit(j));
        rel.insert(svec_sub(ambient_tensor(ib, svec_unit(j), dc), ambient_tensor(svec_unit(i), bj, dc)));
      }
    }
  }
  HermitianForm form(forms.via_b);
  for (const auto& r : rel.rows()) RB_CHECK(dense_apply(forms.via_b, r).empty(), "balancing relation outside the radical");
  RB_CHECK(radical(form).cols() == rel.dim(), "balancing relations do not span the radical");

  quotient_ = QuotientMap(std::move(rel));
  Index d = quotient_.dim();
  gram_ = GMatrix(d, d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) gram_(k, l) = forms.via_b(quotient_.representative(k), quotient_.representative(l));
  RB_CHECK(HermitianForm(gram_).is_positive_definite(), "tensor form not positive definite on the quotient");
  one_one_ = tensor(A.unit(), C.unit());

  actions_.dim = d;
  for (Index t = 0; t < da; ++t)
    actions_.left.push_back(induced_operator(
        [&](Index i, Index j) { return ambient_tensor(A.mul(svec_unit(t), svec_unit(i)), svec_unit(j), dc); }));
  for (Index t = 0; t < dc; ++t)
    actions_.right.push_back(induced_operator(
        [&](Index i, Index j) { return ambient_tensor(svec_unit(i), C.mul(svec_unit(j), svec_unit(t)), dc); }));
}

SVec BalancedTensor::tensor(const SVec& x, const SVec& y) const {
  return quotient_.reduce(ambient_tensor(x, y, c_->dim()));
}

std::pair<Index, Index> BalancedTensor::word(Index k) const {
  Index r = quotient_.representative(k);
  return {r / c_->dim(), r % c_->dim()};
}

SparseMatrix BalancedTensor::induced_operator(const std::function<SVec(Index, Index)>& on_basis) const {
  Index dc = c_->dim();
  for (const auto& r : quotient_.relations().rows()) {
    std::vector<SVec> imgs;
    imgs.reserve(r.size());
    for (const auto& e : r) imgs.push_back(on_basis(e.i / dc, e.i % dc));
    std::vector<std::pair<GScalar, const SVec*>> terms;
    for (size_t k = 0; k < r.size(); ++k) terms.emplace_back(r[k].v, &imgs[k]);
    if (!quotient_.reduce(svec_combine(terms)).empty())
      throw PreconditionError("operator does not preserve the balancing relations");
  }
  std::vector<SVec> cols;
  for (Index k = 0; k < dim(); ++k) {
    auto [i, j] = word(k);
    cols.push_back(quotient_.reduce(on_basis(i, j)));
  }
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

Bimodule BalancedTensor::outer_bimodule() const {
  if (a_->algebra.dim() != c_->algebra.dim() || !(a_->algebra.unit() == c_->algebra.unit()))
    throw PreconditionError("outer bimodule needs A = C");
  return actions_;
}

SVec BalancedTensor::ambient(const SVec& x, const SVec& y) const { return ambient_tensor(x, y, c_->dim()); }

GScalar BalancedTensor::inner(const SVec& x, const SVec& y) const { return HermitianForm(gram_)(x, y); }

// ------------------------------------------------------------ tensor tower

TensorTower::TensorTower(const Extension& ext, Bimodule m) : ext_(ext), m_(std::move(m)) {
  if (m_.left.size() != ext_.dim() || m_.right.size() != ext_.dim())
    throw PreconditionError("bimodule actions do not match the algebra");
}

Index TensorTower::dim(size_t k) const {
  if (k == 0) return m_.dim;
  RB_CHECK(k <= levels_.size(), "tensor level not built");
  return levels_[k - 1].quotient.dim();
}

void TensorTower::build(size_t k) {
  const auto& A = ext_.algebra;
  Index da = A.dim();
  while (levels_.size() < k) {
    size_t lev = levels_.size() + 1;
    Index prev = dim(lev - 1);
    EchelonBasis rel(prev * da);
    for (const auto& b : ext_.sub) {
      if (is_unit_vector(A, b)) continue;
      std::vector<SVec> bc(da);
      for (Index c = 0; c < da; ++c) bc[c] = A.mul(b, svec_unit(c));
      for (Index p = 0; p < prev; ++p) {
        SVec pb = act_right(lev - 1, p, b);
        for (Index c = 0; c < da; ++c) {
          rel.insert(svec_sub(ambient_tensor(pb, svec_unit(c), da), ambient_tensor(svec_unit(p), bc[c], da)));
        }
      }
    }
    Level L;
    L.quotient = QuotientMap(std::move(rel));
    for (Index kk = 0; kk < L.quotient.dim(); ++kk) {
      Index r = L.quotient.representative(kk);
      L.parent.emplace_back(r / da, r % da);
    }
    levels_.push_back(std::move(L));
  }
}

std::vector<Index> TensorTower::word(size_t k, Index kept) const {
  std::vector<Index> w(k + 1);
  for (size_t lev = k; lev > 0; --lev) {
    auto [p, c] = levels_[lev - 1].parent[kept];
    w[lev] = c;
    kept = p;
  }
  w[0] = kept;
  return w;
}

SVec TensorTower::extend(size_t k, const SVec& x, const SVec& a) const {
  RB_CHECK(k < levels_.size(), "tensor level not built");
  return levels_[k].quotient.reduce(ambient_tensor(x, a, ext_.dim()));
}

SVec TensorTower::pure(const SVec& m, const std::vector<SVec>& as) const {
  SVec v = m;
  for (size_t k = 0; k < as.size(); ++k) v = extend(k, v, as[k]);
  return v;
}

SVec TensorTower::act_left(size_t k, const SVec& a, Index kept) const {
  if (k == 0) return m_.act_left(a, svec_unit(kept));
  auto [p, c] = levels_[k - 1].parent[kept];
  return extend(k - 1, act_left(k - 1, a, p), svec_unit(c));
}

SVec TensorTower::act_right(size_t k, Index kept, const SVec& a) const {
  if (k == 0) return m_.act_right(svec_unit(kept), a);
  auto [p, c] = levels_[k - 1].parent[kept];
  return extend(k - 1, svec_unit(p), ext_.algebra.mul(svec_unit(c), a));
}

SparseMatrix TensorTower::lift(size_t k, const SparseMatrix& t) const {
  RB_CHECK(t.rows() == m_.dim && t.cols() == m_.dim, "operator size mismatch");
  SparseMatrix cur = t;
  for (size_t lev = 1; lev <= k; ++lev) {
    const auto& L = levels_[lev - 1];
    std::vector<SVec> cols;
    cols.reserve(L.parent.size());
    for (const auto& [p, c] : L.parent) cols.push_back(extend(lev - 1, cur.col(p), svec_unit(c)));
    cur = SparseMatrix::from_columns(dim(lev), std::move(cols));
  }
  return cur;
}

const QuotientMap& TensorTower::coinvariants(size_t k) {
  build(k);
  if (coinv_.size() <= k) coinv_.resize(k + 1);
  if (!coinv_[k]) {
    const auto& A = ext_.algebra;
    EchelonBasis rel(dim(k));
    for (const auto& b : ext_.sub) {
      if (is_unit_vector(A, b)) continue;
      for (Index x = 0; x < dim(k); ++x) rel.insert(svec_sub(act_left(k, b, x), act_right(k, x, b)));
    }
    coinv_[k] = std::make_unique<QuotientMap>(std::move(rel));
  }
  return *coinv_[k];
}

}  // namespace relbetti
