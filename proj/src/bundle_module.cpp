#include "relbetti/bundle_module.hpp"

#include <algorithm>

#include "relbetti/error.hpp"

namespace relbetti {

SparseMatrix CModule::action(const std::string& pi, const std::vector<GScalar>& f) const {
  const auto& m = bundle.map(pi);
  std::vector<SVec> cols(dim());
  for (Index u = 0; u < dim(); ++u) {
    if (!f[m[u]].is_zero()) cols[u] = {{u, f[m[u]]}};
  }
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

std::vector<GScalar> CModule::inner(const std::string& pi, const SVec& f, const SVec& g) const {
  const auto& m = bundle.map(pi);
  std::vector<GScalar> out(bundle.base.size());
  for (const auto& e : f) {
    if (const GScalar* y = svec_find(g, e.i)) out[m[e.i]] += e.v.conj() * *y;
  }
  return out;
}

GMatrix CModule::scalar_gram(const std::string& pi) const {
  const auto& m = bundle.map(pi);
  GMatrix g(dim(), dim());
  for (Index u = 0; u < dim(); ++u) g(u, u) = GScalar(bundle.base.weights[m[u]]);
  return g;
}

CModule c_module(const MultiBundle& u) {
  auto rep = u.validate();
  if (!rep.ok()) throw PreconditionError("invalid multibundle: " + rep.violations.front().axiom);
  return CModule{u};
}

ModuleMap pushforward(const MultiBundle& u, const MultiBundle& v, const std::vector<Index>& phi) {
  if (phi.size() != u.size) throw PreconditionError("morphism is not total");
  for (Index a : phi) {
    if (a >= v.size) throw PreconditionError("morphism leaves the codomain");
  }
  ModuleMap out;
  for (const auto& [sname, sm] : v.maps) {
    std::string match;
    for (const auto& [tname, tm] : u.maps) {
      bool eq = true;
      for (Index a = 0; a < u.size && eq; ++a) eq = tm[a] == sm[phi[a]];
      if (eq) {
        match = tname;
        break;
      }
    }
    if (match.empty()) throw PreconditionError("not a morphism of multibundles", {sname});
    out.intertwines.emplace_back(match, sname);
  }
  std::vector<SVec> cols(u.size);
  for (Index a = 0; a < u.size; ++a) cols[a] = svec_unit(phi[a]);
  out.matrix = SparseMatrix::from_columns(Index(v.size), std::move(cols));

  CModule cu{u}, cv{v};
  for (const auto& [tname, sname] : out.intertwines) {
    for (Atom x = 0; x < u.base.size(); ++x) {
      std::vector<GScalar> f(u.base.size());
      f[x] = GScalar(1);
      RB_CHECK(out.matrix * cu.action(tname, f) == cv.action(sname, f) * out.matrix,
               "pushforward does not intertwine the module structures");
    }
  }
  return out;
}

StarIso star_iso(const MultiBundle& u, const std::string& pi, const MultiBundle& v, const std::string& sigma) {
  StarIso out;
  out.product = fiber_product(u, pi, v, sigma);
  const auto& pm = u.map(pi);
  const auto& sm = v.map(sigma);
  const auto& w = u.base.weights;
  Index n = Index(u.size * v.size);
  auto idx = [&](Index a, Index b) { return Index(a * v.size + b); };

  // <f(x)a | g(x)b> = sum_x mu(x) (f*g)_pi(x) (a*b)_sigma(x), diagonal on basis tensors.
  GMatrix gram(n, n);
  for (Index a = 0; a < u.size; ++a)
    for (Index b = 0; b < v.size; ++b) {
      if (pm[a] == sm[b]) gram(idx(a, b), idx(a, b)) = GScalar(w[pm[a]]);
    }
  HermitianForm form(gram);
  RB_CHECK(form.is_positive_semidefinite(), "balanced tensor form is not positive");

  EchelonBasis rad(n), rel(n);
  for (const auto& c : radical(form).columns()) rad.insert(c);
  // (f.e_x) (x) a - f (x) (e_x.a) on basis tensors.
  for (Index a = 0; a < u.size; ++a)
    for (Index b = 0; b < v.size; ++b)
      for (Atom x = 0; x < u.base.size(); ++x) {
        GScalar c = GScalar(pm[a] == x ? 1 : 0) - GScalar(sm[b] == x ? 1 : 0);
        if (!c.is_zero()) rel.insert({{idx(a, b), c}});
      }
  RB_CHECK(rel.dim() == rad.dim(), "balancing relations do not span the radical");
  for (const auto& r : rel.rows()) RB_CHECK(rad.contains(r), "balancing relation outside the radical");

  out.quotient = QuotientMap(rel);
  Index q = out.quotient.dim();
  std::vector<SVec> cols(q);
  for (Index k = 0; k < q; ++k) {
    Index c = out.quotient.representative(k);
    Index a = c / Index(v.size), b = c % Index(v.size);
    auto it = std::find(out.product.pairs.begin(), out.product.pairs.end(), std::make_pair(a, b));
    RB_CHECK(it != out.product.pairs.end(), "kept tensor is not a composable pair");
    cols[k] = svec_unit(Index(it - out.product.pairs.begin()));
  }
  out.iso = SparseMatrix::from_columns(Index(out.product.bundle.size), std::move(cols));
  RB_CHECK(rank(out.iso) == q && q == out.product.bundle.size, "star product map is not bijective");

  out.source_gram = GMatrix(q, q);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) out.source_gram(i, j) = gram(out.quotient.representative(i), out.quotient.representative(j));
  GMatrix tg = CModule{out.product.bundle}.scalar_gram(pi);
  GMatrix isod = out.iso.to_dense();
  out.target_gram = isod.adjoint() * tg * isod;
  RB_CHECK(out.target_gram == out.source_gram, "star product map does not preserve the inner product");
  return out;
}

InvariantsCoinvariants invariants_coinvariants(const MultiBundle& u, const std::string& pi, const std::string& sigma) {
  const auto& pm = u.map(pi);
  const auto& sm = u.map(sigma);
  Index n = Index(u.size);
  size_t nx = u.base.size();
  InvariantsCoinvariants out;

  // Stack (e_x o pi - e_x o sigma) for every atom x.
  std::vector<SVec> cols(n);
  EchelonBasis comm(n);
  for (Index a = 0; a < n; ++a) {
    std::vector<SEntry> e;
    for (Atom x = 0; x < nx; ++x) {
      GScalar c = GScalar(pm[a] == x ? 1 : 0) - GScalar(sm[a] == x ? 1 : 0);
      if (!c.is_zero()) {
        e.push_back({Index(x * n + a), c});
        comm.insert({{a, c}});
      }
    }
    cols[a] = svec_from_pairs(e);
  }
  out.invariants = kernel_basis(SparseMatrix::from_columns(Index(nx) * n, std::move(cols)));
  out.coinvariants = QuotientMap(comm);
  for (Index a = 0; a < n; ++a) {
    if (pm[a] == sm[a]) out.support.push_back(a);
  }
  out.psi = GMatrix(out.coinvariants.dim(), Index(out.invariants.size()));
  for (Index j = 0; j < out.invariants.size(); ++j) {
    for (const auto& e : out.coinvariants.reduce(out.invariants[j])) out.psi(e.i, j) = e.v;
  }
  RB_CHECK(out.invariants.size() == out.support.size(), "invariants are not the functions on U^{pi sigma}");
  RB_CHECK(out.psi.rows() == out.psi.cols() && rank(out.psi) == out.psi.cols(), "invariants -> coinvariants is not bijective");
  return out;
}

std::vector<std::vector<Index>> decomposition_witness(const MultiBundle& u) {
  auto parts = lusin_partition_all(u);
  std::vector<int> owner(u.size, -1);
  for (size_t k = 0; k < parts.size(); ++k) {
    for (Index a : parts[k]) {
      RB_CHECK(owner[a] < 0, "decomposition parts overlap");
      owner[a] = int(k);
    }
    for (const auto& [name, m] : u.maps) {
      std::vector<bool> hit(u.base.size(), false);
      for (Index a : parts[k]) {
        RB_CHECK(!hit[m[a]], "bundle map not injective on a part");
        hit[m[a]] = true;
      }
    }
  }
  RB_CHECK(std::all_of(owner.begin(), owner.end(), [](int o) { return o >= 0; }), "decomposition misses an element");
  return parts;
}

}  // namespace relbetti
