#include "relbetti/complexes.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "relbetti/error.hpp"
#include "relbetti/modrank.hpp"

namespace relbetti {

namespace {

SparseMatrix block_diag(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<SVec> cols = a.columns();
  for (const auto& c : b.columns()) {
    SVec s;
    for (const auto& e : c) s.push_back({e.i + a.rows(), e.v});
    cols.push_back(std::move(s));
  }
  return SparseMatrix::from_columns(a.rows() + b.rows(), std::move(cols));
}

SparseMatrix unit_columns(Index rows, const std::vector<Index>& targets) {
  std::vector<SVec> cols;
  cols.reserve(targets.size());
  for (Index t : targets) cols.push_back(svec_unit(t));
  return SparseMatrix::from_columns(rows, std::move(cols));
}

std::string degree_tag(size_t n, size_t i) { return "degree " + std::to_string(n) + " face " + std::to_string(i); }

// A map defined on the pure words of one tower level, landing in another.
using WordFn = std::function<std::pair<SVec, std::vector<SVec>>(const std::vector<Index>&)>;

struct LevelMap {
  const TensorTower* tower;
  size_t from;
  const QuotientMap* src;  // coinvariants of the source level, or null
  const QuotientMap* dst;  // coinvariants of the target level, or null
  bool check_descent = true;
};

SVec push(const LevelMap& m, const WordFn& f, Index level_index) {
  auto [mv, as] = f(m.tower->word(m.from, level_index));
  SVec v = m.tower->pure(mv, as);
  return m.dst ? m.dst->reduce(v) : v;
}

// Matrix of f on the source basis; when the source is a coinvariant quotient
// the map is checked to vanish on its relations.
SparseMatrix word_matrix(const LevelMap& m, const WordFn& f, Index target_dim, const std::string& what) {
  std::vector<SVec> cols;
  if (!m.src) {
    Index n = m.tower->dim(m.from);
    cols.reserve(n);
    for (Index k = 0; k < n; ++k) cols.push_back(push(m, f, k));
    return SparseMatrix::from_columns(target_dim, std::move(cols));
  }
  std::map<Index, SVec> cache;
  auto image = [&](Index k) -> const SVec& {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, push(m, f, k)).first;
    return it->second;
  };
  for (const auto& r : m.src->relations().rows()) {
    if (!m.check_descent) break;
    std::vector<std::pair<GScalar, const SVec*>> terms;
    for (const auto& e : r) terms.emplace_back(e.v, &image(e.i));
    if (!svec_combine(terms).empty()) throw InvariantError(what + " does not descend to coinvariants");
  }
  cols.reserve(m.src->dim());
  for (Index k = 0; k < m.src->dim(); ++k) cols.push_back(image(m.src->representative(k)));
  return SparseMatrix::from_columns(target_dim, std::move(cols));
}

std::vector<SVec> units_of(const std::vector<Index>& w, size_t from, size_t to) {
  std::vector<SVec> out;
  for (size_t k = from; k < to; ++k) out.push_back(svec_unit(w[k]));
  return out;
}

// Word w = (m, a_1, ..., a_n): the Hochschild face h_i.
std::pair<SVec, std::vector<SVec>> hochschild_face(const TracialStarAlgebra& A, const Bimodule& M,
                                                   const std::vector<Index>& w, size_t i) {
  size_t n = w.size() - 1;
  if (i == 0) return {M.act_right(svec_unit(w[0]), svec_unit(w[1])), units_of(w, 2, w.size())};
  if (i == n) return {M.act_left(svec_unit(w[n]), svec_unit(w[0])), units_of(w, 1, n)};
  std::vector<SVec> as = units_of(w, 1, i);
  as.push_back(A.mul(svec_unit(w[i]), svec_unit(w[i + 1])));
  auto rest = units_of(w, i + 2, w.size());
  as.insert(as.end(), rest.begin(), rest.end());
  return {svec_unit(w[0]), std::move(as)};
}

std::vector<std::vector<Index>> level_words(const TensorTower& t, size_t k, const QuotientMap* q) {
  std::vector<std::vector<Index>> out;
  Index n = q ? q->dim() : t.dim(k);
  for (Index j = 0; j < n; ++j) out.push_back(t.word(k, q ? q->representative(j) : j));
  return out;
}

SparseMatrix lifted_action(const TensorTower& t, size_t k, const QuotientMap& q, const SparseMatrix& op) {
  SparseMatrix l = t.lift(k, op);
  for (const auto& r : q.relations().rows()) {
    if (!q.reduce(l.apply(r)).empty()) throw InvariantError("operator does not descend to coinvariants");
  }
  std::vector<SVec> cols;
  for (Index j = 0; j < q.dim(); ++j) cols.push_back(q.reduce(l.col(q.representative(j))));
  return SparseMatrix::from_columns(q.dim(), std::move(cols));
}

}  // namespace

// ------------------------------------------------------------ modules

ValidationReport FiniteModule::validate(const TracialStarAlgebra& f) const {
  ValidationReport r;
  if (action.size() != f.dim()) {
    r.violations.push_back({"module", "action count differs from the algebra dimension"});
    return r;
  }
  for (Index i = 0; i < f.dim(); ++i) {
    for (Index j = 0; j < f.dim(); ++j) {
      SparseMatrix lhs = action[i] * action[j];
      SparseMatrix rhs(dim, dim);
      for (const auto& e : f.product(i, j)) rhs = rhs + action[e.i].scaled(e.v);
      if (!(lhs == rhs)) {
        r.violations.push_back({"module", "e_" + f.label(i) + " e_" + f.label(j) + " acts wrongly"});
        return r;
      }
    }
  }
  SparseMatrix u(dim, dim);
  for (const auto& e : f.unit()) u = u + action[e.i].scaled(e.v);
  if (!(u == SparseMatrix::identity(dim))) r.violations.push_back({"module", "unit does not act as identity"});
  return r;
}

FiniteModule regular_module(const TracialStarAlgebra& f) {
  FiniteModule m;
  m.dim = f.dim();
  for (Index i = 0; i < f.dim(); ++i) m.action.push_back(f.left_mult(svec_unit(i)));
  return m;
}

FiniteModule direct_sum(const FiniteModule& a, const FiniteModule& b) {
  RB_CHECK(a.action.size() == b.action.size(), "modules over different algebras");
  FiniteModule m;
  m.dim = a.dim + b.dim;
  for (size_t k = 0; k < a.action.size(); ++k) m.action.push_back(block_diag(a.action[k], b.action[k]));
  return m;
}

ValidationReport PresimplicialModule::validate() const {
  ValidationReport r;
  for (size_t n = 1; n < dims.size(); ++n) {
    if (faces[n].size() != n + 1) r.violations.push_back({"faces", "degree " + std::to_string(n) + " face count"});
    for (size_t i = 0; i < faces[n].size(); ++i) {
      const auto& f = faces[n][i];
      if (f.rows() != dims[n - 1] || f.cols() != dims[n])
        r.violations.push_back({"faces", degree_tag(n, i) + " has the wrong shape"});
    }
  }
  if (!r.ok()) return r;
  for (size_t n = 2; n < dims.size(); ++n) {
    for (size_t j = 1; j <= n; ++j) {
      for (size_t i = 0; i < j; ++i) {
        if (!(faces[n - 1][i] * faces[n][j] == faces[n - 1][j - 1] * faces[n][i])) {
          r.violations.push_back({"presimplicial identity", name + " degree " + std::to_string(n) +
                                                                " i=" + std::to_string(i) + " j=" + std::to_string(j)});
          return r;
        }
      }
    }
  }
  for (size_t n = 1; n < dims.size() && n < action.size(); ++n) {
    if (action[n].empty() || action[n - 1].empty()) continue;
    for (size_t i = 0; i <= n; ++i) {
      for (size_t k = 0; k < action[n].size(); ++k) {
        if (!(faces[n][i] * action[n][k] == action[n - 1][k] * faces[n][i])) {
          r.violations.push_back({"equivariance", name + " " + degree_tag(n, i) + " basis " + std::to_string(k)});
          return r;
        }
      }
    }
  }
  return r;
}

ValidationReport ChainComplex::validate() const {
  ValidationReport r;
  for (size_t n = 2; n < d.size(); ++n) {
    if (!(d[n - 1] * d[n]).is_zero()) r.violations.push_back({"d^2 = 0", "degree " + std::to_string(n)});
  }
  return r;
}

ChainComplex boundary(const PresimplicialModule& p) {
  ChainComplex c;
  c.dims = p.dims;
  c.d.push_back(SparseMatrix(0, p.dims[0]));
  for (size_t n = 1; n < p.dims.size(); ++n) {
    SparseMatrix d(p.dims[n - 1], p.dims[n]);
    for (size_t i = 0; i <= n; ++i) d = d + (i % 2 ? p.faces[n][i].scaled(-1) : p.faces[n][i]);
    c.d.push_back(std::move(d));
  }
  return c;
}

ValidationReport check_contraction(const AugmentedComplex& c) {
  ValidationReport r;
  const auto& p = c.module;
  ChainComplex ch = boundary(p);
  if (!(c.augmentation * c.homotopy[0] == SparseMatrix::identity(c.base_dim)))
    r.violations.push_back({"contraction", "degree -1"});
  for (size_t n = 0; n + 1 < p.dims.size() && n + 1 < c.homotopy.size(); ++n) {
    const SparseMatrix& down = n == 0 ? c.augmentation : ch.d[n];
    SparseMatrix lhs = ch.d[n + 1] * c.homotopy[n + 1] + c.homotopy[n] * down;
    if (!(lhs == SparseMatrix::identity(p.dims[n])))
      r.violations.push_back({"contraction", "degree " + std::to_string(n)});
  }
  return r;
}

// ------------------------------------------------------------ algebraic complexes

AugmentedComplex bar_complex(const Extension& e, size_t n) {
  const auto& A = e.algebra;
  TensorTower t(e, regular_bimodule(A));
  t.build(n + 1);
  AugmentedComplex c;
  auto& p = c.module;
  p.name = "bar";
  for (size_t k = 0; k <= n; ++k) {
    p.dims.push_back(t.dim(k + 1));
    p.words.push_back(level_words(t, k + 1, nullptr));
  }
  p.faces.resize(n + 1);
  p.action.resize(n + 1);
  for (size_t k = 1; k <= n; ++k) {
    for (size_t i = 0; i <= k; ++i) {
      WordFn f = [&, i](const std::vector<Index>& w) {
        std::vector<SVec> as;
        if (i == 0) {
          return std::make_pair(A.mul(svec_unit(w[0]), svec_unit(w[1])), units_of(w, 2, w.size()));
        }
        as = units_of(w, 1, i);
        as.push_back(A.mul(svec_unit(w[i]), svec_unit(w[i + 1])));
        auto rest = units_of(w, i + 2, w.size());
        as.insert(as.end(), rest.begin(), rest.end());
        return std::make_pair(svec_unit(w[0]), std::move(as));
      };
      p.faces[k].push_back(word_matrix({&t, k + 1, nullptr, nullptr}, f, p.dims[k - 1], "bar face"));
    }
  }
  c.base_dim = A.dim();
  c.augmentation = word_matrix(
      {&t, 1, nullptr, nullptr},
      [&](const std::vector<Index>& w) {
        return std::make_pair(A.mul(svec_unit(w[0]), svec_unit(w[1])), std::vector<SVec>{});
      },
      A.dim(), "multiplication");
  {
    std::vector<SVec> cols;
    for (Index a = 0; a < A.dim(); ++a) cols.push_back(t.pure(A.unit(), {svec_unit(a)}));
    c.homotopy.push_back(SparseMatrix::from_columns(p.dims[0], std::move(cols)));
  }
  for (size_t k = 0; k < n; ++k) {
    WordFn f = [&](const std::vector<Index>& w) { return std::make_pair(A.unit(), units_of(w, 0, w.size())); };
    c.homotopy.push_back(word_matrix({&t, k + 1, nullptr, nullptr}, f, t.dim(k + 2), "bar homotopy"));
  }
  return c;
}

HochschildComplex hochschild_complex(const Extension& e, const Bimodule& m, size_t n,
                                     const std::vector<SparseMatrix>* m_ops, size_t action_degree) {
  const auto& A = e.algebra;
  HochschildComplex hc;
  hc.tower = std::make_shared<TensorTower>(e, m);
  auto& t = *hc.tower;
  t.build(n);
  auto& p = hc.module;
  p.name = "hochschild";
  std::vector<const QuotientMap*> q;
  for (size_t k = 0; k <= n; ++k) {
    q.push_back(&t.coinvariants(k));
    p.dims.push_back(q[k]->dim());
    p.words.push_back(level_words(t, k, q[k]));
  }
  p.faces.resize(n + 1);
  for (size_t k = 1; k <= n; ++k) {
    for (size_t i = 0; i <= k; ++i) {
      WordFn f = [&, i](const std::vector<Index>& w) { return hochschild_face(A, m, w, i); };
      p.faces[k].push_back(word_matrix({&t, k, q[k], q[k - 1]}, f, p.dims[k - 1], "hochschild face"));
    }
  }
  if (n >= 1) {
    SparseMatrix d(m.dim, p.dims[1]);
    for (size_t i = 0; i <= 1; ++i) {
      WordFn f = [&, i](const std::vector<Index>& w) { return hochschild_face(A, m, w, i); };
      SparseMatrix fi = word_matrix({&t, 1, q[1], nullptr, false}, f, m.dim, "hochschild face");
      d = d + (i ? fi.scaled(-1) : fi);
    }
    hc.boundary_into_m = std::move(d);
  }
  p.action.resize(n + 1);
  if (m_ops) {
    for (size_t k = 0; k <= std::min(n, action_degree); ++k) {
      for (const auto& op : *m_ops) p.action[k].push_back(lifted_action(t, k, *q[k], op));
    }
  }
  return hc;
}

AugmentedComplex acyclic_complex(const Extension& e, size_t n) {
  const auto& A = e.algebra;
  Bimodule reg = regular_bimodule(A);
  TensorTower t(e, reg);
  t.build(n + 1);
  std::vector<const QuotientMap*> q;
  for (size_t k = 0; k <= n + 1; ++k) q.push_back(&t.coinvariants(k));
  AugmentedComplex c;
  auto& p = c.module;
  p.name = "acyclic";
  for (size_t k = 0; k <= n; ++k) {
    p.dims.push_back(q[k + 1]->dim());
    p.words.push_back(level_words(t, k + 1, q[k + 1]));
  }
  p.faces.resize(n + 1);
  p.action.resize(n + 1);
  for (size_t k = 1; k <= n; ++k) {
    for (size_t i = 0; i <= k; ++i) {
      WordFn f = [&, i](const std::vector<Index>& w) { return hochschild_face(A, reg, w, i + 1); };
      p.faces[k].push_back(word_matrix({&t, k + 1, q[k + 1], q[k]}, f, p.dims[k - 1], "acyclic face"));
    }
  }
  c.base_dim = q[0]->dim();
  c.augmentation = word_matrix(
      {&t, 1, q[1], q[0]}, [&](const std::vector<Index>& w) { return hochschild_face(A, reg, w, 1); }, c.base_dim,
      "augmentation");
  auto s = [&](const std::vector<Index>& w) {
    std::vector<SVec> as{A.unit()};
    auto rest = units_of(w, 1, w.size());
    as.insert(as.end(), rest.begin(), rest.end());
    return std::make_pair(svec_unit(w[0]), std::move(as));
  };
  c.homotopy.push_back(word_matrix({&t, 0, q[0], q[1]}, s, p.dims[0], "homotopy"));
  for (size_t k = 0; k < n; ++k)
    c.homotopy.push_back(word_matrix({&t, k + 1, q[k + 1], q[k + 2]}, s, p.dims[k + 1], "homotopy"));
  return c;
}

L2Complex l2_complex(const Extension& e, size_t n, const FiberSquare* square) {
  FiberSquare f = square ? *square : fiber_square(e);
  Bimodule m = f.tensor.outer_bimodule();
  HermitianForm form(f.tensor.gram());
  HochschildComplex hc = hochschild_complex(e, m, n, &f.basis, n == 0 ? 0 : n - 1);
  return L2Complex{std::move(f), std::move(hc), std::move(form)};
}

// ------------------------------------------------------------ geometric complexes

PresimplicialModule geometric_complex(const FiniteGroupoid& g, SpaceKind kind, size_t n) {
  GeometricTower tw = geometric_tower(g, kind, n);
  PresimplicialModule p;
  p.name = to_string(kind);
  p.faces.resize(n + 1);
  p.action.resize(n + 1);
  std::optional<Enveloping> env;
  if (kind == SpaceKind::acyclic) env = enveloping(g);
  for (size_t k = 0; k <= n; ++k) {
    const auto& lv = tw.levels[k];
    Index dim = Index(lv.tuples.size());
    p.dims.push_back(dim);
    std::vector<std::vector<Index>> ws;
    for (const auto& x : lv.tuples) ws.emplace_back(x.begin(), x.end());
    p.words.push_back(std::move(ws));
    if (k > 0) {
      for (const auto& f : lv.faces) p.faces[k].push_back(unit_columns(p.dims[k - 1], f));
    }
    if (kind == SpaceKind::classifying) {
      for (Elem a = 0; a < g.size(); ++a) {
        std::vector<SVec> cols(dim);
        for (Index j = 0; j < dim; ++j) {
          const auto& x = lv.tuples[j];
          if (g.s(a) != g.t(x[0])) continue;
          std::vector<Elem> y;
          for (Elem b : x) y.push_back(g.mul(a, b));
          cols[j] = svec_unit(lv.index.at(y));
        }
        p.action[k].push_back(SparseMatrix::from_columns(dim, std::move(cols)));
      }
    } else if (kind == SpaceKind::acyclic) {
      for (const auto& [al, be] : env->pairs) {
        std::vector<SVec> cols(dim);
        for (Index j = 0; j < dim; ++j) {
          auto y = lv.tuples[j];
          if (g.s(be) != g.t(y[1])) continue;
          y[0] = g.mul(y[0], al);
          y[1] = g.mul(be, y[1]);
          cols[j] = svec_unit(lv.index.at(y));
        }
        p.action[k].push_back(SparseMatrix::from_columns(dim, std::move(cols)));
      }
    }
  }
  return p;
}

namespace {

// Matches basis words; returns the permutation geometric -> algebraic or an
// empty vector.
std::vector<Index> match_words(const std::vector<std::vector<Index>>& geo, const std::vector<std::vector<Index>>& alg) {
  if (geo.size() != alg.size()) return {};
  std::map<std::vector<Index>, Index> idx;
  for (Index k = 0; k < alg.size(); ++k) idx.emplace(alg[k], k);
  std::vector<Index> perm;
  std::vector<bool> hit(alg.size(), false);
  for (const auto& w : geo) {
    auto it = idx.find(w);
    if (it == idx.end() || hit[it->second]) return {};
    hit[it->second] = true;
    perm.push_back(it->second);
  }
  return perm;
}

void compare_modules(const PresimplicialModule& geo, const PresimplicialModule& alg,
                     const std::vector<std::vector<std::vector<Index>>>& alg_words, ComplexComparison& out) {
  out.dims_geometric = geo.dims;
  out.dims_algebraic = alg.dims;
  out.isomorphic = true;
  std::vector<SparseMatrix> phi;
  for (size_t k = 0; k < geo.dims.size(); ++k) {
    auto perm = match_words(geo.words[k], alg_words[k]);
    if (perm.empty() && geo.dims[k] > 0) {
      out.isomorphic = false;
      out.detail = "bases do not match in degree " + std::to_string(k);
      return;
    }
    phi.push_back(unit_columns(alg.dims[k], perm));
  }
  for (size_t k = 1; k < geo.dims.size(); ++k) {
    for (size_t i = 0; i <= k; ++i) {
      if (!(phi[k - 1] * geo.faces[k][i] == alg.faces[k][i] * phi[k])) {
        out.isomorphic = false;
        out.detail = "face mismatch at " + degree_tag(k, i);
        return;
      }
    }
  }
}

}  // namespace

ComplexComparison compare_geometric(const FiniteGroupoid& g, SpaceKind kind, size_t n) {
  Extension e = convolution_algebra(g);
  PresimplicialModule geo = geometric_complex(g, kind, n);
  ComplexComparison out;
  switch (kind) {
    case SpaceKind::bar: {
      auto alg = bar_complex(e, n).module;
      compare_modules(geo, alg, alg.words, out);
      break;
    }
    case SpaceKind::cyclic: {
      auto alg = hochschild_complex(e, regular_bimodule(e.algebra), n).module;
      compare_modules(geo, alg, alg.words, out);
      break;
    }
    case SpaceKind::acyclic: {
      auto alg = acyclic_complex(e, n).module;
      compare_modules(geo, alg, alg.words, out);
      if (!out.isomorphic) break;
      BalancedTensor t(e, e);
      auto hh = hochschild_complex(e, t.outer_bimodule(), n).module;
      auto words = hh.words;
      for (auto& lvl : words) {
        for (auto& w : lvl) {
          auto [a, b] = t.word(w[0]);
          w[0] = b;
          w.insert(w.begin(), a);
        }
      }
      compare_modules(geo, hh, words, out);
      if (!out.isomorphic) out.detail = "coefficients A (x)_B A: " + out.detail;
      break;
    }
    default:
      throw PreconditionError(std::string("no algebraic counterpart for the ") + to_string(kind) + " space");
  }
  return out;
}

bool acyclic_matches_shifted_hochschild(const Extension& e, size_t n) {
  auto z = acyclic_complex(e, n).module;
  BalancedTensor t(e, e);
  auto h = hochschild_complex(e, t.outer_bimodule(), n).module;
  if (z.dims != h.dims) return false;
  for (size_t k = 0; k <= n; ++k) {
    for (Index j = 0; j < z.dims[k]; ++j) {
      auto [a, b] = t.word(h.words[k][j][0]);
      if (z.words[k][j][0] != a || z.words[k][j][1] != b) return false;
      if (!std::equal(z.words[k][j].begin() + 2, z.words[k][j].end(), h.words[k][j].begin() + 1)) return false;
    }
    for (size_t i = 0; k > 0 && i <= k; ++i) {
      if (!(z.faces[k][i] == h.faces[k][i])) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ theta

ThetaReport theta_iso(const FiniteGroupoid& g, size_t n) {
  ThetaReport rep;
  Enveloping env = enveloping(g);
  const auto& ge = env.groupoid;
  GeometricTower E = geometric_tower(g, SpaceKind::classifying, n == 0 ? 0 : n - 1);
  GeometricTower Z = geometric_tower(g, SpaceKind::acyclic, n);
  using Tuple = std::vector<Elem>;
  auto fail = [&](bool& flag, const std::string& w) {
    if (flag) rep.witness = w;
    flag = false;
  };

  // General theta on a common-target tuple (a_0, ..., a_k).
  auto theta = [&](const Tuple& w) {
    size_t k = w.size() - 1;
    Tuple z{g.inv(w[k]), w[0]};
    for (size_t i = 1; i <= k; ++i) z.push_back(g.mul(g.inv(w[i - 1]), w[i]));
    return z;
  };
  auto act = [&](Elem gamma, Tuple z) {
    auto [al, be] = env.pairs[gamma];
    z[0] = g.mul(z[0], al);
    z[1] = g.mul(be, z[1]);
    return z;
  };
  // Left basis in degree k: gamma followed by omega' of length k.
  auto lhs_basis = [&](size_t k) {
    std::vector<Tuple> out;
    for (Elem gm = 0; gm < ge.size(); ++gm) {
      if (k == 0) {
        out.push_back({gm});
        continue;
      }
      for (const auto& w : E.levels[k - 1].tuples) {
        if (ge.s(gm) != g.t(w[0])) continue;
        Tuple x{gm};
        x.insert(x.end(), w.begin(), w.end());
        out.push_back(std::move(x));
      }
    }
    return out;
  };
  auto Theta = [&](const Tuple& x) {
    Elem gm = x[0];
    Tuple w{g.unit(ge.s(gm))};
    w.insert(w.end(), x.begin() + 1, x.end());
    return act(gm, theta(w));
  };
  auto Psi = [&](const Tuple& z) {
    size_t k = z.size() - 2;
    Elem prod = kNoElem;
    Tuple psi;
    for (size_t i = 2; i < z.size(); ++i) {
      prod = prod == kNoElem ? z[i] : g.mul(prod, z[i]);
      psi.push_back(prod);
    }
    Elem a = prod == kNoElem ? z[0] : g.mul(prod, z[0]);
    Tuple x{env.index.at({a, z[1]})};
    x.insert(x.end(), psi.begin(), psi.end());
    (void)k;
    return x;
  };
  auto lhs_face = [&](const Tuple& x, size_t i) {
    if (i == 0) {
      Elem a1 = x[1];
      Tuple y{ge.mul(x[0], env.diagonal[a1])};
      for (size_t j = 2; j < x.size(); ++j) y.push_back(g.mul(g.inv(a1), x[j]));
      return y;
    }
    Tuple y = x;
    y.erase(y.begin() + long(i));
    return y;
  };

  for (size_t k = 0; k <= n; ++k) {
    const auto& zl = Z.levels[k];
    auto basis = lhs_basis(k);
    rep.dims.push_back(Index(zl.tuples.size()));
    std::vector<bool> hit(zl.tuples.size(), false);
    for (const auto& x : basis) {
      Tuple z = Theta(x);
      auto it = zl.index.find(z);
      if (it == zl.index.end() || hit[it->second]) {
        fail(rep.bijective, "degree " + std::to_string(k) + ": image not a loop or repeated");
        continue;
      }
      hit[it->second] = true;
      if (Psi(z) != x) fail(rep.inverse_two_sided, "psi after theta, degree " + std::to_string(k));
      for (Elem h = 0; h < ge.size(); ++h) {
        Elem hg = ge.mul(h, x[0]);
        if (hg == kNoElem) continue;
        Tuple hx = x;
        hx[0] = hg;
        if (Theta(hx) != act(h, z)) fail(rep.module_map, "module map, degree " + std::to_string(k));
      }
      if (k == 0) continue;
      for (size_t i = 0; i <= k; ++i) {
        if (Theta(lhs_face(x, i)) != Z.levels[k - 1].tuples[zl.faces[i][it->second]])
          fail(rep.faces_commute, degree_tag(k, i));
      }
    }
    if (basis.size() != zl.tuples.size()) fail(rep.bijective, "dimension mismatch in degree " + std::to_string(k));
    for (const auto& z : zl.tuples) {
      if (Theta(Psi(z)) != z) fail(rep.inverse_two_sided, "theta after psi, degree " + std::to_string(k));
    }
    // theta(alpha omega) = (alpha^{-1}, alpha) theta(omega) on E^k.
    for (const auto& w : common_target_tuples(g, k + 1)) {
      for (Elem a = 0; a < g.size(); ++a) {
        if (g.s(a) != g.t(w[0])) continue;
        Tuple aw;
        for (Elem b : w) aw.push_back(g.mul(a, b));
        if (theta(aw) != act(env.diagonal[a], theta(w))) fail(rep.equivariant, "alpha=" + g.label(a));
      }
    }
  }
  for (Elem a = 0; a < g.size(); ++a) {
    auto z = theta({a});
    if (env.index.at({z[0], z[1]}) != env.diagonal[a]) fail(rep.degree0_diagonal, g.label(a));
  }
  return rep;
}

// ------------------------------------------------------------ homology

RankInfo certified_rank(const SparseMatrix& m, size_t cap) {
  RankInfo r;
  if (m.rows() == 0 || m.cols() == 0) return {0, true};
  BlockSplit b = split_blocks(m);
  for (size_t k = 0; k < b.row_blocks.size(); ++k) {
    SparseMatrix blk = extract_block(m, b.row_blocks[k], b.col_blocks[k]);
    size_t full = std::min(b.row_blocks[k].size(), b.col_blocks[k].size());
    auto rp = rank_mod_p(blk, full);
    size_t v = rp ? *rp : rank(blk);
    r.value += v;
    if (r.value >= cap) break;
  }
  r.exact = r.value == std::min<size_t>(m.rows(), m.cols());
  return r;
}

HomologyResult homology(const PresimplicialModule& p, const ChainComplex& c, size_t n) {
  if (n + 1 >= c.dims.size()) throw PreconditionError("homology needs the complex one degree higher");
  HomologyResult h;
  h.degree = n;
  Index dn = c.dims[n];
  bool with_action = n < p.action.size() && !p.action[n].empty();
  h.has_module = with_action;
  RankInfo out = n == 0 ? RankInfo{0, true} : certified_rank(c.d[n]);
  RankInfo in = certified_rank(c.d[n + 1], dn - out.value);
  if (out.value + in.value == dn) {
    h.rank_out = out.value;
    h.rank_in = in.value;
    h.certified_by_ranks = true;
    h.module.dim = 0;
    if (with_action) h.module.action.assign(p.action[n].size(), SparseMatrix(0, 0));
    return h;
  }
  std::vector<SVec> ker;
  if (n == 0) {
    for (Index j = 0; j < dn; ++j) ker.push_back(svec_unit(j));
  } else {
    ker = kernel_basis(c.d[n]);
  }
  EchelonBasis im(dn);
  for (const auto& col : c.d[n + 1].columns()) im.insert(col);
  QuotientMap q(std::move(im));
  EchelonBasis hb(q.dim());
  for (const auto& v : ker) hb.insert(q.reduce(v));
  h.rank_out = dn - ker.size();
  h.rank_in = q.relations().dim();
  h.dim = Index(hb.dim());
  h.module.dim = h.dim;
  if (with_action) {
    for (const auto& op : p.action[n]) {
      std::vector<SVec> cols;
      for (const auto& row : hb.rows()) {
        SVec lift;
        for (const auto& e : row) lift.push_back({q.representative(e.i), e.v});
        SVec img = q.reduce(op.apply(lift));
        if (!hb.contains(img)) throw InvariantError("action does not preserve cycles");
        cols.push_back(hb.coordinates(img));
      }
      h.module.action.push_back(SparseMatrix::from_columns(h.dim, std::move(cols)));
    }
  }
  return h;
}

FiniteModule orthogonal_complement_module(const HermitianForm& form, const std::vector<SVec>& image,
                                          const std::vector<SparseMatrix>& action) {
  Index d = form.dim();
  EchelonBasis span(d);
  for (const auto& v : image) span.insert(v);
  // Rows w^H G for w in a basis of the image.
  std::vector<SVec> rows;
  for (const auto& w : span.rows()) {
    SVec r;
    SVec wc = svec_conj(w);
    for (Index j = 0; j < d; ++j) {
      GScalar s;
      for (const auto& e : wc) s += e.v * form.gram()(e.i, j);
      if (!s.is_zero()) r.push_back({j, s});
    }
    rows.push_back(std::move(r));
  }
  SparseMatrix m = SparseMatrix::from_columns(d, std::move(rows)).transpose();
  if (span.dim() == 0) m = SparseMatrix(0, d);
  std::vector<SVec> perp;
  if (span.dim() == 0) {
    for (Index j = 0; j < d; ++j) perp.push_back(svec_unit(j));
  } else {
    perp = kernel_basis(m);
  }
  EchelonBasis basis(d);
  for (const auto& v : perp) basis.insert(v);
  FiniteModule mod;
  mod.dim = Index(basis.dim());
  for (const auto& op : action) {
    std::vector<SVec> cols;
    for (const auto& r : basis.rows()) {
      SVec img = op.apply(r);
      if (!basis.contains(img)) throw InvariantError("complement is not invariant");
      cols.push_back(basis.coordinates(img));
    }
    mod.action.push_back(SparseMatrix::from_columns(mod.dim, std::move(cols)));
  }
  return mod;
}

}  // namespace relbetti
