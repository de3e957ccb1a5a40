#include "relbetti/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "relbetti/error.hpp"

namespace relbetti {

namespace {

SVec basis_vec(Index i) { return svec_unit(i); }

std::string show(const TracialStarAlgebra& a, const SVec& v) {
  if (v.empty()) return "0";
  std::string out;
  for (const auto& e : v) {
    if (!out.empty()) out += " + ";
    out += "(" + e.v.to_string() + ")" + a.label(e.i);
  }
  return out;
}

// Structure of the *-subalgebra spanned by the echelon rows of `span`.
TracialStarAlgebra restrict_algebra(const TracialStarAlgebra& a, const EchelonBasis& span, const SVec& unit,
                                    const Rational& trace_scale, const std::string& prefix) {
  size_t d = span.dim();
  const auto& rows = span.rows();
  auto coords = [&](const SVec& w) {
    RB_CHECK(span.contains(w), "subspace is not closed under the algebra operations");
    return span.coordinates(w);
  };
  std::vector<std::string> labels;
  for (size_t k = 0; k < d; ++k) {
    const auto& r = rows[k];
    if (r.size() == 1 && r[0].v.is_one()) {
      labels.push_back(prefix + a.label(r[0].i));
    } else {
      labels.push_back(prefix + "v" + std::to_string(k));
    }
  }
  std::vector<SVec> prod(d * d), star(d);
  std::vector<GScalar> tr(d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) prod[i * d + j] = coords(a.mul(rows[i], rows[j]));
    star[i] = coords(a.star(rows[i]));
    tr[i] = a.tr(rows[i]) * GScalar(trace_scale);
  }
  return TracialStarAlgebra(labels, prod, coords(unit), star, tr);
}

}  // namespace

// ------------------------------------------------------------ algebra

TracialStarAlgebra::TracialStarAlgebra(std::vector<std::string> labels, std::vector<SVec> products, SVec unit,
                                       std::vector<SVec> star, std::vector<GScalar> trace)
    : labels_(std::move(labels)),
      prod_(std::move(products)),
      unit_(std::move(unit)),
      star_(std::move(star)),
      trace_(std::move(trace)) {
  size_t d = labels_.size();
  if (prod_.size() != d * d || star_.size() != d || trace_.size() != d) {
    throw PreconditionError("algebra tables have inconsistent sizes");
  }
  auto in_range = [d](const SVec& v) { return v.empty() || v.back().i < d; };
  for (const auto& v : prod_) {
    if (!in_range(v)) throw PreconditionError("structure constant index out of range");
  }
  for (const auto& v : star_) {
    if (!in_range(v)) throw PreconditionError("star image index out of range");
  }
  if (!in_range(unit_)) throw PreconditionError("unit index out of range");
}

std::optional<Index> TracialStarAlgebra::find(const std::string& label) const {
  for (Index k = 0; k < dim(); ++k) {
    if (labels_[k] == label) return k;
  }
  return std::nullopt;
}

SVec TracialStarAlgebra::mul(const SVec& a, const SVec& b) const {
  if (a.empty() || b.empty()) return {};
  std::vector<GScalar> acc(dim());
  std::vector<bool> touched(dim(), false);
  for (const auto& x : a) {
    for (const auto& y : b) {
      GScalar c = x.v * y.v;
      for (const auto& z : product(x.i, y.i)) {
        acc[z.i] += c * z.v;
        touched[z.i] = true;
      }
    }
  }
  SVec out;
  for (Index k = 0; k < dim(); ++k) {
    if (touched[k] && !acc[k].is_zero()) out.push_back({k, acc[k]});
  }
  return out;
}

SVec TracialStarAlgebra::star(const SVec& a) const {
  std::vector<std::pair<GScalar, const SVec*>> terms;
  for (const auto& x : a) terms.emplace_back(x.v.conj(), &star_[x.i]);
  return svec_combine(terms);
}

GScalar TracialStarAlgebra::tr(const SVec& a) const {
  GScalar s;
  for (const auto& x : a) s += x.v * trace_[x.i];
  return s;
}

GMatrix TracialStarAlgebra::gns_gram() const {
  GMatrix g(dim(), dim());
  for (Index i = 0; i < dim(); ++i) {
    SVec si = star_[i];
    for (Index j = 0; j < dim(); ++j) g(i, j) = tr(mul(si, basis_vec(j)));
  }
  return g;
}

SparseMatrix TracialStarAlgebra::left_mult(const SVec& a) const {
  std::vector<SVec> cols(dim());
  for (Index j = 0; j < dim(); ++j) cols[j] = mul(a, basis_vec(j));
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

SparseMatrix TracialStarAlgebra::right_mult(const SVec& a) const {
  std::vector<SVec> cols(dim());
  for (Index j = 0; j < dim(); ++j) cols[j] = mul(basis_vec(j), a);
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

std::vector<SVec> TracialStarAlgebra::center() const {
  // x is central iff [e_k, x] = 0 for every k; stack the commutator maps.
  Index d = dim();
  std::vector<SVec> cols(d);
  for (Index j = 0; j < d; ++j) {
    std::vector<SEntry> entries;
    for (Index k = 0; k < d; ++k) {
      for (const auto& e : commutator(basis_vec(k), basis_vec(j))) entries.push_back({k * d + e.i, e.v});
    }
    cols[j] = svec_from_pairs(std::move(entries));
  }
  return kernel_basis(SparseMatrix::from_columns(d * d, std::move(cols)));
}

ValidationReport TracialStarAlgebra::validate() const {
  ValidationReport r;
  auto add = [&](const std::string& axiom, const std::string& w) {
    if (r.violations.size() < 32) r.violations.push_back({axiom, w});
  };
  Index d = dim();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const SVec& ij = product(i, j);
      for (Index k = 0; k < d; ++k) {
        if (mul(ij, basis_vec(k)) != mul(basis_vec(i), product(j, k))) {
          add("associativity", labels_[i] + "," + labels_[j] + "," + labels_[k]);
        }
      }
    }
  }
  for (Index i = 0; i < d; ++i) {
    if (mul(unit_, basis_vec(i)) != basis_vec(i) || mul(basis_vec(i), unit_) != basis_vec(i)) add("unit laws", labels_[i]);
    if (star(star_[i]) != basis_vec(i)) add("star is an involution", labels_[i]);
    for (Index j = 0; j < d; ++j) {
      if (star(product(i, j)) != mul(star_[j], star_[i])) add("(ab)* = b*a*", labels_[i] + "," + labels_[j]);
      if (!(tr(product(i, j)) == tr(product(j, i)))) add("trace property", labels_[i] + "," + labels_[j]);
    }
    if (!(tr(star_[i]) == trace_[i].conj())) add("trace is hermitian", labels_[i]);
  }
  if (!tr(unit_).is_one()) add("trace normalization", "tr(1) = " + tr(unit_).to_string());
  if (!r.ok()) return r;
  HermitianForm gns(gns_gram());
  if (!gns.is_positive_definite()) add("faithful positive trace", "GNS form tr(a*b) is not positive definite");
  r.facts.push_back({"dimension", std::to_string(d)});
  r.facts.push_back({"center dimension", std::to_string(center().size())});
  return r;
}

bool is_unitary(const TracialStarAlgebra& a, const SVec& u) {
  SVec us = a.star(u);
  return a.mul(us, u) == a.unit() && a.mul(u, us) == a.unit();
}

bool is_projection(const TracialStarAlgebra& a, const SVec& p) { return a.star(p) == p && a.mul(p, p) == p; }

// ------------------------------------------------------------ extensions

TracialStarAlgebra Extension::sub_algebra() const {
  EchelonBasis span(dim());
  for (const auto& b : sub) span.insert(b);
  return restrict_algebra(algebra, span, algebra.unit(), Rational(1), "");
}

SVec Extension::sub_coordinates(const SVec& b) const {
  GMatrix s = GMatrix::from_columns(dim(), sub);
  auto x = solve(s, b);
  if (!x) throw PreconditionError("element is not in the subalgebra");
  return *x;
}

bool Extension::in_sub(const SVec& a) const {
  EchelonBasis span(dim());
  for (const auto& b : sub) span.insert(b);
  return span.contains(a);
}

bool Extension::commutes_with_sub(const SVec& a) const {
  return std::all_of(sub.begin(), sub.end(), [&](const SVec& b) { return algebra.commutator(a, b).empty(); });
}

ValidationReport Extension::validate() const {
  ValidationReport r = algebra.validate();
  if (!r.ok()) return r;
  auto add = [&](const std::string& axiom, const std::string& w) {
    if (r.violations.size() < 32) r.violations.push_back({axiom, w});
  };
  Index d = dim();
  EchelonBasis span(d);
  for (const auto& b : sub) {
    if (!span.insert(b)) add("subalgebra basis independent", show(algebra, b));
  }
  if (!span.contains(algebra.unit())) add("subalgebra is unital", "1 not in B");
  for (const auto& b : sub) {
    if (!span.contains(algebra.star(b))) add("subalgebra is star closed", show(algebra, b));
    for (const auto& c : sub) {
      if (!span.contains(algebra.mul(b, c))) add("subalgebra is closed under products", show(algebra, b));
    }
  }
  if (!r.ok()) return r;
  const GMatrix& e = expectation;
  if (!(e * e == e)) add("E is idempotent", "E^2 != E");
  GMatrix g = algebra.gns_gram();
  if (!(g * e == e.adjoint() * g)) add("E is GNS self-adjoint", "G E != E^H G");
  for (const auto& b : sub) {
    if (dense_apply(e, b) != b) add("E restricted to B is the identity", show(algebra, b));
  }
  for (Index i = 0; i < d; ++i) {
    SVec ei = basis_vec(i);
    SVec x = expect(ei);
    if (!span.contains(x)) add("E maps into B", algebra.label(i));
    if (!(algebra.tr(x) == algebra.tr(ei))) add("tr o E = tr", algebra.label(i));
    for (const auto& b : sub) {
      for (const auto& c : sub) {
        if (expect(algebra.mul(algebra.mul(b, ei), c)) != algebra.mul(algebra.mul(b, x), c)) {
          add("E is B-bimodular", algebra.label(i));
        }
      }
    }
  }
  r.facts.push_back({"subalgebra dimension", std::to_string(sub.size())});
  return r;
}

Extension conditional_expectation(TracialStarAlgebra a, std::vector<SVec> sub) {
  Index d = a.dim();
  EchelonBasis span(d);
  for (const auto& b : sub) {
    if (!span.insert(b)) throw PreconditionError("subalgebra basis is dependent");
  }
  if (!span.contains(a.unit())) throw PreconditionError("subalgebra is not unital");
  for (const auto& b : sub) {
    if (!span.contains(a.star(b))) throw PreconditionError("subalgebra is not star closed", {show(a, b)});
    for (const auto& c : sub) {
      if (!span.contains(a.mul(b, c))) throw PreconditionError("subspace is not closed under products", {show(a, b)});
    }
  }
  HermitianForm gns(a.gns_gram());
  GMatrix e = orth_projection(gns, GMatrix::from_columns(d, sub));
  Extension ext;
  ext.algebra = std::move(a);
  ext.sub = std::move(sub);
  ext.expectation = std::move(e);
  return ext;
}

ExpectationConjugationReport check_expectation_conjugation(const Extension& e, const SVec& u) {
  ExpectationConjugationReport rep;
  const auto& a = e.algebra;
  SVec us = a.star(u);
  for (Index i = 0; i < e.dim(); ++i) {
    SVec x = basis_vec(i);
    SVec lhs = e.expect(a.mul(a.mul(u, x), us));
    SVec ex = e.expect(x);
    if (rep.standard_holds && lhs != a.mul(a.mul(u, ex), us)) {
      rep.standard_holds = false;
      rep.standard_witness = a.label(i);
    }
    if (rep.printed_holds && lhs != a.mul(a.mul(us, ex), u)) {
      rep.printed_holds = false;
      rep.printed_witness = a.label(i);
    }
  }
  return rep;
}

// ------------------------------------------------------------ builders

TracialStarAlgebra matrix_algebra(Index n) {
  if (n == 0) throw PreconditionError("matrix algebra of size 0");
  Index d = n * n;
  std::vector<std::string> labels(d);
  std::vector<SVec> prod(size_t(d) * d), star(d);
  std::vector<GScalar> tr(d);
  SVec unit;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      Index ij = matrix_unit(n, i, j);
      labels[ij] = n <= 9 ? "e" + std::to_string(i + 1) + std::to_string(j + 1)
                          : "e" + std::to_string(i + 1) + "," + std::to_string(j + 1);
      star[ij] = svec_unit(matrix_unit(n, j, i));
      if (i == j) tr[ij] = GScalar(Rational(1, n));
      for (Index l = 0; l < n; ++l) prod[size_t(ij) * d + matrix_unit(n, j, l)] = svec_unit(matrix_unit(n, i, l));
    }
    unit.push_back({matrix_unit(n, i, i), GScalar(1)});
  }
  return TracialStarAlgebra(labels, prod, unit, star, tr);
}

Extension scalar_extension(const TracialStarAlgebra& a) {
  auto e = conditional_expectation(a, {a.unit()});
  e.name = "A/C";
  return e;
}

Extension full_extension(const TracialStarAlgebra& a) {
  std::vector<SVec> sub;
  for (Index i = 0; i < a.dim(); ++i) sub.push_back(svec_unit(i));
  auto e = conditional_expectation(a, sub);
  e.name = "A/A";
  return e;
}

namespace {

// Adjacent transpositions and single sign flips generate the normalizer
// modulo diagonal unitaries.
std::vector<SVec> matrix_unitaries(Index n) {
  std::vector<SVec> out;
  for (Index k = 0; k + 1 < n; ++k) {
    std::vector<SEntry> e;
    for (Index i = 0; i < n; ++i) {
      Index j = i == k ? k + 1 : (i == k + 1 ? k : i);
      e.push_back({matrix_unit(n, i, j), GScalar(1)});
    }
    out.push_back(svec_from_pairs(e));
  }
  for (Index k = 0; k < n; ++k) {
    std::vector<SEntry> e;
    for (Index i = 0; i < n; ++i) e.push_back({matrix_unit(n, i, i), GScalar(i == k ? -1 : 1)});
    out.push_back(svec_from_pairs(e));
  }
  return out;
}

}  // namespace

Extension matrix_over_diagonal(Index n) {
  std::vector<SVec> sub;
  for (Index i = 0; i < n; ++i) sub.push_back(svec_unit(matrix_unit(n, i, i)));
  auto e = conditional_expectation(matrix_algebra(n), sub);
  e.known_unitaries = matrix_unitaries(n);
  e.name = "M" + std::to_string(n) + "/diag";
  return e;
}

Extension matrix_over_scalars(Index n) {
  auto e = scalar_extension(matrix_algebra(n));
  e.known_unitaries = matrix_unitaries(n);
  e.name = "M" + std::to_string(n) + "/C";
  return e;
}

namespace {

std::vector<SVec> groupoid_unitaries(const FiniteGroupoid& g) {
  std::vector<SVec> out;
  for (const auto& b : bisections(g)) {
    std::vector<SEntry> e;
    for (Elem a : b) e.push_back({a, GScalar(1)});
    out.push_back(svec_from_pairs(e));
  }
  for (Atom x = 0; x < g.atoms(); ++x) {
    std::vector<SEntry> e;
    for (Atom y = 0; y < g.atoms(); ++y) e.push_back({g.unit(y), GScalar(x == y ? -1 : 1)});
    out.push_back(svec_from_pairs(e));
  }
  return out;
}

TracialStarAlgebra groupoid_algebra(const FiniteGroupoid& g, const std::function<GScalar(Elem, Elem)>& twist) {
  Index d = Index(g.size());
  std::vector<SVec> prod(size_t(d) * d), star(d);
  std::vector<GScalar> tr(d);
  SVec unit;
  for (Elem a = 0; a < d; ++a) {
    star[a] = svec_unit(g.inv(a));
    if (g.is_unit(a)) tr[a] = GScalar(g.weight(a));
    for (Elem b = 0; b < d; ++b) {
      Elem c = g.mul(a, b);
      if (c != kNoElem) prod[size_t(a) * d + b] = {{c, twist(a, b)}};
    }
  }
  for (Atom x = 0; x < g.atoms(); ++x) unit.push_back({g.unit(x), GScalar(1)});
  std::sort(unit.begin(), unit.end(), [](const SEntry& p, const SEntry& q) { return p.i < q.i; });
  return TracialStarAlgebra(g.labels(), prod, unit, star, tr);
}

}  // namespace

Extension convolution_algebra(const FiniteGroupoid& g) {
  auto rep = g.validate();
  if (!rep.ok()) throw PreconditionError("invalid groupoid: " + rep.violations.front().axiom, {rep.violations.front().witness});
  std::vector<SVec> sub;
  for (Atom x = 0; x < g.atoms(); ++x) sub.push_back(svec_unit(g.unit(x)));
  auto e = conditional_expectation(groupoid_algebra(g, [](Elem, Elem) { return GScalar(1); }), sub);
  e.known_unitaries = groupoid_unitaries(g);
  e.name = "CG/Linf";
  return e;
}

Extension group_algebra(const FiniteGroup& g) {
  auto e = convolution_algebra(build::from_group(g));
  e.name = "CG/C";
  return e;
}

GScalar TwoCocycle::operator()(Atom x, Atom y, Atom z) const {
  auto it = values.find({x, y, z});
  return it == values.end() ? GScalar(1) : it->second;
}

namespace {

std::vector<std::vector<bool>> relation_matrix(const FiniteGroupoid& r) {
  if (!r.is_equivalence_relation()) throw PreconditionError("cocycles are defined on equivalence relations");
  std::vector<std::vector<bool>> rel(r.atoms(), std::vector<bool>(r.atoms(), false));
  for (Elem a = 0; a < r.size(); ++a) rel[r.t(a)][r.s(a)] = true;
  return rel;
}

std::string triple(Atom x, Atom y, Atom z) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
}

}  // namespace

ValidationReport validate_cocycle(const FiniteGroupoid& r, const TwoCocycle& s) {
  ValidationReport rep;
  auto rel = relation_matrix(r);
  size_t n = r.atoms();
  for (const auto& [k, v] : s.values) {
    auto [x, y, z] = k;
    if (x >= n || y >= n || z >= n || !rel[x][y] || !rel[y][z]) {
      rep.violations.push_back({"defined on composable triples", triple(x, y, z)});
    }
    bool unit_root = (v.re.is_zero() && (v.im == Rational(1) || v.im == Rational(-1))) ||
                     (v.im.is_zero() && (v.re == Rational(1) || v.re == Rational(-1)));
    if (!unit_root) rep.violations.push_back({"values are fourth roots of unity", triple(x, y, z) + " -> " + v.to_string()});
  }
  if (!rep.ok()) return rep;
  for (Atom x = 0; x < n; ++x) {
    if (!s(x, x, x).is_one()) rep.violations.push_back({"normalization u(x) = 1", std::to_string(x)});
    for (Atom y = 0; y < n; ++y) {
      if (!rel[x][y]) continue;
      for (Atom z = 0; z < n; ++z) {
        if (!rel[y][z]) continue;
        if (!(s(x, y, z) * s(z, y, x)).is_one()) {
          rep.violations.push_back({"skew symmetry s(x,y,z)s(z,y,x) = 1", triple(x, y, z)});
        }
        for (Atom t = 0; t < n; ++t) {
          if (!rel[z][t]) continue;
          if (!(s(x, y, z) * s(x, z, t) == s(y, z, t) * s(x, y, t))) {
            rep.violations.push_back({"cocycle identity", "(" + std::to_string(x) + "," + std::to_string(y) + "," +
                                                              std::to_string(z) + "," + std::to_string(t) + ")"});
          }
        }
      }
    }
  }
  return rep;
}

Extension twisted_convolution(const FiniteGroupoid& r, const TwoCocycle& s) {
  auto rep = validate_cocycle(r, s);
  if (!rep.ok()) {
    throw PreconditionError("invalid cocycle: " + rep.violations.front().axiom, {rep.violations.front().witness});
  }
  auto gv = r.validate();
  if (!gv.ok()) throw PreconditionError("invalid relation", {gv.violations.front().witness});
  // Element a is the pair (t(a), s(a)); a*b = (t(a), s(b)) through s(a) = t(b).
  auto twist = [&](Elem a, Elem b) { return s(r.t(a), r.s(a), r.s(b)); };
  std::vector<SVec> sub;
  for (Atom x = 0; x < r.atoms(); ++x) sub.push_back(svec_unit(r.unit(x)));
  auto e = conditional_expectation(groupoid_algebra(r, twist), sub);
  e.known_unitaries = groupoid_unitaries(r);
  e.name = "CR_sigma/Linf";
  return e;
}

TwoCocycle coboundary(const FiniteGroupoid& r, const std::map<std::pair<Atom, Atom>, GScalar>& c) {
  auto rel = relation_matrix(r);
  auto cv = [&](Atom x, Atom y) {
    auto it = c.find({x, y});
    return it == c.end() ? GScalar(1) : it->second;
  };
  TwoCocycle s;
  size_t n = r.atoms();
  for (Atom x = 0; x < n; ++x)
    for (Atom y = 0; y < n; ++y)
      for (Atom z = 0; z < n; ++z) {
        if (!rel[x][y] || !rel[y][z]) continue;
        // |c| = 1 on fourth roots of unity, so c^{-1} = conj(c).
        GScalar v = cv(y, z) * cv(x, z).conj() * cv(x, y);
        if (!v.is_one()) s.values[{x, y, z}] = v;
      }
  return s;
}

// ------------------------------------------------------------ sums

Extension weighted_sum(const std::vector<Extension>& parts, const std::vector<Rational>& weights, SumMode mode) {
  if (parts.empty() || parts.size() != weights.size()) throw PreconditionError("weighted sum needs one weight per summand");
  Rational total;
  for (const auto& w : weights) {
    if (w.sign() <= 0) throw PreconditionError("weights must be positive", {w.to_string()});
    total += w;
  }
  if (!total.is_one()) throw PreconditionError("weights must sum to 1", {total.to_string()});

  std::vector<Index> offset;
  Index d = 0;
  for (const auto& p : parts) {
    offset.push_back(d);
    d += p.dim();
  }
  auto shift = [](const SVec& v, Index off) {
    SVec out = v;
    for (auto& e : out) e.i += off;
    return out;
  };
  std::vector<std::string> labels(d);
  std::vector<SVec> prod(size_t(d) * d), star(d);
  std::vector<GScalar> tr(d);
  SVec unit;
  for (size_t n = 0; n < parts.size(); ++n) {
    const auto& a = parts[n].algebra;
    Index off = offset[n];
    for (Index i = 0; i < a.dim(); ++i) {
      labels[off + i] = std::to_string(n) + ":" + a.label(i);
      star[off + i] = shift(a.star(svec_unit(i)), off);
      tr[off + i] = a.trace_vector()[i] * GScalar(weights[n]);
      for (Index j = 0; j < a.dim(); ++j) prod[size_t(off + i) * d + off + j] = shift(a.product(i, j), off);
    }
    SVec u = shift(a.unit(), off);
    unit.insert(unit.end(), u.begin(), u.end());
  }
  TracialStarAlgebra sum(labels, prod, unit, star, tr);

  std::vector<SVec> sub;
  if (mode == SumMode::componentwise) {
    for (size_t n = 0; n < parts.size(); ++n) {
      for (const auto& b : parts[n].sub) sub.push_back(shift(b, offset[n]));
    }
  } else {
    // Shared B: identical structure constants and traces on B in every summand.
    auto b0 = parts[0].sub_algebra();
    for (size_t n = 1; n < parts.size(); ++n) {
      auto bn = parts[n].sub_algebra();
      bool same = parts[n].sub.size() == parts[0].sub.size();
      for (Index i = 0; same && i < b0.dim(); ++i) {
        same = bn.trace_vector()[i] == b0.trace_vector()[i] && bn.star(svec_unit(i)) == b0.star(svec_unit(i));
        for (Index j = 0; same && j < b0.dim(); ++j) same = bn.product(i, j) == b0.product(i, j);
      }
      if (!same) throw PreconditionError("central sum needs the same subalgebra in every summand", {parts[n].name});
    }
    if (b0.center().size() != b0.dim()) throw PreconditionError("central sum needs a commutative subalgebra");
    for (size_t k = 0; k < parts[0].sub.size(); ++k) {
      SVec diag;
      for (size_t n = 0; n < parts.size(); ++n) {
        SVec piece = shift(parts[n].sub[k], offset[n]);
        diag.insert(diag.end(), piece.begin(), piece.end());
      }
      sub.push_back(diag);
    }
  }
  Extension ext = conditional_expectation(std::move(sum), std::move(sub));

  // Check E against the summand expectations.
  for (size_t n = 0; n < parts.size(); ++n) {
    for (Index i = 0; i < parts[n].dim(); ++i) {
      SVec en = parts[n].expect(svec_unit(i));
      SVec expected;
      if (mode == SumMode::componentwise) {
        expected = shift(en, offset[n]);
      } else {
        // E(a_n) = alpha_n E_n(a_n), spread diagonally.
        SVec coords = parts[n].sub_coordinates(en);
        std::vector<std::pair<GScalar, const SVec*>> terms;
        for (const auto& c : coords) terms.emplace_back(c.v * GScalar(weights[n]), &ext.sub[c.i]);
        expected = svec_combine(terms);
      }
      RB_CHECK(ext.expect(svec_unit(offset[n] + i)) == expected, "weighted sum expectation disagrees with the summands");
    }
  }

  const auto& alg = ext.algebra;
  for (size_t n = 0; n < parts.size(); ++n) {
    SVec sign = alg.unit();
    for (auto& e : sign) {
      if (e.i >= offset[n] && e.i < offset[n] + parts[n].dim()) e.v = -e.v;
    }
    ext.known_unitaries.push_back(sign);
    for (const auto& u : parts[n].known_unitaries) {
      SVec w;
      for (size_t m = 0; m < parts.size(); ++m) {
        SVec piece = m == n ? shift(u, offset[m]) : shift(parts[m].algebra.unit(), offset[m]);
        w.insert(w.end(), piece.begin(), piece.end());
      }
      bool normalizes = std::all_of(ext.sub.begin(), ext.sub.end(), [&](const SVec& b) {
        return ext.in_sub(alg.mul(alg.mul(w, b), alg.star(w)));
      });
      if (normalizes) ext.known_unitaries.push_back(w);
    }
  }
  ext.name = mode == SumMode::componentwise ? "directed sum" : "central sum";
  return ext;
}

Compression compression(const Extension& e, const SVec& p) {
  const auto& a = e.algebra;
  if (p.empty()) throw PreconditionError("compression by the zero projection");
  if (!is_projection(a, p)) throw PreconditionError("p is not a projection");
  if (!e.commutes_with_sub(p)) throw PreconditionError("p does not commute with B");
  EchelonBasis span(a.dim());
  for (Index i = 0; i < a.dim(); ++i) span.insert(a.mul(a.mul(p, svec_unit(i)), p));
  Rational trp = a.tr(p).re;
  TracialStarAlgebra ap = restrict_algebra(a, span, p, Rational(1) / trp, "p");
  std::vector<SVec> sub;
  {
    EchelonBasis bp(a.dim());
    for (const auto& b : e.sub) {
      SVec x = a.mul(a.mul(p, b), p);
      if (bp.insert(x)) sub.push_back(span.coordinates(x));
    }
  }
  Compression c;
  c.p = p;
  c.basis_in_parent = span.rows();
  c.ext = conditional_expectation(std::move(ap), std::move(sub));

  // E_p(x) E(p) = E(x) p for x in pAp.
  SVec ep = e.expect(p);
  for (Index k = 0; k < c.ext.dim(); ++k) {
    const SVec& x = c.basis_in_parent[k];
    SVec epx = c.ext.expect(svec_unit(k));
    std::vector<std::pair<GScalar, const SVec*>> terms;
    for (const auto& t : epx) terms.emplace_back(t.v, &c.basis_in_parent[t.i]);
    SVec lifted = svec_combine(terms);
    RB_CHECK(a.mul(lifted, ep) == a.mul(e.expect(x), p), "compressed expectation is not the compression of E");
  }
  for (const auto& u : e.known_unitaries) {
    if (!a.commutator(u, p).empty()) continue;
    c.ext.known_unitaries.push_back(span.coordinates(a.mul(a.mul(p, u), p)));
  }
  c.ext.known_unitaries.push_back(c.ext.algebra.unit());
  c.ext.name = "compression of " + e.name;
  return c;
}

std::vector<SVec> normalizer_span(const Extension& e, const std::vector<SVec>& unitaries) {
  const auto& a = e.algebra;
  for (const auto& u : unitaries) {
    if (!is_unitary(a, u)) throw PreconditionError("generator is not unitary", {show(a, u)});
    SVec us = a.star(u);
    for (const auto& b : e.sub) {
      if (!e.in_sub(a.mul(a.mul(u, b), us)) || !e.in_sub(a.mul(a.mul(us, b), u))) {
        throw PreconditionError("generator does not normalize B", {show(a, u), show(a, b)});
      }
    }
  }
  EchelonBasis span(a.dim());
  std::vector<SVec> gens, frontier;
  for (const auto& b : e.sub) {
    if (span.insert(b)) frontier.push_back(b);
  }
  for (const auto& u : unitaries) {
    gens.push_back(u);
    gens.push_back(a.star(u));
  }
  for (const auto& g : gens) {
    if (span.insert(g)) frontier.push_back(g);
  }
  while (!frontier.empty()) {
    std::vector<SVec> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        for (SVec y : {a.mul(x, g), a.mul(g, x)}) {
          if (span.insert(y)) next.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
  return span.rows();
}

Extension normalizer_extension(const Extension& e, const std::vector<SVec>& unitaries) {
  EchelonBasis span(e.dim());
  for (const auto& v : normalizer_span(e, unitaries)) span.insert(v);
  TracialStarAlgebra n = restrict_algebra(e.algebra, span, e.algebra.unit(), Rational(1), "");
  std::vector<SVec> sub;
  for (const auto& b : e.sub) sub.push_back(span.coordinates(b));
  Extension out = conditional_expectation(std::move(n), std::move(sub));
  for (const auto& u : unitaries) out.known_unitaries.push_back(span.coordinates(u));
  out.name = "normalizer of " + e.name;
  return out;
}

bool check_convolution_functor(const FiniteGroupoid& g, const FiniteGroupoid& h, const std::vector<Elem>& map) {
  if (!is_morphism(g, h, map)) return false;
  auto eg = convolution_algebra(g), eh = convolution_algebra(h);
  auto push = [&](const SVec& v) {
    std::vector<SEntry> out;
    for (const auto& e : v) out.push_back({map[e.i], e.v});
    return svec_from_pairs(out);
  };
  for (Elem a = 0; a < g.size(); ++a) {
    SVec x = svec_unit(a);
    if (!(eg.algebra.tr(x) == eh.algebra.tr(push(x)))) return false;
    if (eh.expect(push(x)) != push(eg.expect(x))) return false;
    if (eh.algebra.star(push(x)) != push(eg.algebra.star(x))) return false;
    for (Elem b = 0; b < g.size(); ++b) {
      SVec y = svec_unit(b);
      if (eh.algebra.mul(push(x), push(y)) != push(eg.algebra.mul(x, y))) return false;
    }
  }
  return true;
}

}  // namespace relbetti
