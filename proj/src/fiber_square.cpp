#include "relbetti/fiber_square.hpp"

#include <algorithm>
#include <deque>

#include "relbetti/error.hpp"

namespace relbetti {

namespace {

SVec vectorize(const SparseMatrix& t) {
  SVec out;
  out.reserve(t.nnz());
  for (Index j = 0; j < t.cols(); ++j)
    for (const auto& e : t.col(j)) out.push_back({j * t.rows() + e.i, e.v});
  return out;
}

SparseMatrix devectorize(const SVec& v, Index n) {
  std::vector<SVec> cols(n);
  for (const auto& e : v) cols[e.i / n].push_back({e.i % n, e.v});
  return SparseMatrix::from_columns(n, std::move(cols));
}

SVec to_other_side(const Extension& from, const Extension& to, const SVec& x) {
  SVec coords = from.sub_coordinates(x);
  std::vector<std::pair<GScalar, const SVec*>> terms;
  for (const auto& c : coords) terms.emplace_back(c.v, &to.sub[c.i]);
  return svec_combine(terms);
}

bool is_diagonal(const GMatrix& g) {
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j)
      if (i != j && !g(i, j).is_zero()) return false;
  return true;
}

std::string sub_label(const Extension& e, size_t k) {
  const auto& b = e.sub[k];
  if (b.size() == 1 && b[0].v.is_one()) return e.algebra.label(b[0].i);
  return "b" + std::to_string(k);
}

}  // namespace

std::optional<std::string> s_condition_witness(const Extension& a, const Extension& c, const SVec& u, const SVec& v,
                                               bool alternative) {
  const auto& A = a.algebra;
  const auto& C = c.algebra;
  SVec us = A.star(u), vs = C.star(v);
  for (size_t k = 0; k < a.sub.size(); ++k) {
    const SVec& xa = a.sub[k];
    const SVec& xc = c.sub[k];
    SVec lhs = alternative ? A.mul(A.mul(u, xa), us) : A.mul(A.mul(us, xa), u);
    SVec rhs = alternative ? C.mul(C.mul(vs, xc), v) : C.mul(C.mul(v, xc), vs);
    // Both sides must be the same element of B.
    if (!a.in_sub(lhs) || !c.in_sub(rhs) || a.sub_coordinates(lhs) != c.sub_coordinates(rhs)) return sub_label(a, k);
  }
  return std::nullopt;
}

SparseMatrix star_operator(const BalancedTensor& t, const SVec& u, const SVec& v, bool alternative) {
  const auto& a = t.left();
  const auto& c = t.right();
  if (!is_unitary(a.algebra, u)) throw PreconditionError("u is not unitary");
  if (!is_unitary(c.algebra, v)) throw PreconditionError("v is not unitary");
  if (auto w = s_condition_witness(a, c, u, v, alternative)) throw PreconditionError("S-condition fails", {*w});
  const auto& A = a.algebra;
  const auto& C = c.algebra;
  SparseMatrix op = t.induced_operator(
      [&](Index i, Index j) { return t.ambient(A.mul(svec_unit(i), u), C.mul(v, svec_unit(j))); });
  const auto& act = t.actions();
  for (const auto& l : act.left) RB_CHECK(op * l == l * op, "u*v does not commute with the left action");
  for (const auto& r : act.right) RB_CHECK(op * r == r * op, "u*v does not commute with the right action");
  return op;
}

SparseMatrix right_by_sub(const BalancedTensor& t, const SVec& x) {
  if (!t.left().in_center_of_sub(x)) throw PreconditionError("element is not in the center of B");
  const auto& A = t.left().algebra;
  return t.induced_operator([&](Index i, Index j) { return t.ambient(A.mul(svec_unit(i), x), svec_unit(j)); });
}

SparseMatrix left_by_sub(const BalancedTensor& t, const SVec& x) {
  if (!t.left().in_center_of_sub(x)) throw PreconditionError("element is not in the center of B");
  SVec xc = to_other_side(t.left(), t.right(), x);
  const auto& C = t.right().algebra;
  return t.induced_operator([&](Index i, Index j) { return t.ambient(svec_unit(i), C.mul(xc, svec_unit(j))); });
}

// ------------------------------------------------------------ fiber square

bool FiberSquare::contains(const SparseMatrix& t) const { return span.contains(vectorize(t)); }

SVec FiberSquare::coordinates(const SparseMatrix& t) const {
  SVec v = vectorize(t);
  RB_CHECK(span.contains(v), "operator outside the fiber square");
  return span.coordinates(v);
}

SparseMatrix FiberSquare::element(const SVec& coords) const {
  std::vector<SVec> vs;
  vs.reserve(coords.size());
  for (const auto& c : coords) vs.push_back(vectorize(basis[c.i]));
  std::vector<std::pair<GScalar, const SVec*>> terms;
  for (size_t k = 0; k < coords.size(); ++k) terms.emplace_back(coords[k].v, &vs[k]);
  return devectorize(svec_combine(terms), tensor.dim());
}

SparseMatrix FiberSquare::adjoint(const SparseMatrix& t) const {
  const GMatrix& g = tensor.gram();
  SparseMatrix h = t.adjoint();
  if (is_diagonal(g)) {
    std::vector<SVec> cols(h.cols());
    for (Index j = 0; j < h.cols(); ++j)
      for (const auto& e : h.col(j)) cols[j].push_back({e.i, e.v * g(j, j) / g(e.i, e.i)});
    return SparseMatrix::from_columns(h.rows(), std::move(cols));
  }
  auto ginv = inverse(g);
  RB_CHECK(ginv.has_value(), "tensor form is degenerate");
  return SparseMatrix::from_dense(*ginv * h.to_dense() * g);
}

GScalar FiberSquare::phi(const SparseMatrix& t) const { return tensor.inner(tensor.one_one(), t.apply(tensor.one_one())); }

SparseMatrix FiberSquare::evaluation() const {
  std::vector<SVec> cols;
  for (const auto& b : basis) cols.push_back(b.apply(tensor.one_one()));
  return SparseMatrix::from_columns(tensor.dim(), std::move(cols));
}

std::vector<std::pair<SVec, SVec>> canonical_generators(const Extension& a, const Extension& c, bool alternative) {
  auto family = [](const Extension& e) {
    std::vector<SVec> out{e.algebra.unit()};
    auto add = [&](const SVec& x) {
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    };
    for (const auto& u : e.known_unitaries) {
      add(u);
      add(e.algebra.star(u));
    }
    return out;
  };
  auto us = family(a), vs = family(c);
  std::vector<std::pair<SVec, SVec>> out;
  for (const auto& u : us) {
    if (!is_unitary(a.algebra, u)) continue;
    for (const auto& v : vs) {
      if (!is_unitary(c.algebra, v)) continue;
      if (!s_condition_witness(a, c, u, v, alternative)) out.emplace_back(u, v);
    }
  }
  return out;
}

FiberSquare fiber_square(const Extension& a, const Extension& c, std::vector<std::pair<SVec, SVec>> generators,
                         const FiberSquareOptions& opt) {
  FiberSquare f;
  f.tensor = BalancedTensor(a, c);
  f.generators = std::move(generators);
  Index d = f.tensor.dim();
  f.span = EchelonBasis(d * d);

  std::vector<SparseMatrix> gens;
  for (const auto& [u, v] : f.generators) {
    SparseMatrix op = star_operator(f.tensor, u, v, opt.alternative_s_condition);
    // (u*v)^* = u^* * v^*, realized as the form adjoint.
    SparseMatrix st = f.adjoint(op);
    RB_CHECK(st == star_operator(f.tensor, a.algebra.star(u), c.algebra.star(v), opt.alternative_s_condition),
             "adjoint of u*v differs from u^* * v^*");
    gens.push_back(std::move(op));
  }

  std::deque<size_t> queue;
  auto add = [&](SparseMatrix t) {
    if (!f.span.insert(vectorize(t))) return;
    f.basis.push_back(std::move(t));
    queue.push_back(f.basis.size() - 1);
    if (f.basis.size() > opt.dimension_bound)
      throw PreconditionError("fiber square saturation exceeded the dimension bound",
                              {"bound " + std::to_string(opt.dimension_bound)});
  };
  add(SparseMatrix::identity(d));
  while (!queue.empty()) {
    size_t k = queue.front();
    queue.pop_front();
    for (const auto& g : gens) add(g * f.basis[k]);
  }

  // Coordinates are read against the reduced echelon rows, so those become
  // the basis.
  f.basis.clear();
  for (const auto& row : f.span.rows()) f.basis.push_back(devectorize(row, d));
  Index n = f.dim();
  std::vector<std::string> labels;
  std::vector<SVec> prod(size_t(n) * n), star(n);
  std::vector<GScalar> tr(n);
  for (Index i = 0; i < n; ++i) {
    labels.push_back("T" + std::to_string(i));
    for (Index j = 0; j < n; ++j) prod[size_t(i) * n + j] = f.coordinates(f.basis[i] * f.basis[j]);
    star[i] = f.coordinates(f.adjoint(f.basis[i]));
    tr[i] = f.phi(f.basis[i]);
  }
  f.algebra = TracialStarAlgebra(labels, prod, f.coordinates(SparseMatrix::identity(d)), star, tr);

  const auto& act = f.tensor.actions();
  for (const auto& t : f.basis) {
    for (const auto& l : act.left) RB_CHECK(t * l == l * t, "fiber square element does not commute with A");
    for (const auto& r : act.right) RB_CHECK(t * r == r * t, "fiber square element does not commute with C");
  }
  RB_CHECK(f.phi(SparseMatrix::identity(d)).is_one(), "phi(1) != 1");
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      RB_CHECK(f.algebra.tr(prod[size_t(i) * n + j]) == f.algebra.tr(prod[size_t(j) * n + i]), "phi is not tracial");
  RB_CHECK(HermitianForm(f.algebra.gns_gram()).is_positive_definite(), "phi is not faithful");
  RB_CHECK(rank(f.evaluation()) == n, "1 (x) 1 is not separating");

  // B-invariant vectors form a faithful module.
  auto inv = sub_invariant_vectors(f.tensor);
  std::vector<SVec> restricted;
  for (const auto& t : f.basis) {
    std::vector<SEntry> e;
    for (size_t k = 0; k < inv.size(); ++k)
      for (const auto& x : t.apply(inv[k])) e.push_back({Index(k) * d + x.i, x.v});
    restricted.push_back(svec_from_pairs(std::move(e)));
  }
  RB_CHECK(independent_columns(restricted, Index(inv.size()) * d).size() == n,
           "fiber square does not act faithfully on B-invariant vectors");
  return f;
}

FiberSquare fiber_square(const Extension& a, const FiberSquareOptions& opt) {
  return fiber_square(a, a, canonical_generators(a, a, opt.alternative_s_condition), opt);
}

std::vector<SVec> sub_invariant_vectors(const BalancedTensor& t) {
  Index d = t.dim();
  const auto& act = t.actions();
  const auto& a = t.left();
  const auto& c = t.right();
  // Stack the maps x -> b x - x b for b in B as one tall matrix.
  std::vector<std::vector<SEntry>> cols(d);
  for (size_t k = 0; k < a.sub.size(); ++k) {
    SVec bc = to_other_side(a, c, a.sub[k]);
    for (Index x = 0; x < d; ++x) {
      SVec ex = svec_unit(x);
      SVec diff = svec_sub(act.act_left(a.sub[k], ex), act.act_right(ex, bc));
      for (const auto& e : diff) cols[x].push_back({Index(k) * d + e.i, e.v});
    }
  }
  std::vector<SVec> sv;
  for (auto& col : cols) sv.push_back(svec_from_pairs(std::move(col)));
  return kernel_basis(SparseMatrix::from_columns(Index(a.sub.size()) * d, std::move(sv)));
}

ProjectionTraceCheck projection_trace_identity(const FiberSquare& f, const SVec& p) {
  const Extension& a = f.tensor.left();
  if (!is_projection(a.algebra, p)) throw PreconditionError("not a projection");
  if (!a.commutes_with_sub(p)) throw PreconditionError("projection does not commute with B");
  if (a.dim() != f.tensor.right().dim()) throw PreconditionError("identity needs A = C");
  ProjectionTraceCheck out;
  const auto& A = a.algebra;
  const auto& C = f.tensor.right().algebra;
  // p * p acts by a (x) b -> a p (x) p b; it is well defined since p is in B'.
  SparseMatrix op = f.tensor.induced_operator(
      [&](Index i, Index j) { return f.tensor.ambient(A.mul(svec_unit(i), p), C.mul(p, svec_unit(j))); });
  out.in_square = f.contains(op);
  out.square_side = f.phi(op);
  SVec ep = a.expect(p);
  out.sub_side = A.tr(A.mul(ep, ep));
  return out;
}

// ------------------------------------------------------------ groupoids

GroupoidFiberSquare groupoid_fiber_square(const FiniteGroupoid& g, const TwoCocycle* sigma,
                                          const FiberSquareOptions& opt) {
  Extension a = sigma ? twisted_convolution(g, *sigma) : convolution_algebra(g);
  GroupoidFiberSquare out;
  out.square = fiber_square(a, opt);
  out.env = enveloping(g);
  const auto& f = out.square;
  Index n = f.dim();
  Index ne = Index(out.env.groupoid.size());

  auto to_env = [&](const SVec& x) {
    std::vector<SEntry> e;
    for (const auto& c : x) {
      auto [i, j] = f.tensor.word(c.i);
      auto it = out.env.index.find({i, j});
      RB_CHECK(it != out.env.index.end(), "evaluation leaves the B-invariant vectors");
      e.push_back({it->second, c.v});
    }
    return svec_from_pairs(std::move(e));
  };
  std::vector<SVec> cols;
  for (const auto& b : f.basis) cols.push_back(to_env(b.apply(f.tensor.one_one())));
  out.evaluation = SparseMatrix::from_columns(ne, std::move(cols));
  size_t r = rank(out.evaluation);
  RB_CHECK(r == n, "evaluation is not injective");
  out.missing_dimension = ne - Index(r);
  if (out.missing_dimension)
    throw PreconditionError("evaluation at 1(x)1 is not onto C(G^e)",
                            {"missing dimension " + std::to_string(out.missing_dimension)});
  Extension ce = convolution_algebra(out.env.groupoid);
  const auto& E = ce.algebra;
  auto ev = [&](const SVec& coords) { return out.evaluation.apply(coords); };
  for (Index i = 0; i < n; ++i) {
    SVec ei = ev(svec_unit(i));
    for (Index j = 0; j < n; ++j)
      RB_CHECK(ev(f.algebra.product(i, j)) == E.mul(ei, ev(svec_unit(j))), "evaluation is not multiplicative");
    RB_CHECK(ev(f.algebra.star(svec_unit(i))) == E.star(ei), "evaluation does not respect the involution");
    RB_CHECK(f.algebra.tr(svec_unit(i)) == E.tr(ei), "evaluation does not preserve the trace");
  }
  for (Atom x = 0; x < g.atoms(); ++x) {
    SVec dx = svec_unit(g.unit(x));
    SparseMatrix rx = right_by_sub(f.tensor, dx);
    RB_CHECK(rx == left_by_sub(f.tensor, dx), "1*x and x*1 differ");
    RB_CHECK(ev(f.coordinates(rx)) == svec_unit(out.env.diagonal[g.unit(x)]), "evaluation moves the diagonal");
  }
  return out;
}

CocycleComparison compare_twisted_fiber_square(const FiniteGroupoid& r, const TwoCocycle& sigma,
                                               const FiberSquareOptions& opt) {
  CocycleComparison out;
  auto rep = validate_cocycle(r, sigma);
  if (!rep.ok()) throw PreconditionError("invalid cocycle: " + rep.violations.front().axiom, {rep.violations.front().witness});
  // Both calls verify that evaluation is a *-isomorphism onto C(R^e) with its
  // untwisted product.
  auto plain = groupoid_fiber_square(r, nullptr, opt);
  auto twisted = groupoid_fiber_square(r, &sigma, opt);
  out.untwisted_dim = plain.square.dim();
  out.twisted_dim = twisted.square.dim();
  // Images of evaluation inside C[R^(2)], which does not depend on sigma.
  Index ne = Index(plain.env.groupoid.size());
  EchelonBasis ip(ne), it(ne);
  for (const auto& c : plain.evaluation.columns()) ip.insert(c);
  for (const auto& c : twisted.evaluation.columns()) it.insert(c);
  out.identical = ip.rows() == it.rows();
  // As operator spaces on A (x)_B A the two differ as soon as the twisted
  // bimodule actions do.
  out.operator_spans_equal = plain.square.span.rows() == twisted.square.span.rows();
  out.detail = out.identical ? "evaluation identifies both fiber squares with C(R^e)" : "evaluation images differ";
  return out;
}

}  // namespace relbetti
