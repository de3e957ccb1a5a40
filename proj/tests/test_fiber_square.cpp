#include <chrono>

#include "doctest.h"
#include "relbetti/error.hpp"
#include "relbetti/fiber_square.hpp"
#include "support.hpp"

using namespace relbetti;
using namespace rbtest;

namespace {

// Brute-force form on A (x) C straight from tr_B(E(d b^*) E(a^* c)), with B
// products done in A.
GMatrix naive_tensor_gram(const Extension& a, const Extension& c) {
  const auto& A = a.algebra;
  const auto& C = c.algebra;
  Index da = A.dim(), dc = C.dim();
  GMatrix g(da * dc, da * dc);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < dc; ++j)
      for (Index k = 0; k < da; ++k)
        for (Index l = 0; l < dc; ++l) {
          SVec eac = a.expect(A.mul(A.star(svec_unit(i)), svec_unit(k)));
          SVec edb = c.expect(C.mul(svec_unit(l), C.star(svec_unit(j))));
          // Move E(db^*) into A through B coordinates.
          SVec coords = c.sub_coordinates(edb);
          SVec in_a;
          for (const auto& x : coords) in_a = svec_add(in_a, svec_scale(a.sub[x.i], x.v));
          g(i * dc + j, k * dc + l) = A.tr(A.mul(in_a, eac));
        }
  return g;
}

size_t relation_rank(const Extension& a, const Extension& c) {
  const auto& A = a.algebra;
  const auto& C = c.algebra;
  Index da = A.dim(), dc = C.dim();
  std::vector<SVec> cols;
  for (size_t k = 0; k < a.sub.size(); ++k)
    for (Index i = 0; i < da; ++i)
      for (Index j = 0; j < dc; ++j) {
        std::vector<SEntry> e;
        for (const auto& x : A.mul(svec_unit(i), a.sub[k])) e.push_back({x.i * dc + j, x.v});
        for (const auto& y : C.mul(c.sub[k], svec_unit(j))) e.push_back({i * dc + y.i, -y.v});
        cols.push_back(svec_from_pairs(e));
      }
  return rank(SparseMatrix::from_columns(da * dc, cols));
}

FiniteGroupoid pair(size_t n) { return build::pair_relation(FiniteMeasuredSpace::uniform(n)); }

}  // namespace

TEST_SUITE("fiber_squares") {
  TEST_CASE("balanced tensor dimensions") {
    auto m2c = matrix_over_scalars(2);
    CHECK(BalancedTensor(m2c, m2c).dim() == 16);

    auto m2d = matrix_over_diagonal(2);
    BalancedTensor t(m2d, m2d);
    CHECK(t.dim() == 8);
    auto g = naive_tensor_gram(m2d, m2d);
    CHECK(radical(HermitianForm(g)).cols() == 8);
    CHECK(relation_rank(m2d, m2d) == 8);

    auto b = full_extension(matrix_algebra(2));
    CHECK(BalancedTensor(b, b).dim() == 4);
    auto l = convolution_algebra(build::trivial(FiniteMeasuredSpace::uniform(3)));
    CHECK(BalancedTensor(l, l).dim() == 3);
  }

  TEST_CASE("three expressions of the tensor form agree on random extensions") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 12; ++it) {
      auto e = random_extension(rng);
      auto f = tensor_form_expressions(e, e);
      CHECK(f.via_b == f.via_c);
      CHECK(f.via_b == f.via_a);
      CHECK(f.via_b == naive_tensor_gram(e, e));
      BalancedTensor t(e, e);
      CHECK(t.dim() == e.dim() * e.dim() - relation_rank(e, e));
      CHECK(t.inner(t.one_one(), t.one_one()).is_one());
    }
  }

  TEST_CASE("mismatched subalgebras are rejected") {
    auto a = matrix_over_diagonal(2);
    auto c = matrix_over_scalars(2);
    CHECK_THROWS_AS(BalancedTensor(a, c), PreconditionError);
  }

  TEST_CASE("star operators") {
    auto cg = group_algebra(FiniteGroup::cyclic(3));
    BalancedTensor t(cg, cg);
    CHECK(star_operator(t, cg.algebra.unit(), cg.algebra.unit()) == SparseMatrix::identity(9));
    // (u*v)(a (x) b) = au (x) vb on group elements.
    SparseMatrix op = star_operator(t, svec_unit(1), svec_unit(2));
    for (Index a = 0; a < 3; ++a)
      for (Index b = 0; b < 3; ++b)
        CHECK(op.apply(t.tensor(svec_unit(a), svec_unit(b))) == t.tensor(svec_unit((a + 1) % 3), svec_unit((b + 2) % 3)));

    auto m2d = matrix_over_diagonal(2);
    BalancedTensor tm(m2d, m2d);
    SVec swap = vec({{matrix_unit(2, 0, 1), q(1)}, {matrix_unit(2, 1, 0), q(1)}});
    CHECK_NOTHROW(star_operator(tm, swap, swap));
    try {
      star_operator(tm, swap, m2d.algebra.unit());
      FAIL("S-condition should fail");
    } catch (const PreconditionError& e) {
      CHECK(e.witnesses().size() == 1);
    }
    CHECK_THROWS_AS(star_operator(tm, vec({{0, q(2)}}), swap), PreconditionError);
  }

  TEST_CASE("central elements of B act the same from both sides") {
    auto m2d = matrix_over_diagonal(2);
    BalancedTensor t(m2d, m2d);
    for (const auto& x : m2d.sub) CHECK(right_by_sub(t, x) == left_by_sub(t, x));
    auto f = fiber_square(m2d);
    for (const auto& x : m2d.sub) CHECK(f.contains(right_by_sub(t, x)));
  }

  TEST_CASE("group fiber squares have dimension |G|^2 and match G^o x G") {
    for (const auto& name : FiniteGroup::small_group_names()) {
      auto g = FiniteGroup::named(name);
      auto gf = groupoid_fiber_square(build::from_group(g));
      CHECK(gf.square.dim() == g.order() * g.order());
      CHECK(gf.env.groupoid.size() == g.order() * g.order());
    }
  }

  TEST_CASE("relation fiber squares are the relation algebra") {
    for (size_t n = 1; n <= 3; ++n) {
      auto gf = groupoid_fiber_square(pair(n));
      CHECK(gf.square.dim() == n * n);
      CHECK(gf.square.algebra.validate().ok());
    }
    auto act = build::action_groupoid(FiniteGroup::cyclic(2), FiniteMeasuredSpace::uniform(2), {{0, 1}, {1, 0}});
    CHECK(groupoid_fiber_square(act).square.dim() == enveloping(act).groupoid.size());
    auto part = build::partition_relation(FiniteMeasuredSpace::uniform(3), {{0, 1}, {2}});
    CHECK(groupoid_fiber_square(part).square.dim() == 5);
    auto triv = build::trivial(FiniteMeasuredSpace::uniform(3));
    CHECK(groupoid_fiber_square(triv).square.dim() == 3);
  }

  TEST_CASE("fiber square of B over itself is the center of B") {
    auto m2 = full_extension(matrix_algebra(2));
    m2.known_unitaries = matrix_over_scalars(2).known_unitaries;
    CHECK(fiber_square(m2).dim() == 1);
    auto l3 = convolution_algebra(build::trivial(FiniteMeasuredSpace::uniform(3)));
    CHECK(fiber_square(l3).dim() == 3);
  }

  TEST_CASE("fiber square of a weighted sum is the weighted sum of fiber squares") {
    auto x = matrix_over_diagonal(2);
    auto y = group_algebra(FiniteGroup::cyclic(2));
    auto fx = fiber_square(x), fy = fiber_square(y);
    auto s = weighted_sum({x, y}, {Rational(1, 3), Rational(2, 3)}, SumMode::componentwise);
    auto fs = fiber_square(s);
    CHECK(fs.dim() == fx.dim() + fy.dim());
    // The block projections 1_n (x) 1_n carry trace alpha_n.
    SVec p0 = vec({{0, q(1)}, {3, q(1)}});
    SparseMatrix proj = fs.tensor.induced_operator([&](Index i, Index j) {
      return fs.tensor.ambient(s.algebra.mul(svec_unit(i), p0), s.algebra.mul(p0, svec_unit(j)));
    });
    CHECK(fs.contains(proj));
    CHECK(fs.phi(proj) == q(1, 3));
  }

  TEST_CASE("phi is tracial and the projection identity holds") {
    std::vector<Extension> corpus{matrix_over_diagonal(2), matrix_over_scalars(2), group_algebra(FiniteGroup::symmetric3()),
                                  convolution_algebra(pair(3))};
    for (const auto& e : corpus) {
      auto f = fiber_square(e);
      for (Index i = 0; i < f.dim(); ++i)
        for (Index j = 0; j < f.dim(); ++j)
          CHECK(f.phi(f.basis[i] * f.basis[j]) == f.phi(f.basis[j] * f.basis[i]));
      for (Index k = 0; k < e.dim(); ++k) {
        SVec p = svec_unit(k);
        if (!is_projection(e.algebra, p) || !e.commutes_with_sub(p)) continue;
        auto chk = projection_trace_identity(f, p);
        CHECK(chk.in_square);
        CHECK(chk.equal());
      }
    }
  }

  TEST_CASE("both readings of the S-condition give the same generators") {
    for (const auto& e : {matrix_over_diagonal(2), convolution_algebra(pair(3)), group_algebra(FiniteGroup::symmetric3())}) {
      CHECK(canonical_generators(e, e, false) == canonical_generators(e, e, true));
    }
  }

  TEST_CASE("cocycle twists do not change the fiber square") {
    auto r3 = pair(3);
    auto s3 = coboundary(r3, {{{0, 1}, q(-1)}, {{1, 0}, q(-1)}});
    auto cmp = compare_twisted_fiber_square(r3, s3);
    CHECK(cmp.identical);
    CHECK(cmp.twisted_dim == 9);
    CHECK(groupoid_fiber_square(r3, &s3).square.dim() == 9);
    // On two points the only nontrivial sign cocycle makes the trace form
    // indefinite, so the twisted algebra is not tracial.
    CHECK_THROWS_AS(compare_twisted_fiber_square(pair(2), r2_sign_cocycle()), PreconditionError);
  }
}
