#include <random>

#include "doctest.h"
#include "relbetti/algebra.hpp"
#include "relbetti/error.hpp"
#include "support.hpp"

using namespace relbetti;
using namespace rbtest;


TEST_SUITE("tracial_algebras") {
  TEST_CASE("matrix algebras and group algebras validate") {
    auto m2 = matrix_algebra(2);
    CHECK(m2.validate().ok());
    CHECK(m2.gns_gram() == GMatrix::identity(4).scaled(q(1, 2)));
    CHECK(m2.is_factor());

    auto c3 = group_algebra(FiniteGroup::cyclic(3));
    CHECK(c3.validate().ok());
    // All 27 triples: e_a e_b = e_{a+b mod 3}.
    for (Index a = 0; a < 3; ++a)
      for (Index b = 0; b < 3; ++b) CHECK(c3.algebra.product(a, b) == svec_unit((a + b) % 3));
    CHECK(c3.algebra.center().size() == 3);
    CHECK(group_algebra(FiniteGroup::symmetric3()).algebra.center().size() == 3);
  }

  TEST_CASE("trace normalization violation") {
    auto m2 = matrix_algebra(2);
    std::vector<SVec> prod;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) prod.push_back(m2.product(i, j));
    std::vector<SVec> star;
    for (Index i = 0; i < 4; ++i) star.push_back(m2.star(svec_unit(i)));
    std::vector<GScalar> tr = {q(1), q(0), q(0), q(1)};
    TracialStarAlgebra bad(m2.labels(), prod, m2.unit(), star, tr);
    auto rep = bad.validate();
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations.front().axiom == "trace normalization");
  }

  TEST_CASE("convolution algebra of the pair relation is the matrix algebra") {
    for (Index n = 1; n <= 3; ++n) {
      auto r = convolution_algebra(build::pair_relation(FiniteMeasuredSpace::uniform(n)));
      auto m = matrix_algebra(n);
      // (x,y) has index x*n+y, the same as e_xy.
      for (Index i = 0; i < n * n; ++i) {
        CHECK(r.algebra.trace_vector()[i] == m.trace_vector()[i]);
        for (Index j = 0; j < n * n; ++j) CHECK(r.algebra.product(i, j) == m.product(i, j));
      }
      CHECK(r.algebra.gns_gram() == m.gns_gram());
      CHECK(r.validate().ok());
    }
  }

  TEST_CASE("convolution of a trivial groupoid is commutative with E = id") {
    auto t = convolution_algebra(build::trivial(FiniteMeasuredSpace::uniform(3)));
    CHECK(t.validate().ok());
    CHECK(t.algebra.center().size() == 3);
    CHECK(t.expectation == GMatrix::identity(3));
  }

  TEST_CASE("twisted convolution") {
    auto r2 = build::pair_relation(FiniteMeasuredSpace::uniform(2));
    auto plain = convolution_algebra(r2);
    auto trivial_twist = twisted_convolution(r2, TwoCocycle{});
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) CHECK(trivial_twist.algebra.product(i, j) == plain.algebra.product(i, j));

    auto tw = twisted_convolution(r2, r2_sign_cocycle());
    // Associativity re-verified on all triples by brute force.
    const auto& a = tw.algebra;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        for (Index k = 0; k < 4; ++k)
          CHECK(a.mul(a.product(i, j), svec_unit(k)) == a.mul(svec_unit(i), a.product(j, k)));
    CHECK(tw.sub == plain.sub);
    CHECK(tw.expectation == plain.expectation);
    CHECK(a.trace_vector() == plain.algebra.trace_vector());
    // The swap is no longer unitary and the GNS form is indefinite.
    CHECK_FALSE(is_unitary(a, vec({{1, q(1)}, {2, q(1)}})));
    CHECK_FALSE(tw.validate().ok());

    // Nontrivial positive cocycle on three points: coboundary of a real
    // symmetric c.
    auto r3 = build::pair_relation(FiniteMeasuredSpace::uniform(3));
    auto s3 = coboundary(r3, {{{0, 1}, q(-1)}, {{1, 0}, q(-1)}});
    CHECK_FALSE(s3.values.empty());
    CHECK(validate_cocycle(r3, s3).ok());
    CHECK(twisted_convolution(r3, s3).validate().ok());
  }

  TEST_CASE("non-cocycles are rejected with a witness") {
    auto r3 = build::pair_relation(FiniteMeasuredSpace::uniform(3));
    auto s = coboundary(r3, {{{0, 1}, q(-1)}, {{1, 0}, q(-1)}});
    s.values[{0, 1, 2}] = -s(0, 1, 2);
    auto rep = validate_cocycle(r3, s);
    REQUIRE_FALSE(rep.ok());
    CHECK_THROWS_AS(twisted_convolution(r3, s), PreconditionError);
    TwoCocycle half;
    half.values[{0, 1, 0}] = GScalar::parse("1/2");
    CHECK_FALSE(validate_cocycle(r3, half).ok());
  }

  TEST_CASE("conditional expectations") {
    auto m2 = matrix_algebra(2);
    CHECK(full_extension(m2).expectation == GMatrix::identity(4));

    auto d = matrix_over_diagonal(2);
    CHECK(d.validate().ok());
    // Diagonal extraction, solved from the orthogonality equations by hand.
    GMatrix diag(4, 4);
    diag(0, 0) = q(1);
    diag(3, 3) = q(1);
    CHECK(d.expectation == diag);

    auto s = scalar_extension(m2);
    CHECK(s.validate().ok());
    for (Index i = 0; i < 4; ++i) {
      SVec want = svec_scale(m2.unit(), m2.tr(svec_unit(i)));
      CHECK(s.expect(svec_unit(i)) == want);
    }
    // B must be unital and star closed.
    CHECK_THROWS_AS(conditional_expectation(m2, {svec_unit(0)}), PreconditionError);
    CHECK_THROWS_AS(conditional_expectation(m2, {m2.unit(), svec_unit(1)}), PreconditionError);
  }

  TEST_CASE("E(u a u*) under normalizing unitaries") {
    auto d3 = matrix_over_diagonal(3);
    // Cyclic permutation matrix e21 + e32 + e13.
    SVec cyc = vec({{matrix_unit(3, 1, 0), q(1)}, {matrix_unit(3, 2, 1), q(1)}, {matrix_unit(3, 0, 2), q(1)}});
    auto rep = check_expectation_conjugation(d3, cyc);
    CHECK(rep.standard_holds);
    CHECK_FALSE(rep.printed_holds);
    // A self-adjoint unitary cannot tell the two apart.
    auto d2 = matrix_over_diagonal(2);
    auto rep2 = check_expectation_conjugation(d2, d2.known_unitaries[0]);
    CHECK(rep2.standard_holds);
    CHECK(rep2.printed_holds);
  }

  TEST_CASE("weighted sums") {
    auto single = weighted_sum({matrix_over_diagonal(2)}, {Rational(1)}, SumMode::componentwise);
    CHECK(single.expectation == matrix_over_diagonal(2).expectation);

    auto ds = weighted_sum({matrix_over_scalars(2), group_algebra(FiniteGroup::cyclic(2))},
                           {Rational(1, 2), Rational(1, 2)}, SumMode::componentwise);
    CHECK(ds.validate().ok());
    SVec first_unit = vec({{0, q(1)}, {3, q(1)}});
    CHECK(ds.algebra.tr(first_unit) == q(1, 2));

    auto cs = weighted_sum({group_algebra(FiniteGroup::cyclic(2)), group_algebra(FiniteGroup::cyclic(3))},
                           {Rational(1, 3), Rational(2, 3)}, SumMode::central);
    CHECK(cs.validate().ok());
    CHECK(cs.sub.size() == 1);
    CHECK(cs.algebra.tr(svec_unit(0)) == q(1, 3));
    CHECK_THROWS_AS(weighted_sum({matrix_over_scalars(2)}, {Rational(1, 2)}, SumMode::componentwise), PreconditionError);
    CHECK_THROWS_AS(weighted_sum({matrix_over_diagonal(2), matrix_over_scalars(2)}, {Rational(1, 2), Rational(1, 2)},
                                 SumMode::central),
                    PreconditionError);
  }

  TEST_CASE("compressions") {
    auto d2 = matrix_over_diagonal(2);
    auto full = compression(d2, d2.algebra.unit());
    CHECK(full.ext.dim() == 4);

    auto c11 = compression(d2, svec_unit(0));
    CHECK(c11.ext.dim() == 1);
    CHECK(c11.ext.algebra.tr(c11.ext.algebra.unit()) == q(1));
    CHECK(c11.ext.validate().ok());

    auto s2 = matrix_over_scalars(2);
    SVec p = vec({{0, q(1, 2)}, {1, q(1, 2)}, {2, q(1, 2)}, {3, q(1, 2)}});
    REQUIRE(is_projection(s2.algebra, p));
    auto cp = compression(s2, p);
    CHECK(cp.ext.dim() == 1);
    CHECK(cp.ext.validate().ok());

    CHECK_THROWS_AS(compression(d2, vec({{1, q(1)}})), PreconditionError);
    CHECK_THROWS_AS(compression(d2, p), PreconditionError);  // does not commute with the diagonal
  }

  TEST_CASE("normalizer spans") {
    auto r2 = convolution_algebra(build::pair_relation(FiniteMeasuredSpace::uniform(2)));
    CHECK(normalizer_span(r2, {}).size() == 2);
    CHECK(normalizer_span(r2, r2.known_unitaries).size() == 4);
    auto s3 = group_algebra(FiniteGroup::symmetric3());
    CHECK(normalizer_span(s3, s3.known_unitaries).size() == 6);
    auto n = normalizer_extension(r2, r2.known_unitaries);
    CHECK(n.validate().ok());

    auto m2 = matrix_over_diagonal(2);
    SVec hadamard = vec({{0, q(1)}, {1, q(1)}, {2, q(1)}, {3, q(-1)}});
    CHECK_THROWS_AS(normalizer_span(m2, {hadamard}), PreconditionError);
  }

  TEST_CASE("groupoid morphisms induce morphisms of tracial extensions") {
    auto x = FiniteMeasuredSpace::uniform(3);
    auto r = build::pair_relation(x);
    auto env = enveloping(r);
    CHECK(check_convolution_functor(r, env.groupoid, env.diagonal));
    auto t = build::trivial(x);
    std::vector<Elem> units;
    for (Atom a = 0; a < 3; ++a) units.push_back(r.unit(a));
    CHECK(check_convolution_functor(t, r, units));
    auto p = build::partition_relation(x, {{0, 1}, {2}});
    std::vector<Elem> incl;
    for (Elem a = 0; a < p.size(); ++a) incl.push_back(*r.find(p.label(a)));
    CHECK(check_convolution_functor(p, r, incl));
  }

  TEST_CASE("property: extensions, compressions and traces") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
      auto e = random_extension(rng);
      REQUIRE(e.validate().ok());
      const auto& a = e.algebra;
      // Projections of B' n A: central projections of B and, for each
      // summand, its unit.
      std::vector<SVec> projections = {a.unit()};
      for (const auto& b : e.sub) {
        if (is_projection(a, b) && e.commutes_with_sub(b)) projections.push_back(b);
      }
      for (const auto& p : projections) {
        auto c = compression(e, p);
        CHECK(c.ext.validate().ok());
        Rational trp = a.tr(p).re;
        for (Index k = 0; k < c.ext.dim(); ++k) {
          const SVec& x = c.basis_in_parent[k];
          CHECK(c.ext.algebra.tr(svec_unit(k)) * GScalar(trp) == a.tr(x));
        }
      }
      for (const auto& u : e.known_unitaries) {
        CHECK(is_unitary(a, u));
        CHECK(check_expectation_conjugation(e, u).standard_holds);
      }
    }
  }
}
