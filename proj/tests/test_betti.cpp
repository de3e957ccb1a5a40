#include <random>

#include "doctest.h"
#include "relbetti/betti.hpp"
#include "relbetti/error.hpp"
#include "support.hpp"

using namespace relbetti;
using namespace rbtest;

namespace {

// C G acting on C through the augmentation.
FiniteModule trivial_module(const TracialStarAlgebra& f) {
  FiniteModule m;
  m.dim = 1;
  for (Index k = 0; k < f.dim(); ++k) m.action.push_back(SparseMatrix::from_columns(1, {svec_unit(0)}));
  return m;
}

// M_n acting on C^n.
FiniteModule column_module(Index n) {
  FiniteModule m;
  m.dim = n;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      std::vector<SVec> cols(n);
      cols[j] = svec_unit(i);
      m.action.push_back(SparseMatrix::from_columns(n, std::move(cols)));
    }
  return m;
}

// Oracle for the trivial module: the trace of the averaging idempotent.
Rational averaging_trace(const FiniteGroup& g) {
  auto e = group_algebra(g);
  SVec avg;
  for (Index k = 0; k < g.order(); ++k) avg.push_back({k, GScalar(Rational(1, int64_t(g.order())))});
  CHECK(e.algebra.mul(avg, avg) == avg);
  return e.algebra.tr(avg).re;
}

SparseMatrix random_invertible(std::mt19937_64& rng, Index n) {
  std::uniform_int_distribution<int> d(-2, 2);
  for (;;) {
    GMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = GScalar(d(rng));
    if (inverse(m)) return SparseMatrix::from_dense(m);
  }
}

FiniteModule conjugate(const FiniteModule& m, const SparseMatrix& p) {
  SparseMatrix pinv = SparseMatrix::from_dense(*inverse(p.to_dense()));
  FiniteModule out;
  out.dim = m.dim;
  for (const auto& a : m.action) out.action.push_back(p * a * pinv);
  return out;
}

void check_table(const BettiTable& t, std::vector<Rational> expected) {
  CHECK(t.betti == expected);
}

std::vector<Rational> beta0(Rational b, size_t n) {
  std::vector<Rational> v(n, Rational(0));
  v[0] = b;
  return v;
}

}  // namespace

TEST_SUITE("dimension_betti") {
  TEST_CASE("free modules have integer dimension") {
    for (const auto& f : {matrix_algebra(2), group_algebra(FiniteGroup::symmetric3()).algebra,
                          convolution_algebra(partition_21()).algebra}) {
      FiniteModule m = regular_module(f);
      CHECK(vn_dimension(f, m) == Rational(1));
      FiniteModule sum = m;
      for (int k = 2; k <= 3; ++k) {
        sum = direct_sum(sum, m);
        CHECK(vn_dimension(f, sum) == Rational(k));
      }
    }
  }

  TEST_CASE("trivial and column modules") {
    for (const auto& name : FiniteGroup::small_group_names()) {
      auto g = FiniteGroup::named(name);
      auto f = group_algebra(g).algebra;
      Rational d = vn_dimension(f, trivial_module(f));
      CHECK(d == averaging_trace(g));
      CHECK(d == Rational(1, int64_t(g.order())));
    }
    for (Index n = 1; n <= 3; ++n) {
      auto f = matrix_algebra(n);
      CHECK(vn_dimension(f, column_module(n)) == f.tr(svec_unit(matrix_unit(n, 0, 0))).re);
      CHECK(vn_dimension(f, column_module(n)) == Rational(1, n));
    }
  }

  TEST_CASE("dimension is additive, generator independent and isomorphism invariant") {
    std::mt19937_64 rng(11);
    auto f = group_algebra(FiniteGroup::symmetric3()).algebra;
    auto triv = trivial_module(f);
    auto reg = regular_module(f);
    auto sum = direct_sum(direct_sum(triv, reg), triv);
    CHECK(vn_dimension(f, sum) == Rational(1) + Rational(2, 6));

    auto m2 = matrix_algebra(2);
    auto col = direct_sum(column_module(2), regular_module(m2));
    for (int trial = 0; trial < 5; ++trial) {
      // Permuted and duplicated generators.
      std::vector<SVec> gens;
      for (Index j = 0; j < col.dim; ++j) gens.push_back(svec_unit(j));
      std::shuffle(gens.begin(), gens.end(), rng);
      gens.push_back(svec_add(gens[0], gens[1]));
      gens.push_back(gens[2]);
      CHECK(vn_dimension(m2, col, &gens) == Rational(3, 2));
      CHECK(vn_dimension(m2, conjugate(col, random_invertible(rng, col.dim))) == Rational(3, 2));
    }
    std::vector<SVec> too_few{svec_unit(0)};
    CHECK_THROWS_AS(vn_dimension(m2, col, &too_few), PreconditionError);
  }

  TEST_CASE("group algebras over the scalars") {
    for (const auto& name : {"C2", "C3", "S3"}) {
      auto g = FiniteGroup::named(name);
      auto t = betti_hochschild(group_algebra(g), 4);
      check_table(t, beta0(Rational(1, int64_t(g.order())), 4));
      for (size_t n = 1; n < 4; ++n) CHECK(t.homology_dims[n] == 0);
      CHECK(t.betti[0] == averaging_trace(g));
    }
  }

  TEST_CASE("matrix algebras over the scalars") {
    check_table(betti_hochschild(matrix_over_scalars(2), 4), beta0(Rational(1, 4), 4));
    check_table(betti_hochschild(matrix_over_scalars(3), 1), beta0(Rational(1, 9), 1));
    check_table(betti_hochschild(matrix_over_diagonal(2), 3), beta0(Rational(1, 2), 3));
    check_table(betti_hochschild(full_extension(matrix_algebra(2)), 2), beta0(Rational(1), 2));
  }

  TEST_CASE("Sauer pipeline examples") {
    for (const auto& name : {"C2", "C3", "S3"}) {
      auto g = FiniteGroup::named(name);
      check_table(betti_sauer(build::from_group(g), 4), beta0(Rational(1, int64_t(g.order())), 4));
    }
    for (size_t n = 2; n <= 3; ++n) check_table(betti_sauer(pair_groupoid(n), 4), beta0(Rational(1, int64_t(n)), 4));
    check_table(betti_sauer(build::trivial(FiniteMeasuredSpace::uniform(3)), 4), beta0(Rational(1), 4));
  }

  TEST_CASE("Sauer and Hochschild pipelines agree on groupoids") {
    std::vector<std::pair<FiniteGroupoid, Rational>> cases = {
        {build::trivial(FiniteMeasuredSpace::uniform(3)), Rational(1)},
        {build::from_group(FiniteGroup::cyclic(2)), Rational(1, 2)},
        {pair_groupoid(2), Rational(1, 2)},
        {pair_groupoid(3), Rational(1, 3)},
        {swap_action(), Rational(1, 2)},
        {partition_21(), Rational(2, 3)}};
    for (const auto& [g, b0] : cases) {
      auto r = verify_groupoid_equality(g, 4);
      CHECK(r.equal());
      CHECK(r.lhs == beta0(b0, 4));
    }
  }

  TEST_CASE("compression") {
    auto m2 = matrix_over_scalars(2);
    SVec p = svec_unit(matrix_unit(2, 0, 0));
    auto r = verify_compression(m2, p, 2);
    CHECK(r.equal());
    CHECK(r.lhs == beta0(Rational(1), 2));

    auto md = matrix_over_diagonal(2);
    auto rd = verify_compression(md, p, 2);
    CHECK(rd.equal());
    CHECK(rd.lhs == beta0(Rational(1), 2));
    CHECK(betti_hochschild(md, 1).betti[0] == Rational(1, 2));

    // p commuting with B but outside its center, in a non-factor.
    auto sum = weighted_sum({matrix_over_scalars(2), matrix_over_scalars(2)}, {Rational(1, 2), Rational(1, 2)},
                            SumMode::componentwise);
    SVec q = svec_unit(matrix_unit(2, 0, 0));
    CHECK_THROWS_AS(verify_compression(sum, q, 1), PreconditionError);
    auto ext = verify_compression(sum, q, 1, true);
    CHECK(ext.details.back().second.find("extended") != std::string::npos);
    CHECK_THROWS_AS(verify_compression(m2, svec_unit(matrix_unit(2, 0, 1)), 1), PreconditionError);
  }

  TEST_CASE("directed and central sums") {
    auto d = verify_directed_sum({matrix_over_diagonal(2), group_algebra(FiniteGroup::cyclic(2))},
                                 {Rational(1, 2), Rational(1, 2)}, 2);
    CHECK(d.equal());
    CHECK(d.lhs == beta0(Rational(1, 2), 2));
    auto c = verify_central_quadratic({group_algebra(FiniteGroup::cyclic(2)), group_algebra(FiniteGroup::cyclic(3))},
                                      {Rational(1, 2), Rational(1, 2)}, 2);
    CHECK(c.equal());
    CHECK(c.lhs == beta0(Rational(5, 24), 2));
  }

  TEST_CASE("residual Betti numbers") {
    auto r = verify_residual(pair_groupoid(2), nullptr, 3);
    CHECK(r.equal());
    CHECK(r.lhs == beta0(Rational(1, 2), 3));
    // A coboundary twist on three points.
    auto r3 = pair_groupoid(3);
    auto sigma = coboundary(r3, {{{0, 1}, q(-1)}, {{1, 0}, q(-1)}});
    auto t = verify_residual(r3, &sigma, 2);
    CHECK(t.equal());
    CHECK(t.lhs == beta0(Rational(1, 3), 2));
    // B = A: nothing beyond B.
    auto full = full_extension(matrix_algebra(2));
    CHECK(residual_betti(full, {}, 2).betti == betti_hochschild(full, 2).betti);
  }

  TEST_CASE("split injections do not change the dimension of homology") {
    auto g = build::from_group(FiniteGroup::cyclic(2));
    auto f = convolution_algebra(g).algebra;
    auto p = geometric_complex(g, SpaceKind::classifying, 3);
    auto c = boundary(p);
    auto reg = regular_module(f);
    // Add F --id--> F in degrees 1 -> 0.
    PresimplicialModule q;
    q.dims = p.dims;
    q.action = p.action;
    ChainComplex c2 = c;
    Index x = reg.dim;
    for (size_t n : {0, 1}) {
      q.dims[n] += x;
      c2.dims[n] += x;
      for (size_t k = 0; k < f.dim(); ++k) {
        auto a = p.action[n][k].to_dense();
        GMatrix big(q.dims[n], q.dims[n]);
        for (Index i = 0; i < a.rows(); ++i)
          for (Index j = 0; j < a.cols(); ++j) big(i, j) = a(i, j);
        auto r = reg.action[k].to_dense();
        for (Index i = 0; i < x; ++i)
          for (Index j = 0; j < x; ++j) big(a.rows() + i, a.cols() + j) = r(i, j);
        q.action[n][k] = SparseMatrix::from_dense(big);
      }
    }
    auto pad = [&](const SparseMatrix& m, Index rows, Index extra_cols, bool id) {
      std::vector<SVec> cols = m.columns();
      for (Index j = 0; j < extra_cols; ++j) cols.push_back(id ? svec_unit(m.rows() + j) : SVec{});
      return SparseMatrix::from_columns(rows, std::move(cols));
    };
    c2.d[0] = SparseMatrix(0, c2.dims[0]);
    c2.d[1] = pad(c.d[1], c2.dims[0], x, true);
    {
      // d_2 gains zero rows.
      std::vector<SVec> cols = c.d[2].columns();
      c2.d[2] = SparseMatrix::from_columns(c2.dims[1], std::move(cols));
    }
    CHECK(c2.validate().ok());
    for (size_t n = 0; n <= 1; ++n) {
      auto h1 = homology(p, c, n);
      auto h2 = homology(q, c2, n);
      CHECK(vn_dimension(f, h1.module) == vn_dimension(f, h2.module));
    }
  }
}
