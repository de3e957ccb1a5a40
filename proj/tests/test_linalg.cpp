#include <random>

#include "doctest.h"
#include "relbetti/error.hpp"
#include "relbetti/linalg.hpp"
#include "relbetti/modrank.hpp"

using namespace relbetti;

namespace {

GScalar q(int64_t n, int64_t d = 1) { return GScalar(Rational(n, d)); }

GMatrix random_matrix(std::mt19937_64& rng, Index r, Index c, int density_pct, bool complex) {
  GMatrix m(r, c);
  std::uniform_int_distribution<int> val(-3, 3), pct(0, 99);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) {
      if (pct(rng) >= density_pct) continue;
      m(i, j) = complex ? GScalar(Rational(val(rng)), Rational(val(rng))) : q(val(rng), 1 + (pct(rng) % 3));
    }
  }
  return m;
}

// Low-rank product of two random factors.
GMatrix random_low_rank(std::mt19937_64& rng, Index r, Index c, Index k) {
  return random_matrix(rng, r, k, 70, true) * random_matrix(rng, k, c, 70, true);
}

// Fraction-free Bareiss rank for integer matrices; an oracle independent of
// the library's field elimination.
size_t bareiss_rank(std::vector<std::vector<mpz_class>> a) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0, rank = 0;
  mpz_class prev = 1;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (size_t i = rank + 1; i < rows; ++i) {
      for (size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_SUITE("exact_scalars") {
  TEST_CASE("rational arithmetic stays canonical across the machine-word boundary") {
    Rational big(int64_t(1) << 62);
    Rational sq = big * big;
    CHECK_FALSE(sq.is_small());
    CHECK(sq.to_string() == "21267647932558653966460912964485513216");
    Rational back = sq / big;
    CHECK(back.is_small());
    CHECK(back == big);
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational::parse("-10/4") == Rational(-5, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
  }

  TEST_CASE("gaussian field operations") {
    GScalar z(Rational(1, 2), Rational(-3, 4));
    GScalar w(Rational(2), Rational(5));
    CHECK((z * w) / w == z);
    CHECK(z.conj().conj() == z);
    CHECK((z * z.conj()).im.is_zero());
    CHECK((z * z.conj()).re == z.norm2());
    CHECK(GScalar::i() * GScalar::i() == GScalar(-1));
    CHECK(GScalar::parse("1/2-3/4i") == z);
    CHECK(GScalar::parse("-i") == -GScalar::i());
    CHECK(GScalar::parse("7") == GScalar(7));
    CHECK(z.to_string() == "1/2-3/4i");
    CHECK(GScalar::parse(z.to_string()) == z);
  }

  TEST_CASE("conjugation is a field automorphism on random samples") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> v(-9, 9), d(1, 7);
    for (int t = 0; t < 200; ++t) {
      GScalar a(Rational(v(rng), d(rng)), Rational(v(rng), d(rng)));
      GScalar b(Rational(v(rng), d(rng)), Rational(v(rng), d(rng)));
      CHECK((a * b).conj() == a.conj() * b.conj());
      CHECK((a + b).conj() == a.conj() + b.conj());
      CHECK(a * (b + GScalar(1)) == a * b + a);
      if (!b.is_zero()) CHECK((a / b) * b == a);
    }
  }
}

TEST_SUITE("exact_linalg") {
  TEST_CASE("rank and kernel on small examples") {
    CHECK(rank(GMatrix(3, 3)) == 0);
    CHECK(rank(GMatrix::identity(3)) == 3);
    CHECK(kernel_basis(GMatrix::identity(3)).cols() == 0);
    GMatrix row = GMatrix::from_rows({{q(1), q(1)}});
    CHECK(rank(row) == 1);
    GMatrix k = kernel_basis(row);
    REQUIRE(k.cols() == 1);
    CHECK(k(0, 0) == -k(1, 0));
    CHECK((row * k).is_zero());
  }

  TEST_CASE("rank matches an independent fraction-free oracle") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> val(-4, 4), dim(1, 9);
    for (int t = 0; t < 60; ++t) {
      Index r = Index(dim(rng)), c = Index(dim(rng));
      std::vector<std::vector<mpz_class>> z(r, std::vector<mpz_class>(c));
      GMatrix m(r, c);
      // Make some rows linear combinations of others.
      for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < c; ++j) {
          int x = (i > 0 && t % 3 == 0) ? 0 : val(rng);
          z[i][j] = x;
          m(i, j) = q(x);
        }
        if (i > 1 && t % 3 == 0) {
          for (Index j = 0; j < c; ++j) {
            z[i][j] = z[0][j] * 2 - z[1][j];
            m(i, j) = GScalar(Rational(z[i][j].get_si()));
          }
        }
      }
      CHECK(rank(m) == bareiss_rank(z));
    }
  }

  TEST_CASE("rank-nullity and adjoint invariance on random gaussian matrices") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
      Index r = 1 + Index(rng() % 8), c = 1 + Index(rng() % 8), k = 1 + Index(rng() % 4);
      GMatrix m = (t % 2) ? random_low_rank(rng, r, c, k) : random_matrix(rng, r, c, 40, true);
      size_t rk = rank(m);
      GMatrix ker = kernel_basis(m);
      CHECK(rk + ker.cols() == c);
      CHECK((m * ker).is_zero());
      CHECK(rank(ker) == ker.cols());
      CHECK(rank(m.adjoint()) == rk);
      if (t % 2) CHECK(rk <= k);
    }
  }

  TEST_CASE("modular rank is a lower bound and agrees on random inputs") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
      Index r = 1 + Index(rng() % 12), c = 1 + Index(rng() % 12), k = 1 + Index(rng() % 5);
      GMatrix m = random_low_rank(rng, r, c, k);
      SparseMatrix s = SparseMatrix::from_dense(m);
      auto rp = rank_mod_p(s);
      REQUIRE(rp.has_value());
      CHECK(*rp <= rank(m));
      CHECK(*rp == rank(m));
    }
    // A value that vanishes mod p is detected by the lower-bound semantics.
    GMatrix m = GMatrix::from_rows({{GScalar(Rational(int64_t(modp::kPrime)))}});
    CHECK(*rank_mod_p(SparseMatrix::from_dense(m)) == 0);
    CHECK(rank(m) == 1);
    GScalar i = GScalar::i();
    CHECK(*modp::reduce(i * i) == modp::kPrime - 1);
    uint32_t r = modp::sqrt_minus_one();
    CHECK(uint64_t(r) * r % modp::kPrime == modp::kPrime - 1);
  }

  TEST_CASE("block split finds the connected components") {
    SparseMatrix m = SparseMatrix::from_dense(GMatrix::from_rows(
        {{q(1), q(0), q(2)}, {q(0), q(3), q(0)}, {q(4), q(0), q(0)}}));
    BlockSplit b = split_blocks(m);
    REQUIRE(b.row_blocks.size() == 2);
    CHECK(b.row_blocks[0] == std::vector<Index>{0, 2});
    CHECK(b.col_blocks[0] == std::vector<Index>{0, 2});
    CHECK(b.row_blocks[1] == std::vector<Index>{1});
    SparseMatrix blk = extract_block(m, b.row_blocks[0], b.col_blocks[0]);
    CHECK(blk.to_dense() == GMatrix::from_rows({{q(1), q(2)}, {q(4), q(0)}}));
  }

  TEST_CASE("echelon basis gives canonical reduced rows and coordinates") {
    EchelonBasis eb(4);
    CHECK(eb.insert(SVec{{0, q(2)}, {1, q(2)}}));
    CHECK(eb.insert(SVec{{1, q(1)}, {3, q(1)}}));
    CHECK_FALSE(eb.insert(SVec{{0, q(1)}, {1, q(2)}, {3, q(1)}}));
    CHECK(eb.dim() == 2);
    SVec v{{0, q(3)}, {1, q(5)}, {3, q(2)}};
    CHECK(eb.contains(v));
    SVec c = eb.coordinates(v);
    std::vector<std::pair<GScalar, const SVec*>> terms;
    for (auto& e : c) terms.emplace_back(e.v, &eb.rows()[e.i]);
    CHECK(svec_combine(terms) == v);
    QuotientMap qm(eb);
    CHECK(qm.dim() == 2);
    CHECK(qm.kept() == std::vector<Index>{2, 3});
  }

  TEST_CASE("radical of a form") {
    HermitianForm pd(GMatrix::identity(3));
    CHECK(radical(pd).cols() == 0);
    CHECK(pd.is_positive_definite());
    HermitianForm r1(GMatrix::from_rows({{q(1), q(1)}, {q(1), q(1)}}));
    GMatrix rad = radical(r1);
    CHECK(rad.cols() == 1);
    CHECK((r1.gram() * rad).is_zero());
    CHECK(r1.is_positive_semidefinite());
    CHECK_FALSE(r1.is_positive_definite());
    HermitianForm indef(GMatrix::from_rows({{q(0), q(1)}, {q(1), q(0)}}));
    CHECK_FALSE(indef.is_positive_semidefinite());
    HermitianForm neg(GMatrix::from_rows({{q(1), q(0)}, {q(0), q(-1)}}));
    CHECK_FALSE(neg.is_positive_semidefinite());
  }

  TEST_CASE("orthogonal projection") {
    HermitianForm f(GMatrix::identity(2));
    GMatrix s = GMatrix::from_rows({{q(1)}, {q(1)}});
    GMatrix p = orth_projection(f, s);
    CHECK(p == GMatrix::from_rows({{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}}));
    CHECK(orth_projection(f, GMatrix::identity(2)) == GMatrix::identity(2));
    HermitianForm deg(GMatrix::from_rows({{q(1), q(0)}, {q(0), q(0)}}));
    CHECK_THROWS_AS(orth_projection(deg, GMatrix::from_rows({{q(0)}, {q(1)}})), PreconditionError);
  }

  TEST_CASE("projections are idempotent and self-adjoint for random positive forms") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 25; ++t) {
      Index n = 2 + Index(rng() % 5), k = 1 + Index(rng() % (n - 1));
      GMatrix a = random_matrix(rng, n, n, 80, true) + GMatrix::identity(n).scaled(GScalar(7));
      HermitianForm f(a.adjoint() * a);
      GMatrix s = random_matrix(rng, n, k, 90, true);
      if (rank(s) != k) continue;
      GMatrix p = orth_projection(f, s);
      CHECK(p * p == p);
      CHECK(f.gram() * p == p.adjoint() * f.gram());
      CHECK(rank(p) == k);
      CHECK(p * s == s);
    }
  }

  TEST_CASE("inverse and solve") {
    GMatrix m = GMatrix::from_rows({{q(2), GScalar::i()}, {q(1), q(3)}});
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(m * *inv == GMatrix::identity(2));
    CHECK_FALSE(inverse(GMatrix::from_rows({{q(1), q(2)}, {q(2), q(4)}})));
    auto x = solve(m, SVec{{0, q(1)}});
    REQUIRE(x);
    CHECK(dense_apply(m, *x) == SVec{{0, q(1)}});
    CHECK_FALSE(solve(GMatrix::from_rows({{q(1), q(1)}, {q(1), q(1)}}), SVec{{0, q(1)}}));
  }
}
