#include <random>

#include "doctest.h"
#include "relbetti/complexes.hpp"
#include "relbetti/error.hpp"
#include "support.hpp"

using namespace relbetti;
using namespace rbtest;

namespace {

std::vector<Extension> corpus() {
  return {matrix_over_diagonal(2), matrix_over_scalars(2), group_algebra(FiniteGroup::cyclic(2)),
          group_algebra(FiniteGroup::cyclic(3)), convolution_algebra(partition_21())};
}

// Exact homology dimension from ranks over Q(i), independent of the mod-p path.
size_t exact_homology(const ChainComplex& c, size_t n) {
  size_t out = n == 0 ? 0 : rank(c.d[n]);
  return c.dims[n] - out - rank(c.d[n + 1]);
}

// The augmented complex with C_{-1} placed at degree 0.
ChainComplex shifted(const AugmentedComplex& a) {
  ChainComplex inner = boundary(a.module);
  ChainComplex c;
  c.dims.push_back(a.base_dim);
  c.dims.insert(c.dims.end(), inner.dims.begin(), inner.dims.end());
  c.d.push_back(SparseMatrix(0, a.base_dim));
  c.d.push_back(a.augmentation);
  for (size_t n = 1; n < inner.d.size(); ++n) c.d.push_back(inner.d[n]);
  return c;
}

Index power(Index b, size_t e) {
  Index r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_SUITE("complexes") {
  TEST_CASE("bar and acyclic complexes are contractible") {
    for (const auto& e : corpus()) {
      CAPTURE(e.name);
      for (auto c : {bar_complex(e, 4), acyclic_complex(e, 4)}) {
        CAPTURE(c.module.name);
        CHECK(c.module.validate().ok());
        auto ch = boundary(c.module);
        CHECK(ch.validate().ok());
        CHECK((c.augmentation * ch.d[1]).is_zero());
        CHECK(check_contraction(c).ok());
        auto sh = shifted(c);
        for (size_t n = 1; n <= 3; ++n) {
          auto h = homology(c.module, ch, n);
          CHECK(h.dim == 0);
          CHECK(exact_homology(ch, n) == 0);
        }
        // Exactness at C_0 and surjectivity of the augmentation.
        CHECK(exact_homology(sh, 1) == 0);
        CHECK(exact_homology(sh, 0) == 0);
      }
    }
  }

  TEST_CASE("dimensions of the matrix-over-diagonal complexes") {
    auto e = matrix_over_diagonal(2);
    auto bar = bar_complex(e, 1);
    CHECK(bar.module.dims == std::vector<Index>{8, 16});
    auto hh = hochschild_complex(e, regular_bimodule(e.algebra), 2);
    CHECK(hh.module.dims == std::vector<Index>{2, 4, 8});
    auto z = acyclic_complex(e, 1);
    CHECK(z.base_dim == 2);
    CHECK(z.module.dims == std::vector<Index>{4, 8});
  }

  TEST_CASE("group algebra complexes have the free dimensions") {
    for (const auto& name : {"C2", "C3", "V4"}) {
      auto G = FiniteGroup::named(name);
      auto e = group_algebra(G);
      Index g = Index(G.order());
      auto hh = hochschild_complex(e, regular_bimodule(e.algebra), 3);
      auto bar = bar_complex(e, 2);
      for (size_t n = 0; n <= 2; ++n) {
        CHECK(hh.module.dims[n] == power(g, n + 1));
        CHECK(bar.module.dims[n] == power(g, n + 2));
      }
      CHECK(boundary(hh.module).validate().ok());
    }
  }

  TEST_CASE("Hochschild complexes with random coefficients") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 8; ++trial) {
      auto e = random_extension(rng);
      CAPTURE(e.name);
      BalancedTensor t(e, e);
      auto hc = hochschild_complex(e, t.outer_bimodule(), 3);
      CHECK(hc.module.validate().ok());
      CHECK(boundary(hc.module).validate().ok());
      auto reg = hochschild_complex(e, regular_bimodule(e.algebra), 3);
      CHECK(reg.module.validate().ok());
    }
  }

  TEST_CASE("geometric complexes match their algebraic counterparts") {
    std::vector<FiniteGroupoid> gs = {pair_groupoid(2), pair_groupoid(3), build::from_group(FiniteGroup::cyclic(2)),
                                      swap_action(), partition_21(),
                                      build::trivial(FiniteMeasuredSpace::uniform(3))};
    for (const auto& g : gs) {
      for (auto kind : {SpaceKind::bar, SpaceKind::cyclic, SpaceKind::acyclic}) {
        CAPTURE(to_string(kind));
        auto geo = geometric_complex(g, kind, 3);
        CHECK(geo.validate().ok());
        CHECK(boundary(geo).validate().ok());
        auto cmp = compare_geometric(g, kind, 3);
        CAPTURE(cmp.detail);
        CHECK(cmp.isomorphic);
        CHECK(cmp.dims_geometric == cmp.dims_algebraic);
      }
      auto cl = geometric_complex(g, SpaceKind::classifying, 3);
      CHECK(cl.validate().ok());
      CHECK(boundary(cl).validate().ok());
      CHECK_THROWS_AS(compare_geometric(g, SpaceKind::nerve, 1), PreconditionError);
    }
  }

  TEST_CASE("geometric acyclic dimensions count loops") {
    // pair(n): loops of length k number n^k.
    for (size_t n = 2; n <= 3; ++n) {
      auto z = geometric_complex(pair_groupoid(n), SpaceKind::acyclic, 2);
      for (size_t k = 0; k <= 2; ++k) CHECK(z.dims[k] == power(Index(n), k + 2));
      auto e = geometric_complex(pair_groupoid(n), SpaceKind::classifying, 2);
      for (size_t k = 0; k <= 2; ++k) CHECK(e.dims[k] == Index(n) * power(Index(n), k + 1));
    }
  }

  TEST_CASE("acyclic complex equals the Hochschild complex with coefficients A (x)_B A") {
    for (const auto& e : corpus()) {
      CAPTURE(e.name);
      CHECK(acyclic_matches_shifted_hochschild(e, 3));
    }
  }

  TEST_CASE("theta is a face-commuting equivariant bijection") {
    std::vector<FiniteGroupoid> gs = {pair_groupoid(2), build::from_group(FiniteGroup::cyclic(2)), pair_groupoid(3),
                                      swap_action(), partition_21(), build::from_group(FiniteGroup::symmetric3())};
    for (const auto& g : gs) {
      auto r = theta_iso(g, 3);
      CAPTURE(r.witness);
      CHECK(r.ok());
      auto z = geometric_complex(g, SpaceKind::acyclic, 3);
      CHECK(r.dims == z.dims);
    }
  }

  TEST_CASE("homology with an action: two code paths") {
    auto e = matrix_over_diagonal(2);
    auto hc = hochschild_complex(e, regular_bimodule(e.algebra), 3);
    auto ch = boundary(hc.module);
    // C_0 = M2 / [diag, M2] is the diagonal; H_0 = M2 / [M2, M2] is the trace.
    CHECK(ch.dims[0] == 2);
    auto h0 = homology(hc.module, ch, 0);
    CHECK(h0.dim == 1);
    CHECK(exact_homology(ch, 0) == 1);
    for (size_t n = 1; n <= 2; ++n) CHECK(homology(hc.module, ch, n).dim == exact_homology(ch, n));
    CHECK_THROWS_AS(homology(hc.module, ch, 3), PreconditionError);
  }

  TEST_CASE("homology modules of the L2 complex") {
    auto e = matrix_over_diagonal(2);
    auto l2 = l2_complex(e, 2);
    CHECK(l2.complex.module.validate().ok());
    auto ch = boundary(l2.complex.module);
    auto h0 = homology(l2.complex.module, ch, 0);
    REQUIRE(h0.has_module);
    CHECK(h0.module.validate(l2.square.algebra).ok());
    CHECK(homology(l2.complex.module, ch, 1).dim == 0);

    // Degree 0 inside A (x)_B A: the complement of boundaries and commutators.
    std::vector<SVec> image = l2.complex.boundary_into_m.columns();
    const auto& acts = l2.complex.tower->base();
    for (const auto& b : e.sub)
      for (Index x = 0; x < acts.dim; ++x)
        image.push_back(svec_sub(acts.act_left(b, svec_unit(x)), acts.act_right(svec_unit(x), b)));
    auto sub = orthogonal_complement_module(l2.m_form, image, l2.square.basis);
    CHECK(sub.validate(l2.square.algebra).ok());
    CHECK(sub.dim == h0.dim);
  }

  TEST_CASE("module helpers") {
    auto f = matrix_algebra(2);
    auto r = regular_module(f);
    CHECK(r.validate(f).ok());
    auto s = direct_sum(r, r);
    CHECK(s.dim == 8);
    CHECK(s.validate(f).ok());
    FiniteModule bad = r;
    bad.action[0] = SparseMatrix::identity(4);
    CHECK_FALSE(bad.validate(f).ok());
  }
}
