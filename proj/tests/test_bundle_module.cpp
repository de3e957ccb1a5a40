#include <random>

#include "doctest.h"
#include "relbetti/bundle_module.hpp"
#include "relbetti/error.hpp"

using namespace relbetti;

namespace {

GScalar q(int64_t n, int64_t d = 1) { return GScalar(Rational(n, d)); }

FiniteGroupoid random_relation(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n(1, 3), coin(0, 1);
  auto x = FiniteMeasuredSpace::uniform(size_t(n(rng)));
  if (coin(rng)) return build::pair_relation(x);
  std::vector<std::vector<Atom>> blocks;
  for (Atom a = 0; a < x.size(); ++a) {
    if (blocks.empty() || coin(rng)) blocks.emplace_back();
    blocks.back().push_back(a);
  }
  return build::partition_relation(x, blocks);
}

}  // namespace

TEST_SUITE("bundle_modules") {
  TEST_CASE("c_module examples") {
    auto x = FiniteMeasuredSpace::uniform(3);
    auto m = c_module(identity_bundle(x));
    CHECK(m.dim() == 3);
    CHECK(m.scalar_gram("id") == GMatrix::identity(3).scaled(q(1, 3)));

    auto r2 = build::pair_relation(FiniteMeasuredSpace::uniform(2));
    auto cr = c_module(groupoid_bundle(r2));
    CHECK(cr.dim() == 4);
    Elem a = *r2.find("(x0,x1)");
    // Fiber sum along s: delta_(x,y) * delta_(x,y) = delta_y.
    auto ip = cr.inner("s", svec_unit(a), svec_unit(a));
    CHECK(ip[r2.s(a)] == q(1));
    CHECK(ip[r2.t(a)] == q(0));

    MultiBundle empty{x, 0, {{"m", {}}}};
    CHECK(c_module(empty).dim() == 0);
  }

  TEST_CASE("pushforward") {
    auto r2 = build::pair_relation(FiniteMeasuredSpace::uniform(2));
    auto u = groupoid_bundle(r2);
    std::vector<Index> id(u.size);
    for (Index k = 0; k < u.size; ++k) id[k] = k;
    CHECK(pushforward(u, u, id).matrix == SparseMatrix::identity(4));

    auto x = identity_bundle(r2.base());
    std::vector<Index> s(u.size);
    for (Index k = 0; k < u.size; ++k) s[k] = r2.s(k);
    auto collapse = pushforward(u, x, s);
    for (Index k = 0; k < 4; ++k) CHECK(collapse.matrix.col(k).size() == 1);

    // Two-step collapse: nerve degree 2 -> G via the second entry -> X via s.
    auto n2 = geometric_space(r2, SpaceKind::nerve, 2);
    std::vector<Index> second(n2.tuples.size()), direct(n2.tuples.size());
    for (Index k = 0; k < n2.tuples.size(); ++k) {
      second[k] = n2.tuples[k][1];
      direct[k] = r2.s(n2.tuples[k][1]);
    }
    MultiBundle gs = u;
    gs.maps = {{"s", u.map("s")}};
    MultiBundle ns = n2.bundle;
    ns.maps = {{"s", n2.bundle.map("s")}};
    auto step1 = pushforward(ns, gs, second);
    auto step2 = pushforward(gs, x, s);
    auto both = pushforward(ns, x, direct);
    CHECK(step2.matrix * step1.matrix == both.matrix);

    // Not a morphism: the codomain map does not pull back.
    std::vector<Index> swap = {1, 0, 3, 2};
    CHECK_THROWS_AS(pushforward(u, u, swap), PreconditionError);
  }

  TEST_CASE("pushforward of a bijective morphism is inverted by the inverse") {
    auto r3 = build::pair_relation(FiniteMeasuredSpace::uniform(3));
    auto u = groupoid_bundle(r3);
    // Inversion swaps s and t, so relabel the codomain maps.
    MultiBundle v = u;
    v.maps = {{"s", u.map("t")}, {"t", u.map("s")}};
    std::vector<Index> inv(u.size);
    for (Elem a = 0; a < r3.size(); ++a) inv[a] = r3.inv(a);
    auto f = pushforward(u, v, inv);
    auto g = pushforward(v, u, inv);
    CHECK(g.matrix * f.matrix == SparseMatrix::identity(9));
  }

  TEST_CASE("star_iso") {
    auto r2 = build::pair_relation(FiniteMeasuredSpace::uniform(2));
    auto u = groupoid_bundle(r2);
    auto st = star_iso(u, "s", u, "t");
    CHECK(st.quotient.dim() == 8);
    CHECK(st.quotient.dim() == geometric_space(r2, SpaceKind::nerve, 2).tuples.size());
    // Basis images: delta_u (x) delta_v -> delta_(u,v) on composable pairs.
    for (Index k = 0; k < st.quotient.dim(); ++k) {
      Index c = st.quotient.representative(k);
      auto [a, b] = st.product.pairs[st.iso.col(k)[0].i];
      CHECK(c == a * 4 + b);
      CHECK(r2.s(a) == r2.t(b));
    }
    auto x = identity_bundle(r2.base());
    CHECK(star_iso(u, "s", x, "id").quotient.dim() == 4);
  }

  TEST_CASE("invariants and coinvariants") {
    auto r2 = build::pair_relation(FiniteMeasuredSpace::uniform(2));
    auto u = groupoid_bundle(r2);
    auto same = invariants_coinvariants(u, "s", "s");
    CHECK(same.invariants.size() == 4);
    CHECK(same.psi == GMatrix::identity(4));
    auto st = invariants_coinvariants(u, "s", "t");
    CHECK(st.invariants.size() == 2);

    auto s3 = build::from_group(FiniteGroup::symmetric3());
    auto cyc0 = geometric_space(s3, SpaceKind::cyclic, 0).bundle;
    cyc0.maps.push_back({"t2", cyc0.map("t")});
    CHECK(invariants_coinvariants(cyc0, "t", "t2").invariants.size() == 6);
  }

  TEST_CASE("property: star products, invariants and decompositions") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 15; ++trial) {
      auto g = random_relation(rng);
      auto h = random_relation(rng);
      if (g.atoms() != h.atoms()) continue;
      auto u = groupoid_bundle(g);
      auto v = groupoid_bundle(build::partition_relation(g.base(), {[&] {
                                                            std::vector<Atom> all;
                                                            for (Atom a = 0; a < g.atoms(); ++a) all.push_back(a);
                                                            return all;
                                                          }()}));
      for (const char* pi : {"s", "t"})
        for (const char* sg : {"s", "t"}) {
          auto st = star_iso(u, pi, v, sg);
          CHECK(st.target_gram == st.source_gram);
        }
      auto ic = invariants_coinvariants(u, "s", "t");
      CHECK(ic.invariants.size() == g.atoms());
      auto n2 = geometric_space(g, SpaceKind::nerve, 2).bundle;
      auto parts = decomposition_witness(n2);
      size_t total = 0;
      for (const auto& p : parts) total += p.size();
      CHECK(total == n2.size);
    }
  }
}
