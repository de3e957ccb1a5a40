#include "relbetti/groupoid.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>

#include "relbetti/error.hpp"

namespace relbetti {

// ------------------------------------------------------------ spaces

FiniteMeasuredSpace FiniteMeasuredSpace::uniform(size_t n) {
  FiniteMeasuredSpace x;
  for (size_t k = 0; k < n; ++k) {
    x.labels.push_back("x" + std::to_string(k));
    x.weights.emplace_back(1, int64_t(n));
  }
  return x;
}

std::optional<Atom> FiniteMeasuredSpace::find(const std::string& label) const {
  for (Atom k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return k;
  }
  return std::nullopt;
}

// ------------------------------------------------------------ groups

uint32_t FiniteGroup::identity() const {
  for (uint32_t e = 0; e < order(); ++e) {
    bool ok = true;
    for (uint32_t g = 0; g < order() && ok; ++g) ok = table[e][g] == g && table[g][e] == g;
    if (ok) return e;
  }
  throw PreconditionError("group table has no identity");
}

uint32_t FiniteGroup::inverse(uint32_t g) const {
  uint32_t e = identity();
  for (uint32_t h = 0; h < order(); ++h) {
    if (table[g][h] == e) return h;
  }
  throw PreconditionError("group element without inverse", {labels[g]});
}

ValidationReport FiniteGroup::validate() const {
  ValidationReport r;
  size_t n = order();
  for (const auto& row : table) {
    if (row.size() != n) {
      r.violations.push_back({"square table", "row of length " + std::to_string(row.size())});
      return r;
    }
    for (uint32_t v : row) {
      if (v >= n) {
        r.violations.push_back({"closure", "entry " + std::to_string(v)});
        return r;
      }
    }
  }
  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = 0; b < n; ++b) {
      for (uint32_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          r.violations.push_back({"associativity", labels[a] + "," + labels[b] + "," + labels[c]});
          return r;
        }
      }
    }
  }
  try {
    identity();
    for (uint32_t g = 0; g < n; ++g) inverse(g);
  } catch (const PreconditionError& e) {
    r.violations.push_back({"identity and inverses", e.what()});
  }
  return r;
}

size_t FiniteGroup::conjugacy_classes() const {
  std::vector<bool> seen(order(), false);
  size_t classes = 0;
  for (uint32_t g = 0; g < order(); ++g) {
    if (seen[g]) continue;
    ++classes;
    for (uint32_t h = 0; h < order(); ++h) seen[mul(mul(h, g), inverse(h))] = true;
  }
  return classes;
}

FiniteGroup FiniteGroup::cyclic(uint32_t n) {
  FiniteGroup g;
  g.table.assign(n, std::vector<uint32_t>(n));
  for (uint32_t a = 0; a < n; ++a) {
    g.labels.push_back(a == 0 ? "e" : "g" + std::to_string(a));
    for (uint32_t b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
  }
  return g;
}

FiniteGroup FiniteGroup::klein() {
  FiniteGroup g;
  g.labels = {"e", "a", "b", "ab"};
  g.table.assign(4, std::vector<uint32_t>(4));
  for (uint32_t a = 0; a < 4; ++a) {
    for (uint32_t b = 0; b < 4; ++b) g.table[a][b] = a ^ b;
  }
  return g;
}

FiniteGroup FiniteGroup::symmetric3() {
  // Permutations of {0,1,2} in lexicographic order; product is composition
  // (a*b)(x) = a(b(x)).
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  FiniteGroup g;
  for (const auto& q : perms) g.labels.push_back("[" + std::to_string(q[0]) + std::to_string(q[1]) + std::to_string(q[2]) + "]");
  g.table.assign(6, std::vector<uint32_t>(6));
  for (uint32_t a = 0; a < 6; ++a) {
    for (uint32_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[size_t(x)] = perms[a][size_t(perms[b][size_t(x)])];
      g.table[a][b] = uint32_t(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return g;
}

FiniteGroup FiniteGroup::named(const std::string& name) {
  if (name == "V4") return klein();
  if (name == "S3") return symmetric3();
  if (name.size() >= 2 && name[0] == 'C') {
    int n = std::stoi(name.substr(1));
    if (n >= 1 && n <= 64) return cyclic(uint32_t(n));
  }
  throw ParseError("unknown group name '" + name + "'");
}

std::vector<std::string> FiniteGroup::small_group_names() { return {"C1", "C2", "C3", "C4", "V4", "C5", "C6", "S3"}; }

// ------------------------------------------------------------ groupoids

FiniteGroupoid::FiniteGroupoid(FiniteMeasuredSpace base, std::vector<std::string> labels, std::vector<Atom> source,
                               std::vector<Atom> target, std::vector<Elem> inverse, std::vector<Elem> compose)
    : base_(std::move(base)),
      labels_(std::move(labels)),
      src_(std::move(source)),
      tgt_(std::move(target)),
      inv_(std::move(inverse)),
      comp_(std::move(compose)) {
  size_t n = labels_.size();
  if (src_.size() != n || tgt_.size() != n || inv_.size() != n || comp_.size() != n * n) {
    throw PreconditionError("groupoid tables have inconsistent sizes");
  }
  for (Elem a = 0; a < n; ++a) {
    if (src_[a] >= base_.size() || tgt_[a] >= base_.size()) throw PreconditionError("element maps outside the base", {labels_[a]});
    if (inv_[a] >= n) throw PreconditionError("inverse outside the carrier", {labels_[a]});
  }
  for (Elem c : comp_) {
    if (c != kNoElem && c >= n) throw PreconditionError("composition result outside the carrier");
  }
  units_.assign(base_.size(), kNoElem);
  for (Elem a = 0; a < n; ++a) {
    if (src_[a] == tgt_[a] && mul(a, a) == a && units_[src_[a]] == kNoElem) units_[src_[a]] = a;
  }
}

bool FiniteGroupoid::is_unit(Elem a) const { return units_[src_[a]] == a; }

std::optional<Elem> FiniteGroupoid::find(const std::string& label) const {
  for (Elem a = 0; a < size(); ++a) {
    if (labels_[a] == label) return a;
  }
  return std::nullopt;
}

bool FiniteGroupoid::is_equivalence_relation() const {
  std::set<std::pair<Atom, Atom>> seen;
  for (Elem a = 0; a < size(); ++a) {
    if (!seen.insert({tgt_[a], src_[a]}).second) return false;
  }
  return true;
}

ValidationReport FiniteGroupoid::validate() const {
  ValidationReport r;
  auto add = [&](const std::string& axiom, const std::string& w) {
    if (r.violations.size() < 64) r.violations.push_back({axiom, w});
  };
  const size_t n = size();
  Rational total;
  for (size_t x = 0; x < base_.size(); ++x) {
    if (base_.weights[x].sign() <= 0) add("positive weights", base_.labels[x]);
    total += base_.weights[x];
  }
  if (!total.is_one()) add("probability base", "total weight " + total.to_string());
  for (Atom x = 0; x < base_.size(); ++x) {
    if (units_[x] == kNoElem) add("units", "no identity element at atom " + base_.labels[x]);
  }
  if (!r.ok()) return r;

  for (Elem a = 0; a < n; ++a) {
    Elem b = inv_[a];
    if (src_[b] != tgt_[a] || tgt_[b] != src_[a]) add("inverse swaps source and target", labels_[a]);
    if (inv_[b] != a) add("inverse is an involution", labels_[a]);
  }
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      bool composable = src_[a] == tgt_[b];
      Elem c = mul(a, b);
      if (composable != (c != kNoElem)) {
        add("composition defined exactly on composable pairs", labels_[a] + "*" + labels_[b]);
        continue;
      }
      if (composable && (src_[c] != src_[b] || tgt_[c] != tgt_[a])) {
        add("composition respects source and target", labels_[a] + "*" + labels_[b] + "=" + labels_[c]);
      }
    }
  }
  if (!r.ok()) return r;
  for (Elem a = 0; a < n; ++a) {
    if (mul(a, units_[src_[a]]) != a || mul(units_[tgt_[a]], a) != a) add("unit laws", labels_[a]);
    if (mul(a, inv_[a]) != units_[tgt_[a]] || mul(inv_[a], a) != units_[src_[a]]) add("inverse laws", labels_[a]);
  }
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      Elem ab = mul(a, b);
      if (ab == kNoElem) continue;
      for (Elem c = 0; c < n; ++c) {
        Elem bc = mul(b, c);
        if (bc == kNoElem) continue;
        Elem l = mul(ab, c), rr = mul(a, bc);
        if (l != rr) {
          add("associativity", "(" + labels_[a] + "," + labels_[b] + "," + labels_[c] + "): (ab)c=" +
                                   (l == kNoElem ? "undefined" : labels_[l]) + " but a(bc)=" +
                                   (rr == kNoElem ? "undefined" : labels_[rr]));
        }
      }
    }
  }
  // With carrier weight mu(s(a)), s is measure preserving by construction;
  // t is measure preserving iff mu(t(a)) = mu(s(a)) for every a.
  for (Elem a = 0; a < n; ++a) {
    if (!(base_.weights[src_[a]] == base_.weights[tgt_[a]])) add("target map is measure preserving", labels_[a]);
  }
  r.facts.push_back({"atoms", std::to_string(base_.size())});
  r.facts.push_back({"elements", std::to_string(n)});
  return r;
}

namespace build {
namespace {

struct Builder {
  FiniteMeasuredSpace base;
  std::vector<std::string> labels;
  std::vector<Atom> s, t;
  std::vector<Elem> inv;

  Elem add(std::string label, Atom source, Atom target) {
    labels.push_back(std::move(label));
    s.push_back(source);
    t.push_back(target);
    return Elem(labels.size() - 1);
  }
  FiniteGroupoid finish(const std::function<Elem(Elem, Elem)>& compose) {
    size_t n = labels.size();
    std::vector<Elem> comp(n * n, kNoElem);
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        if (s[a] == t[b]) comp[size_t(a) * n + b] = compose(a, b);
      }
    }
    return FiniteGroupoid(base, labels, s, t, inv, comp);
  }
};

}  // namespace

FiniteGroupoid trivial(const FiniteMeasuredSpace& x) {
  Builder b{x, {}, {}, {}, {}};
  for (Atom k = 0; k < x.size(); ++k) b.add("1_" + x.labels[k], k, k);
  b.inv.resize(x.size());
  std::iota(b.inv.begin(), b.inv.end(), 0);
  return b.finish([](Elem a, Elem) { return a; });
}

FiniteGroupoid from_group(const FiniteGroup& g) {
  auto rep = g.validate();
  if (!rep.ok()) throw PreconditionError("invalid group table", {rep.violations.front().witness});
  Builder b{FiniteMeasuredSpace::point(), {}, {}, {}, {}};
  for (uint32_t k = 0; k < g.order(); ++k) b.add(g.labels[k], 0, 0);
  for (uint32_t k = 0; k < g.order(); ++k) b.inv.push_back(g.inverse(k));
  return b.finish([&](Elem a, Elem c) { return g.mul(a, c); });
}

FiniteGroupoid pair_relation(const FiniteMeasuredSpace& x) {
  size_t n = x.size();
  Builder b{x, {}, {}, {}, {}};
  for (Atom p = 0; p < n; ++p) {
    for (Atom q = 0; q < n; ++q) b.add("(" + x.labels[p] + "," + x.labels[q] + ")", q, p);
  }
  for (Atom p = 0; p < n; ++p) {
    for (Atom q = 0; q < n; ++q) b.inv.push_back(Elem(q * n + p));
  }
  return b.finish([&](Elem a, Elem c) { return Elem((a / n) * n + c % n); });
}

FiniteGroupoid partition_relation(const FiniteMeasuredSpace& x, const std::vector<std::vector<Atom>>& blocks) {
  std::vector<int> block_of(x.size(), -1);
  for (size_t k = 0; k < blocks.size(); ++k) {
    for (Atom a : blocks[k]) {
      if (a >= x.size() || block_of[a] >= 0) throw PreconditionError("blocks do not partition the base", {std::to_string(a)});
      block_of[a] = int(k);
    }
  }
  for (Atom a = 0; a < x.size(); ++a) {
    if (block_of[a] < 0) throw PreconditionError("blocks do not cover the base", {x.labels[a]});
  }
  Builder b{x, {}, {}, {}, {}};
  std::map<std::pair<Atom, Atom>, Elem> idx;
  for (Atom p = 0; p < x.size(); ++p) {
    for (Atom q = 0; q < x.size(); ++q) {
      if (block_of[p] == block_of[q]) idx[{p, q}] = b.add("(" + x.labels[p] + "," + x.labels[q] + ")", q, p);
    }
  }
  b.inv.resize(b.labels.size());
  for (const auto& [pq, e] : idx) b.inv[e] = idx.at({pq.second, pq.first});
  return b.finish([&](Elem a, Elem c) { return idx.at({b.t[a], b.s[c]}); });
}

FiniteGroupoid action_groupoid(const FiniteGroup& g, const FiniteMeasuredSpace& x,
                               const std::vector<std::vector<Atom>>& action) {
  if (action.size() != g.order()) throw PreconditionError("action table needs one row per group element");
  uint32_t e = g.identity();
  for (uint32_t a = 0; a < g.order(); ++a) {
    if (action[a].size() != x.size()) throw PreconditionError("action row has wrong length", {g.labels[a]});
    for (Atom p = 0; p < x.size(); ++p) {
      if (action[a][p] >= x.size()) throw PreconditionError("action leaves the base", {g.labels[a]});
    }
  }
  for (Atom p = 0; p < x.size(); ++p) {
    if (action[e][p] != p) throw PreconditionError("identity does not act trivially", {x.labels[p]});
    for (uint32_t a = 0; a < g.order(); ++a) {
      for (uint32_t c = 0; c < g.order(); ++c) {
        if (action[g.mul(a, c)][p] != action[a][action[c][p]]) {
          throw PreconditionError("not a group action", {g.labels[a] + "," + g.labels[c] + "," + x.labels[p]});
        }
      }
    }
  }
  size_t n = x.size();
  Builder b{x, {}, {}, {}, {}};
  for (uint32_t a = 0; a < g.order(); ++a) {
    for (Atom p = 0; p < n; ++p) b.add("(" + g.labels[a] + "," + x.labels[p] + ")", p, action[a][p]);
  }
  auto id = [&](uint32_t a, Atom p) { return Elem(a * n + p); };
  for (uint32_t a = 0; a < g.order(); ++a) {
    for (Atom p = 0; p < n; ++p) b.inv.push_back(id(g.inverse(a), action[a][p]));
  }
  // (h, g.x)(g, x) = (hg, x)
  return b.finish([&](Elem u, Elem v) { return id(g.mul(u / Elem(n), v / Elem(n)), v % Elem(n)); });
}

}  // namespace build

OrbitIsotropy orbit_and_isotropy(const FiniteGroupoid& g) {
  const auto& x = g.base();
  std::vector<std::vector<bool>> related(x.size(), std::vector<bool>(x.size(), false));
  // section[(p,q)] = some element with target p and source q
  std::map<std::pair<Atom, Atom>, Elem> section;
  for (Elem a = 0; a < g.size(); ++a) {
    related[g.t(a)][g.s(a)] = true;
    section.emplace(std::make_pair(g.t(a), g.s(a)), a);
  }
  std::vector<std::vector<Atom>> blocks;
  std::vector<bool> placed(x.size(), false);
  for (Atom p = 0; p < x.size(); ++p) {
    if (placed[p]) continue;
    blocks.emplace_back();
    for (Atom q = 0; q < x.size(); ++q) {
      if (related[p][q]) {
        blocks.back().push_back(q);
        placed[q] = true;
      }
    }
  }
  OrbitIsotropy out;
  out.orbit = build::partition_relation(x, blocks);

  std::vector<Elem> iso;
  std::vector<int> pos(g.size(), -1);
  for (Elem a = 0; a < g.size(); ++a) {
    if (g.s(a) == g.t(a)) {
      pos[a] = int(iso.size());
      iso.push_back(a);
    }
  }
  std::vector<std::string> labels;
  std::vector<Atom> src, tgt;
  std::vector<Elem> inv;
  for (Elem a : iso) {
    labels.push_back(g.label(a));
    src.push_back(g.s(a));
    tgt.push_back(g.t(a));
    inv.push_back(Elem(pos[g.inv(a)]));
  }
  std::vector<Elem> comp(iso.size() * iso.size(), kNoElem);
  for (size_t i = 0; i < iso.size(); ++i) {
    for (size_t j = 0; j < iso.size(); ++j) {
      Elem c = g.mul(iso[i], iso[j]);
      if (c != kNoElem) comp[i * iso.size() + j] = Elem(pos[c]);
    }
  }
  out.isotropy = FiniteGroupoid(x, labels, src, tgt, inv, comp);

  // Every a factors as section(t,s) * iota with iota in the isotropy at s(a).
  for (Elem a = 0; a < g.size(); ++a) {
    Elem sec = section.at({g.t(a), g.s(a)});
    Elem iota = g.mul(g.inv(sec), a);
    if (iota == kNoElem || pos[iota] < 0 || g.mul(sec, iota) != a) {
      throw InvariantError("orbit/isotropy factorization failed at " + g.label(a));
    }
    auto r = out.orbit.find("(" + x.labels[g.t(a)] + "," + x.labels[g.s(a)] + ")");
    out.factorization.emplace_back(*r, Elem(pos[iota]));
  }
  // The factorization map is a bijection G -> R *_{s,t} I.
  std::set<std::pair<Elem, Elem>> distinct(out.factorization.begin(), out.factorization.end());
  size_t expected = 0;
  for (Elem r = 0; r < out.orbit.size(); ++r) {
    for (Elem i = 0; i < out.isotropy.size(); ++i) {
      if (out.orbit.s(r) == out.isotropy.t(i)) ++expected;
    }
  }
  if (distinct.size() != g.size() || expected != g.size()) {
    throw InvariantError("orbit/isotropy factorization is not a bijection");
  }
  return out;
}

Enveloping enveloping(const FiniteGroupoid& g) {
  Enveloping env;
  std::vector<std::string> labels;
  std::vector<Atom> src, tgt;
  for (Elem a = 0; a < g.size(); ++a) {
    for (Elem b = 0; b < g.size(); ++b) {
      if (g.s(a) == g.t(b) && g.t(a) == g.s(b)) {
        env.index[{a, b}] = Elem(env.pairs.size());
        env.pairs.emplace_back(a, b);
        labels.push_back("(" + g.label(a) + "," + g.label(b) + ")");
        src.push_back(g.s(b));
        tgt.push_back(g.t(b));
      }
    }
  }
  size_t n = env.pairs.size();
  std::vector<Elem> inv(n);
  std::vector<Elem> comp(n * n, kNoElem);
  for (Elem k = 0; k < n; ++k) {
    auto [a, b] = env.pairs[k];
    inv[k] = env.index.at({g.inv(a), g.inv(b)});
    for (Elem l = 0; l < n; ++l) {
      if (src[k] != tgt[l]) continue;
      auto [a2, b2] = env.pairs[l];
      comp[size_t(k) * n + l] = env.index.at({g.mul(a2, a), g.mul(b, b2)});
    }
  }
  env.groupoid = FiniteGroupoid(g.base(), labels, src, tgt, inv, comp);
  for (Elem a = 0; a < g.size(); ++a) env.diagonal.push_back(env.index.at({g.inv(a), a}));
  return env;
}

bool is_morphism(const FiniteGroupoid& g, const FiniteGroupoid& h, const std::vector<Elem>& map) {
  if (map.size() != g.size()) return false;
  for (Elem a = 0; a < g.size(); ++a) {
    if (map[a] >= h.size() || h.s(map[a]) != g.s(a) || h.t(map[a]) != g.t(a)) return false;
    if (h.inv(map[a]) != map[g.inv(a)]) return false;
  }
  for (Elem a = 0; a < g.size(); ++a) {
    for (Elem b = 0; b < g.size(); ++b) {
      Elem c = g.mul(a, b);
      if (c != kNoElem && h.mul(map[a], map[b]) != map[c]) return false;
    }
  }
  return true;
}

std::vector<Bisection> bisections(const FiniteGroupoid& g) {
  size_t n = g.atoms();
  std::vector<std::vector<Elem>> by_source(n);
  for (Elem a = 0; a < g.size(); ++a) by_source[g.s(a)].push_back(a);
  std::vector<Bisection> out;
  Bisection cur(n);
  std::vector<bool> target_used(n, false);
  std::function<void(Atom)> rec = [&](Atom x) {
    if (x == n) {
      out.push_back(cur);
      return;
    }
    for (Elem a : by_source[x]) {
      if (target_used[g.t(a)]) continue;
      target_used[g.t(a)] = true;
      cur[x] = a;
      rec(x + 1);
      target_used[g.t(a)] = false;
    }
  };
  rec(0);
  return out;
}

}  // namespace relbetti
