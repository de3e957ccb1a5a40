#include "relbetti/multibundle.hpp"

#include <algorithm>
#include <functional>

#include "relbetti/error.hpp"

namespace relbetti {

const std::vector<Atom>& MultiBundle::map(const std::string& name) const {
  for (const auto& [n, m] : maps) {
    if (n == name) return m;
  }
  throw PreconditionError("multibundle has no map named '" + name + "'");
}

bool MultiBundle::has_map(const std::string& name) const {
  return std::any_of(maps.begin(), maps.end(), [&](const auto& p) { return p.first == name; });
}

ValidationReport MultiBundle::validate() const {
  ValidationReport r;
  if (maps.empty()) r.violations.push_back({"at least one bundle map", "none given"});
  for (const auto& [name, m] : maps) {
    if (m.size() != size) r.violations.push_back({"bundle maps are total", name});
    for (Atom a : m) {
      if (a >= base.size()) {
        r.violations.push_back({"bundle maps land in the base", name});
        break;
      }
    }
  }
  return r;
}

MultiBundle identity_bundle(const FiniteMeasuredSpace& x) {
  MultiBundle u{x, x.size(), {}};
  std::vector<Atom> id(x.size());
  for (Atom k = 0; k < x.size(); ++k) id[k] = k;
  u.maps.emplace_back("id", std::move(id));
  return u;
}

MultiBundle groupoid_bundle(const FiniteGroupoid& g) {
  MultiBundle u{g.base(), g.size(), {}};
  std::vector<Atom> s(g.size()), t(g.size());
  for (Elem a = 0; a < g.size(); ++a) {
    s[a] = g.s(a);
    t[a] = g.t(a);
  }
  u.maps.emplace_back("s", std::move(s));
  u.maps.emplace_back("t", std::move(t));
  return u;
}

FiberProduct fiber_product(const MultiBundle& u, const std::string& pi, const MultiBundle& v,
                           const std::string& sigma) {
  if (u.base.labels != v.base.labels || u.base.weights != v.base.weights) {
    throw PreconditionError("fiber product of bundles over different bases");
  }
  const auto& pm = u.map(pi);
  const auto& sm = v.map(sigma);
  FiberProduct fp;
  fp.bundle.base = u.base;
  for (Index a = 0; a < u.size; ++a) {
    for (Index b = 0; b < v.size; ++b) {
      if (pm[a] == sm[b]) fp.pairs.emplace_back(a, b);
    }
  }
  fp.bundle.size = fp.pairs.size();
  for (const auto& [name, m] : u.maps) {
    std::vector<Atom> out;
    for (auto [a, b] : fp.pairs) out.push_back(m[a]);
    fp.bundle.maps.emplace_back(name, std::move(out));
  }
  for (const auto& [name, m] : v.maps) {
    if (name == sigma) continue;
    std::string renamed = name;
    while (fp.bundle.has_map(renamed)) renamed += "'";
    std::vector<Atom> out;
    for (auto [a, b] : fp.pairs) out.push_back(m[b]);
    fp.bundle.maps.emplace_back(renamed, std::move(out));
  }
  return fp;
}

MultiBundle disjoint_union(const MultiBundle& a, const MultiBundle& b) {
  if (a.base.labels != b.base.labels) throw PreconditionError("disjoint union over different bases");
  MultiBundle u{a.base, a.size + b.size, {}};
  for (const auto& [name, m] : a.maps) {
    std::vector<Atom> out = m;
    const auto& other = b.map(name);
    out.insert(out.end(), other.begin(), other.end());
    u.maps.emplace_back(name, std::move(out));
  }
  return u;
}

std::vector<std::vector<Index>> lusin_partition(const MultiBundle& u, const std::string& pi) {
  const auto& m = u.map(pi);
  std::vector<size_t> seen(u.base.size(), 0);
  std::vector<std::vector<Index>> parts;
  for (Index k = 0; k < u.size; ++k) {
    size_t slot = seen[m[k]]++;
    if (slot == parts.size()) parts.emplace_back();
    parts[slot].push_back(k);
  }
  return parts;
}

std::vector<std::vector<Index>> lusin_partition_all(const MultiBundle& u) {
  // Greedy colouring: an element joins the first part where none of its
  // images is already taken.
  std::vector<std::vector<Index>> parts;
  std::vector<std::vector<std::vector<bool>>> used;  // used[part][map][atom]
  for (Index k = 0; k < u.size; ++k) {
    size_t p = 0;
    for (; p < parts.size(); ++p) {
      bool free = true;
      for (size_t j = 0; j < u.maps.size() && free; ++j) free = !used[p][j][u.maps[j].second[k]];
      if (free) break;
    }
    if (p == parts.size()) {
      parts.emplace_back();
      used.emplace_back(u.maps.size(), std::vector<bool>(u.base.size(), false));
    }
    parts[p].push_back(k);
    for (size_t j = 0; j < u.maps.size(); ++j) used[p][j][u.maps[j].second[k]] = true;
  }
  return parts;
}

const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::nerve: return "nerve";
    case SpaceKind::bar: return "bar";
    case SpaceKind::cyclic: return "cyclic";
    case SpaceKind::acyclic: return "acyclic";
    case SpaceKind::classifying: return "classifying";
  }
  return "?";
}

SpaceKind parse_space_kind(const std::string& s) {
  for (SpaceKind k : {SpaceKind::nerve, SpaceKind::bar, SpaceKind::cyclic, SpaceKind::acyclic, SpaceKind::classifying}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError("unknown space kind '" + s + "'");
}

// ------------------------------------------------------------ tuples

std::vector<std::vector<Elem>> composable_chains(const FiniteGroupoid& g, size_t length) {
  // (a_1, ..., a_n) with s(a_i) = t(a_{i+1})
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur;
  std::function<void()> rec = [&]() {
    if (cur.size() == length) {
      out.push_back(cur);
      return;
    }
    for (Elem a = 0; a < g.size(); ++a) {
      if (!cur.empty() && g.s(cur.back()) != g.t(a)) continue;
      cur.push_back(a);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<std::vector<Elem>> composable_loops(const FiniteGroupoid& g, size_t length) {
  std::vector<std::vector<Elem>> out;
  for (auto& c : composable_chains(g, length)) {
    if (g.s(c.back()) == g.t(c.front())) out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::vector<Elem>> common_target_tuples(const FiniteGroupoid& g, size_t length) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur;
  std::function<void()> rec = [&]() {
    if (cur.size() == length) {
      out.push_back(cur);
      return;
    }
    for (Elem a = 0; a < g.size(); ++a) {
      if (!cur.empty() && g.t(cur.front()) != g.t(a)) continue;
      cur.push_back(a);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

namespace {

using Tuple = std::vector<Elem>;

Tuple merge_at(const FiniteGroupoid& g, const Tuple& x, size_t i) {
  Tuple y;
  for (size_t k = 0; k < x.size(); ++k) {
    if (k == i) {
      y.push_back(g.mul(x[k], x[k + 1]));
      ++k;
    } else {
      y.push_back(x[k]);
    }
  }
  return y;
}

Tuple drop_at(const Tuple& x, size_t i) {
  Tuple y = x;
  y.erase(y.begin() + long(i));
  return y;
}

// i-th nerve face of a chain of length n >= 1; length-1 chains map to the
// unit at s (i = 0) or t (i = 1).
Tuple nerve_face(const FiniteGroupoid& g, const Tuple& x, size_t i) {
  size_t n = x.size();
  if (n == 1) return {g.unit(i == 0 ? g.s(x[0]) : g.t(x[0]))};
  if (i == 0) return drop_at(x, 0);
  if (i == n) return drop_at(x, n - 1);
  return merge_at(g, x, i - 1);
}

// i-th face of a loop (a_0, ..., a_n).
Tuple cyclic_face(const FiniteGroupoid& g, const Tuple& x, size_t i) {
  size_t n = x.size() - 1;
  if (i < n) return merge_at(g, x, i);
  Tuple y(x.begin(), x.end() - 1);
  y[0] = g.mul(x[n], x[0]);
  return y;
}

Tuple face_of(const FiniteGroupoid& g, SpaceKind kind, const Tuple& x, size_t i) {
  switch (kind) {
    case SpaceKind::nerve: return nerve_face(g, x, i);
    case SpaceKind::bar: return nerve_face(g, x, i + 1);
    case SpaceKind::cyclic: return cyclic_face(g, x, i);
    case SpaceKind::acyclic: return cyclic_face(g, x, i + 1);
    case SpaceKind::classifying: return drop_at(x, i);
  }
  return {};
}

GeometricSpace make_level(const FiniteGroupoid& g, SpaceKind kind, size_t n) {
  GeometricSpace sp;
  sp.kind = kind;
  sp.degree = n;
  switch (kind) {
    case SpaceKind::nerve:
      if (n == 0) {
        for (Atom x = 0; x < g.atoms(); ++x) sp.tuples.push_back({g.unit(x)});
      } else {
        sp.tuples = composable_chains(g, n);
      }
      break;
    case SpaceKind::bar: sp.tuples = composable_chains(g, n + 2); break;
    case SpaceKind::cyclic: sp.tuples = composable_loops(g, n + 1); break;
    case SpaceKind::acyclic: sp.tuples = composable_loops(g, n + 2); break;
    case SpaceKind::classifying: sp.tuples = common_target_tuples(g, n + 1); break;
  }
  for (Index k = 0; k < sp.tuples.size(); ++k) sp.index.emplace(sp.tuples[k], k);
  sp.bundle.base = g.base();
  sp.bundle.size = sp.tuples.size();
  std::vector<Atom> t, s;
  for (const auto& x : sp.tuples) {
    t.push_back(g.t(x.front()));
    s.push_back(g.s(x.back()));
  }
  // Chains carry their two ends; loops and common-target tuples carry one point.
  if (kind == SpaceKind::nerve || kind == SpaceKind::bar) {
    sp.bundle.maps.emplace_back("t", std::move(t));
    sp.bundle.maps.emplace_back("s", std::move(s));
  } else {
    sp.bundle.maps.emplace_back("t", std::move(t));
  }
  return sp;
}

}  // namespace

GeometricTower geometric_tower(const FiniteGroupoid& g, SpaceKind kind, size_t n) {
  GeometricTower tw;
  tw.kind = kind;
  for (size_t d = 0; d <= n; ++d) {
    tw.levels.push_back(make_level(g, kind, d));
    if (d == 0) continue;
    auto& cur = tw.levels[d];
    const auto& prev = tw.levels[d - 1];
    cur.faces.assign(d + 1, std::vector<Index>(cur.tuples.size()));
    for (size_t i = 0; i <= d; ++i) {
      for (Index k = 0; k < cur.tuples.size(); ++k) {
        auto it = prev.index.find(face_of(g, kind, cur.tuples[k], i));
        if (it == prev.index.end()) throw InvariantError(std::string("face leaves the ") + to_string(kind) + " space");
        cur.faces[i][k] = it->second;
      }
    }
  }
  return tw;
}

GeometricSpace geometric_space(const FiniteGroupoid& g, SpaceKind kind, size_t n) {
  return std::move(geometric_tower(g, kind, n).levels.back());
}

ValidationReport GeometricTower::check_presimplicial() const {
  ValidationReport r;
  for (size_t n = 2; n < levels.size(); ++n) {
    const auto& hi = levels[n];
    const auto& mid = levels[n - 1];
    for (size_t j = 1; j <= n; ++j) {
      for (size_t i = 0; i < j; ++i) {
        for (Index k = 0; k < hi.tuples.size(); ++k) {
          if (mid.faces[i][hi.faces[j][k]] != mid.faces[j - 1][hi.faces[i][k]]) {
            r.violations.push_back({"presimplicial identity", std::string(to_string(kind)) + " degree " +
                                                                  std::to_string(n) + " i=" + std::to_string(i) +
                                                                  " j=" + std::to_string(j)});
            return r;
          }
        }
      }
    }
  }
  return r;
}

}  // namespace relbetti
