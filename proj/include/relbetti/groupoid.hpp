#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relbetti/rational.hpp"

namespace relbetti {

using Atom = uint32_t;
using Elem = uint32_t;
constexpr Elem kNoElem = UINT32_MAX;

struct FiniteMeasuredSpace {
  std::vector<std::string> labels;
  std::vector<Rational> weights;

  size_t size() const { return labels.size(); }
  static FiniteMeasuredSpace uniform(size_t n);
  static FiniteMeasuredSpace point() { return uniform(1); }
  std::optional<Atom> find(const std::string& label) const;
};

struct Violation {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::pair<std::string, std::string>> facts;
  bool ok() const { return violations.empty(); }
};

// Finite group given by its multiplication table; element 0 need not be the
// identity.
struct FiniteGroup {
  std::vector<std::string> labels;
  std::vector<std::vector<uint32_t>> table;  // table[a][b] = a*b

  size_t order() const { return table.size(); }
  uint32_t identity() const;
  uint32_t inverse(uint32_t g) const;
  uint32_t mul(uint32_t a, uint32_t b) const { return table[a][b]; }
  ValidationReport validate() const;
  size_t conjugacy_classes() const;

  static FiniteGroup cyclic(uint32_t n);
  static FiniteGroup klein();
  static FiniteGroup symmetric3();
  // "C1".."C6", "V4", "S3".
  static FiniteGroup named(const std::string& name);
  static std::vector<std::string> small_group_names();
};

class FiniteGroupoid {
 public:
  FiniteGroupoid() = default;
  // Composition table entries are -1 exactly where s(a) != t(b).
  FiniteGroupoid(FiniteMeasuredSpace base, std::vector<std::string> labels, std::vector<Atom> source,
                 std::vector<Atom> target, std::vector<Elem> inverse, std::vector<Elem> compose);

  const FiniteMeasuredSpace& base() const { return base_; }
  size_t size() const { return src_.size(); }
  size_t atoms() const { return base_.size(); }
  const std::string& label(Elem a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  Atom s(Elem a) const { return src_[a]; }
  Atom t(Elem a) const { return tgt_[a]; }
  Elem inv(Elem a) const { return inv_[a]; }
  // a*b, defined iff s(a) == t(b); kNoElem otherwise.
  Elem mul(Elem a, Elem b) const { return comp_[size_t(a) * size() + b]; }
  Elem unit(Atom x) const { return units_[x]; }
  bool is_unit(Elem a) const;
  std::optional<Elem> find(const std::string& label) const;
  // Canonical carrier weight mu(s(a)).
  const Rational& weight(Elem a) const { return base_.weights[src_[a]]; }
  bool is_equivalence_relation() const;

  ValidationReport validate() const;

 private:
  FiniteMeasuredSpace base_;
  std::vector<std::string> labels_;
  std::vector<Atom> src_, tgt_;
  std::vector<Elem> inv_;
  std::vector<Elem> comp_;
  std::vector<Elem> units_;
};

namespace build {

FiniteGroupoid trivial(const FiniteMeasuredSpace& x);
FiniteGroupoid from_group(const FiniteGroup& g);
// Element (x, y) has target x and source y, so (x,y)(y,z) = (x,z).
FiniteGroupoid pair_relation(const FiniteMeasuredSpace& x);
FiniteGroupoid partition_relation(const FiniteMeasuredSpace& x, const std::vector<std::vector<Atom>>& blocks);
// action[g][x] = g.x; elements (g, x) with source x and target g.x.
FiniteGroupoid action_groupoid(const FiniteGroup& g, const FiniteMeasuredSpace& x,
                               const std::vector<std::vector<Atom>>& action);

}  // namespace build

struct OrbitIsotropy {
  FiniteGroupoid orbit;
  FiniteGroupoid isotropy;
  // For each element a: the orbit-relation element (t(a), s(a)) and the
  // isotropy element section(t,s)^{-1} a; verified to recover a.
  std::vector<std::pair<Elem, Elem>> factorization;
};
OrbitIsotropy orbit_and_isotropy(const FiniteGroupoid& g);

struct Enveloping {
  FiniteGroupoid groupoid;
  std::vector<std::pair<Elem, Elem>> pairs;  // element k of G^e is (pairs[k].first, pairs[k].second)
  std::map<std::pair<Elem, Elem>, Elem> index;
  std::vector<Elem> diagonal;  // a -> (a^{-1}, a)
};
// Source and target of (a, b) are s(b) = t(a) and t(b) = s(a); this is the
// convention compatible with (a,b)(a',b') = (a'a, bb').
Enveloping enveloping(const FiniteGroupoid& g);

// Groupoid morphism check (same base, identity on units).
bool is_morphism(const FiniteGroupoid& g, const FiniteGroupoid& h, const std::vector<Elem>& map);

using Bisection = std::vector<Elem>;  // one element per source atom, indexed by atom
std::vector<Bisection> bisections(const FiniteGroupoid& g);

}  // namespace relbetti
