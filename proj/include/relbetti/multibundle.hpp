#pragma once

#include <map>
#include <string>
#include <vector>

#include "relbetti/groupoid.hpp"
#include "relbetti/matrix.hpp"

namespace relbetti {

// A finite carrier with a named list of maps onto the atoms of a base.
struct MultiBundle {
  FiniteMeasuredSpace base;
  size_t size = 0;
  std::vector<std::pair<std::string, std::vector<Atom>>> maps;

  const std::vector<Atom>& map(const std::string& name) const;
  bool has_map(const std::string& name) const;
  ValidationReport validate() const;
};

// Carrier = atoms, single map "id".
MultiBundle identity_bundle(const FiniteMeasuredSpace& x);
// Carrier = groupoid elements, maps "s" and "t".
MultiBundle groupoid_bundle(const FiniteGroupoid& g);

struct FiberProduct {
  MultiBundle bundle;
  std::vector<std::pair<Index, Index>> pairs;  // carrier element k is (pairs[k].first, pairs[k].second)
};
// U *_{pi,sigma} V = {(u, v) : pi(u) = sigma(v)}. Maps of U keep their names
// (read on u); maps of V other than sigma are read on v and renamed "name'"
// unless that collides. pi and sigma agree on the product and appear once.
FiberProduct fiber_product(const MultiBundle& u, const std::string& pi, const MultiBundle& v, const std::string& sigma);

MultiBundle disjoint_union(const MultiBundle& a, const MultiBundle& b);

// Parts partition the carrier, pi is injective on each part, and there are as
// many parts as the largest fiber. Part k holds the k-th element of each fiber.
std::vector<std::vector<Index>> lusin_partition(const MultiBundle& u, const std::string& pi);
// Common refinement making every bundle map injective on each part.
std::vector<std::vector<Index>> lusin_partition_all(const MultiBundle& u);

enum class SpaceKind { nerve, bar, cyclic, acyclic, classifying };
const char* to_string(SpaceKind k);
SpaceKind parse_space_kind(const std::string& s);

// One degree of a geometric presimplicial space. Tuples are sequences of
// groupoid elements; nerve degree 0 stores the unit of each atom.
struct GeometricSpace {
  SpaceKind kind;
  size_t degree = 0;
  std::vector<std::vector<Elem>> tuples;
  std::map<std::vector<Elem>, Index> index;
  MultiBundle bundle;
  // faces[i][k] = index in degree-1 of the i-th face of tuple k.
  std::vector<std::vector<Index>> faces;
};

// Degrees 0..n of one kind, faces installed from degree 1 on.
struct GeometricTower {
  SpaceKind kind;
  std::vector<GeometricSpace> levels;
  // pi_i pi_j = pi_{j-1} pi_i for i < j, checked on every tuple.
  ValidationReport check_presimplicial() const;
};

GeometricTower geometric_tower(const FiniteGroupoid& g, SpaceKind kind, size_t n);
GeometricSpace geometric_space(const FiniteGroupoid& g, SpaceKind kind, size_t n);

// Raw tuple sets, shared with the algebraic side.
std::vector<std::vector<Elem>> composable_chains(const FiniteGroupoid& g, size_t length);
std::vector<std::vector<Elem>> composable_loops(const FiniteGroupoid& g, size_t length);
std::vector<std::vector<Elem>> common_target_tuples(const FiniteGroupoid& g, size_t length);

}  // namespace relbetti
