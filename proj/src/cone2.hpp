// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polyhedra.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace loopterm {

enum class ConeKind { Zero, Ray, Line, Sector, HalfPlane, Plane };

const char *to_string(ConeKind kind);
ConeKind cone_kind_from_string(std::string_view name);

/// Closed convex cone in R^d, d <= 2, in canonical form:
///   Zero       no generators
///   Ray        one primitive generator
///   Line       one lineality vector (first nonzero entry positive)
///   Sector     two independent primitive generators, sorted
///   HalfPlane  one lineality vector + one generator orthogonal to it
///   Plane      lineality {e1, e2}
struct Cone2 {
  std::size_t dim = 0;
  ConeKind kind = ConeKind::Zero;
  std::vector<Vec> generators;
  std::vector<Vec> lineality;

  /// generators followed by lineality; linearly independent.
  std::vector<Vec> basis() const;
  bool operator==(const Cone2 &other) const = default;
};

/// Canonical form of cone(rays) + span(lines). Throws on zero vectors or
/// dimension outside 1..2.
Cone2 cone_canonical(std::size_t dim, const std::vector<Vec> &rays,
                     const std::vector<Vec> &lines);

inline Cone2 cone_canonical(const Cone2 &c) {
  return cone_canonical(c.dim, c.generators, c.lineality);
}

/// Exact membership through a nonnegative-combination LP.
bool cone_member(const Cone2 &c, const Vec &v);

bool ri_member(const Cone2 &c, const Vec &v);

/// H-representation {z : rows >= 0 / == 0}.
HPolyhedron cone_to_h(const Cone2 &c);

/// Minimal lambda >= 0 with u + lambda x in c, for x in ri(c), x != 0 and u in
/// span(c). Throws Precondition otherwise.
Rational push_into_cone(const Cone2 &c, const Vec &x, const Vec &u);

} // namespace loopterm
