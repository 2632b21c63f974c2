// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "cone2.hpp"

#include "errors.hpp"

#include <algorithm>

namespace loopterm {

const char *to_string(ConeKind kind) {
  switch (kind) {
  case ConeKind::Zero:
    return "Zero";
  case ConeKind::Ray:
    return "Ray";
  case ConeKind::Line:
    return "Line";
  case ConeKind::Sector:
    return "Sector";
  case ConeKind::HalfPlane:
    return "HalfPlane";
  case ConeKind::Plane:
    return "Plane";
  }
  return "?";
}

ConeKind cone_kind_from_string(std::string_view name) {
  for (ConeKind k : {ConeKind::Zero, ConeKind::Ray, ConeKind::Line,
                     ConeKind::Sector, ConeKind::HalfPlane, ConeKind::Plane})
    if (name == to_string(k))
      return k;
  throw Error(ErrorCode::Parse, "unknown cone kind '" + std::string(name) + "'");
}

std::vector<Vec> Cone2::basis() const {
  std::vector<Vec> b = generators;
  b.insert(b.end(), lineality.begin(), lineality.end());
  return b;
}

Cone2 cone_canonical(std::size_t dim, const std::vector<Vec> &rays,
                     const std::vector<Vec> &lines) {
  if (dim == 0 || dim > 2)
    throw Error(ErrorCode::Unsupported,
                "planar cones live in dimension 1 or 2");
  std::vector<LinearRow> polar_rows;
  for (const auto &r : rays) {
    require(r.size() == dim, ErrorCode::DimensionMismatch,
            "cone generator dimension mismatch");
    require(!is_zero(r), ErrorCode::InvalidArgument,
            "zero vector among cone generators");
    polar_rows.push_back({r, Relation::Ge, 0});
  }
  for (const auto &l : lines) {
    require(l.size() == dim, ErrorCode::DimensionMismatch,
            "cone lineality dimension mismatch");
    require(!is_zero(l), ErrorCode::InvalidArgument,
            "zero vector among cone lineality");
    polar_rows.push_back({l, Relation::Eq, 0});
  }
  // Facets of the cone, then its minimal generators.
  ConeGenerators polar = cone_generators(dim, polar_rows);
  std::vector<LinearRow> facets;
  for (const auto &a : polar.rays)
    facets.push_back({a, Relation::Ge, 0});
  for (const auto &a : polar.lines)
    facets.push_back({a, Relation::Eq, 0});
  ConeGenerators g = cone_generators(dim, facets);

  Cone2 c;
  c.dim = dim;
  const std::size_t nl = g.lines.size();
  const std::size_t nr = g.rays.size();
  if (nl == dim) {
    c.kind = dim == 1 ? ConeKind::Line : ConeKind::Plane;
    for (std::size_t i = 0; i < dim; ++i)
      c.lineality.push_back(unit(dim, i));
    return c;
  }
  if (nl == 1) {
    Vec l = primitive_unsigned(g.lines[0]);
    c.lineality.push_back(l);
    if (nr == 0) {
      c.kind = ConeKind::Line;
      return c;
    }
    require(nr == 1, ErrorCode::Internal, "half-plane with several rays");
    Vec r = g.rays[0];
    c.generators.push_back(primitive(sub(r, scale(l, dot(r, l) / dot(l, l)))));
    c.kind = ConeKind::HalfPlane;
    return c;
  }
  for (const auto &r : g.rays)
    c.generators.push_back(primitive(r));
  std::sort(c.generators.begin(), c.generators.end(),
            [](const Vec &a, const Vec &b) {
              return std::lexicographical_compare(a.begin(), a.end(),
                                                  b.begin(), b.end());
            });
  switch (nr) {
  case 0:
    c.kind = ConeKind::Zero;
    break;
  case 1:
    c.kind = ConeKind::Ray;
    break;
  case 2:
    c.kind = ConeKind::Sector;
    break;
  default:
    throw Error(ErrorCode::Internal, "salient planar cone with >2 rays");
  }
  return c;
}

bool cone_member(const Cone2 &c, const Vec &v) {
  require(v.size() == c.dim, ErrorCode::DimensionMismatch,
          "cone_member: dimension mismatch");
  const std::size_t ng = c.generators.size();
  const std::size_t m = ng + c.lineality.size();
  if (m == 0)
    return is_zero(v);
  LPProblem p;
  p.dim = m;
  for (std::size_t i = 0; i < ng; ++i)
    p.rows.push_back({unit(m, i), Relation::Ge, 0});
  for (std::size_t k = 0; k < c.dim; ++k) {
    LinearRow row{zeros(m), Relation::Eq, v[k]};
    for (std::size_t i = 0; i < ng; ++i)
      row.coeffs[i] = c.generators[i][k];
    for (std::size_t j = 0; j < c.lineality.size(); ++j)
      row.coeffs[ng + j] = c.lineality[j][k];
    p.rows.push_back(std::move(row));
  }
  return lp_feasible(p).status == LPStatus::Feasible;
}

bool ri_member(const Cone2 &c, const Vec &v) {
  require(v.size() == c.dim, ErrorCode::DimensionMismatch,
          "ri_member: dimension mismatch");
  auto coords = coordinates(c.basis(), v);
  if (!coords)
    return false;
  for (std::size_t i = 0; i < c.generators.size(); ++i)
    if (sgn((*coords)[i]) <= 0)
      return false;
  return true;
}

HPolyhedron cone_to_h(const Cone2 &c) {
  std::vector<LinearRow> rows;
  for (const auto &g : c.generators)
    rows.push_back({g, Relation::Ge, 0});
  for (const auto &l : c.lineality)
    rows.push_back({l, Relation::Eq, 0});
  ConeGenerators polar = cone_generators(c.dim, rows);
  std::vector<LinearRow> out;
  for (const auto &a : polar.rays)
    out.push_back({a, Relation::Ge, 0});
  for (const auto &a : polar.lines)
    out.push_back({a, Relation::Eq, 0});
  return HPolyhedron(c.dim, std::move(out)).normalized();
}

Rational push_into_cone(const Cone2 &c, const Vec &x, const Vec &u) {
  require(x.size() == c.dim && u.size() == c.dim,
          ErrorCode::DimensionMismatch, "push_into_cone: dimension mismatch");
  if (is_zero(x) || !ri_member(c, x))
    throw Error(ErrorCode::Precondition,
                "push_into_cone: x must be a nonzero point of ri(C)");
  auto cu = coordinates(c.basis(), u);
  if (!cu)
    throw Error(ErrorCode::Precondition,
                "push_into_cone: u must lie in span(C)");
  auto cx = coordinates(c.basis(), x);
  // u + lambda x in C iff every generator coordinate stays nonnegative.
  Rational lambda = 0;
  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    if (sgn((*cu)[i]) >= 0)
      continue;
    Rational need = -(*cu)[i] / (*cx)[i];
    if (need > lambda)
      lambda = need;
  }
  return lambda;
}

} // namespace loopterm
