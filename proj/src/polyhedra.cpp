// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "polyhedra.hpp"

#include "errors.hpp"

#include <algorithm>
#include <set>

namespace loopterm {

namespace {

bool vec_less(const Vec &a, const Vec &b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool row_less(const LinearRow &a, const LinearRow &b) {
  if (a.coeffs != b.coeffs)
    return vec_less(a.coeffs, b.coeffs);
  if (a.rel != b.rel)
    return a.rel == Relation::Eq;
  return a.rhs < b.rhs;
}

void sort_unique(std::vector<Vec> &vs) {
  std::sort(vs.begin(), vs.end(), vec_less);
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

void check_dim_limit(std::size_t n, const char *op) {
  if (n == 0 || n > kMaxAmbientDim)
    throw Error(ErrorCode::Unsupported,
                std::string(op) + ": ambient dimension " + std::to_string(n) +
                    " outside 1.." + std::to_string(kMaxAmbientDim));
}

// Scales the row so its coefficients are coprime integers. Equalities get a
// positive leading coefficient.
LinearRow normalize_row(const LinearRow &row) {
  if (is_zero(row.coeffs))
    return row;
  Vec p = row.rel == Relation::Eq ? primitive_unsigned(row.coeffs)
                                  : primitive(row.coeffs);
  // p = factor * coeffs for a nonzero rational factor.
  std::size_t k = 0;
  while (sgn(row.coeffs[k]) == 0)
    ++k;
  Rational factor = p[k] / row.coeffs[k];
  return LinearRow{std::move(p), row.rel, row.rhs * factor};
}

enum class Trivial { No, True, False };

Trivial trivial(const LinearRow &row) {
  if (!is_zero(row.coeffs))
    return Trivial::No;
  bool ok = row.rel == Relation::Ge ? sgn(row.rhs) <= 0 : sgn(row.rhs) == 0;
  return ok ? Trivial::True : Trivial::False;
}

} // namespace

HPolyhedron::HPolyhedron(std::size_t dim, std::vector<LinearRow> rows)
    : dim_(dim), rows_(std::move(rows)) {
  for (const auto &r : rows_)
    if (r.coeffs.size() != dim_)
      throw Error(ErrorCode::DimensionMismatch,
                  "polyhedron row of length " +
                      std::to_string(r.coeffs.size()) + " in dimension " +
                      std::to_string(dim_));
}

HPolyhedron HPolyhedron::universe(std::size_t dim) { return {dim, {}}; }

HPolyhedron HPolyhedron::empty(std::size_t dim) {
  return {dim, {LinearRow{zeros(dim), Relation::Ge, 1}}};
}

bool HPolyhedron::contains(const Vec &x) const {
  require(x.size() == dim_, ErrorCode::DimensionMismatch,
          "point dimension mismatch");
  return std::all_of(rows_.begin(), rows_.end(),
                     [&](const LinearRow &r) { return r.holds_at(x); });
}

bool HPolyhedron::is_empty() const {
  return lp_feasible(as_lp()).status == LPStatus::Infeasible;
}

HPolyhedron HPolyhedron::normalized() const {
  std::vector<LinearRow> out;
  out.reserve(rows_.size());
  for (const auto &r : rows_) {
    switch (trivial(r)) {
    case Trivial::True:
      continue;
    case Trivial::False:
      return empty(dim_);
    case Trivial::No:
      out.push_back(normalize_row(r));
    }
  }
  std::sort(out.begin(), out.end(), row_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return {dim_, std::move(out)};
}

ConeGenerators cone_generators(std::size_t dim,
                               const std::vector<LinearRow> &rows) {
  std::vector<Vec> lines;
  for (std::size_t i = 0; i < dim; ++i)
    lines.push_back(unit(dim, i));
  std::vector<Vec> rays;
  std::vector<const LinearRow *> processed;

  auto tight_set = [&](const Vec &r) {
    std::vector<bool> z(processed.size());
    for (std::size_t k = 0; k < processed.size(); ++k)
      z[k] = sgn(dot(processed[k]->coeffs, r)) == 0;
    return z;
  };

  for (const auto &row : rows) {
    require(row.coeffs.size() == dim, ErrorCode::DimensionMismatch,
            "cone row dimension mismatch");
    if (is_zero(row.coeffs))
      continue;
    const Vec &a = row.coeffs;

    // A lineality direction not orthogonal to the row absorbs it.
    auto it = std::find_if(lines.begin(), lines.end(), [&](const Vec &l) {
      return sgn(dot(a, l)) != 0;
    });
    if (it != lines.end()) {
      Vec l = *it;
      lines.erase(it);
      Rational al = dot(a, l);
      if (sgn(al) < 0) {
        l = negate(l);
        al = -al;
      }
      for (auto &other : lines)
        other = primitive_unsigned(sub(other, scale(l, dot(a, other) / al)));
      for (auto &r : rays)
        r = primitive(sub(r, scale(l, dot(a, r) / al)));
      std::erase_if(rays, [](const Vec &r) { return is_zero(r); });
      if (row.rel == Relation::Ge)
        rays.push_back(primitive(l));
      sort_unique(rays);
      processed.push_back(&row);
      continue;
    }

    std::vector<Vec> pos, zero, neg;
    for (auto &r : rays) {
      int s = sgn(dot(a, r));
      (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
    }
    std::vector<std::vector<bool>> pos_z, neg_z, all_z;
    for (const auto &r : pos)
      pos_z.push_back(tight_set(r));
    for (const auto &r : neg)
      neg_z.push_back(tight_set(r));
    for (const auto &r : rays)
      all_z.push_back(tight_set(r));

    std::vector<Vec> next = zero;
    if (row.rel == Relation::Ge)
      next.insert(next.end(), pos.begin(), pos.end());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = 0; j < neg.size(); ++j) {
        // Combinatorial adjacency: no other ray is tight on every
        // constraint both p and q are tight on.
        std::vector<bool> common(processed.size());
        for (std::size_t k = 0; k < processed.size(); ++k)
          common[k] = pos_z[i][k] && neg_z[j][k];
        bool adjacent = true;
        for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
          if (rays[t] == pos[i] || rays[t] == neg[j])
            continue;
          bool covers = true;
          for (std::size_t k = 0; k < processed.size(); ++k)
            if (common[k] && !all_z[t][k]) {
              covers = false;
              break;
            }
          if (covers)
            adjacent = false;
        }
        if (!adjacent)
          continue;
        Rational ap = dot(a, pos[i]);
        Rational aq = dot(a, neg[j]);
        next.push_back(primitive(sub(scale(neg[j], ap), scale(pos[i], aq))));
      }
    }
    rays = std::move(next);
    sort_unique(rays);
    processed.push_back(&row);
  }
  ConeGenerators g;
  g.lines = canonical_basis(lines);
  std::sort(g.lines.begin(), g.lines.end(), vec_less);
  g.rays = std::move(rays);
  sort_unique(g.rays);
  return g;
}

VPolyhedron h_to_v(const HPolyhedron &h) {
  const std::size_t n = h.dim();
  check_dim_limit(n, "h_to_v");
  std::vector<LinearRow> cone_rows;
  for (const auto &r : h.rows()) {
    Vec c = r.coeffs;
    c.push_back(-r.rhs);
    cone_rows.push_back({std::move(c), r.rel, 0});
  }
  cone_rows.push_back({unit(n + 1, n), Relation::Ge, 0});
  ConeGenerators g = cone_generators(n + 1, cone_rows);

  VPolyhedron v;
  v.dim = n;
  for (const auto &r : g.rays) {
    Vec x = slice(r, 0, n);
    if (sgn(r[n]) > 0)
      v.vertices.push_back(scale(x, 1 / r[n]));
    else
      v.rays.push_back(primitive(x));
  }
  if (v.vertices.empty())
    return VPolyhedron{n, {}, {}, {}};
  for (const auto &l : g.lines) {
    require(sgn(l[n]) == 0, ErrorCode::Internal,
            "h_to_v: lineality leaves the homogenizing hyperplane");
    v.lines.push_back(slice(l, 0, n));
  }
  v.lines = canonical_basis(v.lines);
  std::sort(v.lines.begin(), v.lines.end(), vec_less);
  sort_unique(v.vertices);
  sort_unique(v.rays);
  return v;
}

HPolyhedron v_to_h(const VPolyhedron &v) {
  const std::size_t n = v.dim;
  check_dim_limit(n, "v_to_h");
  if (v.vertices.empty())
    return HPolyhedron::empty(n);
  // Valid inequalities a.x >= b correspond to (a, -b) in the polar cone.
  std::vector<LinearRow> polar_rows;
  auto add = [&](const Vec &p, const Rational &t, Relation rel) {
    require(p.size() == n, ErrorCode::DimensionMismatch,
            "generator dimension mismatch");
    Vec c = p;
    c.push_back(t);
    polar_rows.push_back({std::move(c), rel, 0});
  };
  for (const auto &x : v.vertices)
    add(x, 1, Relation::Ge);
  for (const auto &r : v.rays) {
    require(!is_zero(r), ErrorCode::InvalidArgument, "zero ray");
    add(r, 0, Relation::Ge);
  }
  for (const auto &l : v.lines) {
    require(!is_zero(l), ErrorCode::InvalidArgument, "zero line");
    add(l, 0, Relation::Eq);
  }
  ConeGenerators g = cone_generators(n + 1, polar_rows);
  std::vector<LinearRow> rows;
  for (const auto &r : g.rays) {
    Vec a = slice(r, 0, n);
    if (is_zero(a))
      continue;
    rows.push_back({std::move(a), Relation::Ge, -r[n]});
  }
  for (const auto &l : g.lines) {
    Vec a = slice(l, 0, n);
    if (is_zero(a))
      continue;
    rows.push_back({std::move(a), Relation::Eq, -l[n]});
  }
  return remove_redundant(HPolyhedron(n, std::move(rows)).normalized());
}

HPolyhedron homogenized(const HPolyhedron &h) {
  std::vector<LinearRow> rows;
  for (const auto &r : h.rows()) {
    if (is_zero(r.coeffs))
      continue;
    rows.push_back({r.coeffs, r.rel, 0});
  }
  return {h.dim(), std::move(rows)};
}

HPolyhedron recession_cone(const HPolyhedron &h) {
  if (h.is_empty())
    throw Error(ErrorCode::EmptyPolyhedron,
                "recession cone of an empty polyhedron is undefined");
  return homogenized(h);
}

bool implies(const HPolyhedron &h, const LinearRow &row) {
  LPProblem p = h.as_lp();
  p.objective = negate(row.coeffs); // maximize -a.x == minimize a.x
  LPResult lo = lp_optimize(p);
  if (lo.status == LPStatus::Infeasible)
    return true;
  if (lo.status == LPStatus::Unbounded || -lo.value < row.rhs)
    return false;
  if (row.rel == Relation::Ge)
    return true;
  p.objective = row.coeffs;
  LPResult hi = lp_optimize(p);
  return hi.status == LPStatus::Optimal && hi.value <= row.rhs;
}

HPolyhedron remove_redundant(const HPolyhedron &h) {
  if (h.is_empty())
    return HPolyhedron::empty(h.dim());
  std::vector<LinearRow> rows = h.rows();
  for (std::size_t i = 0; i < rows.size();) {
    std::vector<LinearRow> others;
    others.reserve(rows.size() - 1);
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != i)
        others.push_back(rows[j]);
    if (implies(HPolyhedron(h.dim(), others), rows[i]))
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return {h.dim(), std::move(rows)};
}

bool is_subset(const HPolyhedron &a, const HPolyhedron &b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          "is_subset: dimension mismatch");
  if (a.is_empty())
    return true;
  return std::all_of(b.rows().begin(), b.rows().end(),
                     [&](const LinearRow &r) { return implies(a, r); });
}

bool set_equal(const HPolyhedron &a, const HPolyhedron &b) {
  return is_subset(a, b) && is_subset(b, a);
}

HPolyhedron project(const HPolyhedron &h, std::vector<std::size_t> keep) {
  const std::size_t n = h.dim();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  require(!keep.empty(), ErrorCode::InvalidArgument,
          "project: empty coordinate set");
  for (auto k : keep)
    require(k < n, ErrorCode::DimensionMismatch,
            "project: coordinate index out of range");
  if (h.is_empty())
    return HPolyhedron::empty(keep.size());

  std::vector<LinearRow> rows = h.normalized().rows();
  for (std::size_t var = 0; var < n; ++var) {
    if (std::binary_search(keep.begin(), keep.end(), var))
      continue;
    auto eq = std::find_if(rows.begin(), rows.end(), [&](const LinearRow &r) {
      return r.rel == Relation::Eq && sgn(r.coeffs[var]) != 0;
    });
    std::vector<LinearRow> next;
    if (eq != rows.end()) {
      // Substitute the variable away using the equality.
      LinearRow pivot = *eq;
      rows.erase(eq);
      for (auto &r : rows) {
        if (sgn(r.coeffs[var]) == 0) {
          next.push_back(std::move(r));
          continue;
        }
        Rational f = r.coeffs[var] / pivot.coeffs[var];
        next.push_back({sub(r.coeffs, scale(pivot.coeffs, f)), r.rel,
                        r.rhs - f * pivot.rhs});
      }
    } else {
      std::vector<const LinearRow *> pos, neg;
      for (const auto &r : rows) {
        int s = sgn(r.coeffs[var]);
        if (s == 0)
          next.push_back(r);
        else
          (s > 0 ? pos : neg).push_back(&r);
      }
      for (const auto *p : pos)
        for (const auto *q : neg) {
          Rational cp = p->coeffs[var];
          Rational cq = -q->coeffs[var];
          next.push_back({add(scale(p->coeffs, cq), scale(q->coeffs, cp)),
                          Relation::Ge, p->rhs * cq + q->rhs * cp});
        }
    }
    HPolyhedron step = HPolyhedron(n, std::move(next)).normalized();
    rows = remove_redundant(step).rows();
  }
  std::vector<LinearRow> out;
  for (const auto &r : rows) {
    Vec c(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      c[i] = r.coeffs[keep[i]];
    out.push_back({std::move(c), r.rel, r.rhs});
  }
  return HPolyhedron(keep.size(), std::move(out)).normalized();
}

std::pair<VPolyhedron, VPolyhedron> mw_decompose(const HPolyhedron &h) {
  VPolyhedron v = h_to_v(h);
  if (v.empty())
    throw Error(ErrorCode::EmptyPolyhedron,
                "Minkowski-Weyl decomposition of an empty polyhedron");
  VPolyhedron compact{h.dim(), v.vertices, {}, {}};
  VPolyhedron cone{h.dim(), {zeros(h.dim())}, v.rays, v.lines};
  return {std::move(compact), std::move(cone)};
}

bool v_contains(const VPolyhedron &v, const Vec &x) {
  require(x.size() == v.dim, ErrorCode::DimensionMismatch,
          "v_contains: dimension mismatch");
  if (v.empty())
    return false;
  // x = sum a_i v_i + sum b_j r_j + sum c_k l_k, a,b >= 0, sum a = 1.
  const std::size_t nv = v.vertices.size(), nr = v.rays.size(),
                    nl = v.lines.size();
  const std::size_t m = nv + nr + nl;
  LPProblem p;
  p.dim = m;
  for (std::size_t i = 0; i < nv + nr; ++i)
    p.rows.push_back({unit(m, i), Relation::Ge, 0});
  for (std::size_t c = 0; c < v.dim; ++c) {
    LinearRow r{zeros(m), Relation::Eq, x[c]};
    for (std::size_t i = 0; i < nv; ++i)
      r.coeffs[i] = v.vertices[i][c];
    for (std::size_t j = 0; j < nr; ++j)
      r.coeffs[nv + j] = v.rays[j][c];
    for (std::size_t k = 0; k < nl; ++k)
      r.coeffs[nv + nr + k] = v.lines[k][c];
    p.rows.push_back(std::move(r));
  }
  LinearRow sum{zeros(m), Relation::Eq, 1};
  for (std::size_t i = 0; i < nv; ++i)
    sum.coeffs[i] = 1;
  p.rows.push_back(std::move(sum));
  return lp_feasible(p).status == LPStatus::Feasible;
}

std::vector<std::size_t> implicit_equalities(const HPolyhedron &h) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < h.rows().size(); ++i) {
    const auto &r = h.rows()[i];
    if (r.rel == Relation::Eq) {
      out.push_back(i);
      continue;
    }
    LPProblem p = h.as_lp();
    p.objective = r.coeffs;
    LPResult hi = lp_optimize(p);
    if (hi.status == LPStatus::Optimal && hi.value == r.rhs)
      out.push_back(i);
  }
  return out;
}

bool ri_member(const HPolyhedron &h, const Vec &x) {
  if (h.is_empty())
    throw Error(ErrorCode::EmptyPolyhedron,
                "relative interior of an empty polyhedron");
  if (!h.contains(x))
    return false;
  auto eqs = implicit_equalities(h);
  for (std::size_t i = 0; i < h.rows().size(); ++i) {
    if (std::binary_search(eqs.begin(), eqs.end(), i))
      continue;
    if (sgn(h.rows()[i].slack(x)) <= 0)
      return false;
  }
  return true;
}

HPolyhedron preimage(const HPolyhedron &h, const Matrix &t) {
  require(t.rows() == h.dim(), ErrorCode::DimensionMismatch,
          "preimage: matrix rows must match polyhedron dimension");
  std::vector<LinearRow> rows;
  for (const auto &r : h.rows()) {
    Vec c = zeros(t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j)
      for (std::size_t i = 0; i < t.rows(); ++i)
        c[j] += r.coeffs[i] * t(i, j);
    rows.push_back({std::move(c), r.rel, r.rhs});
  }
  return {t.cols(), std::move(rows)};
}

} // namespace loopterm
