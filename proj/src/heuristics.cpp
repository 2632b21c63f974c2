// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "heuristics.hpp"

#include "decider_1d.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace loopterm {

namespace {

using LVec = std::vector<long double>;

LVec to_ld(const Vec &v) {
  LVec out;
  for (const auto &q : v)
    out.push_back(to_long_double(q));
  return out;
}

long double inf_norm(const LVec &v) {
  long double m = 0;
  for (long double x : v)
    m = std::max(m, std::fabs(x));
  return m;
}

LVec normalize(const LVec &v) {
  long double m = inf_norm(v);
  LVec out = v;
  for (auto &x : out)
    x /= m;
  return out;
}

long double inf_dist(const LVec &a, const LVec &b) {
  long double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

long double ldot(const LVec &a, const LVec &b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

Vec normalize_exact(const Vec &v) { return scale(v, 1 / max_abs(v)); }

// Slack variable t enters every inequality row that touches a decision
// variable; `offset` is where the pair's decision variables start, and
// `fixed` holds the values of variables that are not decided.
void add_pair_rows(const TransitionRelation &rel, std::size_t nvars,
                   const std::optional<Vec> &fixed_x, std::size_t x_offset,
                   std::size_t xp_offset, std::size_t t_index,
                   std::vector<LinearRow> &out, bool &contradiction) {
  const std::size_t d = rel.dim;
  for (const auto &r : rel.k.rows()) {
    Vec c = zeros(nvars);
    Rational rhs = r.rhs;
    bool touches = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (fixed_x)
        rhs -= r.coeffs[i] * (*fixed_x)[i];
      else if (sgn(r.coeffs[i]) != 0) {
        c[x_offset + i] = r.coeffs[i];
        touches = true;
      }
      if (sgn(r.coeffs[d + i]) != 0) {
        c[xp_offset + i] = r.coeffs[d + i];
        touches = true;
      }
    }
    if (!touches) {
      if (r.rel == Relation::Eq ? rhs != 0 : rhs > 0)
        contradiction = true;
      continue;
    }
    if (r.rel == Relation::Ge)
      c[t_index] = -1;
    out.push_back({std::move(c), r.rel, rhs});
  }
}

std::optional<Vec> greedy_step(const TransitionRelation &rel, const Vec &u,
                               const Vec &target, bool lookahead) {
  const std::size_t d = rel.dim;
  const std::size_t nv = d * (lookahead ? 2 : 1) + 1;
  const std::size_t t = nv - 1;
  std::vector<LinearRow> rows;
  bool contradiction = false;
  add_pair_rows(rel, nv, u, 0, 0, t, rows, contradiction);
  if (lookahead)
    add_pair_rows(rel, nv, std::nullopt, 0, d, t, rows, contradiction);
  if (contradiction)
    return std::nullopt;
  rows.push_back({unit(nv, t), Relation::Ge, 0});
  rows.push_back({negate(unit(nv, t)), Relation::Ge, -1});

  Rational radius = 1 + max_abs(target);
  for (int attempt = 0; attempt <= 4; ++attempt) {
    LPProblem p{nv, rows, unit(nv, t)};
    if (attempt < 4) {
      for (std::size_t i = 0; i < d; ++i) {
        p.rows.push_back({unit(nv, i), Relation::Ge, target[i] - radius});
        p.rows.push_back({negate(unit(nv, i)), Relation::Ge, -target[i] - radius});
      }
    }
    LPResult r = lp_optimize(p);
    if (r.status == LPStatus::Optimal)
      return slice(r.point, 0, d);
    radius *= 4;
  }
  return std::nullopt;
}

// Orthogonal complement of a nonzero planar vector.
Vec perp(const Vec &z) { return Vec{-z[1], z[0]}; }

std::string cone_key(const Cone2 &c) { return to_json(c).dump(); }

// Rows of rec(K) as (a, b) pairs acting on (z, z').
struct RecRow {
  Vec a;
  Vec b;
  Relation rel;
};

std::vector<RecRow> rec_rows(const TransitionRelation &rel) {
  std::vector<RecRow> out;
  const std::size_t d = rel.dim;
  const HPolyhedron rec = homogenized(rel.k);
  for (const auto &r : rec.rows())
    out.push_back({slice(r.coeffs, 0, d), slice(r.coeffs, d, d), r.rel});
  return out;
}

bool rec_holds(const std::vector<RecRow> &rows, const Vec &z, const Vec &zp) {
  for (const auto &r : rows) {
    Rational s = dot(r.a, z) + dot(r.b, zp);
    if (r.rel == Relation::Eq ? s != 0 : s < 0)
      return false;
  }
  return true;
}

// s with (g, s) in rec(K) (both signs when `line`) and s in C (in lin C when
// `line`). Tries s = g first.
std::optional<Vec> image_for(const std::vector<RecRow> &rows, const Cone2 &c,
                             const Vec &g, bool line) {
  if (rec_holds(rows, g, g) && (!line || rec_holds(rows, negate(g), negate(g))))
    return g;
  std::vector<Vec> pos = line ? std::vector<Vec>{} : c.generators;
  const std::vector<Vec> &free = c.lineality;
  const std::size_t np = pos.size();
  const std::size_t n = np + free.size();
  if (n == 0)
    return std::nullopt;
  LPProblem p{n, {}, std::nullopt};
  for (const auto &r : rows) {
    Vec coeffs;
    for (const auto &v : pos)
      coeffs.push_back(dot(r.b, v));
    for (const auto &v : free)
      coeffs.push_back(dot(r.b, v));
    Relation rel = line ? Relation::Eq : r.rel;
    p.rows.push_back({coeffs, rel, -dot(r.a, g)});
  }
  for (std::size_t i = 0; i < np; ++i)
    p.rows.push_back({unit(n, i), Relation::Ge, 0});
  LPResult res = lp_feasible(p);
  if (res.status != LPStatus::Feasible)
    return std::nullopt;
  Vec s = zeros(g.size());
  for (std::size_t i = 0; i < np; ++i)
    s = add(s, scale(pos[i], res.point[i]));
  for (std::size_t j = 0; j < free.size(); ++j)
    s = add(s, scale(free[j], res.point[np + j]));
  return s;
}

// Linear map sending each basis vector to its image.
Matrix map_from_images(const std::vector<Vec> &basis,
                       const std::vector<Vec> &images) {
  const std::size_t d = basis.front().size();
  Matrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    auto coords = coordinates(basis, unit(d, j));
    Vec col = zeros(d);
    for (std::size_t k = 0; k < basis.size(); ++k)
      col = add(col, scale(images[k], (*coords)[k]));
    for (std::size_t i = 0; i < d; ++i)
      m(i, j) = col[i];
  }
  return m;
}

// (v, w) in K with w - v in C.
std::optional<std::pair<Vec, Vec>> step_in_cone(const TransitionRelation &rel,
                                                const Cone2 &c) {
  const std::size_t d = rel.dim;
  const std::size_t ng = c.generators.size();
  const std::size_t n = 2 * d + ng + c.lineality.size();
  LPProblem p{n, {}, std::nullopt};
  for (const auto &r : rel.k.rows()) {
    Vec coeffs = r.coeffs;
    coeffs.resize(n, Rational(0));
    p.rows.push_back({coeffs, r.rel, r.rhs});
  }
  for (std::size_t i = 0; i < d; ++i) {
    Vec coeffs = zeros(n);
    coeffs[i] = -1;
    coeffs[d + i] = 1;
    for (std::size_t k = 0; k < ng; ++k)
      coeffs[2 * d + k] = -c.generators[k][i];
    for (std::size_t k = 0; k < c.lineality.size(); ++k)
      coeffs[2 * d + ng + k] = -c.lineality[k][i];
    p.rows.push_back({coeffs, Relation::Eq, 0});
  }
  for (std::size_t k = 0; k < ng; ++k)
    p.rows.push_back({unit(n, 2 * d + k), Relation::Ge, 0});
  LPResult res = lp_feasible(p);
  if (res.status != LPStatus::Feasible)
    return std::nullopt;
  return std::pair{slice(res.point, 0, d), slice(res.point, d, d)};
}

// 1-D relation of K in the coordinate along `y`, after the change of basis
// x = alpha z + beta y.
TransitionRelation coordinate_relation(const TransitionRelation &rel,
                                       const Vec &z, const Vec &y,
                                       bool along_y) {
  Matrix t(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    t(i, 0) = z[i];
    t(i, 1) = y[i];
    t(2 + i, 2) = z[i];
    t(2 + i, 3) = y[i];
  }
  HPolyhedron k = preimage(rel.k, t);
  std::vector<std::size_t> keep =
      along_y ? std::vector<std::size_t>{1, 3} : std::vector<std::size_t>{0, 2};
  return {1, project(k, keep)};
}

class ProposalSink {
public:
  ProposalSink(const TransitionRelation &rel, bool all, std::stop_token stop)
      : rel_(rel), all_(all), stop_(std::move(stop)) {}

  bool done() const {
    return (!all_ && !out_.empty()) || stop_.stop_requested();
  }

  void offer_cone(const Cone2 &c, const std::string &origin) {
    if (done() || !tried_.insert(cone_key(c)).second)
      return;
    if (auto w = complete_for_cone(rel_, c))
      out_.push_back({std::move(*w), origin});
  }

  void offer_cone(const std::vector<Vec> &rays, const std::vector<Vec> &lines,
                  const std::string &origin) {
    for (const auto &r : rays)
      if (is_zero(r))
        return;
    for (const auto &l : lines)
      if (is_zero(l))
        return;
    offer_cone(cone_canonical(rel_.dim, rays, lines), origin);
  }

  void offer_witness(Witness w, const std::string &origin) {
    if (done())
      return;
    if (verify_witness(rel_, w).ok)
      out_.push_back({std::move(w), origin});
  }

  std::vector<Proposal> take() { return std::move(out_); }

private:
  const TransitionRelation &rel_;
  bool all_;
  std::stop_token stop_;
  std::set<std::string> tried_;
  std::vector<Proposal> out_;
};

} // namespace

RunTrace greedy_run(const TransitionRelation &rel, const Vec &start,
                    std::size_t steps) {
  require(start.size() == rel.dim, ErrorCode::DimensionMismatch,
          "start point of wrong dimension");
  std::vector<Vec> pts{start};
  Vec prev = start;
  for (std::size_t n = 0; n < steps; ++n) {
    const Vec &u = pts.back();
    Vec target = n == 0 ? u : sub(scale(u, 2), prev);
    auto next = greedy_step(rel, u, target, true);
    if (!next)
      next = greedy_step(rel, u, target, false);
    if (!next)
      break;
    prev = u;
    pts.push_back(std::move(*next));
  }
  return record_membership(rel, std::move(pts));
}

std::vector<Vec> choose_starts(const TransitionRelation &rel, std::size_t count,
                               std::uint64_t seed) {
  const std::size_t d = rel.dim;
  std::vector<Vec> out;
  if (count == 0)
    return out;

  const std::size_t nv = 2 * d + 1;
  std::vector<LinearRow> deep;
  bool contradiction = false;
  add_pair_rows(rel, nv, std::nullopt, 0, d, 2 * d, deep, contradiction);
  if (contradiction)
    return out;
  deep.push_back({unit(nv, 2 * d), Relation::Ge, 0});
  deep.push_back({negate(unit(nv, 2 * d)), Relation::Ge, -1});
  LPResult r = lp_optimize({nv, deep, unit(nv, 2 * d)});
  if (r.status != LPStatus::Optimal)
    return out;
  out.push_back(slice(r.point, 0, d));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-10, 10);
  // Variables (x, x', s): minimize s >= |x_i - target_i|.
  for (std::size_t k = 1; k < count; ++k) {
    LPProblem p{nv, {}, negate(unit(nv, 2 * d))};
    for (const auto &row : rel.k.rows()) {
      Vec c = row.coeffs;
      c.push_back(0);
      p.rows.push_back({c, row.rel, row.rhs});
    }
    for (std::size_t i = 0; i < d; ++i) {
      Rational target = coord(rng);
      Vec c = unit(nv, 2 * d);
      c[i] = -1;
      p.rows.push_back({c, Relation::Ge, -target});
      c[i] = 1;
      p.rows.push_back({c, Relation::Ge, target});
    }
    LPResult near = lp_optimize(p);
    if (near.status != LPStatus::Optimal)
      continue;
    Vec x = slice(near.point, 0, d);
    if (std::find(out.begin(), out.end(), x) == out.end())
      out.push_back(std::move(x));
  }
  return out;
}

DirectionEstimate estimate_directions(const RunTrace &trace) {
  DirectionEstimate est;
  const auto &pts = trace.points;
  if (pts.size() < kMinTraceLength)
    return est;
  std::vector<LVec> u;
  for (const auto &p : pts)
    u.push_back(to_ld(p));

  const std::size_t mid = u.size() / 2;
  long double head = 0, tail = 0;
  for (std::size_t n = 0; n < u.size(); ++n)
    (n < mid ? head : tail) = std::max(n < mid ? head : tail, inf_norm(u[n]));
  const long double drift = inf_norm(u.back()) - inf_norm(u[mid]);
  if (tail <= 0 || !std::isfinite(tail) ||
      drift < 1 + 0.1L * inf_norm(u[mid]) || tail <= head) {
    est.bounded = true;
    return est;
  }

  struct Cluster {
    LVec rep;
    std::vector<std::size_t> members;
  };
  std::vector<Cluster> clusters;
  for (std::size_t n = mid; n < u.size(); ++n) {
    if (inf_norm(u[n]) == 0)
      continue;
    LVec p = normalize(u[n]);
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster &c) {
      return inf_dist(c.rep, p) <= kClusterTolerance;
    });
    if (it == clusters.end())
      clusters.push_back({p, {n}});
    else
      it->members.push_back(n);
  }

  const double tail_count = static_cast<double>(u.size() - mid);
  for (const auto &c : clusters) {
    LVec raw = c.members.size() > 1
                   ? [&] {
                       LVec diff = u[c.members.back()];
                       for (std::size_t i = 0; i < diff.size(); ++i)
                         diff[i] -= u[c.members.front()][i];
                       return diff;
                     }()
                   : u[c.members.front()];
    if (inf_norm(raw) == 0 || !std::isfinite(inf_norm(raw)))
      raw = c.rep;
    LVec dir = normalize(raw);
    Vec z;
    for (long double x : dir)
      z.push_back(simplest_within(x, kDirectionTolerance));
    if (is_zero(z))
      continue;
    z = normalize_exact(z);

    Direction out{z, static_cast<double>(c.members.size()) / tail_count, 0};
    LVec zl = to_ld(z);
    for (std::size_t k = c.members.size(); k-- > 0;) {
      std::size_t n = c.members[k];
      if (n == 0)
        continue;
      long double prev = ldot(u[n - 1], zl);
      if (prev != 0) {
        out.growth = static_cast<double>(ldot(u[n], zl) / prev);
        break;
      }
    }
    auto same = std::find_if(est.directions.begin(), est.directions.end(),
                             [&](const Direction &e) { return e.z == z; });
    if (same == est.directions.end())
      est.directions.push_back(std::move(out));
    else
      same->confidence += out.confidence;
  }
  std::stable_sort(est.directions.begin(), est.directions.end(),
                   [](const Direction &a, const Direction &b) {
                     return a.confidence > b.confidence;
                   });
  return est;
}

std::optional<Witness> complete_for_cone(const TransitionRelation &rel,
                                         const Cone2 &c) {
  const std::size_t d = rel.dim;
  require(c.dim == d, ErrorCode::DimensionMismatch, "cone of wrong dimension");
  const auto rows = rec_rows(rel);

  std::vector<Vec> basis, images;
  for (const auto &g : c.generators) {
    auto s = image_for(rows, c, g, false);
    if (!s)
      return std::nullopt;
    basis.push_back(g);
    images.push_back(std::move(*s));
  }
  for (const auto &l : c.lineality) {
    auto s = image_for(rows, c, l, true);
    if (!s)
      return std::nullopt;
    basis.push_back(l);
    images.push_back(std::move(*s));
  }
  if (basis.size() < d) {
    Vec extra = basis.empty() ? unit(d, 0) : perp(basis.front());
    for (std::size_t i = 0; basis.size() < d; ++i) {
      basis.push_back(extra);
      images.push_back(extra);
      extra = unit(d, i + 1 < d ? i + 1 : 0);
    }
  }
  Matrix m = map_from_images(basis, images);

  auto vw = step_in_cone(rel, c);
  if (!vw)
    return std::nullopt;
  Witness w{std::move(m), c, std::move(vw->first), std::move(vw->second)};
  if (!verify_witness(rel, w).ok)
    return std::nullopt;
  return w;
}

std::vector<Vec> recession_directions(const TransitionRelation &rel) {
  const std::size_t d = rel.dim;
  std::vector<Vec> out;
  auto push = [&](Vec v) {
    if (is_zero(v))
      return;
    v = primitive(v);
    if (std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(std::move(v));
  };
  if (!rel.k.is_empty()) {
    VPolyhedron rec = h_to_v(recession_cone(rel.k));
    for (const auto &r : rec.rays) {
      push(slice(r, 0, d));
      push(slice(r, d, d));
    }
    for (const auto &l : rec.lines)
      for (const Vec &s : {l, negate(l)}) {
        push(slice(s, 0, d));
        push(slice(s, d, d));
      }
  }
  if (d == 1) {
    push({1});
    push({-1});
  } else {
    for (const Vec &v : {Vec{1, 0}, Vec{0, 1}, Vec{-1, 0}, Vec{0, -1},
                         Vec{1, 1}, Vec{-1, -1}, Vec{1, -1}, Vec{-1, 1}})
      push(v);
  }
  return out;
}

std::vector<Proposal> propose_witnesses(const TransitionRelation &rel,
                                        const DirectionEstimate &est, bool all,
                                        std::stop_token stop) {
  const std::size_t d = rel.dim;
  ProposalSink sink(rel, all, std::move(stop));

  if (auto fp = fixed_point_witness(rel); fp.witness)
    sink.offer_witness(std::move(*fp.witness), "fixed-point");

  std::vector<Vec> dirs;
  for (const auto &e : est.directions)
    dirs.push_back(primitive(e.z));
  const auto rows = rec_rows(rel);

  // (0, z) in rec(K): the successor can drift along z for free.
  for (const auto &z : dirs) {
    if (!rec_holds(rows, zeros(d), z))
      continue;
    sink.offer_cone({z}, {}, "vertical-recession");
    sink.offer_cone({}, {z}, "vertical-recession");
    for (const auto &z2 : dirs)
      if (z2 != z) {
        sink.offer_cone({z, z2}, {}, "vertical-recession");
        sink.offer_cone({z2}, {z}, "vertical-recession");
      }
  }

  // A first step (a, a + mu z) in K: C spanned by the estimated directions.
  for (const auto &z : dirs) {
    LPProblem p{2 * d + 1, {}, std::nullopt};
    for (const auto &r : rel.k.rows()) {
      Vec c = r.coeffs;
      for (std::size_t i = 0; i < d; ++i)
        c[i] += r.coeffs[d + i];
      c.push_back(dot(slice(r.coeffs, d, d), z));
      for (std::size_t i = 0; i < d; ++i)
        c[d + i] = 0;
      p.rows.push_back({c, r.rel, r.rhs});
    }
    p.rows.push_back({unit(2 * d + 1, 2 * d), Relation::Ge, 0});
    if (lp_feasible(p).status != LPStatus::Feasible)
      continue;
    sink.offer_cone({z}, {}, "first-step");
    if (dirs.size() > 1)
      sink.offer_cone(dirs, {}, "first-step");
  }

  if (d == 2) {
    // Line case: the 1-D problems along z and across it.
    for (const auto &z : dirs) {
      const Vec y = perp(z);
      for (bool across : {false, true}) {
        Verdict v1 = decide_1d(coordinate_relation(rel, z, y, across), 2);
        if (v1.kind != VerdictKind::NonTerminating)
          continue;
        const Cone2 &c1 = v1.witness->c;
        const Vec &axis = across ? y : z;
        std::vector<Vec> rays, lines;
        if (across)
          lines.push_back(z);
        if (c1.kind == ConeKind::Ray)
          rays.push_back(scale(axis, c1.generators[0][0]));
        else if (c1.kind == ConeKind::Line)
          lines.push_back(axis);
        if (!rays.empty() || !lines.empty())
          sink.offer_cone(rays, lines, "line");
      }
    }

    // Ray case: (z, a z) and (d z + y, c z + b y) in rec(K) with c >= d b.
    for (const auto &z : dirs) {
      LPProblem pa{1, {}, std::nullopt};
      for (const auto &r : rows)
        pa.rows.push_back({Vec{dot(r.b, z)}, r.rel, -dot(r.a, z)});
      pa.rows.push_back({Vec{Rational(1)}, Relation::Ge, 0});
      LPResult ra = lp_feasible(pa);
      if (ra.status != LPStatus::Feasible)
        continue;
      const Rational a = ra.point[0];
      sink.offer_cone({z}, {}, "ray");
      for (const Vec &y : {perp(z), negate(perp(z))})
        for (const Rational &b :
             {a, Rational(1), Rational(0), Rational(2), Rational(1, 2)}) {
          // Variables (c, dd).
          LPProblem p{2, {}, std::nullopt};
          for (const auto &r : rows)
            p.rows.push_back({Vec{dot(r.b, z), dot(r.a, z)}, r.rel,
                              -dot(r.a, y) - b * dot(r.b, y)});
          p.rows.push_back({Vec{Rational(1), -b}, Relation::Ge, 0});
          LPResult res = lp_feasible(p);
          if (res.status == LPStatus::Feasible)
            sink.offer_cone({z, add(scale(z, res.point[1]), y)}, {}, "ray");
        }
    }
  }

  // Sweep over the direction pool.
  std::vector<Vec> pool = dirs;
  for (auto &v : recession_directions(rel))
    if (std::find(pool.begin(), pool.end(), v) == pool.end())
      pool.push_back(std::move(v));
  for (const auto &p : pool) {
    sink.offer_cone({p}, {}, "sweep");
    sink.offer_cone({}, {p}, "sweep");
  }
  if (d == 2) {
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = 0; j < pool.size(); ++j) {
        if (i == j || rank({pool[i], pool[j]}) < 2)
          continue;
        if (i < j)
          sink.offer_cone({pool[i], pool[j]}, {}, "sweep");
        sink.offer_cone({pool[j]}, {pool[i]}, "sweep");
      }
    sink.offer_cone({}, {unit(2, 0), unit(2, 1)}, "sweep");
  }
  return sink.take();
}

std::optional<Proposal> heuristic_search(const TransitionRelation &rel,
                                         const HeuristicConfig &cfg,
                                         std::stop_token stop) {
  DirectionEstimate merged;
  for (const auto &s : choose_starts(rel, cfg.starts, cfg.seed)) {
    if (stop.stop_requested())
      return std::nullopt;
    DirectionEstimate e = estimate_directions(greedy_run(rel, s, cfg.steps));
    for (auto &dir : e.directions) {
      auto same = std::find_if(merged.directions.begin(), merged.directions.end(),
                               [&](const Direction &m) { return m.z == dir.z; });
      if (same == merged.directions.end())
        merged.directions.push_back(std::move(dir));
      else
        same->confidence += dir.confidence;
    }
  }
  std::stable_sort(merged.directions.begin(), merged.directions.end(),
                   [](const Direction &a, const Direction &b) {
                     return a.confidence > b.confidence;
                   });
  auto props = propose_witnesses(rel, merged, false, stop);
  if (props.empty())
    return std::nullopt;
  return std::move(props.front());
}

} // namespace loopterm
