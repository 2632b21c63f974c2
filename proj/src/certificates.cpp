// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "certificates.hpp"

#include "errors.hpp"

namespace loopterm {

namespace {

using nlohmann::json;

// Index of the first row of h violated at x.
std::optional<std::size_t> first_violation(const HPolyhedron &h, const Vec &x) {
  for (std::size_t i = 0; i < h.rows().size(); ++i)
    if (!h.rows()[i].holds_at(x))
      return i;
  return std::nullopt;
}

// Generators of C, with each lineality vector in both orientations.
std::vector<Vec> signed_generators(const Cone2 &c) {
  std::vector<Vec> out = c.generators;
  for (const auto &l : c.lineality) {
    out.push_back(l);
    out.push_back(negate(l));
  }
  return out;
}

} // namespace

std::string VerifyReport::summary() const {
  if (ok)
    return "all witness conditions hold";
  std::string s;
  for (std::size_t i = 0; i < conditions.size(); ++i)
    if (!conditions[i].ok) {
      if (!s.empty())
        s += "; ";
      s += "u" + std::to_string(i + 1) + ": " + conditions[i].detail;
    }
  return s;
}

VerifyReport verify_witness(const TransitionRelation &rel, const Witness &wit) {
  const std::size_t d = rel.dim;
  require(rel.k.dim() == 2 * d && wit.m.rows() == d && wit.m.cols() == d &&
              wit.c.dim == d && wit.v.size() == d && wit.w.size() == d,
          ErrorCode::DimensionMismatch,
          "witness shape does not match a loop of dimension " +
              std::to_string(d));
  for (const auto &g : signed_generators(wit.c))
    require(g.size() == d, ErrorCode::DimensionMismatch,
            "cone generator of wrong dimension");

  VerifyReport r;
  const HPolyhedron rec = homogenized(rel.k);

  for (const auto &g : signed_generators(wit.c)) {
    Vec mg = wit.m.apply(g);
    if (r.conditions[0].ok && !cone_member(wit.c, mg))
      r.conditions[0] = {false, "M" + to_string(g) + " = " + to_string(mg) +
                                    " is not in C"};
    if (r.conditions[1].ok)
      if (auto row = first_violation(rec, concat(g, mg)))
        r.conditions[1] = {false, "(" + to_string(g) + ", " + to_string(mg) +
                                      ") violates recession row " +
                                      std::to_string(*row)};
  }
  if (auto row = first_violation(rel.k, concat(wit.v, wit.w)))
    r.conditions[2] = {false, "(v, w) violates row " + std::to_string(*row)};
  Vec diff = sub(wit.w, wit.v);
  if (!cone_member(wit.c, diff))
    r.conditions[3] = {false, "w - v = " + to_string(diff) + " is not in C"};

  r.ok = true;
  for (const auto &c : r.conditions)
    r.ok = r.ok && c.ok;
  return r;
}

RunTrace witness_to_run(const Witness &wit, std::size_t steps) {
  require(steps >= 1, ErrorCode::InvalidArgument, "run length must be >= 1");
  RunTrace t;
  t.points.reserve(steps + 1);
  t.points.push_back(wit.v);
  t.points.push_back(wit.w);
  Vec delta = sub(wit.w, wit.v);
  while (t.points.size() < steps + 1) {
    delta = wit.m.apply(delta);
    t.points.push_back(add(t.points.back(), delta));
  }
  return t;
}

RunTrace record_membership(const TransitionRelation &rel,
                           std::vector<Vec> points) {
  RunTrace t{std::move(points), {}};
  for (std::size_t n = 0; n + 1 < t.points.size(); ++n) {
    require(t.points[n].size() == rel.dim && t.points[n + 1].size() == rel.dim,
            ErrorCode::DimensionMismatch, "run point of wrong dimension");
    t.membership.push_back(
        rel.k.contains(concat(t.points[n], t.points[n + 1])));
  }
  return t;
}

bool check_run(const TransitionRelation &rel, const RunTrace &trace) {
  require(trace.points.size() >= 2, ErrorCode::Precondition,
          "a run needs at least two points");
  RunTrace fresh = record_membership(rel, trace.points);
  for (bool b : fresh.membership)
    if (!b)
      return false;
  return true;
}

LPProblem fixed_point_problem(const TransitionRelation &rel) {
  const std::size_t d = rel.dim;
  LPProblem p = rel.k.as_lp();
  for (std::size_t i = 0; i < d; ++i) {
    Vec c = zeros(2 * d);
    c[i] = -1;
    c[d + i] = 1;
    p.rows.push_back({std::move(c), Relation::Eq, 0});
  }
  return p;
}

FixedPointResult fixed_point_witness(const TransitionRelation &rel) {
  const std::size_t d = rel.dim;
  FixedPointResult out;
  out.lp = lp_feasible(fixed_point_problem(rel));
  if (out.lp.status == LPStatus::Feasible) {
    Vec x = slice(out.lp.point, 0, d);
    out.witness = Witness{Matrix::identity(d), cone_canonical(d, {}, {}), x, x};
  }
  return out;
}

const char *to_string(VerdictKind kind) {
  switch (kind) {
  case VerdictKind::NonTerminating:
    return "NonTerminating";
  case VerdictKind::Terminating:
    return "Terminating";
  case VerdictKind::Unknown:
    return "Unknown";
  }
  return "?";
}

const char *to_string(TerminationMethod method) {
  switch (method) {
  case TerminationMethod::ConeEnumeration1D:
    return "ConeEnumeration1D";
  case TerminationMethod::SolverUnsat:
    return "SolverUnsat";
  case TerminationMethod::EmptyRelation:
    return "EmptyRelation";
  }
  return "?";
}

Verdict Verdict::non_terminating(Witness wit, RunTrace run, std::string origin) {
  Verdict v;
  v.kind = VerdictKind::NonTerminating;
  v.witness = std::move(wit);
  v.run = std::move(run);
  v.origin = std::move(origin);
  return v;
}

Verdict Verdict::terminating(TerminationMethod method, json artifacts) {
  Verdict v;
  v.kind = VerdictKind::Terminating;
  v.method = method;
  v.artifacts = std::move(artifacts);
  return v;
}

Verdict Verdict::unknown(std::string reason) {
  Verdict v;
  v.kind = VerdictKind::Unknown;
  v.reason = std::move(reason);
  return v;
}

json to_json(const Rational &q) { return to_string(q); }

json to_json(const Vec &v) {
  json a = json::array();
  for (const auto &q : v)
    a.push_back(to_string(q));
  return a;
}

json to_json(const Matrix &m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    a.push_back(to_json(m.row(i)));
  return a;
}

json to_json(const Cone2 &c) {
  json gens = json::array();
  for (const auto &g : c.generators)
    gens.push_back(to_json(g));
  json lin = json::array();
  for (const auto &l : c.lineality)
    lin.push_back(to_json(l));
  return {{"kind", to_string(c.kind)}, {"generators", gens}, {"lineality", lin}};
}

json to_json(const Witness &w) {
  return {{"M", to_json(w.m)}, {"C", to_json(w.c)}, {"v", to_json(w.v)},
          {"w", to_json(w.w)}};
}

json to_json(const RunTrace &t) {
  json pts = json::array();
  for (const auto &p : t.points)
    pts.push_back(to_json(p));
  return {{"steps", t.points.empty() ? 0 : t.points.size() - 1},
          {"points", pts},
          {"membership", t.membership}};
}

Rational rational_from_json(const json &j) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return parse_rational(std::to_string(j.get<long long>()));
  throw Error(ErrorCode::Parse, "expected a rational string, got " + j.dump());
}

Vec vec_from_json(const json &j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim)
    throw Error(ErrorCode::Parse, "expected an array of " +
                                      std::to_string(dim) + " rationals");
  Vec v;
  for (const auto &e : j)
    v.push_back(rational_from_json(e));
  return v;
}

Matrix matrix_from_json(const json &j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim)
    throw Error(ErrorCode::Parse,
                "expected a " + std::to_string(dim) + "x" +
                    std::to_string(dim) + " matrix");
  std::vector<Vec> rows;
  for (const auto &r : j)
    rows.push_back(vec_from_json(r, dim));
  return Matrix::from_rows(rows);
}

Cone2 cone_from_json(const json &j, std::size_t dim) {
  if (!j.is_object() || !j.contains("kind"))
    throw Error(ErrorCode::Parse, "cone needs a 'kind'");
  std::vector<Vec> gens, lin;
  for (const auto &g : j.value("generators", json::array()))
    gens.push_back(vec_from_json(g, dim));
  for (const auto &l : j.value("lineality", json::array()))
    lin.push_back(vec_from_json(l, dim));
  ConeKind declared = cone_kind_from_string(j["kind"].get<std::string>());
  Cone2 c = cone_canonical(dim, gens, lin);
  if (c.kind != declared)
    throw Error(ErrorCode::Parse, std::string("cone declared as ") +
                                      to_string(declared) +
                                      " but its generators span a " +
                                      to_string(c.kind));
  return c;
}

Witness witness_from_json(const json &j, std::size_t dim) {
  for (const char *k : {"M", "C", "v", "w"})
    if (!j.is_object() || !j.contains(k))
      throw Error(ErrorCode::Parse, std::string("witness lacks '") + k + "'");
  return Witness{matrix_from_json(j["M"], dim), cone_from_json(j["C"], dim),
                 vec_from_json(j["v"], dim), vec_from_json(j["w"], dim)};
}

json certificate_json(const TransitionRelation &rel, const Verdict &verdict) {
  json j = {{"certVersion", kCertVersion},
            {"loopHash", relation_hash(rel)},
            {"d", rel.dim},
            {"verdict", to_string(verdict.kind)}};
  switch (verdict.kind) {
  case VerdictKind::NonTerminating:
    j["origin"] = verdict.origin;
    j["witness"] = to_json(*verdict.witness);
    j["run"] = to_json(verdict.run);
    break;
  case VerdictKind::Terminating:
    j["method"] = to_string(verdict.method);
    j["artifacts"] = verdict.artifacts;
    break;
  case VerdictKind::Unknown:
    j["reason"] = verdict.reason;
    break;
  }
  return j;
}

} // namespace loopterm
