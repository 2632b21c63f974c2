// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "decider_1d.hpp"

#include "errors.hpp"

namespace loopterm {

namespace {

using nlohmann::json;

Interval1 nonnegative() { return Interval1{false, Rational(0), std::nullopt}; }

// Slope picked for reporting: 1 when allowed, otherwise the admissible value
// nearest to it.
Rational pick_slope(const Interval1 &iv) {
  if (iv.contains(1))
    return 1;
  if (iv.lower && *iv.lower > 1)
    return *iv.lower;
  return *iv.upper;
}

// (v, w) in K with sigma * (w - v) >= 0; sigma == 0 drops the extra row.
LPResult step_lp(const TransitionRelation &rel, int sigma) {
  LPProblem p = rel.k.as_lp();
  if (sigma != 0)
    p.rows.push_back({Vec{Rational(-sigma), Rational(sigma)}, Relation::Ge, 0});
  return lp_feasible(p);
}

json interval_json(const Interval1 &iv) {
  if (iv.empty)
    return "empty";
  return iv.to_string();
}

} // namespace

bool Interval1::contains(const Rational &a) const {
  if (empty)
    return false;
  if (lower && (lower_closed ? a < *lower : a <= *lower))
    return false;
  if (upper && (upper_closed ? a > *upper : a >= *upper))
    return false;
  return true;
}

Interval1 Interval1::intersect(const Interval1 &other) const {
  if (empty || other.empty)
    return Interval1{true, {}, {}};
  Interval1 r = *this;
  if (other.lower && (!r.lower || *other.lower > *r.lower ||
                      (*other.lower == *r.lower && !other.lower_closed))) {
    r.lower = other.lower;
    r.lower_closed = other.lower_closed;
  }
  if (other.upper && (!r.upper || *other.upper < *r.upper ||
                      (*other.upper == *r.upper && !other.upper_closed))) {
    r.upper = other.upper;
    r.upper_closed = other.upper_closed;
  }
  if (r.lower && r.upper &&
      (*r.lower > *r.upper ||
       (*r.lower == *r.upper && !(r.lower_closed && r.upper_closed))))
    return Interval1{true, {}, {}};
  return r;
}

std::string Interval1::to_string() const {
  if (empty)
    return "{}";
  std::string s = lower ? (lower_closed ? "[" : "(") + loopterm::to_string(*lower)
                        : std::string("(-inf");
  s += ", ";
  s += upper ? loopterm::to_string(*upper) + (upper_closed ? "]" : ")")
             : std::string("+inf)");
  return s;
}

Interval1 slope_interval(const TransitionRelation &rel, int sigma) {
  require(rel.dim == 1, ErrorCode::Precondition, "slope_interval needs d = 1");
  require(sigma == 1 || sigma == -1, ErrorCode::InvalidArgument,
          "sigma must be +1 or -1");
  // Row c0 z + c1 z' >= 0 at (sigma, sigma a): sigma c1 a >= -sigma c0.
  LPProblem p{1, {}, std::nullopt};
  const HPolyhedron rec = homogenized(rel.k);
  for (const auto &r : rec.rows())
    p.rows.push_back(
        {Vec{sigma * r.coeffs[1]}, r.rel, -sigma * r.coeffs[0] + r.rhs});
  Interval1 iv;
  p.objective = Vec{Rational(1)};
  LPResult hi = lp_optimize(p);
  if (hi.status == LPStatus::Infeasible)
    return Interval1{true, {}, {}};
  if (hi.status == LPStatus::Optimal)
    iv.upper = hi.value;
  p.objective = Vec{Rational(-1)};
  LPResult lo = lp_optimize(p);
  if (lo.status == LPStatus::Optimal)
    iv.lower = -lo.value;
  return iv;
}

Verdict decide_1d(const TransitionRelation &rel, std::size_t steps) {
  require(rel.dim == 1, ErrorCode::Precondition, "decide_1d needs d = 1");
  const Interval1 pos = slope_interval(rel, 1);
  const Interval1 neg = slope_interval(rel, -1);

  auto finish = [&](Witness wit, const char *origin) {
    VerifyReport rep = verify_witness(rel, wit);
    require(rep.ok, ErrorCode::Internal,
            "1-D witness failed verification: " + rep.summary());
    RunTrace run = record_membership(rel, witness_to_run(wit, steps).points);
    return Verdict::non_terminating(std::move(wit), std::move(run), origin);
  };

  json shapes = json::array();

  // C = R+ and C = R-: a >= 0 in the slope set, and a step in that direction.
  for (int sigma : {1, -1}) {
    const Interval1 slopes = (sigma == 1 ? pos : neg).intersect(nonnegative());
    LPResult step = step_lp(rel, sigma);
    if (!slopes.empty && step.status == LPStatus::Feasible) {
      Matrix m(1, 1);
      m(0, 0) = pick_slope(slopes);
      Cone2 c = cone_canonical(1, {Vec{Rational(sigma)}}, {});
      return finish(Witness{m, c, Vec{step.point[0]}, Vec{step.point[1]}},
                    sigma == 1 ? "cone-enumeration:R+" : "cone-enumeration:R-");
    }
    json s = {{"cone", sigma == 1 ? "R+" : "R-"},
              {"slopes", interval_json(slopes)}};
    if (step.status == LPStatus::Infeasible)
      s["stepFarkas"] = to_json(step.farkas);
    shapes.push_back(s);
  }

  // C = R: any a with both signs, and any pair in K.
  {
    const Interval1 slopes = pos.intersect(neg);
    LPResult step = step_lp(rel, 0);
    if (!slopes.empty && step.status == LPStatus::Feasible) {
      Matrix m(1, 1);
      m(0, 0) = slopes.contains(1)    ? Rational(1)
                : slopes.contains(0)  ? Rational(0)
                : slopes.contains(-1) ? Rational(-1)
                : slopes.lower        ? *slopes.lower
                                      : *slopes.upper;
      Cone2 c = cone_canonical(1, {}, {Vec{Rational(1)}});
      return finish(Witness{m, c, Vec{step.point[0]}, Vec{step.point[1]}},
                    "cone-enumeration:R");
    }
    json s = {{"cone", "R"}, {"slopes", interval_json(slopes)}};
    if (step.status == LPStatus::Infeasible)
      s["stepFarkas"] = to_json(step.farkas);
    shapes.push_back(s);
  }

  FixedPointResult fp = fixed_point_witness(rel);
  if (fp.witness)
    return finish(std::move(*fp.witness), "fixed-point");
  shapes.push_back({{"cone", "0"}, {"fixedPointFarkas", to_json(fp.lp.farkas)}});

  return Verdict::terminating(TerminationMethod::ConeEnumeration1D,
                              {{"shapes", shapes}});
}

} // namespace loopterm
