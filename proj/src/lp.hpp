// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace loopterm {

enum class Relation { Ge, Eq };

/// coeffs . x >= rhs, or coeffs . x == rhs.
struct LinearRow {
  Vec coeffs;
  Relation rel = Relation::Ge;
  Rational rhs = 0;

  Rational lhs(const Vec &x) const { return dot(coeffs, x); }
  bool holds_at(const Vec &x) const;
  /// Slack coeffs . x - rhs.
  Rational slack(const Vec &x) const { return lhs(x) - rhs; }

  bool operator==(const LinearRow &other) const = default;
};

/// Variables are free (unrestricted in sign). The objective, if any, is
/// maximized.
struct LPProblem {
  std::size_t dim = 0;
  std::vector<LinearRow> rows;
  std::optional<Vec> objective;
};

enum class LPStatus { Feasible, Infeasible, Unbounded, Optimal };

const char *to_string(LPStatus s);

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  /// Feasible, Optimal: the solution. Unbounded: a feasible base point.
  Vec point;
  /// Infeasible: one multiplier per row, nonnegative on >= rows, such that
  /// sum y_i coeffs_i == 0 and sum y_i rhs_i > 0.
  Vec farkas;
  /// Unbounded: direction of the homogenized system improving the objective.
  Vec ray;
  /// Optimal: objective value at `point`.
  Rational value;
};

/// Exact feasibility with a certificate either way. Deterministic.
LPResult lp_feasible(const LPProblem &p);

/// Exact optimization; throws Precondition when no objective is set.
LPResult lp_optimize(const LPProblem &p);

// Independent substitution checks; every result is passed through these
// before being returned.
bool satisfies_all(const LPProblem &p, const Vec &x);
bool is_farkas_certificate(const LPProblem &p, const Vec &y);
bool is_improving_ray(const LPProblem &p, const Vec &r);

} // namespace loopterm
