// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "certificates.hpp"

#include <optional>

namespace loopterm {

/// Interval of reals; a missing bound is infinite. Bounds coming from closed
/// polyhedra are always attained, so both flags are true in practice.
struct Interval1 {
  bool empty = false;
  std::optional<Rational> lower;
  std::optional<Rational> upper;
  bool lower_closed = true;
  bool upper_closed = true;

  bool contains(const Rational &a) const;
  Interval1 intersect(const Interval1 &other) const;
  std::string to_string() const;
};

/// {a : (sigma, sigma * a) in rec(K)} for d = 1 and sigma in {+1, -1}, by
/// minimizing and maximizing a.
Interval1 slope_interval(const TransitionRelation &rel, int sigma);

/// Complete decision for d = 1. Tries C = R+, R-, R and {0} in that order
/// and reports the first that admits a witness; Terminating otherwise, with
/// per-shape refutations as artifacts. Throws Precondition when d != 1.
Verdict decide_1d(const TransitionRelation &rel, std::size_t steps = 64);

} // namespace loopterm
