// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lp.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace loopterm {

/// Largest ambient dimension accepted by the representation conversions.
inline constexpr std::size_t kMaxAmbientDim = 4;

/// {x in R^n : coeffs . x >= rhs (or == rhs) for every row}.
class HPolyhedron {
public:
  HPolyhedron() = default;
  HPolyhedron(std::size_t dim, std::vector<LinearRow> rows);

  static HPolyhedron universe(std::size_t dim);
  /// Canonical empty set: the single row 0 >= 1.
  static HPolyhedron empty(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<LinearRow> &rows() const noexcept { return rows_; }

  bool contains(const Vec &x) const;
  bool is_empty() const;
  LPProblem as_lp() const { return LPProblem{dim_, rows_, std::nullopt}; }

  /// Rows scaled to coprime integer coefficients, trivial rows dropped,
  /// duplicates removed and rows sorted lexicographically. An obviously
  /// contradictory row collapses the result to empty(dim).
  HPolyhedron normalized() const;

  bool operator==(const HPolyhedron &other) const = default;

private:
  std::size_t dim_ = 0;
  std::vector<LinearRow> rows_;
};

/// conv(vertices) + cone(rays) + span(lines). No vertices means empty.
struct VPolyhedron {
  std::size_t dim = 0;
  std::vector<Vec> vertices;
  std::vector<Vec> rays;
  std::vector<Vec> lines;

  bool empty() const noexcept { return vertices.empty(); }
  bool operator==(const VPolyhedron &other) const = default;
};

/// Generators of the polyhedral cone {z : rows hold with right-hand side 0}.
/// Right-hand sides of the input rows are ignored.
struct ConeGenerators {
  std::vector<Vec> rays;
  std::vector<Vec> lines;
};

/// Double description with incremental constraint insertion.
ConeGenerators cone_generators(std::size_t dim,
                               const std::vector<LinearRow> &rows);

VPolyhedron h_to_v(const HPolyhedron &h);
HPolyhedron v_to_h(const VPolyhedron &v);

/// Homogenized system. Throws EmptyPolyhedron on empty input.
HPolyhedron recession_cone(const HPolyhedron &h);

/// Row-wise homogenization without the emptiness check.
HPolyhedron homogenized(const HPolyhedron &h);

/// Image of `h` under the coordinate projection onto `keep` (kept in
/// increasing order). Fourier-Motzkin with LP pruning after each step.
HPolyhedron project(const HPolyhedron &h, std::vector<std::size_t> keep);

/// (compact part, recession part) with h == conv(compact) + cone.
std::pair<VPolyhedron, VPolyhedron> mw_decompose(const HPolyhedron &h);

/// Drops every row implied by the remaining ones.
HPolyhedron remove_redundant(const HPolyhedron &h);

/// Is `row` valid on all of `h`? (LP; true when h is empty.)
bool implies(const HPolyhedron &h, const LinearRow &row);

/// a is a subset of b (LP on every row of b).
bool is_subset(const HPolyhedron &a, const HPolyhedron &b);
bool set_equal(const HPolyhedron &a, const HPolyhedron &b);

/// Membership of x in the V-representation, by multiplier LP.
bool v_contains(const VPolyhedron &v, const Vec &x);

/// Relative interior membership. Throws EmptyPolyhedron on empty input.
bool ri_member(const HPolyhedron &h, const Vec &x);

/// Rows of h that hold with equality on all of h.
std::vector<std::size_t> implicit_equalities(const HPolyhedron &h);

/// Applies x -> T x to the space: returns {z : T z in h}.
HPolyhedron preimage(const HPolyhedron &h, const Matrix &t);

} // namespace loopterm
