// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "lp.hpp"

#include "errors.hpp"

#include <limits>

namespace loopterm {

bool LinearRow::holds_at(const Vec &x) const {
  Rational s = slack(x);
  return rel == Relation::Ge ? sgn(s) >= 0 : sgn(s) == 0;
}

const char *to_string(LPStatus s) {
  switch (s) {
  case LPStatus::Feasible:
    return "Feasible";
  case LPStatus::Infeasible:
    return "Infeasible";
  case LPStatus::Unbounded:
    return "Unbounded";
  case LPStatus::Optimal:
    return "Optimal";
  }
  return "?";
}

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

void validate(const LPProblem &p) {
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    if (p.rows[i].coeffs.size() != p.dim)
      throw Error(ErrorCode::DimensionMismatch,
                  "LP row " + std::to_string(i) + " has " +
                      std::to_string(p.rows[i].coeffs.size()) +
                      " coefficients, expected " + std::to_string(p.dim));
  if (p.objective && p.objective->size() != p.dim)
    throw Error(ErrorCode::DimensionMismatch,
                "LP objective has wrong dimension");
}

// Dense tableau over nonnegative variables z with T z = rhs, maximizing a
// linear cost. Pivoting follows Bland's rule.
class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), a_(rows, Vec(cols + 1, Rational(0))), basis_(rows, npos),
        allowed_(cols, true) {}

  Rational &at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational &rhs(std::size_t r) { return a_[r][cols_]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t basic(std::size_t r) const { return basis_[r]; }
  void set_basic(std::size_t r, std::size_t c) { basis_[r] = c; }
  void forbid(std::size_t c) { allowed_[c] = false; }
  void erase_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / a_[r][c];
    for (auto &x : a_[r])
      x *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r || sgn(a_[i][c]) == 0)
        continue;
      Rational f = a_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (sgn(a_[r][j]) != 0)
          a_[i][j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  Rational reduced_cost(const Vec &cost, std::size_t j) const {
    Rational d = cost[j];
    for (std::size_t r = 0; r < a_.size(); ++r)
      if (sgn(cost[basis_[r]]) != 0 && sgn(a_[r][j]) != 0)
        d -= cost[basis_[r]] * a_[r][j];
    return d;
  }

  /// Returns npos at optimality, otherwise the entering column of an
  /// unbounded improving direction.
  std::size_t maximize(const Vec &cost) {
    for (;;) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allowed_[j])
          continue;
        if (sgn(reduced_cost(cost, j)) > 0) {
          enter = j;
          break;
        }
      }
      if (enter == npos)
        return npos;
      std::size_t leave = npos;
      Rational best;
      for (std::size_t r = 0; r < a_.size(); ++r) {
        if (sgn(a_[r][enter]) <= 0)
          continue;
        Rational ratio = a_[r][cols_] / a_[r][enter];
        if (leave == npos || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == npos)
        return enter;
      pivot(leave, enter);
    }
  }

  Vec solution() const {
    Vec z = zeros(cols_);
    for (std::size_t r = 0; r < a_.size(); ++r)
      z[basis_[r]] = a_[r][cols_];
    return z;
  }

  /// Edge direction obtained by raising nonbasic column `enter`.
  Vec direction(std::size_t enter) const {
    Vec dz = zeros(cols_);
    dz[enter] = 1;
    for (std::size_t r = 0; r < a_.size(); ++r)
      dz[basis_[r]] = -a_[r][enter];
    return dz;
  }

private:
  std::size_t cols_;
  std::vector<Vec> a_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

// Column layout: x+ (n), x- (n), one surplus per >= row, one artificial per
// row.
struct Standardized {
  Tableau tab;
  std::size_t n;
  std::size_t first_artificial;
};

Standardized standardize(const LPProblem &p) {
  const std::size_t n = p.dim;
  const std::size_t m = p.rows.size();
  std::size_t surplus = 0;
  for (const auto &row : p.rows)
    if (row.rel == Relation::Ge)
      ++surplus;
  const std::size_t first_art = 2 * n + surplus;
  Standardized s{Tableau(m, first_art + m), n, first_art};
  std::size_t next_surplus = 2 * n;
  for (std::size_t i = 0; i < m; ++i) {
    const auto &row = p.rows[i];
    const bool flip = sgn(row.rhs) < 0;
    const Rational sign_factor = flip ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(row.coeffs[j]) == 0)
        continue;
      s.tab.at(i, j) = sign_factor * row.coeffs[j];
      s.tab.at(i, n + j) = -sign_factor * row.coeffs[j];
    }
    if (row.rel == Relation::Ge)
      s.tab.at(i, next_surplus++) = -sign_factor;
    s.tab.at(i, first_art + i) = 1;
    s.tab.rhs(i) = sign_factor * row.rhs;
    s.tab.set_basic(i, first_art + i);
  }
  return s;
}

Vec recover_x(const Vec &z, std::size_t n) {
  Vec x(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = z[j] - z[n + j];
  return x;
}

// Phase 1. Returns false when the system is infeasible. On success the
// artificial columns are driven out of the basis (or their rows removed) and
// forbidden.
bool phase_one(Standardized &s) {
  Tableau &tab = s.tab;
  Vec cost = zeros(tab.cols());
  for (std::size_t j = s.first_artificial; j < tab.cols(); ++j)
    cost[j] = -1;
  tab.maximize(cost); // bounded above by 0
  Vec z = tab.solution();
  for (std::size_t j = s.first_artificial; j < tab.cols(); ++j)
    if (sgn(z[j]) != 0)
      return false;
  for (std::size_t r = 0; r < tab.rows();) {
    if (tab.basic(r) < s.first_artificial) {
      ++r;
      continue;
    }
    std::size_t c = npos;
    for (std::size_t j = 0; j < s.first_artificial; ++j)
      if (sgn(tab.at(r, j)) != 0) {
        c = j;
        break;
      }
    if (c == npos) {
      tab.erase_row(r); // redundant equality
      continue;
    }
    tab.pivot(r, c);
    ++r;
  }
  for (std::size_t j = s.first_artificial; j < tab.cols(); ++j)
    tab.forbid(j);
  return true;
}

// Alternative system of Farkas' lemma:
//   y_i >= 0 on >= rows, sum_i y_i a_i = 0, sum_i y_i b_i = 1.
Vec solve_farkas(const LPProblem &p) {
  const std::size_t m = p.rows.size();
  LPProblem alt;
  alt.dim = m;
  for (std::size_t i = 0; i < m; ++i)
    if (p.rows[i].rel == Relation::Ge)
      alt.rows.push_back({unit(m, i), Relation::Ge, 0});
  for (std::size_t j = 0; j < p.dim; ++j) {
    LinearRow r{zeros(m), Relation::Eq, 0};
    for (std::size_t i = 0; i < m; ++i)
      r.coeffs[i] = p.rows[i].coeffs[j];
    alt.rows.push_back(std::move(r));
  }
  LinearRow norm{zeros(m), Relation::Eq, 1};
  for (std::size_t i = 0; i < m; ++i)
    norm.coeffs[i] = p.rows[i].rhs;
  alt.rows.push_back(std::move(norm));

  Standardized s = standardize(alt);
  if (!phase_one(s))
    throw Error(ErrorCode::Internal,
                "Farkas alternative infeasible for an infeasible system");
  return recover_x(s.tab.solution(), alt.dim);
}

LPResult infeasible_result(const LPProblem &p) {
  LPResult res;
  res.status = LPStatus::Infeasible;
  res.farkas = solve_farkas(p);
  if (!is_farkas_certificate(p, res.farkas))
    throw Error(ErrorCode::Internal, "LP: Farkas certificate failed check");
  return res;
}

} // namespace

bool satisfies_all(const LPProblem &p, const Vec &x) {
  if (x.size() != p.dim)
    return false;
  for (const auto &row : p.rows)
    if (!row.holds_at(x))
      return false;
  return true;
}

bool is_farkas_certificate(const LPProblem &p, const Vec &y) {
  if (y.size() != p.rows.size())
    return false;
  Vec combo = zeros(p.dim);
  Rational rhs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (p.rows[i].rel == Relation::Ge && sgn(y[i]) < 0)
      return false;
    if (sgn(y[i]) == 0)
      continue;
    combo = add(combo, scale(p.rows[i].coeffs, y[i]));
    rhs += y[i] * p.rows[i].rhs;
  }
  return is_zero(combo) && sgn(rhs) > 0;
}

bool is_improving_ray(const LPProblem &p, const Vec &r) {
  if (!p.objective || r.size() != p.dim)
    return false;
  for (const auto &row : p.rows) {
    Rational v = dot(row.coeffs, r);
    if (row.rel == Relation::Ge ? sgn(v) < 0 : sgn(v) != 0)
      return false;
  }
  return sgn(dot(*p.objective, r)) > 0;
}

LPResult lp_feasible(const LPProblem &p) {
  validate(p);
  Standardized s = standardize(p);
  if (!phase_one(s))
    return infeasible_result(p);
  LPResult res;
  res.status = LPStatus::Feasible;
  res.point = recover_x(s.tab.solution(), p.dim);
  if (!satisfies_all(p, res.point))
    throw Error(ErrorCode::Internal, "LP: feasible point failed check");
  return res;
}

LPResult lp_optimize(const LPProblem &p) {
  require(p.objective.has_value(), ErrorCode::Precondition,
          "lp_optimize requires an objective");
  validate(p);
  Standardized s = standardize(p);
  if (!phase_one(s))
    return infeasible_result(p);
  const std::size_t n = p.dim;
  Vec cost = zeros(s.tab.cols());
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = (*p.objective)[j];
    cost[n + j] = -(*p.objective)[j];
  }
  std::size_t enter = s.tab.maximize(cost);
  LPResult res;
  res.point = recover_x(s.tab.solution(), n);
  if (!satisfies_all(p, res.point))
    throw Error(ErrorCode::Internal, "LP: optimal point failed check");
  if (enter != npos) {
    res.status = LPStatus::Unbounded;
    res.ray = recover_x(s.tab.direction(enter), n);
    if (!is_improving_ray(p, res.ray))
      throw Error(ErrorCode::Internal, "LP: unbounded ray failed check");
    return res;
  }
  res.status = LPStatus::Optimal;
  res.value = dot(*p.objective, res.point);
  return res;
}

} // namespace loopterm
