// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "errors.hpp"
#include "generators.hpp"
#include "lp.hpp"

using namespace loopterm;

namespace {

Rational q(const char *s) { return parse_rational(s); }

LinearRow ge(Vec c, Rational rhs) { return {std::move(c), Relation::Ge, rhs}; }

// Brute-force optimum of max obj.x over a bounded 2-D polygon: intersect every
// pair of rows by Cramer's rule and keep feasible points.
std::optional<Rational> vertex_optimum(const std::vector<LinearRow> &rows,
                                       const Vec &obj) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto &a = rows[i].coeffs;
      const auto &b = rows[j].coeffs;
      Rational det = a[0] * b[1] - a[1] * b[0];
      if (det == 0)
        continue;
      Vec x{(rows[i].rhs * b[1] - a[1] * rows[j].rhs) / det,
            (a[0] * rows[j].rhs - rows[i].rhs * b[0]) / det};
      bool ok = true;
      for (const auto &r : rows)
        ok = ok && dot(r.coeffs, x) >= r.rhs;
      if (ok && (!best || dot(obj, x) > *best))
        best = dot(obj, x);
    }
  return best;
}

} // namespace

TEST_CASE("rationals parse exactly") {
  CHECK(q("7") == 7);
  CHECK(q("-3/4") == Rational(-3, 4));
  CHECK(q("1.25") == Rational(5, 4));
  CHECK(q("-.5") == Rational(-1, 2));
  CHECK(q("1e-3") == Rational(1, 1000));
  CHECK(q("6/8") == Rational(3, 4));
  CHECK(q("6/8").get_den() == 4);
  CHECK_THROWS_AS(q("1/0"), Error);
  CHECK_THROWS_AS(q("abc"), Error);
  CHECK_THROWS_AS(q(""), Error);
}

TEST_CASE("rationals print in lowest terms") {
  CHECK(to_string(q("4/2")) == "2");
  CHECK(to_string(q("-2/6")) == "-1/3");
  CHECK(to_string(make_rational(10, -4)) == "-5/2");
}

TEST_CASE("continued fractions") {
  CHECK(continued_fraction_approx(q("0.3333333333"), 1000000) == Rational(1, 3));
  CHECK(continued_fraction_approx(q("3.14159265358979"), 1000) ==
        Rational(355, 113));
  CHECK(continued_fraction_approx(q("2"), 10) == 2);
  CHECK(continued_fraction_approx(q("-0.5"), 10) == Rational(-1, 2));
  CHECK(simplest_within(0.333333L, 1e-3L) == Rational(1, 3));
  CHECK(simplest_within(0.0L, 1e-3L) == 0);
}

TEST_CASE("vector and matrix operations check dimensions") {
  CHECK_THROWS_AS(add(Vec{1}, Vec{1, 2}), Error);
  CHECK_THROWS_AS(dot(Vec{1}, Vec{}), Error);
  Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK(m.apply(Vec{1, 1}) == Vec{3, 7});
  CHECK((m * Matrix::identity(2)) == m);
  CHECK(primitive(Vec{q("2/3"), q("-4/3")}) == Vec{1, -2});
  CHECK(primitive_unsigned(Vec{-2, 4}) == Vec{1, -2});
  CHECK(rank({{1, 2}, {2, 4}}) == 1);
  auto c = coordinates({{1, 0}, {1, 1}}, Vec{3, 2});
  REQUIRE(c);
  CHECK(*c == Vec{1, 2});
  CHECK_FALSE(coordinates({{1, 1}}, Vec{1, 0}));
}

TEST_CASE("lp_feasible examples") {
  SUBCASE("boundary point") {
    LPProblem p{1, {ge({1}, 0), ge({-1}, -1)}, std::nullopt};
    LPResult r = lp_feasible(p);
    REQUIRE(r.status == LPStatus::Feasible);
    CHECK(satisfies_all(p, r.point));
  }
  SUBCASE("contradictory pair") {
    LPProblem p{1, {ge({1}, 1), ge({-1}, 0)}, std::nullopt};
    LPResult r = lp_feasible(p);
    REQUIRE(r.status == LPStatus::Infeasible);
    CHECK(r.farkas[0] > 0);
    CHECK(r.farkas[0] == r.farkas[1]);
    CHECK(is_farkas_certificate(p, r.farkas));
  }
  SUBCASE("open quadrant region") {
    LPProblem p{2, {ge({1, 1}, 1), ge({1, 0}, 0), ge({0, 1}, 0)}, std::nullopt};
    LPResult r = lp_feasible(p);
    REQUIRE(r.status == LPStatus::Feasible);
    for (const auto &row : p.rows)
      CHECK(dot(row.coeffs, r.point) >= row.rhs);
  }
  SUBCASE("equalities are kept native") {
    LPProblem p{2,
                {{{1, 1}, Relation::Eq, 2}, {{1, -1}, Relation::Eq, 0}},
                std::nullopt};
    LPResult r = lp_feasible(p);
    REQUIRE(r.status == LPStatus::Feasible);
    CHECK(r.point == Vec{1, 1});
    p.rows.push_back({{1, 0}, Relation::Eq, 3});
    r = lp_feasible(p);
    REQUIRE(r.status == LPStatus::Infeasible);
    CHECK(r.farkas.size() == 3);
    CHECK(is_farkas_certificate(p, r.farkas));
  }
  SUBCASE("dimension mismatch") {
    LPProblem p{2, {ge({1}, 0)}, std::nullopt};
    CHECK_THROWS_AS(lp_feasible(p), Error);
  }
}

TEST_CASE("lp_optimize examples") {
  LPProblem seg{1, {ge({1}, 0), ge({-1}, -1)}, Vec{1}};
  LPResult r = lp_optimize(seg);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.point == Vec{1});
  CHECK(r.value == 1);

  LPProblem ray{1, {ge({1}, 0)}, Vec{1}};
  r = lp_optimize(ray);
  REQUIRE(r.status == LPStatus::Unbounded);
  CHECK(r.ray == Vec{1});

  std::vector<LinearRow> tri{ge({1, 0}, 0), ge({0, 1}, 0), ge({-1, -1}, -2)};
  r = lp_optimize({2, tri, Vec{1, 1}});
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == 2);
  CHECK(vertex_optimum(tri, Vec{1, 1}) == Rational(2));

  CHECK_THROWS_AS(lp_optimize({1, {ge({1}, 0)}, std::nullopt}), Error);

  LPProblem empty{1, {ge({1}, 1), ge({-1}, 0)}, Vec{1}};
  r = lp_optimize(empty);
  REQUIRE(r.status == LPStatus::Infeasible);
  CHECK(is_farkas_certificate(empty, r.farkas));
}

TEST_CASE("degenerate LP terminates (Beale)") {
  // max 3/4 x1 - 20 x2 + 1/2 x3 - 6 x4, cycles under the textbook rule.
  std::vector<LinearRow> rows{
      ge({q("-1/4"), 8, 1, -9}, 0), ge({q("-1/2"), 12, q("1/2"), -3}, 0),
      ge({0, 0, -1, 0}, -1),        ge({1, 0, 0, 0}, 0),
      ge({0, 1, 0, 0}, 0),          ge({0, 0, 1, 0}, 0),
      ge({0, 0, 0, 1}, 0)};
  LPResult r = lp_optimize({4, rows, Vec{q("3/4"), -20, q("1/2"), -6}});
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == q("5/4"));
}

TEST_CASE("random LPs: duality and vertex oracle") {
  testing::Gen gen(0x5eed01);
  int checked = 0;
  for (int iter = 0; iter < 150; ++iter) {
    // Box plus random cuts keeps every instance bounded.
    std::vector<LinearRow> rows{ge({1, 0}, -5), ge({-1, 0}, -5), ge({0, 1}, -5),
                                ge({0, -1}, -5)};
    for (int k = 0; k < 3; ++k)
      rows.push_back(ge(gen.nonzero_vec(2, -3, 3), gen.integer(-6, 2)));
    Vec obj = gen.nonzero_vec(2, -3, 3);
    LPProblem primal{2, rows, obj};
    LPResult p = lp_optimize(primal);
    if (p.status == LPStatus::Infeasible) {
      CHECK(is_farkas_certificate(primal, p.farkas));
      CHECK_FALSE(vertex_optimum(rows, obj));
      continue;
    }
    REQUIRE(p.status == LPStatus::Optimal);
    CHECK(vertex_optimum(rows, obj) == p.value);

    // Dual: min -b.y s.t. A^T y = -c, y >= 0, i.e. -(max b.y).
    LPProblem dual{rows.size(), {}, Vec{}};
    for (std::size_t j = 0; j < 2; ++j) {
      Vec col;
      for (const auto &r : rows)
        col.push_back(r.coeffs[j]);
      dual.rows.push_back({col, Relation::Eq, -obj[j]});
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
      dual.rows.push_back(ge(unit(rows.size(), i), 0));
    for (const auto &r : rows)
      dual.objective->push_back(r.rhs);
    LPResult d = lp_optimize(dual);
    REQUIRE(d.status == LPStatus::Optimal);
    CHECK(-d.value == p.value);
    ++checked;
  }
  CHECK(checked > 50);
}
