// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "certificates.hpp"
#include "errors.hpp"
#include "generators.hpp"

using namespace loopterm;

namespace {

TransitionRelation rel_of(const char *text) {
  return loop_to_relation(parse_loop(text));
}

const char *kL1 = "loop(x) { guard: x >= 0; step: x' == x + 1; }";
const char *kL2 = "loop(x) { guard: x >= 0; step: x' == x - 1; }";
const char *kL3 = "loop(x) { guard: x >= 1; step: x' == 2*x; }";
const char *kL4 = "loop(x,y) { guard: x >= 0; step: x' == x + y; y' == y; }";

Matrix scalar(long a) {
  Matrix m(1, 1);
  m(0, 0) = a;
  return m;
}

Cone2 ray1() { return cone_canonical(1, {{1}}, {}); }

std::vector<Vec> points(std::initializer_list<long> xs) {
  std::vector<Vec> out;
  for (long x : xs)
    out.push_back({Rational(x)});
  return out;
}

} // namespace

TEST_CASE("verify_witness on the increment loop") {
  TransitionRelation l1 = rel_of(kL1);
  Witness good{scalar(1), ray1(), {0}, {1}};
  VerifyReport ok = verify_witness(l1, good);
  CHECK(ok.ok);
  for (const auto &c : ok.conditions)
    CHECK(c.ok);

  VerifyReport flip = verify_witness(l1, {scalar(-1), ray1(), {0}, {1}});
  CHECK_FALSE(flip.ok);
  CHECK_FALSE(flip.conditions[0].ok);
  CHECK(flip.conditions[2].ok);
  CHECK(flip.summary().find("u1") != std::string::npos);

  VerifyReport off = verify_witness(l1, {scalar(1), ray1(), {0}, {2}});
  CHECK_FALSE(off.conditions[2].ok);
  CHECK(off.conditions[3].ok);

  VerifyReport back = verify_witness(
      l1, {scalar(1), cone_canonical(1, {{-1}}, {}), {0}, {1}});
  CHECK_FALSE(back.conditions[1].ok);
  CHECK_FALSE(back.conditions[3].ok);

  CHECK_THROWS_AS(verify_witness(l1, {scalar(1), ray1(), {0, 0}, {1}}), Error);
}

TEST_CASE("fixed-point witnesses verify for any M") {
  TransitionRelation k = rel_of("loop(x) { guard: x >= 0; step: x' == x; }");
  Cone2 zero = cone_canonical(1, {}, {});
  for (long a : {-3, 0, 1, 7})
    CHECK(verify_witness(k, {scalar(a), zero, {2}, {2}}).ok);
  CHECK_FALSE(verify_witness(k, {scalar(1), zero, {-1}, {-1}}).ok);
}

TEST_CASE("witness_to_run") {
  RunTrace a = witness_to_run({scalar(1), ray1(), {0}, {1}}, 4);
  CHECK(a.points == points({0, 1, 2, 3, 4}));
  RunTrace b = witness_to_run({scalar(2), ray1(), {1}, {2}}, 3);
  CHECK(b.points == points({1, 2, 4, 8}));
  CHECK(check_run(rel_of(kL3), b));
  RunTrace c = witness_to_run({scalar(5), cone_canonical(1, {}, {}), {3}, {3}}, 10);
  CHECK(c.points.size() == 11);
  for (const auto &p : c.points)
    CHECK(p == Vec{3});
  CHECK_THROWS_AS(witness_to_run({scalar(1), ray1(), {0}, {1}}, 0), Error);
}

TEST_CASE("check_run") {
  TransitionRelation l1 = rel_of(kL1);
  TransitionRelation l2 = rel_of(kL2);
  CHECK(check_run(l1, {points({0, 1, 2, 3, 4}), {}}));
  CHECK(check_run(l2, {points({2, 1, 0, -1}), {}}));
  CHECK_FALSE(check_run(l2, {points({2, 1, 0, -1, -2}), {}}));
  CHECK_FALSE(check_run(l1, {points({0, 1, 3}), {}}));
  CHECK_THROWS_AS(check_run(l1, {points({0}), {}}), Error);
  RunTrace rec = record_membership(l2, points({2, 1, 0, -1, -2}));
  CHECK(rec.membership == std::vector<bool>{true, true, true, false});
}

TEST_CASE("fixed_point_witness") {
  FixedPointResult l4 = fixed_point_witness(rel_of(kL4));
  REQUIRE(l4.witness);
  CHECK(l4.witness->v[1] == 0);
  CHECK(l4.witness->v[0] >= 0);
  CHECK(l4.witness->v == l4.witness->w);
  CHECK(l4.witness->c.kind == ConeKind::Zero);
  CHECK(verify_witness(rel_of(kL4), *l4.witness).ok);

  TransitionRelation l1 = rel_of(kL1);
  FixedPointResult none = fixed_point_witness(l1);
  CHECK_FALSE(none.witness);
  REQUIRE(none.lp.status == LPStatus::Infeasible);
  CHECK(is_farkas_certificate(fixed_point_problem(l1), none.lp.farkas));

  FixedPointResult id =
      fixed_point_witness(rel_of("loop(x) { guard: x >= 0; step: x' == x; }"));
  REQUIRE(id.witness);
  CHECK(id.witness->v == Vec{0});
}

TEST_CASE("json round trip") {
  Witness w{Matrix::from_rows({{2, 0}, {Rational(1, 3), 1}}),
            cone_canonical(2, {{0, 1}}, {{1, 0}}),
            {Rational(-1, 2), 0},
            {1, 4}};
  nlohmann::json j = to_json(w);
  CHECK(j["M"][1][0] == "1/3");
  CHECK(j["C"]["kind"] == "HalfPlane");
  CHECK(witness_from_json(j, 2) == w);
  nlohmann::json bad = j;
  bad["C"]["kind"] = "Sector";
  CHECK_THROWS_AS(witness_from_json(bad, 2), Error);
  CHECK_THROWS_AS(witness_from_json(j, 1), Error);
  bad = j;
  bad.erase("v");
  CHECK_THROWS_AS(witness_from_json(bad, 2), Error);

  TransitionRelation l1 = rel_of(kL1);
  Witness w1{scalar(1), ray1(), {0}, {1}};
  nlohmann::json cert = certificate_json(
      l1, Verdict::non_terminating(w1, witness_to_run(w1, 64), "test"));
  CHECK(cert["certVersion"] == 1);
  CHECK(cert["verdict"] == "NonTerminating");
  CHECK(cert["loopHash"] == relation_hash(l1));
  CHECK(cert["run"]["points"].size() == 65);
  CHECK(certificate_json(l1, Verdict::unknown("budget"))["reason"] == "budget");
}

TEST_CASE("property: verified witnesses yield runs in K") {
  testing::Gen gen(123);
  int verified = 0;
  for (int iter = 0; iter < 300; ++iter) {
    std::size_t d = static_cast<std::size_t>(gen.integer(1, 2));
    auto [rel, wit] = testing::witnessed_relation(gen, d);
    REQUIRE(verify_witness(rel, wit).ok);
    ++verified;
    std::size_t n = static_cast<std::size_t>(gen.integer(1, 100));
    CHECK(check_run(rel, witness_to_run(wit, n)));
  }
  CHECK(verified == 300);
}

TEST_CASE("property: fixed points verify, refutations are exact") {
  testing::Gen gen(321);
  int some = 0, none = 0;
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t d = static_cast<std::size_t>(gen.integer(1, 2));
    TransitionRelation rel{d, gen.polyhedron(2 * d, 5)};
    FixedPointResult fp = fixed_point_witness(rel);
    if (fp.witness) {
      CHECK(verify_witness(rel, *fp.witness).ok);
      ++some;
    } else {
      CHECK(is_farkas_certificate(fixed_point_problem(rel), fp.lp.farkas));
      ++none;
    }
  }
  CHECK(some > 0);
  CHECK(none > 0);
}

TEST_CASE("property: verification invariances") {
  testing::Gen gen(555);
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t d = static_cast<std::size_t>(gen.integer(1, 2));
    auto [rel, wit] = testing::witnessed_relation(gen, d);

    Witness scaled = wit;
    for (auto &g : scaled.c.generators)
      g = scale(g, gen.integer(1, 5));
    for (auto &l : scaled.c.lineality)
      l = scale(l, gen.chance(0.5) ? 3 : -2);
    CHECK(verify_witness(rel, scaled).ok);

    // (v, w) + (r1, r2) for r in rec(K) with w + r2 - v - r1 in C.
    VPolyhedron rec = h_to_v(recession_cone(rel.k));
    for (const auto &r : rec.rays) {
      Witness moved = wit;
      moved.v = add(wit.v, slice(r, 0, d));
      moved.w = add(wit.w, slice(r, d, d));
      if (cone_member(wit.c, sub(moved.w, moved.v)))
        CHECK(verify_witness(rel, moved).ok);
    }
  }
}

TEST_CASE("property: generator-level check of u2 matches conic combinations") {
  testing::Gen gen(777);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t d = static_cast<std::size_t>(gen.integer(1, 2));
    TransitionRelation rel{d, gen.polyhedron(2 * d, 4)};
    Witness wit{gen.matrix(d, -2, 2), gen.cone(d), zeros(d), zeros(d)};
    bool gen_ok = verify_witness(rel, wit).conditions[1].ok;

    HPolyhedron rec = homogenized(rel.k);
    std::vector<Vec> basis = wit.c.generators;
    for (const auto &l : wit.c.lineality) {
      basis.push_back(l);
      basis.push_back(negate(l));
    }
    bool all = true;
    for (const auto &b : basis)
      all = all && rec.contains(concat(b, wit.m.apply(b)));
    for (int s = 0; s < 50; ++s) {
      Vec x = zeros(d);
      for (const auto &b : basis)
        x = add(x, scale(b, gen.rational(0, 4, 3)));
      all = all && rec.contains(concat(x, wit.m.apply(x)));
    }
    CHECK(gen_ok == all);
  }
}
