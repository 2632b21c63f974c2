// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "decider.hpp"
#include "decider_1d.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "heuristics.hpp"
#include "smt.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

using namespace loopterm;
using loopterm::testing::Gen;

namespace {

const char *kL1 = "loop(x) { guard: x >= 0; step: x' == x + 1; }";
const char *kL2 = "loop(x) { guard: x >= 0; step: x' == x - 1; }";
const char *kL3 = "loop(x, y) { guard: x >= 1; step: x' == 2*x; y' == y; }";
const char *kL4 = "loop(x, y) { guard: x >= 0; y >= 0; step: x' == x + y; y' == y; }";
const char *kL5 = "loop(x, y) { guard: x >= 0; step: x' == x + y; y' == y - 1; }";

TransitionRelation rel_of(const std::string &text) {
  return loop_to_relation(parse_loop(text));
}

Vec v1(long a) { return Vec{Rational(a)}; }
Vec v2(long a, long b) { return Vec{Rational(a), Rational(b)}; }

RunTrace trace_of(std::vector<Vec> pts) {
  RunTrace t;
  t.points = std::move(pts);
  t.membership.assign(t.points.size() - 1, true);
  return t;
}

DecideConfig offline() {
  DecideConfig cfg;
  cfg.use_smt = false;
  return cfg;
}

std::filesystem::path fake_solver(const std::string &name, const std::string &body) {
  auto dir = std::filesystem::temp_directory_path() / "loopterm-test";
  std::filesystem::create_directories(dir);
  auto p = dir / (name + "-" + std::to_string(::getpid()));
  std::ofstream(p) << "#!/bin/sh\n" << body << "\n";
  std::filesystem::permissions(p, std::filesystem::perms::owner_all);
  return p;
}

std::size_t count(const std::string &text, const std::string &needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1))
    ++n;
  return n;
}

} // namespace

TEST_CASE("greedy runs") {
  SUBCASE("L1 from 0 climbs by one") {
    RunTrace t = greedy_run(rel_of(kL1), v1(0), 5);
    REQUIRE(t.points.size() == 6);
    for (std::size_t i = 0; i < t.points.size(); ++i)
      CHECK(t.points[i] == v1(static_cast<long>(i)));
    CHECK(check_run(rel_of(kL1), t));
  }
  SUBCASE("L2 from 5 stops after leaving the guard") {
    // (0, -1) is in K, and nothing leaves -1.
    RunTrace t = greedy_run(rel_of(kL2), v1(5), 10);
    REQUIRE(t.points.size() == 7);
    CHECK(t.points.back() == v1(-1));
    CHECK(check_run(rel_of(kL2), t));
  }
  SUBCASE("L4 from the origin stays put") {
    RunTrace t = greedy_run(rel_of(kL4), v2(0, 0), 3);
    REQUIRE(t.points.size() == 4);
    for (const auto &p : t.points)
      CHECK(p == v2(0, 0));
  }
  SUBCASE("no successor gives a single point") {
    RunTrace t = greedy_run(rel_of(kL1), v1(-3), 5);
    CHECK(t.points.size() == 1);
    CHECK(t.membership.empty());
  }
}

TEST_CASE("direction estimates") {
  SUBCASE("(n, 1) tends to (1, 0)") {
    std::vector<Vec> pts;
    for (long n = 1; n <= 40; ++n)
      pts.push_back(v2(n, 1));
    DirectionEstimate e = estimate_directions(trace_of(pts));
    CHECK_FALSE(e.bounded);
    REQUIRE(!e.directions.empty());
    CHECK(e.directions[0].z == v2(1, 0));
  }
  SUBCASE("(2^n, n) tends to (1, 0) with ratio 2") {
    std::vector<Vec> pts;
    for (long n = 0; n <= 12; ++n)
      pts.push_back(Vec{Rational(1L << n), Rational(n)});
    DirectionEstimate e = estimate_directions(trace_of(pts));
    REQUIRE(!e.directions.empty());
    CHECK(e.directions[0].z == v2(1, 0));
    CHECK(e.directions[0].growth == doctest::Approx(2.0).epsilon(0.01));
  }
  SUBCASE("constant traces have no direction") {
    DirectionEstimate e = estimate_directions(trace_of(std::vector<Vec>(20, v2(3, -1))));
    CHECK(e.bounded);
    CHECK(e.directions.empty());
  }
  SUBCASE("short traces have no direction") {
    DirectionEstimate e = estimate_directions(trace_of({v2(0, 0), v2(1, 0), v2(2, 0)}));
    CHECK(e.directions.empty());
  }
  SUBCASE("arithmetic traces along random directions") {
    Gen gen(71);
    for (int i = 0; i < 50; ++i) {
      Vec z = gen.nonzero_vec(2, -4, 4);
      Vec base = gen.vec(2, -5, 5);
      std::vector<Vec> pts;
      for (long n = 0; n < 64; ++n)
        pts.push_back(add(base, scale(z, Rational(n * n + 1))));
      DirectionEstimate e = estimate_directions(trace_of(pts));
      REQUIRE(!e.directions.empty());
      Rational top = std::max(abs(z[0]), abs(z[1]));
      Vec expect = scale(z, Rational(1 / top));
      const Vec &got = e.directions[0].z;
      for (std::size_t k = 0; k < 2; ++k)
        CHECK(abs(got[k] - expect[k]) <= Rational(1, 10));
    }
  }
}

TEST_CASE("witness proposals") {
  SUBCASE("2-D doubling loop") {
    TransitionRelation rel = rel_of(kL3);
    auto p = heuristic_search(rel, {});
    REQUIRE(p.has_value());
    CHECK(verify_witness(rel, p->witness).ok);
    Matrix m(2, 2);
    m(0, 0) = 2;
    m(1, 1) = 1;
    CHECK(p->witness.m == m);
    CHECK(p->witness.v == v2(1, 0));
    CHECK(p->witness.w == v2(2, 0));
    CHECK((p->witness.c.kind == ConeKind::Ray || p->witness.c.kind == ConeKind::Sector));
  }
  SUBCASE("L4 yields the fixed point first") {
    TransitionRelation rel = rel_of(kL4);
    auto props = propose_witnesses(rel, {});
    REQUIRE(!props.empty());
    CHECK(props[0].origin == "fixed-point");
    CHECK(props[0].witness.c.kind == ConeKind::Zero);
    CHECK(verify_witness(rel, props[0].witness).ok);
  }
  SUBCASE("L5 yields nothing") {
    TransitionRelation rel = rel_of(kL5);
    for (const auto &start : choose_starts(rel, 4, 3)) {
      DirectionEstimate e = estimate_directions(greedy_run(rel, start, 64));
      CHECK(propose_witnesses(rel, e, true).empty());
    }
    CHECK_FALSE(heuristic_search(rel, {}).has_value());
  }
  SUBCASE("every proposal verifies") {
    Gen gen(5);
    for (int i = 0; i < 40; ++i) {
      auto wr = loopterm::testing::witnessed_relation(gen, 2);
      for (const auto &start : choose_starts(wr.rel, 2, i)) {
        DirectionEstimate e = estimate_directions(greedy_run(wr.rel, start, 32));
        for (const auto &p : propose_witnesses(wr.rel, e, true))
          CHECK_MESSAGE(verify_witness(wr.rel, p.witness).ok, p.origin);
      }
    }
  }
}

TEST_CASE("solver script layout") {
  SMTScript s2 = encode_witness_exists(rel_of(kL5));
  CHECK(count(s2.text, "(set-logic QF_NRA)") == 1);
  CHECK(count(s2.text, "(check-sat)") == 1);
  CHECK(count(s2.text, "(get-model)") == 1);
  // M, two generators, v, w: 4 + 4 + 4, plus 4 + 2 multipliers.
  CHECK(count(s2.text, "() Real)") == 18);
  CHECK(count(s2.text, "() Bool)") == 6);
  CHECK(s2.reals.size() == 18);
  for (const char *name : {"m11", "m12", "m21", "m22", "g1x", "g1y", "g2x", "g2y",
                           "vx", "vy", "wx", "wy"})
    CHECK(count(s2.text, std::string("(declare-fun ") + name + " () Real)") == 1);
  CHECK(s2.hash == "sha256:" + sha256_hex(s2.text));
  CHECK(encode_witness_exists(rel_of(kL5)).text == s2.text);

  SMTScript s1 = encode_witness_exists(rel_of(kL1));
  CHECK(count(s1.text, "() Real)") == 6);
  CHECK(s1.selectors == std::vector<std::string>{"shape_zero", "shape_ray", "shape_line"});

  SMTScript ray = encode_witness_exists(rel_of(kL5), {ConeKind::Ray});
  CHECK(ray.selectors == std::vector<std::string>{"shape_ray"});
  CHECK(count(ray.text, "(assert shape_ray)") == 1);
  CHECK_THROWS_AS(encode_witness_exists(rel_of(kL1), {ConeKind::Sector}), Error);

  TransitionRelation r3{3, HPolyhedron::universe(6)};
  try {
    encode_witness_exists(r3);
    FAIL("expected Unsupported");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
  CHECK_THROWS_AS(decide(r3), Error);
}

TEST_CASE("verified witnesses satisfy the script") {
  Gen gen(2024);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = gen.chance(0.3) ? 1 : 2;
    auto wr = loopterm::testing::witnessed_relation(gen, d);
    REQUIRE(verify_witness(wr.rel, wr.witness).ok);
    SMTScript s = encode_witness_exists(wr.rel);
    Assignment a = witness_assignment(wr.witness);
    CHECK(script_satisfied(s, a));
    CHECK(script_satisfied(encode_witness_exists(wr.rel, {wr.witness.c.kind}), a));

    // Moving w outside K breaks the (v, w) rows.
    Assignment broken = a;
    const auto &rows = wr.rel.k.rows();
    if (!rows.empty() && rows[0].rel == Relation::Ge) {
      Vec dir(2 * d);
      for (std::size_t k = 0; k < 2 * d; ++k)
        dir[k] = -rows[0].coeffs[k];
      Rational n2 = dot(dir, dir);
      if (n2 != 0) {
        Vec pt = wr.witness.v;
        pt.insert(pt.end(), wr.witness.w.begin(), wr.witness.w.end());
        Rational t = (rows[0].slack(pt) + 1) / n2;
        const char *axis[] = {"x", "y"};
        for (std::size_t k = 0; k < d; ++k) {
          broken[std::string("v") + axis[k]] = Rational(pt[k] + t * dir[k]);
          broken[std::string("w") + axis[k]] = Rational(pt[d + k] + t * dir[d + k]);
        }
        CHECK_FALSE(script_satisfied(s, broken));
      }
    }
  }
  for (const char *text : {kL1, kL3, kL4}) {
    TransitionRelation rel = rel_of(text);
    Verdict v = decide(rel, offline());
    REQUIRE(v.kind == VerdictKind::NonTerminating);
    CHECK(script_satisfied(encode_witness_exists(rel), witness_assignment(*v.witness)));
  }
}

TEST_CASE("s-expressions and model values") {
  auto es = parse_sexprs("(a (b 1.0) \"s t\") ; comment\n x");
  REQUIRE(es.size() == 2);
  CHECK(es[0].to_string() == "(a (b 1.0) \"s t\")");
  CHECK(es[1].atom == "x");
  CHECK_THROWS_AS(parse_sexprs("(a (b)"), ParseError);
  CHECK_THROWS_AS(parse_sexprs("a)"), ParseError);

  const Integer D = kDefaultDenominatorBound;
  CHECK(model_value("1.0", D) == Rational(1));
  CHECK(model_value("(- 2.0)", D) == Rational(-2));
  CHECK(model_value("(/ 1.0 3.0)", D) == Rational(1, 3));
  CHECK(model_value("(- (/ 7.0 4.0))", D) == Rational(-7, 4));
  CHECK(model_value("0.3333333333?", D) == Rational(1, 3));
  CHECK(model_value("0.25", D) == Rational(1, 4));
  CHECK_FALSE(model_value("(root-obj (+ (^ x 2) (- 2)) 1)", D).has_value());
  CHECK_FALSE(model_value("true", D).has_value());
  auto sqrt2 = model_value("1.4142135623730950488016887242096980785696?", D);
  REQUIRE(sqrt2.has_value());
  CHECK(sqrt2->get_den() <= D);
  CHECK(abs(*sqrt2 - Rational(14142135, 10000000)) < Rational(1, 1000000));
}

TEST_CASE("solver output parsing") {
  SolverOutcome sat = parse_solver_output(
      "(:version \"5.1.0\")\nsat\n(\n  (define-fun m11 () Real\n    1.0)\n"
      "  (define-fun shape_ray () Bool\n    true)\n  (define-fun vx () Real\n    (- 0.5))\n)\n",
      "");
  CHECK(sat.status == SolverStatus::Sat);
  CHECK(sat.version == "5.1.0");
  CHECK(sat.model.at("m11") == "1.0");
  CHECK(sat.model.at("shape_ray") == "true");
  CHECK(sat.model.at("vx") == "(- 0.5)");

  SolverOutcome unsat = parse_solver_output(
      "(:version \"5.1.0\")\nunsat\n(error \"line 9 column 10: model is not available\")\n", "");
  CHECK(unsat.status == SolverStatus::Unsat);
  CHECK(unsat.model.empty());

  CHECK(parse_solver_output("unknown\n", "").status == SolverStatus::Unknown);

  SolverOutcome junk = parse_solver_output("hello\n", "segfault in module x\n");
  CHECK(junk.status == SolverStatus::ToolError);
  CHECK(junk.message.find("segfault in module x") != std::string::npos);
  CHECK(junk.stderr_text == "segfault in module x\n");

  SolverOutcome broken = parse_solver_output("sat\n(model (define-fun", "");
  CHECK(broken.status == SolverStatus::ToolError);
}

TEST_CASE("solver driver faults") {
  SMTScript s = encode_witness_exists(rel_of(kL1));

  SUBCASE("missing binary") {
    SolverConfig cfg;
    cfg.argv = {"/nonexistent/solver-binary"};
    CHECK_FALSE(solver_available(cfg));
    SolverOutcome o = solve_external(s, cfg);
    CHECK(o.status == SolverStatus::ToolError);
  }
  SUBCASE("garbage output") {
    SolverConfig cfg;
    cfg.argv = {fake_solver("garbage", "cat > /dev/null; echo 'not smt'; echo 'bad things' >&2; exit 3").string()};
    SolverOutcome o = solve_external(s, cfg);
    CHECK(o.status == SolverStatus::ToolError);
    CHECK(o.stderr_text.find("bad things") != std::string::npos);
  }
  SUBCASE("solver that ignores stdin") {
    SolverConfig cfg;
    cfg.argv = {fake_solver("deaf", "echo unsat").string()};
    CHECK(solve_external(s, cfg).status == SolverStatus::Unsat);
  }
  SUBCASE("timeout") {
    SolverConfig cfg;
    cfg.argv = {fake_solver("slow", "exec sleep 30").string()};
    cfg.timeout_seconds = 0.3;
    auto t0 = std::chrono::steady_clock::now();
    SolverOutcome o = solve_external(s, cfg);
    double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(o.status == SolverStatus::Timeout);
    CHECK(took < 5.0);
  }
  SUBCASE("cancellation") {
    SolverConfig cfg;
    cfg.argv = {fake_solver("slow2", "exec sleep 30").string()};
    std::stop_source src;
    src.request_stop();
    SolverOutcome o = solve_external(s, cfg, src.get_token());
    CHECK(o.status == SolverStatus::Unknown);
    CHECK(o.message == "cancelled");
  }
  SUBCASE("an unverifiable model is Unknown, not NonTerminating") {
    DecideConfig cfg;
    cfg.use_heuristics = false;
    cfg.solver.argv = {fake_solver("liar", "cat > /dev/null; echo sat; echo '((define-fun shape_zero () Bool true) "
                                           "(define-fun vx () Real 0.0) (define-fun vy () Real 5.0) "
                                           "(define-fun wx () Real 0.0) (define-fun wy () Real 5.0))'")
                           .string()};
    Verdict v = decide(rel_of(kL5), cfg);
    CHECK(v.kind == VerdictKind::Unknown);
  }
}

TEST_CASE("rationalizing models") {
  TransitionRelation l1 = rel_of(kL1);
  SolverOutcome o;
  o.status = SolverStatus::Sat;
  o.model = {{"m11", "1.0"}, {"g1x", "1.0"}, {"vx", "0.0"}, {"wx", "1.0"},
             {"shape_zero", "false"}, {"shape_ray", "true"}, {"shape_line", "false"}};
  auto w = rationalize_and_verify(o, l1, kDefaultDenominatorBound);
  REQUIRE(w.has_value());
  CHECK(w->m(0, 0) == Rational(1));

  // Slightly off values snap back.
  o.model["m11"] = "1.0000000001?";
  o.model["wx"] = "0.9999999999?";
  w = rationalize_and_verify(o, l1, kDefaultDenominatorBound);
  REQUIRE(w.has_value());
  CHECK(verify_witness(l1, *w).ok);

  // A terminating loop has no witness, whatever the model says.
  TransitionRelation l2 = rel_of(kL2);
  SolverOutcome fake;
  fake.status = SolverStatus::Sat;
  fake.model = {{"m11", "1.0"}, {"g1x", "(- 1.0)"}, {"vx", "0.0"}, {"wx", "(- 1.0)"},
                {"shape_ray", "true"}};
  CHECK_FALSE(rationalize_and_verify(fake, l2, kDefaultDenominatorBound).has_value());

  SolverOutcome unsat;
  unsat.status = SolverStatus::Unsat;
  CHECK_FALSE(rationalize_and_verify(unsat, l1, kDefaultDenominatorBound).has_value());
}

TEST_CASE("decide without a solver") {
  CHECK(decide(rel_of(kL1), offline()).kind == VerdictKind::NonTerminating);
  Verdict l2 = decide(rel_of(kL2), offline());
  CHECK(l2.kind == VerdictKind::Terminating);
  CHECK(l2.method == TerminationMethod::ConeEnumeration1D);
  CHECK(decide(rel_of(kL3), offline()).kind == VerdictKind::NonTerminating);
  Verdict l4 = decide(rel_of(kL4), offline());
  CHECK(l4.kind == VerdictKind::NonTerminating);
  CHECK(l4.origin == "fixed-point");
  CHECK(decide(rel_of(kL5), offline()).kind == VerdictKind::Unknown);

  Verdict empty = decide(rel_of("loop(x, y) { guard: x >= 1; x <= 0; }"), offline());
  CHECK(empty.kind == VerdictKind::Terminating);
  CHECK(empty.method == TerminationMethod::EmptyRelation);

  DecideConfig none = offline();
  none.use_heuristics = false;
  CHECK(decide(rel_of(kL3), none).kind == VerdictKind::Unknown);
  CHECK(decide(rel_of(kL4), none).kind == VerdictKind::NonTerminating);
}

TEST_CASE("decide soundness on random relations") {
  Gen gen(99);
  for (int i = 0; i < 60; ++i) {
    TransitionRelation rel = i % 2 ? loopterm::testing::witnessed_relation(gen, 2).rel
                                   : TransitionRelation{2, gen.polyhedron(4, 5)};
    Verdict v = decide(rel, offline());
    if (v.kind != VerdictKind::NonTerminating)
      continue;
    CHECK(verify_witness(rel, *v.witness).ok);
    CHECK(v.run.points.size() == 65);
    CHECK(check_run(rel, v.run));
    CHECK(check_certificate(rel, certificate_json(rel, v)).ok);
  }
}

TEST_CASE("jobs do not change the verdict") {
  DecideConfig one, two;
  two.jobs = 2;
  if (!solver_available(one.solver)) {
    one.use_smt = two.use_smt = false;
  }
  for (const char *text : {kL1, kL2, kL3, kL4, kL5}) {
    TransitionRelation rel = rel_of(text);
    CHECK(certificate_json(rel, decide(rel, one)) == certificate_json(rel, decide(rel, two)));
  }
}

TEST_CASE("certificate checking") {
  TransitionRelation l3 = rel_of(kL3);
  Verdict v = decide(l3, offline());
  nlohmann::json cert = certificate_json(l3, v);
  CHECK(check_certificate(l3, cert).ok);

  auto tampered = cert;
  tampered["witness"]["M"][0][0] = "3";
  CHECK_FALSE(check_certificate(l3, tampered).ok);

  tampered = cert;
  tampered["run"]["points"][5][0] = "7";
  CHECK_FALSE(check_certificate(l3, tampered).ok);

  tampered = cert;
  tampered["certVersion"] = 2;
  CHECK_FALSE(check_certificate(l3, tampered).ok);

  CHECK_FALSE(check_certificate(rel_of(kL4), cert).ok);
  CHECK_FALSE(check_certificate(l3, nlohmann::json::object()).ok);

  TransitionRelation l2 = rel_of(kL2);
  nlohmann::json t2 = certificate_json(l2, decide(l2, offline()));
  CHECK(check_certificate(l2, t2).ok);
  t2["artifacts"]["shapes"][0]["cone"] = "R";
  CHECK_FALSE(check_certificate(l2, t2).ok);

  TransitionRelation empty = rel_of("loop(x, y) { guard: x >= 1; x <= 0; }");
  nlohmann::json te = certificate_json(empty, decide(empty, offline()));
  CHECK(check_certificate(empty, te).ok);

  Verdict unk = Verdict::unknown("because");
  CHECK_FALSE(check_certificate(l3, certificate_json(l3, unk)).ok);
}

TEST_CASE("live solver" * doctest::skip(!solver_available(SolverConfig{}))) {
  SolverConfig cfg;
  cfg.timeout_seconds = 30;
  CHECK(solve_external(encode_witness_exists(rel_of(kL1)), cfg).status == SolverStatus::Sat);
  CHECK(solve_external(encode_witness_exists(rel_of(kL2)), cfg).status == SolverStatus::Unsat);

  DecideConfig dc;
  dc.solver = cfg;
  Verdict l5 = decide(rel_of(kL5), dc);
  CHECK(l5.kind == VerdictKind::Terminating);
  CHECK(l5.method == TerminationMethod::SolverUnsat);
  CHECK(check_certificate(rel_of(kL5), certificate_json(rel_of(kL5), l5)).ok);

  dc.per_shape = true;
  Verdict per = decide(rel_of(kL5), dc);
  CHECK(per.kind == VerdictKind::Terminating);
  CHECK(per.artifacts["scriptHashes"].size() == 6);
  CHECK(check_certificate(rel_of(kL5), certificate_json(rel_of(kL5), per)).ok);

  DecideConfig smt_only;
  smt_only.use_heuristics = false;
  Verdict l3 = decide(rel_of(kL3), smt_only);
  CHECK(l3.kind == VerdictKind::NonTerminating);
  CHECK(l3.origin == "smt");
}
