// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "decider.hpp"

#include "decider_1d.hpp"
#include "errors.hpp"
#include "heuristics.hpp"

#include <future>
#include <thread>

namespace loopterm {

using nlohmann::json;

namespace {

Verdict from_witness(const TransitionRelation &rel, Witness wit,
                     std::string origin, std::size_t steps) {
  VerifyReport rep = verify_witness(rel, wit);
  require(rep.ok, ErrorCode::Internal,
          "witness from " + origin + " failed verification: " + rep.summary());
  RunTrace run = record_membership(rel, witness_to_run(wit, steps).points);
  return Verdict::non_terminating(std::move(wit), std::move(run),
                                  std::move(origin));
}

std::vector<SMTScript> scripts_for(const TransitionRelation &rel, bool per_shape) {
  std::vector<SMTScript> out;
  if (!per_shape) {
    out.push_back(encode_witness_exists(rel));
    return out;
  }
  for (ConeKind k : shapes_for_dim(rel.dim))
    out.push_back(encode_witness_exists(rel, {k}));
  return out;
}

json hashes(const std::vector<SMTScript> &scripts) {
  json h = json::array();
  for (const auto &s : scripts)
    h.push_back(s.hash);
  return h;
}

Verdict smt_verdict(const TransitionRelation &rel, const DecideConfig &cfg,
                    std::stop_token stop) {
  if (!solver_available(cfg.solver))
    return Verdict::unknown("solver '" +
                            (cfg.solver.argv.empty() ? "" : cfg.solver.argv[0]) +
                            "' not found");
  const std::vector<SMTScript> scripts = scripts_for(rel, cfg.per_shape);
  std::string version;
  std::vector<std::string> problems;
  bool all_unsat = true;
  for (const auto &script : scripts) {
    SolverOutcome o = solve_external(script, cfg.solver, stop);
    if (!o.version.empty())
      version = o.version;
    switch (o.status) {
    case SolverStatus::Sat:
      if (auto w = rationalize_and_verify(o, rel, cfg.max_denominator))
        return from_witness(rel, std::move(*w), "smt", cfg.steps);
      problems.push_back("solver model did not verify after rationalization");
      all_unsat = false;
      break;
    case SolverStatus::Unsat:
      break;
    case SolverStatus::Timeout:
      problems.push_back("solver timeout: " + o.message);
      all_unsat = false;
      break;
    case SolverStatus::Unknown:
      problems.push_back("solver returned unknown" +
                         (o.message.empty() ? "" : ": " + o.message));
      all_unsat = false;
      break;
    case SolverStatus::ToolError:
      problems.push_back("solver error: " + o.message);
      all_unsat = false;
      break;
    }
    if (stop.stop_requested())
      return Verdict::unknown("cancelled");
  }
  if (all_unsat) {
    json artifacts = {{"encoding", cfg.per_shape ? "per-shape" : "single"},
                      {"scriptHashes", hashes(scripts)},
                      {"solver", {{"argv", cfg.solver.argv}, {"version", version}}}};
    return Verdict::terminating(TerminationMethod::SolverUnsat,
                                std::move(artifacts));
  }
  std::string reason = problems.front();
  for (std::size_t i = 1; i < problems.size(); ++i)
    reason += "; " + problems[i];
  return Verdict::unknown(reason);
}

std::optional<Verdict> heuristic_verdict(const TransitionRelation &rel,
                                         const DecideConfig &cfg,
                                         std::stop_token stop) {
  HeuristicConfig h;
  h.steps = cfg.steps;
  h.starts = cfg.starts;
  h.seed = cfg.seed;
  if (auto p = heuristic_search(rel, h, stop))
    return from_witness(rel, std::move(p->witness), "heuristic:" + p->origin,
                        cfg.steps);
  return std::nullopt;
}

} // namespace

Verdict decide(const TransitionRelation &rel, const DecideConfig &cfg) {
  require(rel.dim == 1 || rel.dim == 2, ErrorCode::Unsupported,
          "only loops with one or two variables are supported, got d = " +
              std::to_string(rel.dim));
  if (rel.dim == 1)
    return decide_1d(rel, cfg.steps);

  const LPProblem k = rel.k.as_lp();
  LPResult nonempty = lp_feasible(k);
  if (nonempty.status == LPStatus::Infeasible)
    return Verdict::terminating(TerminationMethod::EmptyRelation,
                                {{"farkas", to_json(nonempty.farkas)}});

  FixedPointResult fp = fixed_point_witness(rel);
  if (fp.witness)
    return from_witness(rel, std::move(*fp.witness), "fixed-point", cfg.steps);

  if (!cfg.use_smt) {
    if (cfg.use_heuristics)
      if (auto v = heuristic_verdict(rel, cfg, {}))
        return std::move(*v);
    return Verdict::unknown(cfg.use_heuristics
                                ? "heuristics found no witness and the solver is disabled"
                                : "heuristics and solver both disabled");
  }
  if (!cfg.use_heuristics)
    return smt_verdict(rel, cfg, {});

  if (cfg.jobs <= 1) {
    if (auto v = heuristic_verdict(rel, cfg, {}))
      return std::move(*v);
    return smt_verdict(rel, cfg, {});
  }

  // The solver runs alongside; a heuristic witness always takes precedence
  // so the verdict does not depend on timing.
  std::promise<Verdict> solver_result;
  std::future<Verdict> solver_future = solver_result.get_future();
  std::jthread solver([&](std::stop_token stop) {
    try {
      solver_result.set_value(smt_verdict(rel, cfg, stop));
    } catch (...) {
      solver_result.set_exception(std::current_exception());
    }
  });
  std::optional<Verdict> h;
  try {
    h = heuristic_verdict(rel, cfg, {});
  } catch (...) {
    solver.request_stop();
    throw;
  }
  if (h) {
    solver.request_stop();
    return std::move(*h);
  }
  return solver_future.get();
}

namespace {

CheckResult fail(std::string why) { return {false, std::move(why)}; }

RunTrace run_from_json(const json &j, std::size_t dim) {
  RunTrace t;
  for (const auto &p : j.at("points"))
    t.points.push_back(vec_from_json(p, dim));
  return t;
}

CheckResult check_nonterminating(const TransitionRelation &rel, const json &cert) {
  Witness wit = witness_from_json(cert.at("witness"), rel.dim);
  VerifyReport rep = verify_witness(rel, wit);
  if (!rep.ok)
    return fail("witness rejected: " + rep.summary());
  RunTrace run = run_from_json(cert.at("run"), rel.dim);
  if (run.points.size() < 2)
    return fail("run prefix has fewer than two points");
  if (run.points[0] != wit.v || run.points[1] != wit.w)
    return fail("run prefix does not start with v, w");
  RunTrace expected = witness_to_run(wit, run.points.size() - 1);
  if (expected.points != run.points)
    return fail("run prefix does not follow the witness recurrence");
  if (!check_run(rel, run))
    return fail("run prefix leaves K");
  return {true, "witness verified (u1..u4) and " +
                    std::to_string(run.points.size() - 1) + "-step run checked"};
}

CheckResult check_terminating(const TransitionRelation &rel, const json &cert) {
  const std::string method = cert.at("method").get<std::string>();
  const json &artifacts = cert.at("artifacts");
  if (method == to_string(TerminationMethod::ConeEnumeration1D)) {
    if (rel.dim != 1)
      return fail("cone enumeration certificates need d = 1");
    Verdict v = decide_1d(rel);
    if (v.kind != VerdictKind::Terminating)
      return fail("re-running the 1-D decider gives " +
                  std::string(to_string(v.kind)));
    if (v.artifacts != artifacts)
      return fail("1-D artifacts differ from the recomputed ones");
    return {true, "1-D cone enumeration recomputed; every shape refuted"};
  }
  if (method == to_string(TerminationMethod::EmptyRelation)) {
    Vec y = vec_from_json(artifacts.at("farkas"), rel.k.rows().size());
    if (!is_farkas_certificate(rel.k.as_lp(), y))
      return fail("Farkas multipliers do not refute K");
    return {true, "Farkas certificate shows K is empty"};
  }
  if (method == to_string(TerminationMethod::SolverUnsat)) {
    const bool per_shape = artifacts.at("encoding").get<std::string>() == "per-shape";
    json expected = hashes(scripts_for(rel, per_shape));
    if (expected != artifacts.at("scriptHashes"))
      return fail("solver script hash mismatch");
    return {true, "script hash matches; unsat answer from " +
                      artifacts.at("solver").at("version").get<std::string>() +
                      " is trusted"};
  }
  return fail("unknown termination method '" + method + "'");
}

} // namespace

CheckResult check_certificate(const TransitionRelation &rel, const json &cert) {
  try {
    if (cert.value("certVersion", 0) != kCertVersion)
      return fail("unsupported certVersion");
    if (cert.at("loopHash").get<std::string>() != relation_hash(rel))
      return fail("certificate is for a different loop");
    if (cert.at("d").get<std::size_t>() != rel.dim)
      return fail("dimension mismatch");
    const std::string verdict = cert.at("verdict").get<std::string>();
    if (verdict == to_string(VerdictKind::NonTerminating))
      return check_nonterminating(rel, cert);
    if (verdict == to_string(VerdictKind::Terminating))
      return check_terminating(rel, cert);
    return fail("verdict '" + verdict + "' carries nothing to check");
  } catch (const json::exception &e) {
    return fail(std::string("malformed certificate: ") + e.what());
  } catch (const Error &e) {
    return fail(std::string("malformed certificate: ") + e.what());
  }
}

} // namespace loopterm
