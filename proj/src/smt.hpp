// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "certificates.hpp"

#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace loopterm {

struct EncodeOptions {
  /// Restrict the script to one cone shape instead of the disjunction.
  std::optional<ConeKind> shape;
};

struct SMTScript {
  std::size_t dim = 0;
  std::string text;
  std::string hash; // "sha256:<hex>" of text
  std::vector<std::string> reals;
  std::vector<std::string> selectors;
};

/// Shapes a cone in R^d can take: Zero, Ray, Line for d = 1, all six for d = 2.
std::vector<ConeKind> shapes_for_dim(std::size_t d);

/// SMT-LIB 2 script (QF_NRA) satisfiable iff a witness exists. Unknowns: M
/// (m11..), cone generators g1, g2 (g1x, g1y, ..), v, w (vx, .., wx, ..),
/// multipliers lam_* and one selector boolean per shape (shape_zero, ..).
/// Throws Unsupported for d outside 1..2.
SMTScript encode_witness_exists(const TransitionRelation &rel,
                                const EncodeOptions &opts = {});

/// Minimal S-expression tree, enough for SMT-LIB scripts and models.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_atom = true;

  std::string to_string() const;
};

/// Parses a sequence of S-expressions. Comments (';' to end of line) and
/// string literals are supported. Throws ParseError.
std::vector<SExpr> parse_sexprs(std::string_view text);

using SmtValue = std::variant<Rational, bool>;
using Assignment = std::map<std::string, SmtValue>;

/// Exact evaluation of every assert of the script under `a`. Throws
/// Error(InvalidArgument) on unassigned symbols or unsupported operators.
bool script_satisfied(const SMTScript &script, const Assignment &a);

/// Values of the script's unknowns that encode a verified witness.
Assignment witness_assignment(const Witness &wit);

enum class SolverStatus { Sat, Unsat, Unknown, Timeout, ToolError };
const char *to_string(SolverStatus s);

struct SolverOutcome {
  SolverStatus status = SolverStatus::ToolError;
  std::map<std::string, std::string> model; // raw value text per symbol
  std::string message;
  std::string version;
  std::string stderr_text;
  double seconds = 0;
};

struct SolverConfig {
  std::vector<std::string> argv{"z3", "-in", "-smt2", "pp.decimal=true",
                                "pp.decimal_precision=40"};
  double timeout_seconds = 60;
};

/// Interprets solver stdout/stderr. Never throws.
SolverOutcome parse_solver_output(std::string_view out, std::string_view err);

/// Runs the solver with the script on stdin under a wall-clock limit. A stop
/// request kills the process and yields Unknown. Never throws.
SolverOutcome solve_external(const SMTScript &script, const SolverConfig &cfg,
                             std::stop_token stop = {});

/// Whether argv[0] resolves to an executable.
bool solver_available(const SolverConfig &cfg);

/// Exact value of a model entry: literals without '?' are taken as written,
/// approximate decimals go through continued fractions with the bound.
std::optional<Rational> model_value(std::string_view text,
                                    const Integer &max_denominator);

/// Witness read off a model under the given denominator bound, unverified.
std::optional<Witness> witness_from_model(const SolverOutcome &outcome,
                                          std::size_t dim,
                                          const Integer &max_denominator);

inline const Integer kDefaultDenominatorBound{1000000};

/// Sat models only: rationalize with D, verify; retry once with D * 1000;
/// then complete the rationalized cone exactly by LP. None if all fail.
std::optional<Witness>
rationalize_and_verify(const SolverOutcome &outcome,
                       const TransitionRelation &rel,
                       const Integer &max_denominator = kDefaultDenominatorBound);

} // namespace loopterm
