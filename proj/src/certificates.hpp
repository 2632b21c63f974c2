// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cone2.hpp"
#include "loop_model.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace loopterm {

/// Non-termination witness (M, C, v, w):
///   (u1) M C is contained in C
///   (u2) (x, M x) in rec(K) for every x in C
///   (u3) (v, w) in K
///   (u4) w - v in C
struct Witness {
  Matrix m;
  Cone2 c;
  Vec v;
  Vec w;

  bool operator==(const Witness &other) const = default;
};

/// Finite run prefix u_0..u_N. membership[n] records (u_n, u_{n+1}) in K.
struct RunTrace {
  std::vector<Vec> points;
  std::vector<bool> membership;
};

struct ConditionResult {
  bool ok = true;
  std::string detail; // first failure, empty when ok
};

struct VerifyReport {
  bool ok = false;
  std::array<ConditionResult, 4> conditions; // u1..u4

  std::string summary() const;
};

/// Exact check of all four conditions. (u1) and (u2) are evaluated on the
/// generators of C and on both signs of its lineality vectors; linearity of x
/// -> (x, M x) and convexity of rec(K) make that sufficient. Throws
/// DimensionMismatch on inconsistent shapes.
VerifyReport verify_witness(const TransitionRelation &rel, const Witness &wit);

/// u_0 = v, u_1 = w, u_{n+2} - u_{n+1} = M (u_{n+1} - u_n). N + 1 points,
/// membership left empty.
RunTrace witness_to_run(const Witness &wit, std::size_t steps);

/// Fills in membership for every consecutive pair.
RunTrace record_membership(const TransitionRelation &rel,
                           std::vector<Vec> points);

/// True iff every consecutive pair lies in K. Needs at least two points.
bool check_run(const TransitionRelation &rel, const RunTrace &trace);

struct FixedPointResult {
  std::optional<Witness> witness; // (I, {0}, x, x)
  LPResult lp;                     // Farkas multipliers when infeasible
};

/// LP over K with x' == x appended (the last d rows of the system).
FixedPointResult fixed_point_witness(const TransitionRelation &rel);

/// Rows of the fixed-point LP, exposed for reporting Farkas certificates.
LPProblem fixed_point_problem(const TransitionRelation &rel);

enum class VerdictKind { NonTerminating, Terminating, Unknown };
enum class TerminationMethod { ConeEnumeration1D, SolverUnsat, EmptyRelation };

const char *to_string(VerdictKind kind);
const char *to_string(TerminationMethod method);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Witness> witness;
  RunTrace run;
  std::string origin; // which stage produced the witness

  TerminationMethod method = TerminationMethod::ConeEnumeration1D;
  nlohmann::json artifacts = nlohmann::json::object();

  std::string reason;

  static Verdict non_terminating(Witness wit, RunTrace run, std::string origin);
  static Verdict terminating(TerminationMethod method, nlohmann::json artifacts);
  static Verdict unknown(std::string reason);
};

// JSON forms. Rationals are "p/q" strings; integers are accepted on input.
nlohmann::json to_json(const Rational &q);
nlohmann::json to_json(const Vec &v);
nlohmann::json to_json(const Matrix &m);
nlohmann::json to_json(const Cone2 &c);
nlohmann::json to_json(const Witness &w);
nlohmann::json to_json(const RunTrace &t);

Rational rational_from_json(const nlohmann::json &j);
Vec vec_from_json(const nlohmann::json &j, std::size_t dim);
Matrix matrix_from_json(const nlohmann::json &j, std::size_t dim);
/// Re-canonicalizes and rejects a declared kind that disagrees.
Cone2 cone_from_json(const nlohmann::json &j, std::size_t dim);
Witness witness_from_json(const nlohmann::json &j, std::size_t dim);

inline constexpr int kCertVersion = 1;

/// Certificate bundle for a verdict on `rel`.
nlohmann::json certificate_json(const TransitionRelation &rel,
                                const Verdict &verdict);

} // namespace loopterm
