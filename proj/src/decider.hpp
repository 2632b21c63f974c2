// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "certificates.hpp"
#include "smt.hpp"

#include <cstdint>
#include <string>

namespace loopterm {

struct DecideConfig {
  SolverConfig solver;
  std::size_t steps = 64;  // run prefix in certificates, and greedy trace length
  std::size_t starts = 8;
  std::uint64_t seed = 0x1007;
  unsigned jobs = 1;
  Integer max_denominator = kDefaultDenominatorBound;
  bool use_smt = true;
  bool use_heuristics = true;
  bool per_shape = false;  // one solver call per cone shape
};

/// Full pipeline for d = 1 or 2. NonTerminating verdicts always carry a
/// witness that passed verify_witness.
Verdict decide(const TransitionRelation &rel, const DecideConfig &cfg = {});

struct CheckResult {
  bool ok = false;
  std::string detail;
};

/// Independent re-check of a certificate produced by certificate_json.
CheckResult check_certificate(const TransitionRelation &rel,
                              const nlohmann::json &cert);

} // namespace loopterm
