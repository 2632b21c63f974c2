// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "certificates.hpp"

#include <cstdint>
#include <stop_token>
#include <string>
#include <vector>

namespace loopterm {

/// Finite run from `start`. Each step picks u' by LP: (u, u') and a further
/// (u', u'') in K, the minimum slack t of the inequality rows (capped at 1)
/// maximized, and u' kept in a box of radius 1 + |target| around the linear
/// extrapolation target = 2u - u_prev. The box is widened four-fold up to
/// three times and then dropped. Without a two-step continuation a single
/// step is taken; without any successor the trace ends.
RunTrace greedy_run(const TransitionRelation &rel, const Vec &start,
                    std::size_t steps);

/// A maximally interior point of the projection of K to x, followed by
/// `count - 1` points of that projection nearest to seeded random targets.
std::vector<Vec> choose_starts(const TransitionRelation &rel, std::size_t count,
                               std::uint64_t seed);

struct Direction {
  Vec z;                  // max-abs entry is 1
  double confidence = 0;  // share of the tail in this cluster
  double growth = 0;      // <u_{n+1}, z> / <u_n, z> at the end of the cluster
};

struct DirectionEstimate {
  std::vector<Direction> directions; // most confident first
  bool bounded = false;
};

inline constexpr double kClusterTolerance = 0.25;
inline constexpr double kDirectionTolerance = 1e-2;
inline constexpr std::size_t kMinTraceLength = 8;

/// Clusters the second half of the trace after max-abs normalization. Traces
/// shorter than kMinTraceLength or without growth give no directions.
DirectionEstimate estimate_directions(const RunTrace &trace);

/// Given C, finds M by one LP per basis vector of C (M is the identity on
/// the orthogonal complement of span C) and (v, w) by one LP. Exact; the
/// result is returned only if verify_witness accepts it.
std::optional<Witness> complete_for_cone(const TransitionRelation &rel,
                                         const Cone2 &c);

struct Proposal {
  Witness witness;
  std::string origin;
};

/// Candidate witnesses from the case templates (fixed point, vertical
/// recession, first step, line, ray) followed by a sweep over cones spanned
/// by pairs from the direction pool. Every returned candidate has been
/// verified. Stops after the first one unless `all` is set; checks `stop`
/// between candidates.
std::vector<Proposal> propose_witnesses(const TransitionRelation &rel,
                                        const DirectionEstimate &est,
                                        bool all = false,
                                        std::stop_token stop = {});

/// Directions derived from rec(K) alone: extreme rays of its projections on
/// x and x', plus a fixed set of small vectors.
std::vector<Vec> recession_directions(const TransitionRelation &rel);

struct HeuristicConfig {
  std::size_t steps = 64;
  std::size_t starts = 8;
  std::uint64_t seed = 0x1007;
};

/// Full heuristic stage: runs from every start, direction estimates,
/// proposals. Returns the first verified witness.
std::optional<Proposal> heuristic_search(const TransitionRelation &rel,
                                         const HeuristicConfig &cfg,
                                         std::stop_token stop = {});

} // namespace loopterm
