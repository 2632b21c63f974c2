// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polyhedra.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace loopterm {

/// while (guard) do body, with guard rows over x (length d) and body rows over
/// (x, x') (length 2d). All relations are non-strict.
struct ConstraintLoop {
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<LinearRow> guard;
  std::vector<LinearRow> body;

  bool operator==(const ConstraintLoop &other) const = default;
};

/// K = {(x, x') : guard(x) and body(x, x')} in R^(2d), variables ordered
/// (x_1..x_d, x'_1..x'_d).
struct TransitionRelation {
  std::size_t dim = 0; // d
  HPolyhedron k;
};

/// Parses the loop DSL:
///
///   loop(x, y) {
///     guard: x >= 0;
///     step:  x' == x + y; y' <= y - 1/2;
///   }
///
/// Throws ParseError (with line and column) on malformed input, strict
/// comparisons, d outside 1..2 or misuse of primed variables.
ConstraintLoop parse_loop(std::string_view text);

/// {"d": 1, "B": [["1"]], "b": ["0"], "A": [["-1","1"]], "a": ["1"]} with
/// optional "Beq"/"beq"/"Aeq"/"aeq" for equality rows and "names".
ConstraintLoop parse_loop_json(const nlohmann::json &j);

/// JSON when the first non-blank character is '{', the DSL otherwise.
ConstraintLoop load_loop(std::string_view text);

std::string print_loop(const ConstraintLoop &loop);

TransitionRelation loop_to_relation(const ConstraintLoop &loop);

/// "sha256:<hex>" over the normalized rows of K.
std::string relation_hash(const TransitionRelation &rel);

std::string sha256_hex(std::string_view data);

} // namespace loopterm
