// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

// Seeded random inputs for the property tests.

#pragma once

#include "certificates.hpp"
#include "cone2.hpp"
#include "loop_model.hpp"
#include "polyhedra.hpp"

#include <random>

namespace loopterm::testing {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng_);
  }

  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  Rational rational(long lo, long hi, long max_den = 1) {
    Integer den(integer(1, max_den));
    Integer num(integer(lo * max_den, hi * max_den));
    return make_rational(num, den);
  }

  Vec vec(std::size_t n, long lo, long hi, long max_den = 1) {
    Vec v;
    for (std::size_t i = 0; i < n; ++i)
      v.push_back(rational(lo, hi, max_den));
    return v;
  }

  Vec nonzero_vec(std::size_t n, long lo, long hi) {
    for (;;) {
      Vec v = vec(n, lo, hi);
      if (!is_zero(v))
        return v;
    }
  }

  /// Non-empty polyhedron in R^n: coefficients in [-3, 3], at most
  /// `max_rows` rows, every row satisfied by a random anchor point. About one
  /// row in ten is an equality.
  HPolyhedron polyhedron(std::size_t n, std::size_t max_rows = 8) {
    Vec anchor = vec(n, -3, 3);
    std::size_t rows = static_cast<std::size_t>(integer(1, max_rows));
    std::vector<LinearRow> out;
    for (std::size_t i = 0; i < rows; ++i) {
      Vec c = nonzero_vec(n, -3, 3);
      if (chance(0.1)) {
        out.push_back({c, Relation::Eq, dot(c, anchor)});
      } else {
        out.push_back({c, Relation::Ge, dot(c, anchor) - integer(0, 3)});
      }
    }
    return {n, std::move(out)};
  }

  Matrix matrix(std::size_t n, long lo, long hi) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = integer(lo, hi);
    return m;
  }

  /// Random cone in R^dim from up to three raw rays and an optional line.
  Cone2 cone(std::size_t dim) {
    std::vector<Vec> rays, lines;
    std::size_t k = static_cast<std::size_t>(integer(0, 3));
    for (std::size_t i = 0; i < k; ++i)
      rays.push_back(nonzero_vec(dim, -3, 3));
    if (chance(0.2))
      lines.push_back(nonzero_vec(dim, -3, 3));
    return cone_canonical(dim, rays, lines);
  }

  std::mt19937_64 &engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

} // namespace loopterm::testing

namespace loopterm::testing {

struct WitnessedRelation {
  TransitionRelation rel;
  Witness witness;
};

/// Random cone C, matrix M with M C in C, points v, w with w - v in C, and a
/// relation K built from random rows that (v, w) and every (g, M g) satisfy.
inline WitnessedRelation witnessed_relation(Gen &gen, std::size_t d) {
  for (;;) {
    Cone2 c = gen.cone(d);
    Matrix m = gen.chance(0.3) ? Matrix::identity(d) : gen.matrix(d, -2, 3);
    bool invariant = true;
    std::vector<Vec> signed_gens = c.generators;
    for (const auto &l : c.lineality) {
      signed_gens.push_back(l);
      signed_gens.push_back(negate(l));
    }
    for (const auto &g : signed_gens)
      invariant = invariant && cone_member(c, m.apply(g));
    if (!invariant)
      continue;
    Vec v = gen.vec(d, -3, 3);
    Vec step = zeros(d);
    for (const auto &g : c.generators)
      step = add(step, scale(g, gen.integer(0, 2)));
    for (const auto &l : c.lineality)
      step = add(step, scale(l, gen.integer(-2, 2)));
    Vec w = add(v, step);

    std::vector<LinearRow> rows;
    for (long k = gen.integer(1, 6); k > 0; --k) {
      Vec coeffs = gen.nonzero_vec(2 * d, -3, 3);
      bool pos = true, neg = true;
      for (const auto &g : signed_gens) {
        Rational s = dot(coeffs, concat(g, m.apply(g)));
        pos = pos && s >= 0;
        neg = neg && s <= 0;
      }
      if (!pos && neg)
        coeffs = negate(coeffs);
      else if (!pos)
        continue;
      Rational at = dot(coeffs, concat(v, w));
      bool tight = pos && neg && gen.chance(0.3);
      rows.push_back({coeffs, tight ? Relation::Eq : Relation::Ge,
                      tight ? at : at - Rational(gen.integer(0, 2))});
    }
    return {{d, HPolyhedron(2 * d, rows)}, Witness{m, c, v, w}};
  }
}

} // namespace loopterm::testing
