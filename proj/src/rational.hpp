// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace loopterm {

// mpq_class keeps values canonical (lowest terms, positive denominator) as
// long as every construction from a numerator/denominator pair is followed by
// canonicalize(); make_rational does that.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(const Integer &num, const Integer &den);

/// Accepts "7", "-7", "3/4", "-3/4", "1.25", "-.5" and "1e-3". Decimals are
/// converted exactly.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational &q);

inline int sign(const Rational &q) { return sgn(q); }

/// Last continued-fraction convergent of `x` whose denominator does not exceed
/// `max_denominator`.
Rational continued_fraction_approx(const Rational &x,
                                   const Integer &max_denominator);

/// Continued-fraction convergent of `x` with the smallest denominator that is
/// within `tolerance` of `x`.
Rational simplest_within(long double x, long double tolerance);

long double to_long_double(const Rational &q);

} // namespace loopterm
