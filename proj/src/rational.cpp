// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "rational.hpp"

#include "errors.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace loopterm {

Rational make_rational(const Integer &num, const Integer &den) {
  require(den != 0, ErrorCode::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::Parse,
              "invalid rational literal '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view body, std::string_view original) {
  // body has no sign
  std::string_view mantissa = body;
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = body.substr(0, e);
    std::string_view exp_text = body.substr(e + 1);
    bool neg = false;
    if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
      neg = exp_text[0] == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      bad(original);
    exponent = std::stol(std::string(exp_text));
    if (neg)
      exponent = -exponent;
  }
  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty())
    bad(original);
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part)))
    bad(original);
  std::string digits = std::string(int_part) + std::string(frac_part);
  Integer num(digits.empty() ? std::string("0") : digits, 10);
  exponent -= static_cast<long>(frac_part.size());
  if (exponent >= 0)
    return Rational(num * pow10(static_cast<unsigned long>(exponent)));
  return make_rational(num, pow10(static_cast<unsigned long>(-exponent)));
}

} // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty())
    bad(text);
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view n = s.substr(0, slash);
    std::string_view d = s.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d))
      bad(text);
    Integer den(std::string(d), 10);
    if (den == 0)
      bad(text);
    value = make_rational(Integer(std::string(n), 10), den);
  } else if (all_digits(s)) {
    value = Rational(Integer(std::string(s), 10));
  } else {
    value = parse_decimal(s, text);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational &q) {
  if (q.get_den() == 1)
    return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational continued_fraction_approx(const Rational &x,
                                   const Integer &max_denominator) {
  require(max_denominator >= 1, ErrorCode::InvalidArgument,
          "denominator bound must be positive");
  // Convergents p/q via p_n = a_n p_{n-1} + p_{n-2}; the first one has q = 1.
  Integer p_prev2 = 0, q_prev2 = 1, p_prev = 1, q_prev = 0;
  Integer num = x.get_num();
  Integer den = x.get_den();
  Rational best;
  while (den != 0) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Integer p = a * p_prev + p_prev2;
    Integer q = a * q_prev + q_prev2;
    if (q > max_denominator)
      break;
    best = make_rational(p, q);
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    Integer r = num - a * den;
    num = den;
    den = r;
  }
  return best;
}

Rational simplest_within(long double x, long double tolerance) {
  require(std::isfinite(x), ErrorCode::InvalidArgument,
          "cannot rationalize a non-finite value");
  Integer h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  long double y = x;
  for (int iter = 0; iter < 64; ++iter) {
    long double a_ld = std::floor(y);
    Integer a;
    mpz_set_d(a.get_mpz_t(), static_cast<double>(a_ld));
    Integer h = a * h_prev + h_prev2;
    Integer k = a * k_prev + k_prev2;
    h_prev2 = h_prev;
    k_prev2 = k_prev;
    h_prev = h;
    k_prev = k;
    Rational q = make_rational(h, k);
    if (std::fabs(to_long_double(q) - x) <= tolerance)
      return q;
    long double frac = y - a_ld;
    if (frac <= 0)
      return q;
    y = 1.0L / frac;
  }
  return make_rational(h_prev, k_prev);
}

long double to_long_double(const Rational &q) {
  // mpq get_d truncates; good enough for heuristics.
  return static_cast<long double>(q.get_d());
}

const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidArgument:
    return "InvalidArgument";
  case ErrorCode::DimensionMismatch:
    return "DimensionMismatch";
  case ErrorCode::EmptyPolyhedron:
    return "EmptyPolyhedron";
  case ErrorCode::Precondition:
    return "Precondition";
  case ErrorCode::Parse:
    return "Parse";
  case ErrorCode::StrictInequality:
    return "StrictInequalityUnsupported";
  case ErrorCode::Unsupported:
    return "Unsupported";
  case ErrorCode::Io:
    return "Io";
  case ErrorCode::Tool:
    return "ToolError";
  case ErrorCode::Internal:
    return "Internal";
  }
  return "Unknown";
}

} // namespace loopterm
