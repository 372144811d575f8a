#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "knnreal/error.hpp"

namespace knnreal {

using Rational = mpq_class;

/// Exact conversion; every finite double is a dyadic rational.
inline Rational to_rational(double x) {
  Rational r(x);
  return r;
}

/// Round to the nearest multiple of 2^-bits.
inline Rational rationalize(double x, unsigned bits = 40) {
  const double scaled = std::ldexp(x, static_cast<int>(bits));
  mpz_class num(std::nearbyint(scaled));
  Rational r(num, 1);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
  r.canonicalize();
  return r;
}

inline std::string format_rational(const Rational& r) { return r.get_str(); }

/// Parses "p", "p/q", or a decimal such as "-12.5e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::Parse, "empty number");
  const std::string s(text);
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0)
      throw Error(ErrorCode::Parse, "bad fraction '" + s + "'");
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw Error(ErrorCode::Parse, "bad number '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E')
      throw Error(ErrorCode::Parse, "bad number '" + s + "'");
    ++pos;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bad exponent in '" + s + "'");
    }
    if (used != s.size() - pos || e > 100000 || e < -100000)
      throw Error(ErrorCode::Parse, "bad exponent in '" + s + "'");
    exponent += e;
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  Rational r(num, 1);
  mpz_class scale;
  if (exponent >= 0) {
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    r *= scale;
  } else {
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-exponent));
    r /= scale;
  }
  r.canonicalize();
  return r;
}

}  // namespace knnreal
