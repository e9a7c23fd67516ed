#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "lpmask/errors.hpp"

namespace lpmask {

using BigInt = boost::multiprecision::cpp_int;

// Exact arbitrary-precision rational. The backend keeps values canonical:
// denominator > 0, gcd(|numerator|, denominator) = 1, zero stored as 0/1.
using Rational = boost::multiprecision::cpp_rational;

/// num/den as a Rational. Accepts any sign of den except zero.
inline Rational frac(BigInt num, BigInt den) {
  if (den == 0) {
    throw PreconditionError("frac: zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(std::move(num), std::move(den));
}

inline int sign_of(const Rational& r) { return r.sign(); }

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

} // namespace lpmask
