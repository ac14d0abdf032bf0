#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hblock {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
Rational parse_rational(const std::string& text);

// Non-negative residue of a modulo m (m > 0).
inline std::int64_t pmod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

// Throws std::overflow_error when the value does not fit.
std::int64_t to_int64(const Integer& z);

}  // namespace hblock
