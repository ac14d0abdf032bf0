#pragma once

#include <cstdarg>
#include <cstdio>

#include <mpfr.h>

#include <complex>
#include <string>
#include <vector>

#include "hblock/rational.hpp"

namespace hblock {

inline constexpr int kMinPrecision = 64;
inline constexpr int kDefaultPrecision = 256;

// RAII wrapper around one mpfr_t. Results of binary operators carry the
// larger precision of the two operands; rounding is always to nearest.
class BigReal {
 public:
  explicit BigReal(int precision = kDefaultPrecision);
  BigReal(long double v, int precision);
  BigReal(const Rational& r, int precision);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static BigReal parse(const std::string& text, int precision);
  static BigReal pi(int precision);

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  // Decimal scientific notation with enough digits to round-trip.
  std::string to_string() const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);

 private:
  mpfr_t v_;
};

BigReal operator+(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a, const BigReal& b);
BigReal operator*(const BigReal& a, const BigReal& b);
BigReal operator/(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a);
BigReal sqrt(const BigReal& a);
BigReal abs(const BigReal& a);
bool operator<(const BigReal& a, const BigReal& b);

class BigComplex {
 public:
  explicit BigComplex(int precision = kDefaultPrecision);
  BigComplex(const BigReal& re, const BigReal& im);
  BigComplex(long double re, long double im, int precision);
  BigComplex(std::complex<long double> z, int precision);

  // e(r) = exp(2 pi i r).
  static BigComplex unit(const Rational& r, int precision);

  int precision() const { return re_.precision(); }
  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }
  BigReal& re() { return re_; }
  BigReal& im() { return im_; }

  std::complex<long double> to_complex() const { return {re_.to_long_double(), im_.to_long_double()}; }
  BigReal abs() const;
  BigComplex conj() const;

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator*=(const BigReal& o);
  BigComplex& operator/=(const BigComplex& o);
  // this += a * b
  void add_product(const BigComplex& a, const BigComplex& b);
  void add_product(const BigComplex& a, const BigReal& b);

  bool operator==(const BigComplex& o) const;

 private:
  BigReal re_;
  BigReal im_;
};

BigComplex operator+(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigReal& b);
BigComplex operator/(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a);

// |a - b| as a long double, convenient for tolerance checks.
long double distance(const BigComplex& a, const BigComplex& b);

// Table of e(j/L), j = 0..L-1, computed at precision + 64 guard bits by
// successive multiplication from a correctly rounded e(1/L).
class RootTable {
 public:
  RootTable(std::int64_t L, int precision);
  std::int64_t modulus() const { return L_; }
  const BigComplex& operator[](std::int64_t j) const { return roots_[static_cast<std::size_t>(pmod(j, L_))]; }

 private:
  std::int64_t L_;
  std::vector<BigComplex> roots_;
};

}  // namespace hblock
