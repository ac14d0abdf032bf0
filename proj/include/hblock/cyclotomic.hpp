#pragma once

#include <cstdint>
#include <vector>

#include "hblock/bigcomplex.hpp"
#include "hblock/rational.hpp"

namespace hblock {

// Exact element sum_j c_j * zeta_n^j of the n-th cyclotomic field, with
// zeta_n = e(1/n). Coefficients are stored as integer numerators over one
// common positive denominator, kept coprime to the numerators.
class CycNum {
 public:
  CycNum() : CycNum(1) {}
  explicit CycNum(std::int64_t order);

  static CycNum constant(const Rational& r, std::int64_t order = 1);
  static CycNum from_coeffs(std::int64_t order, const std::vector<Rational>& coeffs);
  static CycNum from_integers(std::int64_t order, std::vector<Integer> numerators, Integer denominator = 1);

  std::int64_t order() const { return order_; }
  Rational coeff(std::int64_t j) const;
  std::vector<Rational> coeffs() const;
  const std::vector<Integer>& numerators() const { return num_; }
  const Integer& denominator() const { return den_; }
  std::size_t nonzero_count() const;
  bool is_literally_zero() const { return nonzero_count() == 0; }

  // Same complex value, represented at order m (a multiple of order()).
  CycNum promoted(std::int64_t m) const;
  // Smallest order d dividing order() that still holds every nonzero index.
  CycNum contracted() const;
  CycNum conj() const;
  // Multiplication by zeta_n^j.
  CycNum shifted(std::int64_t j) const;

  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);
  CycNum& operator*=(const Rational& r);

  // Exact equality of the represented complex numbers.
  bool operator==(const CycNum& o) const;
  bool operator!=(const CycNum& o) const { return !(*this == o); }

 private:
  void normalize();

  std::int64_t order_;
  std::vector<Integer> num_;
  Integer den_;
};

CycNum operator+(CycNum a, const CycNum& b);
CycNum operator-(CycNum a, const CycNum& b);
CycNum operator-(const CycNum& a);
CycNum operator*(const CycNum& a, const CycNum& b);
CycNum operator*(CycNum a, const Rational& r);
CycNum operator*(const Rational& r, CycNum a);

// e(r) as an element of order equal to the reduced denominator of r.
CycNum root_of_unity(const Rational& r);

// True iff x is the complex number 0, by exact reduction modulo Phi_order.
bool cyc_is_zero(const CycNum& x);

// Value at the given precision, summed in ascending index order at
// precision + 32 guard bits.
BigComplex cyc_eval(const CycNum& x, int precision_bits);

// Coefficients (low degree first) of the n-th cyclotomic polynomial,
// built from the Moebius product of (x^d - 1). Results are cached.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n);

// Product of the distinct primes dividing n.
std::int64_t radical(std::int64_t n);

// Exact accumulator sum_i w_i * zeta_L^{idx_i} with integer weights. Slots
// start as 64-bit and move to GMP integers on the first overflow.
class CycAccumulator {
 public:
  explicit CycAccumulator(std::int64_t order);
  std::int64_t order() const { return order_; }
  void add(std::int64_t index, std::int64_t weight);
  void merge(const CycAccumulator& other);
  // The accumulated element times scale.
  CycNum finish(const Rational& scale = Rational(1)) const;

 private:
  void promote();

  std::int64_t order_;
  std::vector<std::int64_t> small_;
  std::vector<Integer> big_;
  bool is_big_ = false;
};

}  // namespace hblock
