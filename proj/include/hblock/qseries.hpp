#pragma once

#include <vector>

#include "hblock/bigcomplex.hpp"
#include "hblock/characters.hpp"
#include "hblock/cyclotomic.hpp"
#include "hblock/plumbing.hpp"

namespace hblock {

// sum_j coeffs[j] q^(offset + j*step); every coefficient at an exponent
// below valid_below is complete.
class QSeries {
 public:
  QSeries() = default;
  QSeries(Rational step, Rational offset, Rational valid_below);

  const Rational& step() const { return step_; }
  const Rational& offset() const { return offset_; }
  const Rational& valid_below() const { return valid_below_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Rational exponent(std::size_t j) const { return offset_ + step_ * Rational(static_cast<long>(j)); }
  // Adds c at the exponent e, which must be offset + j*step with j >= 0.
  void add_at(const Rational& exponent, const Rational& c);
  void add_index(std::size_t j, const Rational& c);
  void set_valid_below(const Rational& v) { valid_below_ = v; }
  // Drops trailing zeros.
  void trim();

  struct Term {
    Rational exponent;
    Rational coeff;
  };
  std::vector<Term> terms() const;
  // Exponents of the first n nonzero terms (fewer if the series is shorter).
  std::vector<Rational> strata(std::size_t n) const;
  // Restriction to exponents < bound (bound <= valid_below).
  QSeries truncated(const Rational& bound) const;

  QSeries& operator+=(const QSeries& o);
  QSeries& operator-=(const QSeries& o);
  QSeries& operator*=(const Rational& r);
  // Same nonzero terms and same valid_below.
  bool operator==(const QSeries& o) const;

 private:
  Rational step_{1};
  Rational offset_{0};
  Rational valid_below_{0};
  std::vector<Rational> coeffs_;
};

QSeries operator+(QSeries a, const QSeries& b);
QSeries operator-(QSeries a, const QSeries& b);
QSeries operator*(QSeries a, const Rational& r);

enum class ThetaSign { Plus, Minus };

// Q_plus = Q, Q_minus(alpha, beta) = Q(alpha, -beta); scaled by 4MN at
// (s/2M, t/2N).
inline std::int64_t Q_signed_scaled(const DerivedData& d, ThetaSign sign, std::int64_t s, std::int64_t t) {
  return d.Q_scaled(s, sign == ThetaSign::Plus ? t : -t);
}

// F_{Q+-,eps} = sum over gamma = (s/2M, t/2N), s,t >= 1 of eps(gamma) q^{Q+-(gamma)},
// all terms with Q+-(gamma) < energy_bound. Step 1/(4MN), offset 0.
QSeries false_theta(const DerivedData& d, ThetaSign sign, const Rational& energy_bound);

// 1/2 q^{zhat_prefactor} (F+ - F-). energy_bound bounds the absolute
// q-exponent (valid_below = energy_bound).
QSeries zhat_false_theta(const DerivedData& d, const Rational& energy_bound);

// Homological block from its definition: constant term in z of the
// principal-value expansion against the theta series of -W^{-1}/4,
// q^{(-18 - sum w)/4} (1/4) sum sgn(l1) sgn(l2) prod_{leaves} sgn(l_v) q^{-l W^{-1} l / 4}
// over odd central l1, l2 and leaf values +-1. Same step/offset layout as
// zhat_false_theta; energy_bound bounds the absolute q-exponent.
QSeries zhat_direct(const DerivedData& d, const Rational& energy_bound);

// Smallest absolute exponent bound that covers the first n strata of both
// constructions (exponent of stratum n+1 of the F-based series, or a
// bound past stratum n when the series is shorter).
Rational zhat_bound_for_strata(const DerivedData& d, std::size_t n);

// f^{(j,l)}(0,0) of f(x,y) = exp(-Q(x,y)), for 0 <= j <= jmax, 0 <= l <= lmax.
std::vector<std::vector<Rational>> taylor_f_derivs(const DerivedData& d, int jmax, int lmax);

enum class TimeConvention { TwoPi, Plain };  // h/k + it/2pi, or h/k + it

struct AsymptoticRow {
  std::int64_t h = 0, k = 1;
  int rmax = 0;
  std::vector<CycNum> a;
  // The eps-prefactors of every j = -1 or l = -1 boundary term (and the
  // (-1,-1) term) were verified exactly zero.
  bool boundary_rows_zero = false;
  // a(r) in the requested convention, numerically: (2 pi)^r a(r) for Plain.
  BigComplex coefficient(int r, TimeConvention conv, int precision_bits) const;
};

// a_{h,k}(r) = k^{2r} sum_gamma eps e(hQ/k) sum_{j+l=2r} B_{j+1}(alpha/k) B_{l+1}(beta/k)
//              f^{(j,l)}(0,0) / ((j+1)! (l+1)!),  gamma in (2S)^{-1}Z^2 cap [0,k)^2.
AsymptoticRow asymptotic_coeffs(const DerivedData& d, std::int64_t h, std::int64_t k, int rmax,
                                ThetaSign sign = ThetaSign::Plus);

// (1/k^2) sum_{gamma in (2S)^{-1}Z^2 cap [0,k)^2} eps(gamma) e(h Q+-(gamma)/k) alpha beta.
CycNum radial_limit_closed(const DerivedData& d, std::int64_t h, std::int64_t k, ThetaSign sign = ThetaSign::Plus);

}  // namespace hblock
