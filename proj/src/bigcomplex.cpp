#include "hblock/bigcomplex.hpp"

#include <cmath>
#include <stdexcept>

namespace hblock {

namespace {

int checked_precision(int precision) {
  if (precision < kMinPrecision) throw std::invalid_argument("precision must be at least 64 bits");
  return precision;
}

mpfr_prec_t max_prec(const BigReal& a, const BigReal& b) {
  return std::max(mpfr_get_prec(a.raw()), mpfr_get_prec(b.raw()));
}

// Precision bits for intermediate values that are rounded back afterwards.
constexpr int kGuardBits = 64;

}  // namespace

BigReal::BigReal(int precision) {
  mpfr_init2(v_, checked_precision(precision));
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(long double v, int precision) {
  mpfr_init2(v_, checked_precision(precision));
  mpfr_set_ld(v_, v, MPFR_RNDN);
}

BigReal::BigReal(const Rational& r, int precision) {
  mpfr_init2(v_, checked_precision(precision));
  mpfr_set_q(v_, r.get_mpq_t(), MPFR_RNDN);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::parse(const std::string& text, int precision) {
  BigReal out(precision);
  if (mpfr_set_str(out.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + text + "'");
  }
  return out;
}

BigReal BigReal::pi(int precision) {
  BigReal out(precision);
  mpfr_const_pi(out.v_, MPFR_RNDN);
  return out;
}

std::string BigReal::to_string() const {
  // Enough significant digits for a decimal round trip at this precision.
  int digits = static_cast<int>(std::ceil(precision() * 0.30102999566398120)) + 2;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BigReal& BigReal::operator+=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(static_cast<int>(max_prec(a, b)));
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(static_cast<int>(max_prec(a, b)));
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(static_cast<int>(max_prec(a, b)));
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(static_cast<int>(max_prec(a, b)));
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

BigReal abs(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }

BigComplex::BigComplex(int precision) : re_(precision), im_(precision) {}

BigComplex::BigComplex(const BigReal& re, const BigReal& im) : re_(re), im_(im) {
  auto p = std::max(re.precision(), im.precision());
  mpfr_prec_round(re_.raw(), p, MPFR_RNDN);
  mpfr_prec_round(im_.raw(), p, MPFR_RNDN);
}

BigComplex::BigComplex(long double re, long double im, int precision) : re_(re, precision), im_(im, precision) {}

BigComplex::BigComplex(std::complex<long double> z, int precision)
    : re_(z.real(), precision), im_(z.imag(), precision) {}

BigComplex BigComplex::unit(const Rational& r, int precision) {
  // Reduce r to [0, 1) exactly before forming the angle.
  Rational frac = r;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), frac.get_num_mpz_t(), frac.get_den_mpz_t());
  frac -= fl;
  int wp = precision + kGuardBits;
  BigReal angle = BigReal::pi(wp);
  BigReal two_frac(Rational(frac * 2), wp);
  angle *= two_frac;
  BigReal s(wp), c(wp);
  mpfr_sin_cos(s.raw(), c.raw(), angle.raw(), MPFR_RNDN);
  BigComplex out(precision);
  mpfr_set(out.re_.raw(), c.raw(), MPFR_RNDN);
  mpfr_set(out.im_.raw(), s.raw(), MPFR_RNDN);
  return out;
}

BigReal BigComplex::abs() const {
  BigReal r(precision());
  mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
  return r;
}

BigComplex BigComplex::conj() const { return BigComplex(re_, -im_); }

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  *this = *this * o;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigReal& o) {
  re_ *= o;
  im_ *= o;
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
  *this = *this / o;
  return *this;
}

void BigComplex::add_product(const BigComplex& a, const BigComplex& b) {
  // Real part ac - bd and imaginary part ad + bc via fused mpfr_fmma/fmms.
  BigReal t(precision());
  mpfr_fmms(t.raw(), a.re_.raw(), b.re_.raw(), a.im_.raw(), b.im_.raw(), MPFR_RNDN);
  mpfr_add(re_.raw(), re_.raw(), t.raw(), MPFR_RNDN);
  mpfr_fmma(t.raw(), a.re_.raw(), b.im_.raw(), a.im_.raw(), b.re_.raw(), MPFR_RNDN);
  mpfr_add(im_.raw(), im_.raw(), t.raw(), MPFR_RNDN);
}

void BigComplex::add_product(const BigComplex& a, const BigReal& b) {
  mpfr_fma(re_.raw(), a.re_.raw(), b.raw(), re_.raw(), MPFR_RNDN);
  mpfr_fma(im_.raw(), a.im_.raw(), b.raw(), im_.raw(), MPFR_RNDN);
}

bool BigComplex::operator==(const BigComplex& o) const {
  return mpfr_equal_p(re_.raw(), o.re_.raw()) && mpfr_equal_p(im_.raw(), o.im_.raw()) &&
         precision() == o.precision();
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) {
  BigComplex r = a;
  r += b;
  return r;
}

BigComplex operator-(const BigComplex& a, const BigComplex& b) {
  BigComplex r = a;
  r -= b;
  return r;
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  int p = std::max(a.precision(), b.precision());
  BigReal re(p), im(p);
  mpfr_fmms(re.raw(), a.re().raw(), b.re().raw(), a.im().raw(), b.im().raw(), MPFR_RNDN);
  mpfr_fmma(im.raw(), a.re().raw(), b.im().raw(), a.im().raw(), b.re().raw(), MPFR_RNDN);
  return BigComplex(re, im);
}

BigComplex operator*(const BigComplex& a, const BigReal& b) {
  BigComplex r = a;
  r *= b;
  return r;
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  int p = std::max(a.precision(), b.precision());
  int wp = p + kGuardBits;
  BigReal den(wp), re(wp), im(wp);
  mpfr_fmma(den.raw(), b.re().raw(), b.re().raw(), b.im().raw(), b.im().raw(), MPFR_RNDN);
  if (den.is_zero()) throw std::domain_error("complex division by zero");
  mpfr_fmma(re.raw(), a.re().raw(), b.re().raw(), a.im().raw(), b.im().raw(), MPFR_RNDN);
  mpfr_fmms(im.raw(), a.im().raw(), b.re().raw(), a.re().raw(), b.im().raw(), MPFR_RNDN);
  re /= den;
  im /= den;
  mpfr_prec_round(re.raw(), p, MPFR_RNDN);
  mpfr_prec_round(im.raw(), p, MPFR_RNDN);
  return BigComplex(re, im);
}

BigComplex operator-(const BigComplex& a) { return BigComplex(-a.re(), -a.im()); }

long double distance(const BigComplex& a, const BigComplex& b) { return (a - b).abs().to_long_double(); }

RootTable::RootTable(std::int64_t L, int precision) : L_(L) {
  if (L < 1) throw std::invalid_argument("root table modulus must be positive");
  int wp = precision + kGuardBits;
  roots_.reserve(static_cast<std::size_t>(L));
  // Re-anchor with a correctly rounded value every kBlock steps so the
  // drift of the running product stays far below the guard bits.
  constexpr std::int64_t kBlock = 256;
  BigComplex step = BigComplex::unit(make_rational(1, L), wp);
  BigComplex cur(wp);
  for (std::int64_t j = 0; j < L; ++j) {
    if (j % kBlock == 0) {
      cur = BigComplex::unit(make_rational(j, L), wp);
    } else {
      cur = cur * step;
    }
    BigComplex rounded(precision);
    mpfr_set(rounded.re().raw(), cur.re().raw(), MPFR_RNDN);
    mpfr_set(rounded.im().raw(), cur.im().raw(), MPFR_RNDN);
    roots_.push_back(std::move(rounded));
  }
}

}  // namespace hblock
