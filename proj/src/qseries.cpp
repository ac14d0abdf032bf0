#include "hblock/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hblock/bernoulli.hpp"
#include "hblock/parallel.hpp"

namespace hblock {

namespace {

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

Rational rat_gcd(const Rational& x, const Rational& y) {
  if (x == 0) return abs(y);
  if (y == 0) return abs(x);
  Integer num, den;
  mpz_gcd(num.get_mpz_t(), Integer(x.get_num()).get_mpz_t(), Integer(y.get_num()).get_mpz_t());
  mpz_lcm(den.get_mpz_t(), Integer(x.get_den()).get_mpz_t(), Integer(y.get_den()).get_mpz_t());
  Rational g(num, den);
  g.canonicalize();
  return g;
}

std::size_t index_of(const Rational& offset, const Rational& step, const Rational& e) {
  Rational j = (e - offset) / step;
  j.canonicalize();
  if (j.get_den() != 1 || j < 0) throw std::logic_error("exponent is not on the series grid");
  return static_cast<std::size_t>(to_int64(j.get_num()));
}

// Re-expresses a on a grid (step, offset) that refines its own.
QSeries regrid(const QSeries& a, const Rational& step, const Rational& offset) {
  QSeries out(step, offset, a.valid_below());
  for (const auto& t : a.terms()) out.add_at(t.exponent, t.coeff);
  return out;
}

QSeries combine(const QSeries& a, const QSeries& b, int sign) {
  Rational step = rat_gcd(rat_gcd(a.step(), b.step()), a.offset() - b.offset());
  Rational offset = std::min(a.offset(), b.offset());
  QSeries out = regrid(a, step, offset);
  for (const auto& t : b.terms()) out.add_at(t.exponent, sign > 0 ? t.coeff : Rational(-t.coeff));
  out.set_valid_below(std::min(a.valid_below(), b.valid_below()));
  out.trim();
  return out;
}

// Largest integer x >= 0 with x^2 <= v.
std::int64_t isqrt_floor(const Rational& v) {
  if (v <= 0) return 0;
  Integer q = v.get_num() / v.get_den();
  Integer r;
  mpz_sqrt(r.get_mpz_t(), q.get_mpz_t());
  return to_int64(r);
}

}  // namespace

QSeries::QSeries(Rational step, Rational offset, Rational valid_below)
    : step_(std::move(step)), offset_(std::move(offset)), valid_below_(std::move(valid_below)) {
  if (step_ <= 0) throw std::invalid_argument("series step must be positive");
  step_.canonicalize();
  offset_.canonicalize();
  valid_below_.canonicalize();
}

void QSeries::add_index(std::size_t j, const Rational& c) {
  if (j >= coeffs_.size()) coeffs_.resize(j + 1);
  coeffs_[j] += c;
}

void QSeries::add_at(const Rational& exponent, const Rational& c) { add_index(index_of(offset_, step_, exponent), c); }

void QSeries::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::vector<QSeries::Term> QSeries::terms() const {
  std::vector<Term> out;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] != 0) out.push_back({exponent(j), coeffs_[j]});
  }
  return out;
}

std::vector<Rational> QSeries::strata(std::size_t n) const {
  std::vector<Rational> out;
  for (std::size_t j = 0; j < coeffs_.size() && out.size() < n; ++j) {
    if (coeffs_[j] != 0) out.push_back(exponent(j));
  }
  return out;
}

QSeries QSeries::truncated(const Rational& bound) const {
  if (bound > valid_below_) throw std::invalid_argument("truncation bound exceeds the valid range");
  QSeries out(step_, offset_, bound);
  for (std::size_t j = 0; j < coeffs_.size() && exponent(j) < bound; ++j) {
    if (coeffs_[j] != 0) out.add_index(j, coeffs_[j]);
  }
  return out;
}

QSeries& QSeries::operator+=(const QSeries& o) { return *this = combine(*this, o, 1); }
QSeries& QSeries::operator-=(const QSeries& o) { return *this = combine(*this, o, -1); }

QSeries& QSeries::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c *= r;
  trim();
  return *this;
}

bool QSeries::operator==(const QSeries& o) const {
  if (valid_below_ != o.valid_below_) return false;
  auto x = terms(), y = o.terms();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].exponent != y[i].exponent || x[i].coeff != y[i].coeff) return false;
  }
  return true;
}

QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
QSeries operator*(QSeries a, const Rational& r) { return a *= r; }

QSeries false_theta(const DerivedData& d, ThetaSign sign, const Rational& energy_bound) {
  EpsilonMap eps(d);
  std::int64_t M = d.M, N = d.N;
  QSeries out(make_rational(1, 4 * M * N), 0, energy_bound);
  if (energy_bound <= 0) return out;
  // The form N a s^2 + 2MNb s t + M c t^2 has inverse diagonal (c/N, a/M), so
  // Q < bound forces s^2 < 4Mc bound and t^2 < 4Na bound.
  std::int64_t smax = isqrt_floor(energy_bound * Rational(4 * M * d.c));
  std::int64_t tmax = isqrt_floor(energy_bound * Rational(4 * N * d.a));
  Rational X = energy_bound * Rational(4 * M * N);
  for (std::int64_t s = 1; s <= smax; ++s) {
    for (std::int64_t t = 1; t <= tmax; ++t) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      std::int64_t q = Q_signed_scaled(d, sign, s, t);
      if (Rational(q) >= X) continue;
      out.add_index(static_cast<std::size_t>(q), Rational(e));
    }
  }
  out.trim();
  return out;
}

QSeries zhat_false_theta(const DerivedData& d, const Rational& energy_bound) {
  Rational rel = energy_bound - d.zhat_prefactor;
  QSeries fp = false_theta(d, ThetaSign::Plus, rel);
  QSeries fm = false_theta(d, ThetaSign::Minus, rel);
  QSeries diff = fp - fm;
  QSeries out(diff.step(), d.zhat_prefactor, energy_bound);
  for (std::size_t j = 0; j < diff.coeffs().size(); ++j) {
    if (diff.coeffs()[j] != 0) out.add_index(j, diff.coeffs()[j] / 2);
  }
  out.trim();
  return out;
}

QSeries zhat_direct(const DerivedData& d, const Rational& energy_bound) {
  const auto& w = d.graph.w;
  std::int64_t M = d.M, N = d.N;
  RatMatrix inv = linking_inverse(d.graph);
  std::array<std::array<std::int64_t, 6>, 6> Winv{};
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      if (inv[i][j].get_den() != 1) throw std::invalid_argument("W is not unimodular");
      Winv[i][j] = to_int64(inv[i][j].get_num());
    }
  }
  Rational sum_w = 0;
  for (auto v : w) sum_w += Rational(static_cast<long>(v));
  Rational base = (Rational(-18) - sum_w) / 4;
  base.canonicalize();
  QSeries out(make_rational(1, 4 * M * N), d.zhat_prefactor, energy_bound);
  // E(l) = -l W^{-1} l / 4 >= 0; the positive definite -W^{-1}/4 has inverse
  // diagonal -4 w_i, so E < X forces l_i^2 < 4 |w_i| X.
  Rational X = energy_bound - base;
  if (X <= 0) return out;
  std::int64_t r1 = isqrt_floor(X * Rational(-4 * w[0])), r2 = isqrt_floor(X * Rational(-4 * w[1]));
  for (std::int64_t l1 = -r1; l1 <= r1; ++l1) {
    if (l1 % 2 == 0) continue;
    for (std::int64_t l2 = -r2; l2 <= r2; ++l2) {
      if (l2 % 2 == 0) continue;
      for (int leaves = 0; leaves < 16; ++leaves) {
        std::array<std::int64_t, 6> l{l1, l2, 1, 1, 1, 1};
        int sgn = (l1 > 0 ? 1 : -1) * (l2 > 0 ? 1 : -1);
        for (int v = 0; v < 4; ++v) {
          if (leaves & (1 << v)) {
            l[static_cast<std::size_t>(v + 2)] = -1;
            sgn = -sgn;
          }
        }
        std::int64_t quad = 0;
        for (std::size_t i = 0; i < 6; ++i)
          for (std::size_t j = 0; j < 6; ++j) quad += l[i] * Winv[i][j] * l[j];
        Rational E = make_rational(-quad, 4);
        if (E >= X) continue;
        out.add_at(base + E, make_rational(sgn, 4));
      }
    }
  }
  out.trim();
  return out;
}

Rational zhat_bound_for_strata(const DerivedData& d, std::size_t n) {
  Rational span = 1;
  for (;;) {
    QSeries z = zhat_false_theta(d, d.zhat_prefactor + span);
    auto st = z.strata(n + 1);
    if (st.size() == n + 1) return st.back();
    span *= 2;
  }
}

std::vector<std::vector<Rational>> taylor_f_derivs(const DerivedData& d, int jmax, int lmax) {
  if (jmax < 0 || lmax < 0) throw std::invalid_argument("derivative orders must be non-negative");
  auto J = static_cast<std::size_t>(jmax), L = static_cast<std::size_t>(lmax);
  using Grid = std::vector<std::vector<Rational>>;
  Grid u(J + 1, std::vector<Rational>(L + 1));
  auto put = [&](std::size_t i, std::size_t j, std::int64_t v) {
    if (i <= J && j <= L) u[i][j] = Rational(v);
  };
  put(2, 0, -d.M * d.a);
  put(1, 1, -2 * d.M * d.N * d.b);
  put(0, 2, -d.N * d.c);
  Grid sum(J + 1, std::vector<Rational>(L + 1));
  Grid power(J + 1, std::vector<Rational>(L + 1));
  power[0][0] = 1;
  for (int n = 0; 2 * n <= jmax + lmax; ++n) {
    Rational inv_fact = 1 / factorial(n);
    for (std::size_t i = 0; i <= J; ++i)
      for (std::size_t j = 0; j <= L; ++j) sum[i][j] += power[i][j] * inv_fact;
    Grid next(J + 1, std::vector<Rational>(L + 1));
    for (std::size_t i = 0; i <= J; ++i)
      for (std::size_t j = 0; j <= L; ++j) {
        if (power[i][j] == 0) continue;
        for (std::size_t p = 0; i + p <= J && p <= 2; ++p)
          for (std::size_t q = 0; j + q <= L && p + q <= 2; ++q)
            if (u[p][q] != 0) next[i + p][j + q] += power[i][j] * u[p][q];
      }
    power = std::move(next);
  }
  for (std::size_t i = 0; i <= J; ++i)
    for (std::size_t j = 0; j <= L; ++j) sum[i][j] *= factorial(static_cast<int>(i)) * factorial(static_cast<int>(j));
  return sum;
}

BigComplex AsymptoticRow::coefficient(int r, TimeConvention conv, int precision_bits) const {
  BigComplex v = cyc_eval(a.at(static_cast<std::size_t>(r)), precision_bits);
  if (conv == TimeConvention::Plain) {
    BigReal two_pi = BigReal::pi(precision_bits + 32);
    two_pi += two_pi;
    for (int i = 0; i < r; ++i) v *= two_pi;
  }
  return v;
}

namespace {

// sum over s < 2Mk, t < 2Nk of eps e(h Q+-/k) weight(s, t), exactly.
CycNum weighted_gamma_sum(const DerivedData& d, const EpsilonMap& eps, std::int64_t h, std::int64_t k, ThetaSign sign,
                          const std::function<Rational(std::int64_t, std::int64_t)>& weight) {
  std::int64_t L = 4 * d.M * d.N * k;
  std::vector<Rational> coeffs(static_cast<std::size_t>(L));
  for (std::int64_t s = 0; s < 2 * d.M * k; ++s) {
    for (std::int64_t t = 0; t < 2 * d.N * k; ++t) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      Rational wv = weight(s, t);
      if (wv == 0) continue;
      std::int64_t idx = mul_mod(pmod(h, L), pmod(Q_signed_scaled(d, sign, s, t), L), L);
      coeffs[static_cast<std::size_t>(idx)] += e > 0 ? wv : Rational(-wv);
    }
  }
  return CycNum::from_coeffs(L, coeffs);
}

}  // namespace

AsymptoticRow asymptotic_coeffs(const DerivedData& d, std::int64_t h, std::int64_t k, int rmax, ThetaSign sign) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (rmax < 0) throw std::invalid_argument("rmax must be non-negative");
  if (gcd64(h, k) != 1) throw std::invalid_argument("h and k must be coprime");
  EpsilonMap eps(d);
  std::int64_t M = d.M, N = d.N;
  int top = 2 * rmax;
  auto derivs = taylor_f_derivs(d, top, top);
  // Bernoulli tables B_{j+1}(alpha/k) for j = -1..top+1 (index j+1).
  auto table = [&](std::int64_t den, std::int64_t len) {
    std::vector<std::vector<Rational>> b(static_cast<std::size_t>(top + 3));
    for (int j = -1; j <= top + 1; ++j) {
      auto& row = b[static_cast<std::size_t>(j + 1)];
      for (std::int64_t i = 0; i < len; ++i) row.push_back(bernoulli_poly(j + 1, make_rational(i, den * k)));
    }
    return b;
  };
  auto Ba = table(2 * M, 2 * M * k), Bb = table(2 * N, 2 * N * k);

  AsymptoticRow row;
  row.h = h;
  row.k = k;
  row.rmax = rmax;
  for (int r = 0; r <= rmax; ++r) {
    Rational kpow = 1;
    for (int i = 0; i < 2 * r; ++i) kpow *= Rational(k);
    CycNum v = weighted_gamma_sum(d, eps, h, k, sign, [&](std::int64_t s, std::int64_t t) -> Rational {
      Rational acc = 0;
      for (int j = 0; j <= 2 * r; ++j) {
        int l = 2 * r - j;
        const Rational& f = derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
        if (f == 0) continue;
        acc += Ba[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(s)] *
               Bb[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(t)] * f /
               (factorial(j + 1) * factorial(l + 1));
      }
      return acc * kpow;
    });
    row.a.push_back(v);
  }

  bool zero = true;
  for (int j = -1; j <= top + 1 && zero; ++j) {
    auto bj = static_cast<std::size_t>(j + 1);
    if (sign == ThetaSign::Plus) {
      zero = cyc_is_zero(vanishing_ii(d, h, k, Side::Alpha, [&](const Rational& x) {
               return bernoulli_poly(j + 1, x / k);
             })) &&
             cyc_is_zero(vanishing_ii(d, h, k, Side::Beta, [&](const Rational& x) {
               return bernoulli_poly(j + 1, x / k);
             }));
    } else {
      zero = cyc_is_zero(weighted_gamma_sum(d, eps, h, k, sign, [&](std::int64_t s, std::int64_t) { return Ba[bj][static_cast<std::size_t>(s)]; })) &&
             cyc_is_zero(weighted_gamma_sum(d, eps, h, k, sign, [&](std::int64_t, std::int64_t t) { return Bb[bj][static_cast<std::size_t>(t)]; }));
    }
  }
  row.boundary_rows_zero = zero;
  return row;
}

CycNum radial_limit_closed(const DerivedData& d, std::int64_t h, std::int64_t k, ThetaSign sign) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  EpsilonMap eps(d);
  std::int64_t L = 4 * d.M * d.N * k;
  CycAccumulator acc(L);
  std::int64_t hm = pmod(h, L);
  for (std::int64_t s = 1; s < 2 * d.M * k; ++s) {
    for (std::int64_t t = 1; t < 2 * d.N * k; ++t) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      acc.add(mul_mod(hm, pmod(Q_signed_scaled(d, sign, s, t), L), L), e * s * t);
    }
  }
  return acc.finish(Rational(1) / Rational(4 * d.M * d.N * k * k));
}

}  // namespace hblock
