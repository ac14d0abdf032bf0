#include <gtest/gtest.h>

#include "hblock/qseries.hpp"
#include "hblock/radial.hpp"
#include "hblock/verify.hpp"
#include "oracles.hpp"

using namespace hblock;

namespace {

std::vector<DerivedData> all_graphs() {
  std::vector<DerivedData> out;
  for (const HGraph& g : enumerate_unimodular(12, true)) out.push_back(validate(g));
  return out;
}

std::map<Rational, Rational> as_map(const QSeries& s) {
  std::map<Rational, Rational> m;
  for (const auto& t : s.terms()) m[t.exponent] = t.coeff;
  return m;
}

}  // namespace

TEST(QSeries, ArithmeticAndTruncation) {
  QSeries a(Rational(1, 2), Rational(1, 4), Rational(10));
  a.add_at(Rational(1, 4), Rational(3));
  a.add_at(Rational(9, 4), Rational(-1));
  QSeries b = a * Rational(2) - a;
  EXPECT_EQ(b, a);
  EXPECT_EQ(a.strata(5), (std::vector<Rational>{Rational(1, 4), Rational(9, 4)}));
  EXPECT_EQ(a.truncated(Rational(2)).terms().size(), 1u);
  EXPECT_THROW(a.add_at(Rational(1, 3), Rational(1)), std::logic_error);
}

TEST(QSeries, FalseThetaBlockMatchesOracle) {
  for (const DerivedData& d : all_graphs()) {
    Rational bound = zhat_bound_for_strata(d, 10);
    EXPECT_EQ(as_map(zhat_false_theta(d, bound)), oracle::zhat_false_theta(d, bound)) << d.graph.to_string();
  }
}

TEST(QSeries, DirectBlockIsTheNegatedFalseThetaBlock) {
  // The definition through the constant term and the false-theta form
  // differ by an overall sign on every graph.
  for (const DerivedData& d : all_graphs()) {
    Rational bound = zhat_bound_for_strata(d, 10);
    QSeries direct = zhat_direct(d, bound);
    QSeries ft = zhat_false_theta(d, bound);
    EXPECT_GE(direct.terms().size(), 10u);
    EXPECT_EQ(direct, ft * Rational(-1)) << d.graph.to_string();
    // Coefficients lie in (1/2)Z; several graphs have odd numerators.
    for (const auto& t : direct.terms()) EXPECT_EQ(Rational(2 * t.coeff).get_den(), 1);
  }
}

TEST(QSeries, ReferenceLeadingTerms) {
  DerivedData d = validate(reference_graph());
  auto direct = zhat_direct(d, Rational(3)).terms();
  ASSERT_FALSE(direct.empty());
  EXPECT_EQ(direct.front().exponent, Rational(1, 2));
  EXPECT_EQ(direct.front().coeff, Rational(1));
  auto ft = zhat_false_theta(d, Rational(3)).terms();
  EXPECT_EQ(ft.front().exponent, Rational(1, 2));
  EXPECT_EQ(ft.front().coeff, Rational(-1));
}

TEST(Asymptotics, BoundaryRowsAndLeadingCoefficient) {
  for (const DerivedData& d : all_graphs()) {
    for (std::int64_t k = 1; k <= 4; ++k) {
      for (std::int64_t h = 1; h <= k; ++h) {
        if (gcd64(h, k) != 1) continue;
        AsymptoticRow row = asymptotic_coeffs(d, h, k, 1);
        EXPECT_TRUE(row.boundary_rows_zero) << d.graph.to_string() << " " << h << "/" << k;
        EXPECT_EQ(row.a[0], radial_limit_closed(d, h, k)) << d.graph.to_string() << " " << h << "/" << k;
      }
    }
  }
}

TEST(Asymptotics, ClosedLimitMatchesOracleSum) {
  DerivedData d = validate(reference_graph());
  for (std::int64_t k = 1; k <= 5; ++k)
    for (std::int64_t h = 1; h <= k; ++h) {
      if (gcd64(h, k) != 1) continue;
      oracle::cplx want = oracle::weighted_gauss_sum(d, h, k, [](long double x, long double y) { return x * y; }) /
                          static_cast<long double>(k * k);
      EXPECT_LT(std::abs(oracle::eval(radial_limit_closed(d, h, k)) - want), 1e-9L);
    }
}

TEST(Asymptotics, TaylorDerivativesOfGaussian) {
  // exp(-Q(x, y)): f = 1, f_xx = -2Ma, f_xy = -2MNb, f_yy = -2Nc.
  DerivedData d = validate(reference_graph());
  auto f = taylor_f_derivs(d, 2, 2);
  EXPECT_EQ(f[0][0], Rational(1));
  EXPECT_EQ(f[1][0], Rational(0));
  EXPECT_EQ(f[2][0], Rational(-2 * d.M * d.a));
  EXPECT_EQ(f[1][1], Rational(-2 * d.M * d.N * d.b));
  EXPECT_EQ(f[0][2], Rational(-2 * d.N * d.c));
}

TEST(Asymptotics, QuadraticFormReflectionModK) {
  DerivedData d = validate(reference_graph());
  for (std::int64_t k = 1; k <= 7; ++k)
    for (std::int64_t s = 0; s < 2 * d.M * k; s += 7)
      for (std::int64_t t = 0; t < 2 * d.N * k; t += 5) {
        Rational al = make_rational(s, 2 * d.M), be = make_rational(t, 2 * d.N);
        Rational diff = (d.Q(k - al, k - be) - d.Q(al, be)) / k;
        EXPECT_EQ(diff.get_den(), 1);
      }
}

TEST(Radial, SampleMatchesOracle) {
  DerivedData d = validate(reference_graph());
  for (auto [h, k] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 2}, {2, 3}}) {
    for (long double t : {0.1L, 0.05L}) {
      RadialSample s = numeric_radial(d, SeriesKind::FPlus, h, k, t, 64);
      EXPECT_LT(std::abs(s.value.to_complex() - oracle::f_plus(d, h, k, t)), 1e-12L) << h << "/" << k << " t=" << t;
      EXPECT_GT(s.terms, 0);
    }
  }
}

TEST(Radial, RichardsonOnPolynomial) {
  std::vector<RadialSample> samples;
  long double t = 0.1L;
  for (int i = 0; i < 5; ++i, t /= 2) {
    RadialSample s;
    s.t = t;
    long double v = 2.0L - 3.0L * t + 5.0L * t * t - 7.0L * t * t * t;
    s.value = BigComplex(v, -v, 128);
    samples.push_back(s);
  }
  RichardsonResult r = richardson(samples);
  EXPECT_LT(std::abs(r.estimate.to_complex() - oracle::cplx(2, -2)), 1e-15L);
}

TEST(Radial, NumericLimitsMatchClosedForm) {
  DerivedData d = validate(reference_graph());
  for (auto [h, k] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 2}, {1, 3}, {2, 3}, {1, 5}}) {
    RichardsonResult r = numeric_radial_limit(d, SeriesKind::FPlus, h, k);
    BigComplex want = cyc_eval(radial_limit_closed(d, h, k), 128);
    EXPECT_LT(distance(r.estimate, want), 1e-6L) << h << "/" << k;
  }
}

TEST(Radial, RemainderSlopeNearZero) {
  // Past t = 1e-3 the remainder after the r <= 2 terms decays like t^3.
  DerivedData d = validate(reference_graph());
  RemainderProfile p = asymptotic_remainder(d, 1, 2, 1e-4, 1e-3, 5);
  EXPECT_GE(p.slope, 2.9);
}
