#include <gtest/gtest.h>

#include "hblock/characters.hpp"
#include "hblock/json_io.hpp"
#include "oracles.hpp"

using namespace hblock;

namespace {

std::vector<DerivedData> all_graphs() {
  std::vector<DerivedData> out;
  for (const HGraph& g : enumerate_unimodular(12, true)) out.push_back(validate(g));
  return out;
}

std::vector<std::int64_t> units(std::int64_t k) {
  std::vector<std::int64_t> out;
  for (std::int64_t h = 1; h <= k; ++h)
    if (gcd64(h, k) == 1) out.push_back(h);
  return out;
}

}  // namespace

TEST(Characters, ChiMatchesDefinition) {
  for (std::int64_t w = -7; w <= -2; ++w)
    for (std::int64_t wp = -7; wp <= -2; ++wp) {
      LeafPairCharacter c(w, wp);
      EXPECT_EQ(c.modulus(), 2 * w * wp);
      int total = 0;
      for (std::int64_t n = -3 * c.modulus(); n <= 3 * c.modulus(); ++n) {
        EXPECT_EQ(c(n), oracle::chi(w, wp, n));
        EXPECT_EQ(chi(w, wp, n), oracle::chi(w, wp, n));
      }
      for (std::int64_t n = 0; n < c.modulus(); ++n) total += c(n);
      EXPECT_EQ(total, 0);
    }
}

TEST(Characters, EpsilonIsTheTensorProduct) {
  for (const DerivedData& d : all_graphs()) {
    EpsilonMap eps(d);
    for (std::int64_t s = 0; s < 2 * d.M; ++s)
      for (std::int64_t t = 0; t < 2 * d.N; ++t) {
        int want = oracle::chi(d.graph.w[2], d.graph.w[3], s) * oracle::chi(d.graph.w[4], d.graph.w[5], t);
        EXPECT_EQ(eps.at_index(s, t), want);
        EXPECT_EQ(eps(make_rational(s, 2 * d.M) + 1, make_rational(t, 2 * d.N) - 2), want);
      }
    EXPECT_THROW(eps(Rational(1, 4 * d.M + 1), Rational(0)), std::invalid_argument);
    for (auto [s, t] : eps.support()) EXPECT_NE(eps.at_index(s, t), 0);
  }
}

TEST(Characters, AssumptionHoldsAndCatchesCorruption) {
  for (const DerivedData& d : all_graphs()) {
    AssumptionReport r = check_assumption(d);
    EXPECT_TRUE(r.all_passed()) << d.graph.to_string();
    EXPECT_EQ(r.clauses.size(), 5u);
  }
  DerivedData d = validate(reference_graph());
  EpsilonMap eps(d);
  auto [s, t] = eps.support().front();
  eps.set(s, t, 0);
  EXPECT_FALSE(check_assumption(d, eps).all_passed());
}

TEST(Characters, GeneratingFunctionSeries) {
  // G(z) = -sum chi(n) z^n inside the disk agrees with the rational function.
  for (auto [w, wp] : {std::pair<std::int64_t, std::int64_t>{-2, -3}, {-3, -4}, {-2, -5}}) {
    auto coeffs = g_series_coeffs(w, wp, 4000);
    for (long double r : {0.3L, 0.6L, 0.9L}) {
      for (long double th : {0.1L, 1.3L, 2.9L}) {
        oracle::cplx z = std::polar(r, th);
        oracle::cplx series = 0, zn = 1;
        for (std::size_t n = 0; n < coeffs.size(); ++n) {
          zn *= z;
          series += static_cast<long double>(coeffs[n]) * zn;
        }
        auto p = [&](std::int64_t m) { return std::pow(z, static_cast<long double>(m)); };
        oracle::cplx exact = (p(w) - p(-w)) * (p(wp) - p(-wp)) / (p(w * wp) - p(-w * wp));
        EXPECT_LT(std::abs(series - exact), 1e-12L);
      }
    }
  }
}

TEST(Characters, GeneratingFunctionAtRootsOfUnity) {
  for (auto [w, wp] : {std::pair<std::int64_t, std::int64_t>{-2, -3}, {-3, -4}, {-7, -2}}) {
    for (std::int64_t n = 2; n <= 40; ++n) {
      for (std::int64_t j = 1; j < n; ++j) {
        if (gcd64(j, n) != 1) continue;
        CycNum z = root_of_unity(make_rational(j, n));
        auto pw = [&](std::int64_t m) { return oracle::e(static_cast<long double>(j * m) / n); };
        oracle::cplx den = pw(w * wp) - pw(-w * wp);
        if (std::abs(den) < 1e-9L) {
          EXPECT_THROW(g_value(w, wp, z), PoleAtRootOfUnity);
          continue;
        }
        oracle::cplx want = (pw(w) - pw(-w)) * (pw(wp) - pw(-wp)) / den;
        EXPECT_LT(std::abs(oracle::eval(g_value(w, wp, z)) - want), 1e-12L) << w << " " << wp << " " << j << "/" << n;
      }
    }
  }
}

TEST(Vanishing, WeightedGaussSumsVanishForAllGraphs) {
  for (const DerivedData& d : all_graphs()) {
    for (std::int64_t k = 1; k <= 5; ++k) {
      for (std::int64_t h : units(k)) {
        EXPECT_TRUE(cyc_is_zero(vanishing_i(d, h, k))) << d.graph.to_string() << " " << h << "/" << k;
        EXPECT_LT(std::abs(oracle::weighted_gauss_sum(d, h, k, [](long double, long double) { return 1.0L; })), 1e-9L);
        Rational kr = make_rational(k);
        for (Side side : {Side::Alpha, Side::Beta}) {
          EXPECT_TRUE(cyc_is_zero(vanishing_ii(d, h, k, side, [](const Rational& x) -> Rational { return x * x; })));
          EXPECT_TRUE(cyc_is_zero(vanishing_ii(d, h, k, side, [kr](const Rational& x) -> Rational { return b1(x / kr); })));
        }
        auto sq_alpha = [](long double x, long double) { return x * x; };
        auto sq_beta = [](long double, long double y) { return y * y; };
        EXPECT_LT(std::abs(oracle::weighted_gauss_sum(d, h, k, sq_alpha)), 1e-7L);
        EXPECT_LT(std::abs(oracle::weighted_gauss_sum(d, h, k, sq_beta)), 1e-7L);
      }
    }
  }
}

TEST(Vanishing, CosetDoubleSums) {
  for (const DerivedData& d : all_graphs()) {
    for (std::int64_t k = 1; k <= 4; ++k) {
      Rational kr = make_rational(k);
      WeightMap bk = [kr](const Rational& x) -> Rational { return b1(x / kr); };
      WeightMap id = [](const Rational& x) -> Rational { return x; };
      WeightMap one = [](const Rational&) -> Rational { return Rational(1); };
      for (const auto& cs : vanishing_iii_iv_v(d, k, Variant::iv, bk, bk)) EXPECT_TRUE(cyc_is_zero(cs.value)) << cs.coset;
      for (const auto& cs : vanishing_iii_iv_v(d, k, Variant::v, id, id)) EXPECT_TRUE(cyc_is_zero(cs.value)) << cs.coset;
      for (const auto& cs : vanishing_iii_iv_v(d, k, Variant::iii, one, id)) EXPECT_TRUE(cyc_is_zero(cs.value)) << cs.coset;
    }
  }
}

TEST(Vanishing, CosetPreconditionIsEnforced) {
  DerivedData d = validate(reference_graph());
  // B(x) = x^2 does not satisfy sum chi Btilde = 0.
  WeightMap sq = [](const Rational& x) -> Rational { return x * x; };
  EXPECT_THROW(vanishing_iii_iv_v(d, 2, Variant::iii, sq, sq), PreconditionFailed);
}

TEST(Vanishing, InnerSumsAgainstOracle) {
  DerivedData d = validate(reference_graph());
  for (std::int64_t k = 1; k <= 6; ++k)
    for (std::int64_t h : units(k))
      for (std::int64_t s = 0; s < 2 * d.M; s += 5)
        for (std::int64_t t = 0; t < 2 * d.N; t += 3) {
          oracle::cplx want = 0;
          for (std::int64_t m = 0; m < k; ++m)
            for (std::int64_t n = 0; n < k; ++n) {
              std::int64_t qs = d.Q_scaled(s + 2 * d.M * m, t + 2 * d.N * n);
              want += oracle::e(static_cast<long double>(pmod(h * qs, 4 * d.M * d.N * k)) / (4 * d.M * d.N * k));
            }
          EXPECT_LT(std::abs(oracle::eval(inner_lattice_sum(d, h, k, s, t)) - want), 1e-10L);
        }
}

TEST(Vanishing, SingleSumsWithSmallCoefficients) {
  for (std::int64_t M : {4, 6, 9}) {
    for (std::int64_t a0 : {std::int64_t(1), M + 1}) {
      for (std::int64_t b0 : {0, 1, 2}) {
        for (std::int64_t k = 1; k <= 6; ++k) {
          for (std::int64_t h : units(k)) {
            for (std::int64_t r = 0; r < 2 * M; ++r) {
              oracle::cplx want = 0;
              for (std::int64_t m = 0; m < k; ++m) {
                // M Q0(m + r/2M) with Q0(x) = a0 x^2 + b0 x, over a common denominator 4M.
                std::int64_t x2 = (2 * M * m + r);
                std::int64_t num = a0 * x2 * x2 + 2 * M * b0 * x2;
                want += oracle::e(static_cast<long double>(pmod(h * num, 4 * M * k)) / (4 * M * k));
              }
              EXPECT_LT(std::abs(oracle::eval(single_inner_sum(M, a0, b0, h, k, r)) - want), 1e-10L)
                  << M << " " << a0 << " " << b0 << " " << h << "/" << k << " r=" << r;
            }
          }
        }
      }
    }
  }
}
