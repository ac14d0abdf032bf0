#include <gtest/gtest.h>

#include <random>

#include "hblock/bernoulli.hpp"
#include "hblock/cyclotomic.hpp"
#include "hblock/gauss.hpp"
#include "hblock/verify.hpp"
#include "oracles.hpp"

using namespace hblock;

namespace {

long double gap(const BigComplex& a, oracle::cplx b) { return std::abs(a.to_complex() - b); }

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational(" -6/4 "), make_rational(-3, 2));
  EXPECT_EQ(to_string(make_rational(10, 4)), "5/2");
  EXPECT_EQ(to_string(make_rational(7)), "7");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_EQ(pmod(-7, 5), 3);
  EXPECT_EQ(lcm64(4, 6), 12);
}

TEST(Cyclotomic, RootOfUnityInverse) {
  for (std::int64_t den = 1; den <= 40; ++den) {
    for (std::int64_t num = -den; num <= den; ++num) {
      Rational r = make_rational(num, den);
      CycNum x = root_of_unity(r);
      EXPECT_EQ(x * root_of_unity(-r), CycNum::constant(1)) << to_string(r);
      EXPECT_LT(gap(cyc_eval(x, 128), oracle::e(r.get_d())), 1e-15L);
    }
  }
}

TEST(Cyclotomic, SumOfAllRootsIsZero) {
  for (std::int64_t n = 2; n <= 60; ++n) {
    std::vector<Rational> c(static_cast<std::size_t>(n), Rational(1));
    EXPECT_TRUE(cyc_is_zero(CycNum::from_coeffs(n, c))) << n;
    c[0] = 2;
    EXPECT_FALSE(cyc_is_zero(CycNum::from_coeffs(n, c))) << n;
  }
}

TEST(Cyclotomic, CyclotomicPolynomialDegreeAndValues) {
  // deg Phi_n = phi(n); Phi_p = 1 + x + ... + x^{p-1}; Phi_12 = x^4 - x^2 + 1.
  auto phi = [](std::int64_t n) {
    std::int64_t r = 0;
    for (std::int64_t j = 1; j <= n; ++j) r += gcd64(j, n) == 1;
    return r;
  };
  for (std::int64_t n = 1; n <= 120; ++n) EXPECT_EQ(static_cast<std::int64_t>(cyclotomic_polynomial(n).size()) - 1, phi(n));
  EXPECT_EQ(cyclotomic_polynomial(7), (std::vector<std::int64_t>{1, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<std::int64_t>{1, 0, -1, 0, 1}));
  EXPECT_EQ(radical(72), 6);
}

TEST(Cyclotomic, EvaluationMatchesOracleOnRandomElements) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 90);
    std::vector<Rational> c(static_cast<std::size_t>(n));
    for (auto& x : c) x = make_rational(coef(rng), 1 + static_cast<std::int64_t>(rng() % 5));
    CycNum x = CycNum::from_coeffs(n, c);
    EXPECT_LT(gap(cyc_eval(x, 128), oracle::eval(x)), 1e-13L);
    // Arithmetic is consistent with the oracle.
    CycNum y = x * x.conj() + x.shifted(3);
    oracle::cplx ox = oracle::eval(x);
    EXPECT_LT(std::abs(oracle::eval(y) - (ox * std::conj(ox) + ox * oracle::e(3.0L / n))), 1e-10L);
    EXPECT_EQ(x.promoted(2 * n), x);
    EXPECT_EQ(x.promoted(3 * n).contracted(), x.contracted());
  }
}

TEST(Cyclotomic, AccumulatorMatchesDirectSum) {
  CycAccumulator acc(12);
  CycNum direct(12);
  std::int64_t big = std::int64_t(1) << 61;
  for (int j = 0; j < 30; ++j) {
    std::int64_t w = (j % 3 == 0) ? big : -j;
    acc.add(j, w);
    direct += root_of_unity(make_rational(j, 12)) * Rational(Integer(std::to_string(w)));
  }
  EXPECT_EQ(acc.finish(), direct);
}

TEST(Bernoulli, KnownValues) {
  EXPECT_EQ(bernoulli_number(0), Rational(1));
  EXPECT_EQ(bernoulli_number(1), Rational(-1, 2));
  EXPECT_EQ(bernoulli_number(2), Rational(1, 6));
  EXPECT_EQ(bernoulli_number(3), Rational(0));
  EXPECT_EQ(bernoulli_number(12), Rational(-691, 2730));
  EXPECT_EQ(bernoulli_poly(1, Rational(1, 3)), Rational(-1, 6));
}

TEST(Bernoulli, ReflectionAndDistribution) {
  for (int n = 0; n <= 24; ++n) {
    for (int j = 0; j <= 7; ++j) {
      Rational x = make_rational(j, 7);
      Rational sign = n % 2 ? Rational(-1) : Rational(1);
      EXPECT_EQ(bernoulli_poly(n, 1 - x), sign * bernoulli_poly(n, x)) << n;
      // B_n(x + 1) - B_n(x) = n x^{n-1}
      if (n > 0) {
        Rational xp = 1;
        for (int i = 0; i < n - 1; ++i) xp *= x;
        EXPECT_EQ(bernoulli_poly(n, x + 1) - bernoulli_poly(n, x), n * xp);
      }
    }
    for (std::int64_t m = 2; m <= 4; ++m) {
      Rational x(2, 5);
      Rational rhs = 0;
      for (std::int64_t j = 0; j < m; ++j) rhs += bernoulli_poly(n, x + make_rational(j, m));
      Rational mp = 1;
      for (int i = 0; i < n - 1; ++i) mp *= m;
      if (n == 0) mp = Rational(1, m);
      EXPECT_EQ(bernoulli_poly(n, m * x), mp * rhs) << n << " " << m;
    }
  }
}

TEST(GaussSum, MatchesOracle) {
  for (std::int64_t c = 1; c <= 14; ++c)
    for (std::int64_t a = -5; a <= 5; ++a)
      for (std::int64_t b = -6; b <= 6; ++b)
        EXPECT_LT(gap(cyc_eval(quadratic_gauss_sum(a, b, c), 128), oracle::gauss_sum(pmod(a, c), pmod(b, c), c)), 1e-12L)
            << a << " " << b << " " << c;
}

TEST(GaussSum, VanishesWhenGcdDoesNotDivideB) {
  for (std::int64_t a = 1; a <= 30; ++a)
    for (std::int64_t c = 1; c <= 30; ++c)
      for (std::int64_t b = -30; b <= 30; ++b) {
        CycNum g = quadratic_gauss_sum(a, b, c);
        if (pmod(b, gcd64(a, c)) != 0) {
          EXPECT_TRUE(cyc_is_zero(g)) << a << " " << b << " " << c;
        }
      }
}

TEST(GaussSum, ClassicalModulus) {
  // |G(a, 0, c)| = sqrt(c) for odd c coprime to a.
  for (std::int64_t c = 1; c <= 41; c += 2)
    for (std::int64_t a = 1; a < c; ++a)
      if (gcd64(a, c) == 1) {
        EXPECT_NEAR(static_cast<double>(cyc_eval(quadratic_gauss_sum(a, 0, c), 128).abs().to_long_double()),
                    std::sqrt(static_cast<double>(c)), 1e-12);
      }
}

TEST(LatticeReciprocity, HoldsOverTheLatticeQuotient) {
  auto lattices = random_lattices(20240611, 100);
  lattices.push_back(two_s_lattice(validate(reference_graph())));
  for (const auto& L : lattices) {
    auto [lhs, rhs] = reciprocity_sides(L, 160, DualQuotient::HOfLattice);
    EXPECT_LT(distance(lhs, rhs), std::ldexp(1.0L, 20 - 160)) << "rank " << L.rank << " level " << L.level;
  }
}

TEST(LatticeReciprocity, DualQuotientIsOffByTheDiscriminant) {
  for (const auto& L : random_lattices(99, 40)) {
    auto [lhs, rhs_dual] = reciprocity_sides(L, 160, DualQuotient::HOfDual);
    Integer disc = abs(determinant(L.gram));
    BigReal scale(Rational(disc), 160);
    EXPECT_LT(distance(lhs, rhs_dual * scale), 1e-30L) << "rank " << L.rank << " disc " << disc.get_str();
  }
}

TEST(LatticeReciprocity, PreconditionsAreNamed) {
  LatticeData L;
  L.rank = 1;
  L.gram = {{Integer(2)}};
  L.automorphism = {{Rational(4)}};
  L.shift = {Rational(0)};
  L.level = 4;
  EXPECT_NO_THROW(check_lattice_data(L));
  L.level = 3;
  try {
    check_lattice_data(L);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.which(), "level_not_multiple");
  }
  L.level = 4;
  L.gram = {{Integer(0)}};
  try {
    check_lattice_data(L);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.which(), "gram_degenerate");
  }
}
