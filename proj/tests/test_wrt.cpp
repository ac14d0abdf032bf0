#include <gtest/gtest.h>

#include "hblock/parallel.hpp"
#include "hblock/wrt.hpp"
#include "oracles.hpp"

using namespace hblock;

namespace {

std::vector<DerivedData> some_graphs() {
  std::vector<DerivedData> out{validate(reference_graph())};
  auto list = enumerate_unimodular(12, true);
  for (std::size_t i = 0; i < list.size() && out.size() < 4; ++i)
    if (list[i] != canonical_form(reference_graph())) out.push_back(validate(list[i]));
  return out;
}

}  // namespace

TEST(Wrt, NaiveMatchesOracle) {
  for (const DerivedData& d : some_graphs()) {
    for (std::int64_t k : {2, 3}) {
      EXPECT_LT(std::abs(tau_naive(d, k, 128).to_complex() - oracle::tau(d.graph, k)), 1e-12L)
          << d.graph.to_string() << " k=" << k;
    }
  }
}

TEST(Wrt, MethodsAgree) {
  const int prec = 192;
  for (const DerivedData& d : some_graphs()) {
    for (std::int64_t k = 2; k <= 5; ++k) {
      BigComplex n = tau_naive(d, k, prec);
      BigComplex r = tau_reduced(d, k, prec);
      WrtValue c = tau_closed(d, k, prec);
      long double tol = std::ldexp(1.0L, 30 - prec);
      EXPECT_LT(distance(n, r), tol) << d.graph.to_string() << " k=" << k;
      EXPECT_LT(distance(n, c.value), tol) << d.graph.to_string() << " k=" << k;
      ASSERT_TRUE(c.exact.has_value());
      EXPECT_LT(distance(evaluate(*c.exact, k, prec), c.value), tol);
      EXPECT_TRUE(reduced_forms_agree(d, k));
    }
  }
}

TEST(Wrt, InvariantUnderGraphSymmetries) {
  DerivedData d = validate(reference_graph());
  BigComplex base = tau_reduced(d, 7, 128);
  for (const HGraph& g : orbit(d.graph)) EXPECT_LT(distance(tau_reduced(validate(g), 7, 128), base), 1e-30L);
}

TEST(Wrt, ClosedCoreIsTheGaussSumAtOneOverK) {
  for (const DerivedData& d : some_graphs()) {
    for (std::int64_t k = 2; k <= 6; ++k) {
      WrtValue c = tau_closed(d, k, 128);
      EXPECT_EQ(c.exact->core, f_gamma(d, 1, k));
      oracle::cplx want = oracle::weighted_gauss_sum(d, 1, k, [](long double x, long double y) { return x * y; }) /
                          static_cast<long double>(k * k);
      EXPECT_LT(std::abs(oracle::eval(f_gamma(d, 1, k)) - want), 1e-9L);
    }
  }
}

TEST(Wrt, ConstantTermIdentityAndBetaVanishing) {
  for (const DerivedData& d : some_graphs()) {
    for (std::int64_t k : {2, 4}) {
      for (std::int64_t m : {1, 3})
        for (std::int64_t n : {1, 3}) {
          auto [lhs, rhs] = g_constant_term_check(d, m, n, k);
          EXPECT_EQ(lhs, rhs) << d.graph.to_string() << " m=" << m << " n=" << n << " k=" << k;
        }
      EXPECT_THROW(g_constant_term_check(d, k, 1, k), PoleAtRootOfUnity);
      Rational kr = make_rational(k);
      for (std::int64_t m = 1; m < 2 * k * d.M; m += 3) {
        if (m % k == 0) continue;
        EXPECT_TRUE(cyc_is_zero(beta_weighted_sum(d, m, 1, k, [](const Rational& x) -> Rational { return x; })));
        EXPECT_TRUE(cyc_is_zero(beta_weighted_sum(d, m, 2, k, [kr](const Rational& x) -> Rational { return b1(x / kr); })));
      }
    }
  }
}

TEST(Wrt, GaussSumOfTwiceS) {
  DerivedData d = validate(reference_graph());
  for (std::int64_t k = 2; k <= 5; ++k)
    EXPECT_LT(distance(cyc_eval(gauss_sum_2S(d, k), 128), gauss_sum_2S_expected(d, k, 128)), 1e-30L);
}

TEST(Wrt, SpecialValueMatchesNaive) {
  DerivedData d = validate(reference_graph());
  for (std::int64_t k = 2; k <= 5; ++k) {
    BigComplex naive = tau_naive(d, k, 256);
    BigComplex sv = special_value(d, k, 256);
    // The stated normalization returns -tau_k.
    EXPECT_LT(distance(sv, -naive), 1e-60L) << "k=" << k;
  }
}

TEST(Wrt, QuantumSetOnReference) {
  DerivedData d = validate(reference_graph());
  QuantumSetReport r = quantum_set_check(d, 8);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.checked, 0);
  EpsilonMap eps(d);
  auto [s, t] = eps.support().front();
  eps.set(s, t, 0);
  EXPECT_FALSE(quantum_set_check(d, eps, 8).passed);
}

TEST(Wrt, ThreadCountDoesNotChangeBits) {
  DerivedData d = validate(reference_graph());
  int saved = thread_count();
  set_thread_count(1);
  BigComplex n1 = tau_naive(d, 4, 192);
  BigComplex r1 = tau_reduced(d, 30, 192);
  set_thread_count(4);
  BigComplex n4 = tau_naive(d, 4, 192);
  BigComplex r4 = tau_reduced(d, 30, 192);
  set_thread_count(saved);
  EXPECT_TRUE(n1 == n4);
  EXPECT_TRUE(r1 == r4);
}

TEST(Wrt, TrivialLevel) {
  DerivedData d = validate(reference_graph());
  EXPECT_LT(distance(tau_naive(d, 1, 64), BigComplex(1.0L, 0.0L, 64)), 1e-15L);
}
