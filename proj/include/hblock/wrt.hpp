#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hblock/bigcomplex.hpp"
#include "hblock/characters.hpp"
#include "hblock/cyclotomic.hpp"
#include "hblock/plumbing.hpp"

namespace hblock {

enum class WrtMethod { Naive, Reduced, Closed };

std::string to_string(WrtMethod m);

// tau_k = overall_sign * zeta_k^{prefactor_exponent} * core / normalization
struct FactoredTau {
  Rational prefactor_exponent;
  CycNum normalization;  // 2 (zeta_2k - zeta_2k^{-1})
  CycNum core;           // (1/k^2) sum eps(gamma) e(Q(gamma)/k) alpha beta
  int overall_sign = -1;
};

struct WrtValue {
  HGraph graph;
  std::int64_t k = 2;
  WrtMethod method = WrtMethod::Naive;
  BigComplex value;
  std::optional<FactoredTau> exact;
};

// Six-fold sum over l in ((Z \ kZ)/2kZ)^6 of vertex phases, sine factors for
// leaves and central vertices, and edge factors. k = 1 returns 1.
BigComplex tau_naive(const DerivedData& d, std::int64_t k, int precision_bits = kDefaultPrecision);

// Double sum over m in (Z \ kZ)/2kMZ, n in (Z \ kZ)/2kNZ of
// zeta_k^{E(m,n)/4} G^omega(zeta_k^{m/2M}) G^varpi(zeta_k^{n/2N}) with
// E = (w1 - 1/w3 - 1/w4) m^2 + 2mn + (w2 - 1/w5 - 1/w6) n^2.
BigComplex tau_reduced(const DerivedData& d, std::int64_t k, int precision_bits = kDefaultPrecision);

// Closed form through the weighted Gauss sum core. The literal formula gives
// -tau_k; the factored form carries overall_sign = -1.
WrtValue tau_closed(const DerivedData& d, std::int64_t k, int precision_bits = kDefaultPrecision);

WrtValue evaluate_wrt(const DerivedData& d, std::int64_t k, WrtMethod method, int precision_bits = kDefaultPrecision);

BigComplex evaluate(const FactoredTau& f, std::int64_t k, int precision_bits);

// Per-term check of the two reduced forms: for every m in (Z \ kZ)/2kMZ,
// (zeta^{m/2w3} - zeta^{-m/2w3})(zeta^{m/2w4} - zeta^{-m/2w4}) equals
// G^omega(zeta_k^{m/2M}) (zeta^{m/2} - zeta^{-m/2}) exactly, and likewise for n.
bool reduced_forms_agree(const DerivedData& d, std::int64_t k);

// sum over m mod 2kM, n mod 2kN of e(-mu S^{-1} mu / 4k), exactly.
CycNum gauss_sum_2S(const DerivedData& d, std::int64_t k);
// -2 k i sqrt(MN) at the given precision.
BigComplex gauss_sum_2S_expected(const DerivedData& d, std::int64_t k, int precision_bits);

// (1/k^2) sum over gamma in (2S)^{-1}Z^2 cap [0,k)^2 of eps(gamma) e(gamma.mu/k) alpha beta.
CycNum constant_term_sum(const DerivedData& d, std::int64_t m, std::int64_t n, std::int64_t k);

// Both sides of G^omega(zeta_k^{m/2M}) G^varpi(zeta_k^{n/2N}) =
// constant_term_sum(m, n, k). Throws PoleAtRootOfUnity when k | m or k | n.
std::pair<CycNum, CycNum> g_constant_term_check(const DerivedData& d, std::int64_t m, std::int64_t n, std::int64_t k);

// sum over gamma in (2S)^{-1}Z^2 cap [0,k)^2 of eps(gamma) e(gamma.mu/k) B(beta);
// zero whenever k does not divide m.
CycNum beta_weighted_sum(const DerivedData& d, std::int64_t m, std::int64_t n, std::int64_t k, const WeightMap& B);

// f_Gamma(h/k) = (1/k^2) sum eps(gamma) e(h Q(gamma)/k) alpha beta, summed
// over rational gamma.
CycNum f_gamma(const DerivedData& d, std::int64_t h, std::int64_t k);

// f_Gamma(1/k) zeta_k^{tau_prefactor} / (2 (zeta_2k - zeta_2k^{-1})).
BigComplex special_value(const DerivedData& d, std::int64_t k, int precision_bits);

struct QuantumSetReport {
  bool passed = true;
  std::int64_t checked = 0;
  std::int64_t witness_h = 0, witness_k = 0;
};

QuantumSetReport quantum_set_check(const DerivedData& d, std::int64_t k_max);
QuantumSetReport quantum_set_check(const DerivedData& d, const EpsilonMap& eps, std::int64_t k_max);

struct MainTheoremReport {
  std::int64_t k = 0;
  BigComplex lhs;              // tau_naive
  BigComplex rhs_exact;        // literal e(pref/k) (lim F+ - lim F-) / 2, normalized
  long double diff_exact = 0;  // |lhs - rhs_exact|
  long double diff_exact_sign_corrected = 0;  // |lhs + rhs_exact|
  BigComplex rhs_numeric;      // extrapolated limit of the directly defined block, normalized
  long double diff_numeric = 0;
  long double numeric_error_estimate = 0;
};

MainTheoremReport verify_main_theorem(const DerivedData& d, std::int64_t k, int precision_bits = kDefaultPrecision,
                                      bool numeric = true);

}  // namespace hblock
