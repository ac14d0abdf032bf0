#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hblock/cyclotomic.hpp"
#include "hblock/plumbing.hpp"

namespace hblock {

// chi^(w,w')(n): sum of e e' over sign pairs with n = w'e + we' + ww'
// (mod 2ww').
class LeafPairCharacter {
 public:
  LeafPairCharacter(std::int64_t w, std::int64_t wp);
  std::int64_t modulus() const { return modulus_; }
  int operator()(std::int64_t n) const { return table_[static_cast<std::size_t>(pmod(n, modulus_))]; }
  const std::vector<int>& table() const { return table_; }
  std::int64_t w() const { return w_; }
  std::int64_t w_prime() const { return wp_; }

 private:
  std::int64_t w_, wp_, modulus_;
  std::vector<int> table_;
};

int chi(std::int64_t w, std::int64_t wp, std::int64_t n);

// epsilon on (2S)^{-1}Z^2 / Z^2, indexed by s = 2M alpha mod 2M and
// t = 2N beta mod 2N. Built as chi^(w3,w4) (x) chi^(w5,w6); individual
// entries may be overwritten to build negative controls.
class EpsilonMap {
 public:
  explicit EpsilonMap(const DerivedData& d);
  std::int64_t M() const { return M_; }
  std::int64_t N() const { return N_; }
  int at_index(std::int64_t s, std::int64_t t) const {
    return table_[static_cast<std::size_t>(pmod(s, 2 * M_) * 2 * N_ + pmod(t, 2 * N_))];
  }
  // Throws std::invalid_argument unless 2M alpha and 2N beta are integers.
  int operator()(const Rational& alpha, const Rational& beta) const;
  void set(std::int64_t s, std::int64_t t, int value);
  const LeafPairCharacter& chi_omega() const { return chi_omega_; }
  const LeafPairCharacter& chi_varpi() const { return chi_varpi_; }
  // Support pairs (s, t) in [0,2M) x [0,2N), ascending.
  std::vector<std::pair<std::int64_t, std::int64_t>> support() const;

 private:
  std::int64_t M_, N_;
  LeafPairCharacter chi_omega_, chi_varpi_;
  std::vector<int> table_;
};

int epsilon(const DerivedData& d, const Rational& alpha, const Rational& beta);

struct ClauseResult {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct AssumptionReport {
  std::vector<ClauseResult> clauses;
  bool all_passed() const;
};

// Clauses: "sum_zero", "denominators", "residues_constant", "symmetry",
// "factorization".
AssumptionReport check_assumption(const DerivedData& d);
AssumptionReport check_assumption(const DerivedData& d, const EpsilonMap& eps);

// -chi(n) for n = 1..n_max: the coefficients of G^(w,w')(z) = -sum chi(n) z^n.
std::vector<int> g_series_coeffs(std::int64_t w, std::int64_t wp, std::int64_t n_max);

class PoleAtRootOfUnity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// G^(w,w')(z) = (z^w - z^-w)(z^w' - z^-w') / (z^ww' - z^-ww') for a root of
// unity z given as a monomial +-zeta_n^j. With u = z^(2ww') of order d > 1,
// G(z) = (1/d) (sum_{n=1}^{2ww'} chi(n) z^n) (sum_{j<d} j u^j), and the
// result is verified against the quotient by exact cross-multiplication.
CycNum g_value(std::int64_t w, std::int64_t wp, const CycNum& z);

// Weight on Q/kZ (or on a fundamental domain), used by the vanishing sums.
using WeightMap = std::function<Rational(const Rational&)>;

enum class Side { Alpha, Beta };

CycNum vanishing_i(const DerivedData& d, std::int64_t h, std::int64_t k);
CycNum vanishing_i(const DerivedData& d, const EpsilonMap& eps, std::int64_t h, std::int64_t k);
CycNum vanishing_ii(const DerivedData& d, std::int64_t h, std::int64_t k, Side side, const WeightMap& C);

enum class Variant { iii, iv, v };

struct CosetSum {
  std::string coset;  // "kZ+Z", "Z+kZ", "kZ^2"
  CycNum value;
};

class PreconditionFailed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Coset double sums (iii)-(v) over the mu-cosets
// modulo 2kS(Z^2) = 2kM Z + 2kN Z. The inner gamma-sum runs over
// s in [0, 2Mk), t in [0, 2Nk) with weight B(alpha) C(beta). Variant iii
// lists the cosets kZ+Z and kZ^2 and first checks sum_alpha chi(alpha)
// Btilde(alpha) = 0; variants iv and v list kZ+Z, Z+kZ and kZ^2.
std::vector<CosetSum> vanishing_iii_iv_v(const DerivedData& d, std::int64_t k, Variant variant, const WeightMap& B,
                                         const WeightMap& C);

// Inner sum sum_{mu in Z^2/kZ^2} e(h Q(mu + gamma) / k) at gamma = (s/2M, t/2N).
CycNum inner_lattice_sum(const DerivedData& d, std::int64_t h, std::int64_t k, std::int64_t s, std::int64_t t);

// sum_{m in Z/kZ} e(h M Q0(m + r/2M) / k), Q0(x) = a0 x^2 + b0 x.
CycNum single_inner_sum(std::int64_t M, std::int64_t a0, std::int64_t b0, std::int64_t h, std::int64_t k, std::int64_t r);

// sum_{alpha in (1/2M)Z/kZ} chi(alpha) e(h M Q0(alpha) / k) Btilde(alpha),
// with Btilde a function of r = 2M alpha mod 2M.
CycNum single_weighted_sum(const LeafPairCharacter& chi_m, std::int64_t M, std::int64_t a0, std::int64_t b0, std::int64_t h,
                           std::int64_t k, const std::function<Rational(std::int64_t)>& btilde);

// B_1 on [0, k) and on (1/2M)Z/Z helpers.
Rational b1(const Rational& x);

}  // namespace hblock
