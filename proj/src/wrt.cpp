#include "hblock/wrt.hpp"

#include <stdexcept>

#include "hblock/parallel.hpp"
#include "hblock/qseries.hpp"
#include "hblock/radial.hpp"

namespace hblock {

namespace {

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(pmod(a, m)) * pmod(b, m)) % m);
}

void require_k(std::int64_t k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
}

// sin(pi r) for rational r.
BigReal sin_pi(const Rational& r, int prec) {
  Rational half = r / 2;
  return BigComplex::unit(half, prec).im();
}

BigComplex copy_at(const BigComplex& z, int prec) {
  BigComplex out(prec);
  mpfr_set(out.re().raw(), z.re().raw(), MPFR_RNDN);
  mpfr_set(out.im().raw(), z.im().raw(), MPFR_RNDN);
  return out;
}

CycNum normalization(std::int64_t k) {
  std::vector<Integer> num(static_cast<std::size_t>(2 * k));
  num[1] = 2;
  num[static_cast<std::size_t>(2 * k - 1)] = -2;
  return CycNum::from_integers(2 * k, num);
}

// Residues l in [0, period) with k not dividing l.
std::vector<std::int64_t> admissible(std::int64_t period, std::int64_t k) {
  std::vector<std::int64_t> out;
  for (std::int64_t l = 0; l < period; ++l) {
    if (l % k) out.push_back(l);
  }
  return out;
}

}  // namespace

std::string to_string(WrtMethod m) {
  switch (m) {
    case WrtMethod::Naive: return "naive";
    case WrtMethod::Reduced: return "reduced";
    case WrtMethod::Closed: return "closed";
  }
  return "unknown";
}

BigComplex tau_naive(const DerivedData& d, std::int64_t k, int precision_bits) {
  if (k == 1) return BigComplex(1, 0, precision_bits);
  require_k(k);
  int wp = precision_bits + 32;
  const auto& w = d.graph.w;
  std::int64_t P = 2 * k, Ph = 4 * k;
  std::vector<BigReal> S;
  for (std::int64_t j = 0; j < P; ++j) S.push_back(sin_pi(make_rational(j, k), wp));
  auto ls = admissible(P, k);
  auto n = static_cast<std::int64_t>(ls.size());
  // leaf[u][l] = sin(pi l/k) sin(pi u l/k): leaf factor times its edge factor.
  std::vector<std::vector<BigReal>> leaf(static_cast<std::size_t>(P));
  for (auto u : ls) {
    for (std::int64_t l = 0; l < P; ++l) leaf[static_cast<std::size_t>(u)].push_back(S[static_cast<std::size_t>(l)] * S[static_cast<std::size_t>(u * l % P)]);
  }
  std::int64_t pairs = n * n;
  std::vector<std::vector<BigReal>> partial(static_cast<std::size_t>(block_count(pairs)));
  run_blocks(pairs, [&](std::int64_t blk) {
    auto [lo, hi] = block_range(pairs, blk);
    std::vector<BigReal> acc(static_cast<std::size_t>(Ph), BigReal(0.0L, wp));
    BigReal p3(wp), p4(wp), p5(wp);
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      std::int64_t l1 = ls[static_cast<std::size_t>(idx / n)], l2 = ls[static_cast<std::size_t>(idx % n)];
      BigReal base = S[static_cast<std::size_t>(l1 * l2 % P)] / (S[static_cast<std::size_t>(l1)] * S[static_cast<std::size_t>(l2)]);
      std::int64_t ph12 = w[0] * (l1 * l1 - 1) + w[1] * (l2 * l2 - 1);
      const auto& L1 = leaf[static_cast<std::size_t>(l1)];
      const auto& L2 = leaf[static_cast<std::size_t>(l2)];
      for (auto l3 : ls) {
        mpfr_mul(p3.raw(), base.raw(), L1[static_cast<std::size_t>(l3)].raw(), MPFR_RNDN);
        std::int64_t ph3 = ph12 + w[2] * (l3 * l3 - 1);
        for (auto l4 : ls) {
          mpfr_mul(p4.raw(), p3.raw(), L1[static_cast<std::size_t>(l4)].raw(), MPFR_RNDN);
          std::int64_t ph4 = ph3 + w[3] * (l4 * l4 - 1);
          for (auto l5 : ls) {
            mpfr_mul(p5.raw(), p4.raw(), L2[static_cast<std::size_t>(l5)].raw(), MPFR_RNDN);
            std::int64_t ph5 = ph4 + w[4] * (l5 * l5 - 1);
            for (auto l6 : ls) {
              auto& slot = acc[static_cast<std::size_t>(pmod(ph5 + w[5] * (l6 * l6 - 1), Ph))];
              mpfr_fma(slot.raw(), p5.raw(), L2[static_cast<std::size_t>(l6)].raw(), slot.raw(), MPFR_RNDN);
            }
          }
        }
      }
    }
    partial[static_cast<std::size_t>(blk)] = std::move(acc);
  });
  std::vector<BigReal> acc(static_cast<std::size_t>(Ph), BigReal(0.0L, wp));
  for (const auto& p : partial) {
    for (std::size_t j = 0; j < p.size(); ++j) acc[j] += p[j];
  }
  BigComplex sum(wp);
  for (std::int64_t j = 0; j < Ph; ++j) sum.add_product(BigComplex::unit(make_rational(j, Ph), wp), acc[static_cast<std::size_t>(j)]);
  // -i zeta^{-9/2} / (16 k^3 (zeta_2k - zeta_2k^{-1})) times the constant
  // (2i)^4 (2i)^{-2} i^5 = -4i of the sine factors.
  BigReal denom(static_cast<long double>(8 * k * k * k), wp);
  denom *= S[1];
  BigComplex pre = BigComplex::unit(make_rational(-9, 2 * k), wp) * BigComplex(0, 1, wp);
  pre.re() /= denom;
  pre.im() /= denom;
  return copy_at(pre * sum, precision_bits);
}

BigComplex tau_reduced(const DerivedData& d, std::int64_t k, int precision_bits) {
  if (k == 1) return BigComplex(1, 0, precision_bits);
  require_k(k);
  int wp = precision_bits + 32;
  const auto& w = d.graph.w;
  std::int64_t M = d.M, N = d.N, L = 4 * M * N * k;
  RootTable roots(L, wp);
  // sin(pi m / (w k)) = Im zeta_L^{m L / (2 w k)}; L / (2 w k) is an integer
  // for every leaf weight w.
  auto g_table = [&](std::int64_t wa, std::int64_t wb, std::int64_t period) {
    std::vector<std::pair<std::int64_t, BigReal>> out;
    std::int64_t ua = L / (2 * wa * k), ub = L / (2 * wb * k), u = L / (2 * k);
    for (auto m : admissible(period, k)) {
      BigReal v = roots[mul_mod(m, ua, L)].im() * roots[mul_mod(m, ub, L)].im();
      v /= roots[mul_mod(m, u, L)].im();
      out.emplace_back(m, std::move(v));
    }
    return out;
  };
  auto g1 = g_table(w[2], w[3], 2 * k * M);
  auto g2 = g_table(w[4], w[5], 2 * k * N);
  // H(r) = sum_n g2(n) e((-aM n^2 + 2MN r n)/L), r = m mod 2k
  std::vector<BigComplex> H(static_cast<std::size_t>(2 * k), BigComplex(wp));
  run_blocks(2 * k, [&](std::int64_t blk) {
    auto [lo, hi] = block_range(2 * k, blk);
    for (std::int64_t r = lo; r < hi; ++r) {
      BigComplex acc(wp);
      for (const auto& [nv, g] : g2) {
        std::int64_t idx = pmod(mul_mod(-d.a * M, mul_mod(nv, nv, L), L) + mul_mod(2 * M * N * r, nv, L), L);
        acc.add_product(roots[idx], g);
      }
      H[static_cast<std::size_t>(r)] = acc;
    }
  });
  BigComplex sum(wp);
  for (const auto& [mv, g] : g1) {
    std::int64_t idx = mul_mod(-d.c * N, mul_mod(mv, mv, L), L);
    BigComplex term = roots[idx] * H[static_cast<std::size_t>(mv % (2 * k))];
    sum.add_product(term, g);
  }
  // i zeta^{pref} / (4k (zeta_2k - zeta_2k^{-1}) sqrt(MN)) * (2i)^2 * sum
  //   = -zeta^{pref} sum / (2k sin(pi/k) sqrt(MN))
  BigReal denom = sqrt(BigReal(static_cast<long double>(M * N), wp));
  denom *= sin_pi(make_rational(1, k), wp);
  denom *= BigReal(static_cast<long double>(2 * k), wp);
  BigComplex pre = -BigComplex::unit(d.tau_prefactor / k, wp);
  pre.re() /= denom;
  pre.im() /= denom;
  return copy_at(pre * sum, precision_bits);
}

BigComplex evaluate(const FactoredTau& f, std::int64_t k, int precision_bits) {
  int wp = precision_bits + 32;
  CycNum num = f.core * root_of_unity(f.prefactor_exponent / k);
  BigComplex v = cyc_eval(num, wp) / cyc_eval(f.normalization, wp);
  if (f.overall_sign < 0) v = -v;
  return copy_at(v, precision_bits);
}

WrtValue tau_closed(const DerivedData& d, std::int64_t k, int precision_bits) {
  require_k(k);
  WrtValue out;
  out.graph = d.graph;
  out.k = k;
  out.method = WrtMethod::Closed;
  FactoredTau f;
  f.prefactor_exponent = d.tau_prefactor;
  f.normalization = normalization(k);
  f.core = f_gamma(d, 1, k);
  f.overall_sign = -1;
  out.value = evaluate(f, k, precision_bits);
  out.exact = std::move(f);
  return out;
}

WrtValue evaluate_wrt(const DerivedData& d, std::int64_t k, WrtMethod method, int precision_bits) {
  if (method == WrtMethod::Closed) return tau_closed(d, k, precision_bits);
  WrtValue out;
  out.graph = d.graph;
  out.k = k;
  out.method = method;
  out.value = method == WrtMethod::Naive ? tau_naive(d, k, precision_bits) : tau_reduced(d, k, precision_bits);
  return out;
}

bool reduced_forms_agree(const DerivedData& d, std::int64_t k) {
  require_k(k);
  const auto& w = d.graph.w;
  auto side = [&](std::int64_t wa, std::int64_t wb, std::int64_t MM) {
    for (auto m : admissible(2 * k * MM, k)) {
      auto diff = [&](const Rational& x) { return root_of_unity(x / k) - root_of_unity(-x / k); };
      CycNum lhs = diff(make_rational(m, 2 * wa)) * diff(make_rational(m, 2 * wb));
      CycNum rhs = g_value(wa, wb, root_of_unity(make_rational(m, 2 * MM * k))) * diff(make_rational(m, 2));
      if (!(lhs == rhs)) return false;
    }
    return true;
  };
  return side(w[2], w[3], d.M) && side(w[4], w[5], d.N);
}

CycNum gauss_sum_2S(const DerivedData& d, std::int64_t k) {
  require_k(k);
  std::int64_t M = d.M, N = d.N, L = 4 * M * N * k;
  CycAccumulator acc(L);
  for (std::int64_t m = 0; m < 2 * k * M; ++m) {
    for (std::int64_t n = 0; n < 2 * k * N; ++n) {
      // mu S^{-1} mu = (N c m^2 - 2 M N b m n + M a n^2) / (MN)
      std::int64_t q = pmod(mul_mod(N * d.c, m * m, L) - mul_mod(2 * M * N * d.b, m * n, L) + mul_mod(M * d.a, n * n, L), L);
      acc.add(pmod(-q, L), 1);
    }
  }
  return acc.finish();
}

BigComplex gauss_sum_2S_expected(const DerivedData& d, std::int64_t k, int precision_bits) {
  BigReal v = sqrt(BigReal(static_cast<long double>(d.M * d.N), precision_bits));
  v *= BigReal(static_cast<long double>(-2 * k), precision_bits);
  return BigComplex(BigReal(0.0L, precision_bits), v);
}

CycNum constant_term_sum(const DerivedData& d, std::int64_t m, std::int64_t n, std::int64_t k) {
  EpsilonMap eps(d);
  std::int64_t M = d.M, N = d.N, L = 4 * M * N * k;
  CycAccumulator acc(L);
  for (std::int64_t s = 0; s < 2 * M * k; ++s) {
    for (std::int64_t t = 0; t < 2 * N * k; ++t) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      acc.add(pmod(mul_mod(2 * N * s, m, L) + mul_mod(2 * M * t, n, L), L), e * s * t);
    }
  }
  return acc.finish(Rational(1) / Rational(4 * M * N * k * k));
}

std::pair<CycNum, CycNum> g_constant_term_check(const DerivedData& d, std::int64_t m, std::int64_t n, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (m % k == 0 || n % k == 0) {
    throw PoleAtRootOfUnity("k divides m or n: G has a pole at the requested argument");
  }
  const auto& w = d.graph.w;
  CycNum lhs = g_value(w[2], w[3], root_of_unity(make_rational(m, 2 * d.M * k))) *
               g_value(w[4], w[5], root_of_unity(make_rational(n, 2 * d.N * k)));
  return {lhs, constant_term_sum(d, m, n, k)};
}

CycNum beta_weighted_sum(const DerivedData& d, std::int64_t m, std::int64_t n, std::int64_t k, const WeightMap& B) {
  EpsilonMap eps(d);
  std::int64_t M = d.M, N = d.N, L = 4 * M * N * k;
  std::vector<Rational> coeffs(static_cast<std::size_t>(L));
  std::vector<Rational> bw;
  for (std::int64_t t = 0; t < 2 * N * k; ++t) bw.push_back(B(make_rational(t, 2 * N)));
  for (std::int64_t s = 0; s < 2 * M * k; ++s) {
    for (std::int64_t t = 0; t < 2 * N * k; ++t) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      auto idx = static_cast<std::size_t>(pmod(mul_mod(2 * N * s, m, L) + mul_mod(2 * M * t, n, L), L));
      if (e > 0) {
        coeffs[idx] += bw[static_cast<std::size_t>(t)];
      } else {
        coeffs[idx] -= bw[static_cast<std::size_t>(t)];
      }
    }
  }
  return CycNum::from_coeffs(L, coeffs);
}

CycNum f_gamma(const DerivedData& d, std::int64_t h, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (gcd64(h, k) != 1) throw std::invalid_argument("h and k must be coprime");
  EpsilonMap eps(d);
  std::int64_t M = d.M, N = d.N, L = 4 * M * N * k;
  std::vector<std::int64_t> rows, cols;
  for (std::int64_t s = 0; s < 2 * M * k; ++s) {
    if (eps.chi_omega()(s)) rows.push_back(s);
  }
  for (std::int64_t t = 0; t < 2 * N * k; ++t) {
    if (eps.chi_varpi()(t)) cols.push_back(t);
  }
  std::vector<Rational> coeffs(static_cast<std::size_t>(L));
  Rational kk = Rational(k * k);
  for (auto s : rows) {
    Rational alpha = make_rational(s, 2 * M);
    for (auto t : cols) {
      Rational beta = make_rational(t, 2 * N);
      int e = eps(alpha, beta);
      if (!e) continue;
      // e(h Q / k) = zeta_L^{h Q L / k}
      Rational pos = Rational(h) * d.Q(alpha, beta) * Rational(4 * M * N);
      pos.canonicalize();
      if (pos.get_den() != 1) throw std::logic_error("Q(gamma) outside (1/4MN)Z");
      auto idx = static_cast<std::size_t>(pmod(to_int64(Integer(pos.get_num()) % Integer(static_cast<long>(L))), L));
      Rational v = alpha * beta / kk;
      if (e > 0) {
        coeffs[idx] += v;
      } else {
        coeffs[idx] -= v;
      }
    }
  }
  return CycNum::from_coeffs(L, coeffs);
}

BigComplex special_value(const DerivedData& d, std::int64_t k, int precision_bits) {
  FactoredTau f;
  f.prefactor_exponent = d.tau_prefactor;
  f.normalization = normalization(k);
  f.core = f_gamma(d, 1, k);
  f.overall_sign = 1;
  return evaluate(f, k, precision_bits);
}

QuantumSetReport quantum_set_check(const DerivedData& d, std::int64_t k_max) {
  return quantum_set_check(d, EpsilonMap(d), k_max);
}

QuantumSetReport quantum_set_check(const DerivedData& d, const EpsilonMap& eps, std::int64_t k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be positive");
  QuantumSetReport rep;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    for (std::int64_t h = 0; h < k; ++h) {
      if (gcd64(h, k) != 1) continue;
      ++rep.checked;
      if (!cyc_is_zero(vanishing_i(d, eps, h, k))) {
        rep.passed = false;
        rep.witness_h = h;
        rep.witness_k = k;
        return rep;
      }
    }
  }
  return rep;
}

MainTheoremReport verify_main_theorem(const DerivedData& d, std::int64_t k, int precision_bits, bool numeric) {
  require_k(k);
  int wp = precision_bits + 32;
  MainTheoremReport rep;
  rep.k = k;
  rep.lhs = tau_naive(d, k, precision_bits);
  CycNum lim = radial_limit_closed(d, 1, k, ThetaSign::Plus) - radial_limit_closed(d, 1, k, ThetaSign::Minus);
  lim *= Rational(1, 2);
  lim = lim * root_of_unity(d.zhat_prefactor / k);
  BigComplex norm = cyc_eval(normalization(k), wp);
  rep.rhs_exact = copy_at(cyc_eval(lim, wp) / norm, precision_bits);
  rep.diff_exact = distance(rep.lhs, rep.rhs_exact);
  rep.diff_exact_sign_corrected = distance(rep.lhs, -rep.rhs_exact);
  if (numeric) {
    RichardsonResult r = numeric_radial_limit(d, SeriesKind::Zhat, 1, k);
    BigComplex est = copy_at(r.estimate, wp);
    rep.rhs_numeric = copy_at(est / norm, precision_bits);
    rep.diff_numeric = distance(rep.lhs, rep.rhs_numeric);
    rep.numeric_error_estimate = r.error_estimate;
  } else {
    rep.rhs_numeric = BigComplex(precision_bits);
  }
  return rep;
}

}  // namespace hblock
