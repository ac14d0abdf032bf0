#include "hblock/characters.hpp"

#include <map>
#include <sstream>

namespace hblock {

namespace {

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  __int128 r = static_cast<__int128>(a) * b % m;
  return static_cast<std::int64_t>(r < 0 ? r + m : r);
}

// Integer table w[i] = D * f(i) with a common denominator D.
struct ScaledWeights {
  std::vector<std::int64_t> values;
  Integer denominator = 1;
};

ScaledWeights scale_weights(const std::vector<Rational>& vals) {
  ScaledWeights out;
  Integer D = 1;
  for (const auto& v : vals) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den_mpz_t());
  out.denominator = D;
  out.values.reserve(vals.size());
  for (const auto& v : vals) out.values.push_back(to_int64(v.get_num() * (D / v.get_den())));
  return out;
}

std::int64_t checked_product(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("weight product overflow");
  return r;
}

// Lifts of the support residues: all s in [0, 2Mk) with chi(s mod 2M) != 0.
std::vector<std::int64_t> lifted_support(const std::vector<int>& table, std::int64_t period, std::int64_t k) {
  std::vector<std::int64_t> out;
  for (std::int64_t s = 0; s < period * k; ++s) {
    if (table[static_cast<std::size_t>(s % period)] != 0) out.push_back(s);
  }
  return out;
}

std::vector<int> epsilon_row_support(const EpsilonMap& eps, bool rows) {
  std::int64_t len = rows ? 2 * eps.M() : 2 * eps.N();
  std::vector<int> mark(static_cast<std::size_t>(len), 0);
  for (const auto& [s, t] : eps.support()) mark[static_cast<std::size_t>(rows ? s : t)] = 1;
  return mark;
}

// Root of unity z = zeta_n^j (sign folded into the order).
struct PureRoot {
  std::int64_t n;
  std::int64_t j;
};

PureRoot as_pure_root(const CycNum& z) {
  CycNum c = z.contracted();
  if (c.nonzero_count() != 1 || c.denominator() != 1) {
    throw std::invalid_argument("g_value expects a root of unity given as a monomial +-zeta_n^j");
  }
  std::int64_t n = c.order();
  for (std::int64_t j = 0; j < n; ++j) {
    const Integer& v = c.numerators()[static_cast<std::size_t>(j)];
    if (v == 0) continue;
    if (v == 1) return {n, j};
    if (v == -1) return {2 * n, pmod(2 * j + n, 2 * n)};
    break;
  }
  throw std::invalid_argument("g_value expects a root of unity given as a monomial +-zeta_n^j");
}

CycNum pure_power(const PureRoot& z, std::int64_t e) {
  CycNum x(z.n);
  return x + root_of_unity(make_rational(mul_mod(z.j, pmod(e, z.n), z.n), z.n)).promoted(z.n);
}

}  // namespace

LeafPairCharacter::LeafPairCharacter(std::int64_t w, std::int64_t wp) : w_(w), wp_(wp) {
  if (w == 0 || wp == 0 || (w > 0) != (wp > 0)) throw std::invalid_argument("chi requires w, w' nonzero of the same sign");
  modulus_ = 2 * w * wp;
  table_.assign(static_cast<std::size_t>(modulus_), 0);
  for (int e : {1, -1}) {
    for (int ep : {1, -1}) {
      table_[static_cast<std::size_t>(pmod(wp * e + w * ep + w * wp, modulus_))] += e * ep;
    }
  }
}

int chi(std::int64_t w, std::int64_t wp, std::int64_t n) { return LeafPairCharacter(w, wp)(n); }

EpsilonMap::EpsilonMap(const DerivedData& d)
    : M_(d.M), N_(d.N), chi_omega_(d.graph.w[2], d.graph.w[3]), chi_varpi_(d.graph.w[4], d.graph.w[5]) {
  table_.assign(static_cast<std::size_t>(4 * M_ * N_), 0);
  for (std::int64_t s = 0; s < 2 * M_; ++s)
    for (std::int64_t t = 0; t < 2 * N_; ++t)
      table_[static_cast<std::size_t>(s * 2 * N_ + t)] = chi_omega_(s) * chi_varpi_(t);
}

int EpsilonMap::operator()(const Rational& alpha, const Rational& beta) const {
  Rational s = alpha * Rational(2 * M_), t = beta * Rational(2 * N_);
  s.canonicalize();
  t.canonicalize();
  if (s.get_den() != 1 || t.get_den() != 1) throw std::invalid_argument("point is not in (2S)^{-1}Z^2");
  Integer sr, tr;
  mpz_fdiv_r_ui(sr.get_mpz_t(), s.get_num_mpz_t(), static_cast<unsigned long>(2 * M_));
  mpz_fdiv_r_ui(tr.get_mpz_t(), t.get_num_mpz_t(), static_cast<unsigned long>(2 * N_));
  return at_index(sr.get_si(), tr.get_si());
}

void EpsilonMap::set(std::int64_t s, std::int64_t t, int value) {
  table_[static_cast<std::size_t>(pmod(s, 2 * M_) * 2 * N_ + pmod(t, 2 * N_))] = value;
}

std::vector<std::pair<std::int64_t, std::int64_t>> EpsilonMap::support() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t s = 0; s < 2 * M_; ++s)
    for (std::int64_t t = 0; t < 2 * N_; ++t)
      if (at_index(s, t) != 0) out.emplace_back(s, t);
  return out;
}

int epsilon(const DerivedData& d, const Rational& alpha, const Rational& beta) { return EpsilonMap(d)(alpha, beta); }

bool AssumptionReport::all_passed() const {
  for (const auto& c : clauses)
    if (!c.passed) return false;
  return true;
}

AssumptionReport check_assumption(const DerivedData& d) { return check_assumption(d, EpsilonMap(d)); }

AssumptionReport check_assumption(const DerivedData& d, const EpsilonMap& eps) {
  AssumptionReport rep;
  std::int64_t M = d.M, N = d.N;
  auto sup = eps.support();

  ClauseResult sum{"sum_zero", true, ""};
  long total = 0;
  for (std::int64_t s = 0; s < 2 * M; ++s)
    for (std::int64_t t = 0; t < 2 * N; ++t) total += eps.at_index(s, t);
  if (total != 0) {
    sum.passed = false;
    sum.witness = "sum of epsilon over one period = " + std::to_string(total);
  }
  rep.clauses.push_back(sum);

  ClauseResult den{"denominators", true, ""};
  for (const auto& [s, t] : sup) {
    if (gcd64(s, 2 * M) != 1 || gcd64(t, 2 * N) != 1) {
      den.passed = false;
      den.witness = "support point (" + to_string(make_rational(s, 2 * M)) + ", " + to_string(make_rational(t, 2 * N)) +
                    ") lacks exact denominators (2M, 2N)";
      break;
    }
  }
  rep.clauses.push_back(den);

  ClauseResult res{"residues_constant", true, ""};
  auto frac = [](Rational r) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    r -= fl;
    return r;
  };
  std::vector<Rational> ref;
  for (const auto& [s, t] : sup) {
    Rational alpha = make_rational(s, 2 * M), beta = make_rational(t, 2 * N);
    std::vector<Rational> cur{frac(Rational(M) * alpha), frac(Rational(N) * beta), frac(Rational(M) * alpha * alpha),
                              frac(Rational(N) * beta * beta), frac(Rational(2 * M * N) * alpha * beta)};
    if (ref.empty()) {
      ref = cur;
    } else if (cur != ref) {
      res.passed = false;
      res.witness = "residues differ at (" + to_string(alpha) + ", " + to_string(beta) + ")";
      break;
    }
  }
  rep.clauses.push_back(res);

  ClauseResult sym{"symmetry", true, ""};
  for (std::int64_t s = 0; s < 2 * M && sym.passed; ++s) {
    for (std::int64_t t = 0; t < 2 * N; ++t) {
      int v = eps.at_index(s, t);
      if (eps.at_index(-s, t) != v || eps.at_index(s, -t) != v || eps.at_index(-s, -t) != v) {
        sym.passed = false;
        sym.witness = "symmetry fails at (" + to_string(make_rational(s, 2 * M)) + ", " + to_string(make_rational(t, 2 * N)) + ")";
        break;
      }
    }
  }
  rep.clauses.push_back(sym);

  ClauseResult fac{"factorization", true, ""};
  long sum_chi = 0, sum_psi = 0;
  for (auto v : eps.chi_omega().table()) sum_chi += v;
  for (auto v : eps.chi_varpi().table()) sum_psi += v;
  if (sum_chi != 0 || sum_psi != 0) {
    fac.passed = false;
    fac.witness = "character period sums are " + std::to_string(sum_chi) + " and " + std::to_string(sum_psi);
  }
  for (std::int64_t s = 0; s < 2 * M && fac.passed; ++s) {
    for (std::int64_t t = 0; t < 2 * N; ++t) {
      if (eps.at_index(s, t) != eps.chi_omega()(s) * eps.chi_varpi()(t)) {
        fac.passed = false;
        fac.witness = "epsilon(" + to_string(make_rational(s, 2 * M)) + ", " + to_string(make_rational(t, 2 * N)) +
                      ") differs from chi(alpha) psi(beta)";
        break;
      }
    }
  }
  rep.clauses.push_back(fac);
  return rep;
}

std::vector<int> g_series_coeffs(std::int64_t w, std::int64_t wp, std::int64_t n_max) {
  LeafPairCharacter ch(w, wp);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n_max, 0)));
  for (std::int64_t n = 1; n <= n_max; ++n) out.push_back(-ch(n));
  return out;
}

CycNum g_value(std::int64_t w, std::int64_t wp, const CycNum& z) {
  LeafPairCharacter ch(w, wp);
  PureRoot r = as_pure_root(z);
  std::int64_t P = ch.modulus();
  std::int64_t uj = mul_mod(r.j, P, r.n);
  if (uj == 0) throw PoleAtRootOfUnity("z^(2ww') = 1: G has a pole");
  std::int64_t d = r.n / gcd64(r.n, uj);

  CycAccumulator a(r.n);
  for (std::int64_t n = 1; n <= P; ++n) {
    int c = ch(n);
    if (c) a.add(mul_mod(r.j, n, r.n), c);
  }
  CycAccumulator geo(r.n);
  for (std::int64_t j = 1; j < d; ++j) geo.add(mul_mod(uj, j, r.n), j);
  CycNum value = a.finish() * geo.finish(make_rational(1, d));

  CycNum num = (pure_power(r, w) - pure_power(r, -w)) * (pure_power(r, wp) - pure_power(r, -wp));
  CycNum den = pure_power(r, w * wp) - pure_power(r, -w * wp);
  if (!(value * den == num)) throw std::logic_error("g_value cross-multiplication check failed");
  return value;
}

CycNum vanishing_i(const DerivedData& d, std::int64_t h, std::int64_t k) { return vanishing_i(d, EpsilonMap(d), h, k); }

CycNum vanishing_i(const DerivedData& d, const EpsilonMap& eps, std::int64_t h, std::int64_t k) {
  std::int64_t L = 4 * d.M * d.N * k;
  auto srows = lifted_support(epsilon_row_support(eps, true), 2 * d.M, k);
  auto tcols = lifted_support(epsilon_row_support(eps, false), 2 * d.N, k);
  CycAccumulator acc(L);
  for (auto s : srows) {
    for (auto t : tcols) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      acc.add(mul_mod(pmod(h, L), pmod(d.Q_scaled(s, t), L), L), e);
    }
  }
  return acc.finish();
}

CycNum vanishing_ii(const DerivedData& d, std::int64_t h, std::int64_t k, Side side, const WeightMap& C) {
  EpsilonMap eps(d);
  std::int64_t L = 4 * d.M * d.N * k;
  std::int64_t len = side == Side::Alpha ? 2 * d.M * k : 2 * d.N * k;
  std::int64_t den = side == Side::Alpha ? 2 * d.M : 2 * d.N;
  std::vector<Rational> cv;
  for (std::int64_t i = 0; i < len; ++i) cv.push_back(C(make_rational(i, den)));
  ScaledWeights w = scale_weights(cv);
  auto srows = lifted_support(epsilon_row_support(eps, true), 2 * d.M, k);
  auto tcols = lifted_support(epsilon_row_support(eps, false), 2 * d.N, k);
  CycAccumulator acc(L);
  for (auto s : srows) {
    for (auto t : tcols) {
      int e = eps.at_index(s, t);
      if (!e) continue;
      std::int64_t wt = w.values[static_cast<std::size_t>(side == Side::Alpha ? s : t)];
      if (!wt) continue;
      acc.add(mul_mod(pmod(h, L), pmod(d.Q_scaled(s, t), L), L), e * wt);
    }
  }
  return acc.finish(Rational(Integer(1), w.denominator));
}

std::vector<CosetSum> vanishing_iii_iv_v(const DerivedData& d, std::int64_t k, Variant variant, const WeightMap& B,
                                         const WeightMap& C) {
  EpsilonMap eps(d);
  std::int64_t M = d.M, N = d.N;
  if (variant == Variant::iii) {
    // sum_{alpha in (1/2M)Z/Z} chi(alpha) Btilde(alpha), Btilde(alpha) = sum_{m<k} B(alpha + m)
    Rational total = 0;
    for (std::int64_t s = 0; s < 2 * M; ++s) {
      int c = eps.chi_omega()(s);
      if (!c) continue;
      Rational bt = 0;
      for (std::int64_t m = 0; m < k; ++m) bt += B(make_rational(s, 2 * M) + Rational(m));
      total += c * bt;
    }
    if (total != 0) throw PreconditionFailed("sum chi(alpha) Btilde(alpha) = " + to_string(total) + " is not zero");
  }
  std::int64_t L = 4 * M * N * k;
  std::vector<Rational> bv, cv;
  for (std::int64_t s = 0; s < 2 * M * k; ++s) bv.push_back(B(make_rational(s, 2 * M)));
  for (std::int64_t t = 0; t < 2 * N * k; ++t) cv.push_back(C(make_rational(t, 2 * N)));
  ScaledWeights bw = scale_weights(bv), cw = scale_weights(cv);
  auto srows = lifted_support(epsilon_row_support(eps, true), 2 * M, k);
  auto tcols = lifted_support(epsilon_row_support(eps, false), 2 * N, k);

  struct Coset {
    const char* name;
    bool m_mult_k, n_mult_k;
  };
  std::vector<Coset> cosets;
  if (variant == Variant::iii) {
    cosets = {{"kZ+Z", true, false}, {"kZ^2", true, true}};
  } else {
    cosets = {{"kZ+Z", true, false}, {"Z+kZ", false, true}, {"kZ^2", true, true}};
  }
  std::vector<CosetSum> out;
  for (const auto& cs : cosets) {
    CycAccumulator acc(L);
    for (std::int64_t m = 0; m < 2 * k * M; m += cs.m_mult_k ? k : 1) {
      for (std::int64_t n = 0; n < 2 * k * N; n += cs.n_mult_k ? k : 1) {
        // mu^T S^{-1} mu / 4k = (N c m^2 - 2MNb mn + M a n^2) / L
        std::int64_t outer = pmod(N * d.c * m * m - 2 * M * N * d.b * m * n + M * d.a * n * n, L);
        for (auto s : srows) {
          std::int64_t sm = pmod(outer + 2 * N * s * m, L);
          std::int64_t bws = bw.values[static_cast<std::size_t>(s)];
          if (!bws) continue;
          for (auto t : tcols) {
            int e = eps.at_index(s, t);
            if (!e) continue;
            std::int64_t cwt = cw.values[static_cast<std::size_t>(t)];
            if (!cwt) continue;
            std::int64_t idx = sm + 2 * M * t * n;
            acc.add(idx % L, checked_product(e * bws, cwt));
          }
        }
      }
    }
    out.push_back({cs.name, acc.finish(Rational(Integer(1), bw.denominator * cw.denominator))});
  }
  return out;
}

CycNum inner_lattice_sum(const DerivedData& d, std::int64_t h, std::int64_t k, std::int64_t s, std::int64_t t) {
  std::int64_t L = 4 * d.M * d.N * k;
  CycAccumulator acc(L);
  for (std::int64_t m = 0; m < k; ++m)
    for (std::int64_t n = 0; n < k; ++n)
      acc.add(mul_mod(pmod(h, L), pmod(d.Q_scaled(s + 2 * d.M * m, t + 2 * d.N * n), L), L), 1);
  return acc.finish();
}

CycNum single_inner_sum(std::int64_t M, std::int64_t a0, std::int64_t b0, std::int64_t h, std::int64_t k, std::int64_t r) {
  // h M Q0(m + r/2M) / k = h (a0 (2Mm + r)^2 + 2M b0 (2Mm + r)) / (4Mk)
  std::int64_t L = 4 * M * k;
  CycAccumulator acc(L);
  for (std::int64_t m = 0; m < k; ++m) {
    std::int64_t x = 2 * M * m + r;
    acc.add(mul_mod(pmod(h, L), pmod(a0 * x * x + 2 * M * b0 * x, L), L), 1);
  }
  return acc.finish();
}

CycNum single_weighted_sum(const LeafPairCharacter& chi_m, std::int64_t M, std::int64_t a0, std::int64_t b0, std::int64_t h,
                           std::int64_t k, const std::function<Rational(std::int64_t)>& btilde) {
  std::int64_t L = 4 * M * k;
  std::vector<Rational> bv;
  for (std::int64_t r = 0; r < 2 * M; ++r) bv.push_back(btilde(r));
  ScaledWeights w = scale_weights(bv);
  CycAccumulator acc(L);
  for (std::int64_t r = 0; r < 2 * M * k; ++r) {
    int c = chi_m(r);
    std::int64_t wt = w.values[static_cast<std::size_t>(r % (2 * M))];
    if (!c || !wt) continue;
    acc.add(mul_mod(pmod(h, L), pmod(a0 * r * r + 2 * M * b0 * r, L), L), c * wt);
  }
  return acc.finish(Rational(Integer(1), w.denominator));
}

Rational b1(const Rational& x) { return x - Rational(1, 2); }

}  // namespace hblock
