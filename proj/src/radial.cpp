#include "hblock/radial.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "hblock/characters.hpp"
#include "hblock/parallel.hpp"
#include "hblock/qseries.hpp"

namespace hblock {

namespace {

using cld = std::complex<long double>;

// Energies are integers in units of 1/(4MN), measured from the series base
// exponent. Each family enumerates its terms row by row.
struct Family {
  std::int64_t scale = 1;       // 4MN
  std::int64_t base_scaled = 0;  // 4MN * base exponent
  long double weight_scale = 1;
  // N(Y) * max|weight| <= c2 Y + c1 sqrt(Y) + c0, Y in energy units.
  long double c2 = 0, c1 = 0, c0 = 0;
  std::int64_t rows = 0;
};

std::int64_t isqrt_ld(long double v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(v));
  while (static_cast<long double>(r + 1) * (r + 1) <= v) ++r;
  while (r > 0 && static_cast<long double>(r) * r > v) --r;
  return r;
}

// Integer range of x with A x^2 + B x + C < 0 widened by one on each side;
// callers re-test every candidate exactly.
std::pair<std::int64_t, std::int64_t> root_window(long double A, long double B, long double C) {
  long double disc = B * B - 4 * A * C;
  if (disc < 0) return {1, 0};
  long double sq = std::sqrt(disc);
  return {static_cast<std::int64_t>(std::floor((-B - sq) / (2 * A))) - 1,
          static_cast<std::int64_t>(std::ceil((-B + sq) / (2 * A))) + 1};
}

// A run is the term family e_j = e0 + j d0 + dd j(j-1)/2, j < count, with
// one common weight.
struct Run {
  std::int64_t e0, d0, dd, count;
  int weight;
  std::int64_t energy(std::int64_t j) const { return e0 + j * d0 + dd * (j * (j - 1) / 2); }
};

// Trims a run (convex in j) to the terms with energy < Xs and emits it.
template <class Sink>
void emit_trimmed(Run r, std::int64_t Xs, Sink&& sink) {
  std::int64_t lo = 0, hi = r.count - 1;
  while (lo <= hi && r.energy(lo) >= Xs) ++lo;
  while (hi >= lo && r.energy(hi) >= Xs) --hi;
  if (lo > hi) return;
  Run out{r.energy(lo), r.d0 + lo * r.dd, r.dd, hi - lo + 1, r.weight};
  sink(out);
}

class FalseThetaTerms {
 public:
  FalseThetaTerms(const DerivedData& d, ThetaSign sign) : d_(d), eps_(d), sign_(sign) {
    for (std::int64_t s = 0; s < 2 * d.M; ++s) {
      for (std::int64_t t = 0; t < 2 * d.N; ++t) {
        if (eps_.at_index(s, t)) residues_.push_back({s, t});
      }
    }
  }

  Family family(long double X) const {
    Family f;
    f.scale = 4 * d_.M * d_.N;
    long double A = 2 * std::sqrt(4.0L * d_.M * d_.c) / d_.M;
    long double B = 2 * std::sqrt(4.0L * d_.N * d_.a) / d_.N;
    f.c2 = A * B;
    f.c1 = 4 * (A + B);
    f.c0 = 16;
    f.rows = isqrt_ld(X * 4 * d_.M * d_.c);
    return f;
  }

  // Row s = row + 1: runs over t = r + 2N j >= 1 for each residue r with
  // eps(s, r) != 0.
  template <class Sink>
  void row(std::int64_t row, std::int64_t Xs, Sink&& sink) const {
    std::int64_t s = row + 1, P = 2 * d_.N;
    std::int64_t sr = pmod(s, 2 * d_.M);
    long double A = static_cast<long double>(d_.M * d_.c);
    long double B = static_cast<long double>(2 * d_.M * d_.N * d_.b * s) * (sign_ == ThetaSign::Plus ? 1 : -1);
    long double C = static_cast<long double>(d_.N * d_.a) * s * s - Xs;
    auto [lo, hi] = root_window(A, B, C);
    if (lo < 1) lo = 1;
    if (lo > hi) return;
    for (const auto& [rs, rt] : residues_) {
      if (rs != sr) continue;
      std::int64_t j0 = lo <= rt ? 0 : (lo - rt + P - 1) / P;
      std::int64_t t0 = rt + P * j0;
      if (t0 < 1) t0 += P;
      if (t0 > hi) continue;
      std::int64_t count = (hi - t0) / P + 1;
      std::int64_t e0 = Q_signed_scaled(d_, sign_, s, t0);
      std::int64_t d0 = Q_signed_scaled(d_, sign_, s, t0 + P) - e0;
      std::int64_t dd = 2 * d_.M * d_.c * P * P;
      emit_trimmed(Run{e0, d0, dd, count, eps_.at_index(s, rt)}, Xs, sink);
    }
  }

 private:
  const DerivedData& d_;
  EpsilonMap eps_;
  ThetaSign sign_;
  std::vector<std::pair<std::int64_t, std::int64_t>> residues_;
};

class DirectTerms {
 public:
  explicit DirectTerms(const DerivedData& d) : d_(d) {
    RatMatrix inv = linking_inverse(d.graph);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) P_[i][j] = -to_int64(inv[i][j].get_num());
  }

  Family family(long double X) const {
    Family f;
    std::int64_t MN = d_.M * d_.N;
    f.scale = 4 * MN;
    std::int64_t sum_w = 0;
    for (auto v : d_.graph.w) sum_w += v;
    f.base_scaled = (-18 - sum_w) * MN;
    // Terms with l1 < 0 are the mirror images of l1 > 0; weight 2 * (1/4).
    f.weight_scale = 0.5L;
    long double w1 = static_cast<long double>(-d_.graph.w[0]), w2 = static_cast<long double>(-d_.graph.w[1]);
    f.c2 = 16 * std::sqrt(w1 * w2);
    f.c1 = 8 * (std::sqrt(w1) + 2 * std::sqrt(w2));
    f.c0 = 8;
    f.rows = (isqrt_ld(X * 4 * w1) + 1) / 2;
    return f;
  }

  // Row l1 = 2 row + 1; energy 4MN * l P l / 4 = MN * l P l. For each leaf
  // pattern, one run over odd l2 < 0 and one over odd l2 > 0.
  template <class Sink>
  void row(std::int64_t row, std::int64_t Xs, Sink&& sink) const {
    std::int64_t MN = d_.M * d_.N;
    std::int64_t l1 = 2 * row + 1;
    for (int leaves = 0; leaves < 16; ++leaves) {
      std::array<std::int64_t, 6> l{l1, 0, 1, 1, 1, 1};
      int sgn = 1;
      for (int v = 0; v < 4; ++v) {
        if (leaves & (1 << v)) {
          l[static_cast<std::size_t>(v + 2)] = -1;
          sgn = -sgn;
        }
      }
      // l P l = P22 l2^2 + 2 l2 beta + gamma
      std::int64_t beta = 0, gamma = 0;
      for (std::size_t i = 0; i < 6; ++i) {
        if (i == 1) continue;
        beta += P_[1][i] * l[i];
        for (std::size_t j = 0; j < 6; ++j) {
          if (j != 1) gamma += l[i] * P_[i][j] * l[j];
        }
      }
      auto energy = [&](std::int64_t l2) { return MN * (P_[1][1] * l2 * l2 + 2 * beta * l2 + gamma); };
      long double A = static_cast<long double>(P_[1][1] * MN);
      auto [lo, hi] = root_window(A, 2.0L * beta * MN, static_cast<long double>(gamma) * MN - Xs);
      if ((lo & 1) == 0) ++lo;
      if ((hi & 1) == 0) --hi;
      std::int64_t dd = 8 * MN * P_[1][1];
      if (lo < 0) {
        std::int64_t top = std::min<std::int64_t>(hi, -1);
        if (lo <= top) emit_trimmed(Run{energy(lo), energy(lo + 2) - energy(lo), dd, (top - lo) / 2 + 1, -sgn}, Xs, sink);
      }
      if (hi > 0) {
        std::int64_t bottom = std::max<std::int64_t>(lo, 1);
        if (bottom <= hi) {
          emit_trimmed(Run{energy(bottom), energy(bottom + 2) - energy(bottom), dd, (hi - bottom) / 2 + 1, sgn}, Xs, sink);
        }
      }
    }
  }

 private:
  const DerivedData& d_;
  std::array<std::array<std::int64_t, 6>, 6> P_{};
};

long double tail_bound(const Family& f, long double t, long double X) {
  long double e = std::exp(-t * X);
  long double v = (f.c2 + f.c1 / std::sqrt(X)) * (X + 1 / t) * e + f.c0 * e;
  return v * f.weight_scale * std::exp(-t * static_cast<long double>(f.base_scaled) / f.scale);
}

template <class Terms>
RadialSample evaluate(const Terms& terms, std::int64_t h, std::int64_t k, long double t, int precision_bits) {
  if (!(t > 0)) throw std::invalid_argument("t must be positive");
  if (k < 1) throw std::invalid_argument("k must be positive");
  long double target = std::ldexp(1.0L, -precision_bits);
  long double X = std::max<long double>(1, 1 / t);
  Family fam = terms.family(X);
  while (tail_bound(fam, t, X) >= target) {
    X *= 2;
    if (fam.c2 * X > 2e11L) {
      throw TruncationInsufficient("truncation needs more than 2e11 terms at t = " + std::to_string(static_cast<double>(t)));
    }
  }
  fam = terms.family(X);
  auto Xs = static_cast<std::int64_t>(std::ceil(X * fam.scale));
  std::int64_t L = fam.scale * k;
  std::int64_t hm = pmod(h, L);
  auto mulmod = [L](std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * pmod(b, L)) % L);
  };
  std::int64_t blocks = block_count(fam.rows);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(blocks));
  RadialSample out;
  out.t = t;
  out.energy_cutoff = X;
  out.tail_bound = tail_bound(fam, t, X);

  if (precision_bits <= 64) {
    std::vector<cld> roots(static_cast<std::size_t>(L));
    for (std::int64_t j = 0; j < L; ++j) {
      long double ang = 2 * std::numbers::pi_v<long double> * static_cast<long double>(j) / static_cast<long double>(L);
      roots[static_cast<std::size_t>(j)] = {std::cos(ang), std::sin(ang)};
    }
    long double rate = t / fam.scale;
    std::vector<cld> partial(static_cast<std::size_t>(blocks));
    run_blocks(fam.rows, [&](std::int64_t b) {
      auto [lo, hi] = block_range(fam.rows, b);
      long double re = 0, im = 0;
      std::int64_t n = 0;
      for (std::int64_t r = lo; r < hi; ++r) {
        terms.row(r, Xs, [&](const Run& run) {
          // Magnitudes and phases advance multiplicatively along the run and
          // are re-anchored from the exact energy every 32 terms.
          constexpr std::int64_t kAnchor = 32;
          long double rre = 0, rim = 0, mag = 0, ratio = 0;
          long double K = std::exp(-rate * static_cast<long double>(run.dd));
          std::int64_t idx = 0, didx = 0, ddidx = mulmod(hm, run.dd);
          for (std::int64_t j = 0; j < run.count; ++j) {
            if (j % kAnchor == 0) {
              std::int64_t e = run.energy(j), de = run.d0 + j * run.dd;
              mag = std::exp(-rate * static_cast<long double>(e));
              ratio = std::exp(-rate * static_cast<long double>(de));
              idx = mulmod(hm, e + fam.base_scaled);
              didx = mulmod(hm, de);
            }
            const cld& z = roots[static_cast<std::size_t>(idx)];
            rre += mag * z.real();
            rim += mag * z.imag();
            mag *= ratio;
            ratio *= K;
            idx += didx;
            if (idx >= L) idx -= L;
            didx += ddidx;
            if (didx >= L) didx -= L;
          }
          re += run.weight * rre;
          im += run.weight * rim;
          n += run.count;
        });
      }
      partial[static_cast<std::size_t>(b)] = {re, im};
      counts[static_cast<std::size_t>(b)] = n;
    });
    cld total = 0;
    for (const auto& p : partial) total += p;
    total *= fam.weight_scale * std::exp(-t * static_cast<long double>(fam.base_scaled) / fam.scale);
    out.value = BigComplex(total, precision_bits);
  } else {
    int wp = precision_bits + 32;
    RootTable roots(L, wp);
    BigReal rate(t, wp);
    rate /= BigReal(static_cast<long double>(fam.scale), wp);
    std::vector<BigComplex> partial(static_cast<std::size_t>(blocks), BigComplex(wp));
    run_blocks(fam.rows, [&](std::int64_t b) {
      auto [lo, hi] = block_range(fam.rows, b);
      BigComplex acc(wp);
      BigReal mag(wp);
      std::int64_t n = 0;
      for (std::int64_t r = lo; r < hi; ++r) {
        terms.row(r, Xs, [&](const Run& run) {
          for (std::int64_t j = 0; j < run.count; ++j) {
            std::int64_t e = run.energy(j);
            mpfr_mul_si(mag.raw(), rate.raw(), -e, MPFR_RNDN);
            mpfr_exp(mag.raw(), mag.raw(), MPFR_RNDN);
            if (run.weight < 0) mpfr_neg(mag.raw(), mag.raw(), MPFR_RNDN);
            acc.add_product(roots[mulmod(hm, e + fam.base_scaled)], mag);
          }
          n += run.count;
        });
      }
      partial[static_cast<std::size_t>(b)] = acc;
      counts[static_cast<std::size_t>(b)] = n;
    });
    BigComplex total(wp);
    for (const auto& p : partial) total += p;
    BigReal scale(fam.weight_scale, wp);
    BigReal shift(-t * static_cast<long double>(fam.base_scaled), wp);
    shift /= BigReal(static_cast<long double>(fam.scale), wp);
    mpfr_exp(shift.raw(), shift.raw(), MPFR_RNDN);
    scale *= shift;
    total *= scale;
    out.value = BigComplex(precision_bits);
    mpfr_set(out.value.re().raw(), total.re().raw(), MPFR_RNDN);
    mpfr_set(out.value.im().raw(), total.im().raw(), MPFR_RNDN);
  }
  for (auto c : counts) out.terms += c;
  return out;
}

}  // namespace

RadialSample numeric_radial(const DerivedData& d, SeriesKind which, std::int64_t h, std::int64_t k, long double t,
                            int precision_bits) {
  if (precision_bits < kMinPrecision) throw std::invalid_argument("precision must be at least 64 bits");
  switch (which) {
    case SeriesKind::FPlus: return evaluate(FalseThetaTerms(d, ThetaSign::Plus), h, k, t, precision_bits);
    case SeriesKind::FMinus: return evaluate(FalseThetaTerms(d, ThetaSign::Minus), h, k, t, precision_bits);
    case SeriesKind::Zhat: return evaluate(DirectTerms(d), h, k, t, precision_bits);
  }
  throw std::invalid_argument("unknown series");
}

RichardsonResult richardson(std::vector<RadialSample> samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  int out_prec = samples.front().value.precision();
  int prec = out_prec + 32;
  std::size_t n = samples.size();
  // T[i][j] = T[i][j-1] + (T[i][j-1] - T[i-1][j-1]) / (2^j - 1)
  std::vector<std::vector<BigComplex>> T(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigComplex v(prec);
    mpfr_set(v.re().raw(), samples[i].value.re().raw(), MPFR_RNDN);
    mpfr_set(v.im().raw(), samples[i].value.im().raw(), MPFR_RNDN);
    T[i].push_back(v);
    for (std::size_t j = 1; j <= i; ++j) {
      BigComplex diff = T[i][j - 1] - T[i - 1][j - 1];
      BigReal denom(static_cast<long double>((1ULL << j) - 1), prec);
      diff.re() /= denom;
      diff.im() /= denom;
      T[i].push_back(T[i][j - 1] + diff);
    }
  }
  RichardsonResult res;
  const BigComplex& best = T[n - 1][n - 1];
  res.estimate = BigComplex(out_prec);
  mpfr_set(res.estimate.re().raw(), best.re().raw(), MPFR_RNDN);
  mpfr_set(res.estimate.im().raw(), best.im().raw(), MPFR_RNDN);
  res.error_estimate = n > 1 ? distance(best, T[n - 1][n - 2]) : 0;
  res.samples = std::move(samples);
  return res;
}

long double default_t0(const DerivedData& d, std::int64_t k) {
  long double pi = std::numbers::pi_v<long double>;
  return 0.0035L * 4 * pi * pi / (static_cast<long double>(k * k) * static_cast<long double>(d.M * d.a + d.N * d.c));
}

RichardsonResult numeric_radial_limit(const DerivedData& d, SeriesKind which, std::int64_t h, std::int64_t k,
                                      const RadialOptions& options) {
  if (options.levels < 1) throw std::invalid_argument("at least one ladder level is required");
  long double t = options.t0 > 0 ? options.t0 : default_t0(d, k);
  std::vector<RadialSample> samples;
  for (int i = 0; i < options.levels; ++i) {
    samples.push_back(numeric_radial(d, which, h, k, t, options.precision_bits));
    t /= 2;
  }
  return richardson(std::move(samples));
}

}  // namespace hblock
