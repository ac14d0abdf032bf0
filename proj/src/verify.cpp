#include "hblock/verify.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hblock/gauss.hpp"
#include "hblock/qseries.hpp"
#include "hblock/radial.hpp"
#include "hblock/wrt.hpp"

namespace hblock {

bool SuiteReport::all_passed() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const auto& a : assertions) n += (!a.informational && !a.passed);
  return n;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"assumption",   "gauss-sums",  "series-identity", "asymptotics",
                                              "main-theorem", "quantum-set", "reciprocity"};
  return names;
}

Json to_json(const SuiteReport& r) {
  Json rows = Json::array();
  for (const auto& a : r.assertions) {
    rows.push_back(Json{{"name", a.name},
                        {"anchor", a.anchor},
                        {"kind", a.exact ? "exact" : "numeric"},
                        {"passed", a.passed},
                        {"informational", a.informational},
                        {"detail", a.detail}});
  }
  return Json{{"suite", r.suite}, {"passed", r.all_passed()}, {"failures", r.failures()}, {"assertions", rows}};
}

namespace {

std::vector<std::int64_t> units_mod(std::int64_t k) {
  std::vector<std::int64_t> hs;
  for (std::int64_t h = 1; h <= k; ++h)
    if (gcd64(h, k) == 1) hs.push_back(h % k);
  return hs;
}

std::string fmt(long double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << static_cast<double>(x);
  return os.str();
}

std::string kname(const std::string& base, std::int64_t k) { return base + " k=" + std::to_string(k); }

class Builder {
 public:
  explicit Builder(std::string suite) { report_.suite = std::move(suite); }
  void exact(std::string name, std::string anchor, bool passed, std::string detail = {}) {
    report_.assertions.push_back({std::move(name), std::move(anchor), true, passed, false, std::move(detail)});
  }
  void numeric(std::string name, std::string anchor, bool passed, std::string detail = {}) {
    report_.assertions.push_back({std::move(name), std::move(anchor), false, passed, false, std::move(detail)});
  }
  void info(std::string name, std::string anchor, bool exact, bool passed, std::string detail = {}) {
    report_.assertions.push_back({std::move(name), std::move(anchor), exact, passed, true, std::move(detail)});
  }
  SuiteReport done() { return std::move(report_); }

 private:
  SuiteReport report_;
};

SuiteReport suite_assumption(const DerivedData& d, const EpsilonMap& eps) {
  Builder b("assumption");
  for (const auto& c : check_assumption(d, eps).clauses) {
    b.exact(c.name, "character assumption on eps: " + c.name, c.passed, c.witness);
  }
  return b.done();
}

// Evaluates `check` for every h coprime to k and returns the first failing h,
// or 0 when all pass.
std::int64_t first_failure(std::int64_t k, const std::function<bool(std::int64_t)>& check) {
  for (std::int64_t h : units_mod(k))
    if (!check(h)) return h == 0 ? k : h;
  return 0;
}

void gauss_sum_lemmas(Builder& b, const DerivedData& d, const EpsilonMap& eps, std::int64_t k) {
  const LeafPairCharacter& chi_w = eps.chi_omega();
  const LeafPairCharacter& chi_v = eps.chi_varpi();
  auto support = eps.support();
  bool degenerate = gcd64(d.M, k) > 1 || gcd64(d.N, k) > 1;

  // Inner lattice sum over mu in Z^2/kZ^2.
  std::string bad;
  for (std::int64_t h : units_mod(k)) {
    CycNum first;
    bool have = false;
    for (const auto& [s, t] : support) {
      CycNum v = inner_lattice_sum(d, h, k, s, t);
      bool ok;
      if (degenerate) {
        ok = cyc_is_zero(v);
      } else if (!have) {
        first = v;
        have = true;
        ok = true;
      } else {
        ok = cyc_is_zero(v - first);
      }
      if (!ok && bad.empty()) bad = "h=" + std::to_string(h) + " s=" + std::to_string(s) + " t=" + std::to_string(t);
    }
  }
  b.exact(kname(degenerate ? "inner lattice sum vanishes" : "inner lattice sum constant on support", k),
          degenerate ? "inner lattice sum is zero when gcd(M,k) or gcd(N,k) exceeds 1"
                     : "inner lattice sum is independent of gamma when gcd(MN,k) = 1",
          bad.empty(), bad);

  // Single-variable sums, one per arm: (M, a, b t) against chi_omega and
  // (N, c, b s) against chi_varpi.
  struct Arm {
    const LeafPairCharacter* chi;
    const LeafPairCharacter* other;
    std::int64_t L, a0;
  };
  const Arm arms[2] = {{&chi_w, &chi_v, d.M, d.a}, {&chi_v, &chi_w, d.N, d.c}};
  std::string bad_single, bad_weighted;
  bool any_degenerate = false;
  for (const Arm& arm : arms) {
    bool deg = gcd64(arm.L, k) > 1;
    any_degenerate |= deg;
    std::int64_t om = arm.other->modulus();
    for (std::int64_t h : units_mod(k)) {
      for (std::int64_t t = 0; t < om; ++t) {
        if ((*arm.other)(t) == 0) continue;
        std::int64_t b0 = d.b * t;
        CycNum first;
        bool have = false;
        for (std::int64_t r = 0; r < 2 * arm.L; ++r) {
          if ((*arm.chi)(r) == 0) continue;
          CycNum v = single_inner_sum(arm.L, arm.a0, b0, h, k, r);
          bool ok = deg ? cyc_is_zero(v) : (have ? cyc_is_zero(v - first) : true);
          if (!deg && !have) {
            first = v;
            have = true;
          }
          if (!ok && bad_single.empty()) {
            bad_single = "L=" + std::to_string(arm.L) + " h=" + std::to_string(h) + " b0=" + std::to_string(b0) +
                         " r=" + std::to_string(r);
          }
        }
        // Weighted sums with sum chi(r) Btilde(r) = 0.
        const std::function<Rational(std::int64_t)> weights[2] = {
            [](std::int64_t) { return Rational(1); },
            [L = arm.L](std::int64_t r) -> Rational { return make_rational(r, 2 * L) - Rational(1, 2); }};
        for (const auto& w : weights) {
          Rational pairing = 0;
          for (std::int64_t r = 0; r < 2 * arm.L; ++r) pairing += (*arm.chi)(r) * w(r);
          if (pairing != 0) continue;
          CycNum v = single_weighted_sum(*arm.chi, arm.L, arm.a0, b0, h, k, w);
          if (!cyc_is_zero(v) && bad_weighted.empty()) {
            bad_weighted = "L=" + std::to_string(arm.L) + " h=" + std::to_string(h) + " b0=" + std::to_string(b0);
          }
        }
      }
    }
  }
  b.exact(kname("single-variable inner sum", k),
          any_degenerate ? "single inner sum vanishes on the support when gcd(L,k) > 1"
                         : "single inner sum is independent of alpha on the support when gcd(L,k) = 1",
          bad_single.empty(), bad_single);
  b.exact(kname("weighted single-variable sum vanishes", k),
          "weighted single sum is zero when sum chi Btilde = 0 and gcd(L, a0) = 1", bad_weighted.empty(), bad_weighted);
}

SuiteReport suite_gauss_sums(const DerivedData& d, const EpsilonMap& eps, const VerifyOptions& opt) {
  Builder b("gauss-sums");
  for (std::int64_t k = 1; k <= opt.k_max; ++k) {
    Rational kr = make_rational(k);
    std::int64_t h = first_failure(k, [&](std::int64_t h) { return cyc_is_zero(vanishing_i(d, eps, h, k)); });
    b.exact(kname("(i) weighted Gauss sum", k), "sum eps(gamma) e(hQ(gamma)/k) over (2S)^-1 Z^2 / kZ^2 vanishes", h == 0,
            h ? "h=" + std::to_string(h) : "");

    const std::pair<std::string, WeightMap> cs[] = {
        {"1", [](const Rational&) -> Rational { return Rational(1); }},
        {"x", [](const Rational& x) -> Rational { return x; }},
        {"B1(x/k)", [kr](const Rational& x) -> Rational { return b1(x / kr); }},
        {"x^2", [](const Rational& x) -> Rational { return x * x; }}};
    std::string bad;
    for (Side side : {Side::Alpha, Side::Beta}) {
      for (const auto& [cname, C] : cs) {
        std::int64_t fh = first_failure(k, [&](std::int64_t h) { return cyc_is_zero(vanishing_ii(d, h, k, side, C)); });
        if (fh && bad.empty()) bad = std::string(side == Side::Alpha ? "alpha" : "beta") + " C=" + cname + " h=" + std::to_string(fh);
      }
    }
    b.exact(kname("(ii) one-sided weighted sums", k), "the (i) sum weighted by C(alpha) or C(beta) vanishes", bad.empty(),
            bad);

    struct Item {
      const char* name;
      Variant v;
      WeightMap B, C;
      const char* anchor;
    };
    const Item items[] = {
        {"(iii) coset sums, B(x) = x - k/2, C(x) = x^2", Variant::iii, [kr](const Rational& x) -> Rational { return x - kr / 2; },
         [](const Rational& x) -> Rational { return x * x; }, "coset double sums vanish when sum chi Btilde = 0"},
        {"(iii) coset sums, B = 1, C(x) = x", Variant::iii, [](const Rational&) -> Rational { return Rational(1); },
         [](const Rational& x) -> Rational { return x; }, "coset double sums vanish when sum chi Btilde = 0"},
        {"(iv) coset sums, B1(x/k) B1(y/k)", Variant::iv, [kr](const Rational& x) -> Rational { return b1(x / kr); },
         [kr](const Rational& x) -> Rational { return b1(x / kr); }, "coset double sums with B1 weights vanish"},
        {"(v) coset sums, weight alpha beta", Variant::v, [](const Rational& x) -> Rational { return x; },
         [](const Rational& x) -> Rational { return x; }, "coset double sums with weight alpha beta vanish"}};
    for (const auto& item : items) {
      std::string detail;
      bool ok = true;
      try {
        for (const auto& cs_ : vanishing_iii_iv_v(d, k, item.v, item.B, item.C)) {
          if (!cyc_is_zero(cs_.value)) {
            ok = false;
            if (detail.empty()) detail = "coset " + cs_.coset;
          }
        }
      } catch (const PreconditionFailed& e) {
        ok = false;
        detail = e.what();
      }
      b.exact(kname(item.name, k), item.anchor, ok, detail);
    }
  }

  // Quadratic Gauss sums G(a, b, c) vanish when gcd(a, c) does not divide b.
  std::string bad;
  int checked = 0;
  for (std::int64_t a = 1; a <= 30; ++a) {
    for (std::int64_t c = 1; c <= 30; ++c) {
      std::int64_t g = gcd64(a, c);
      for (std::int64_t bb = 0; bb < c; ++bb) {
        if (bb % g == 0) continue;
        ++checked;
        if (!cyc_is_zero(quadratic_gauss_sum(a, bb, c)) && bad.empty()) {
          bad = "G(" + std::to_string(a) + "," + std::to_string(bb) + "," + std::to_string(c) + ")";
        }
      }
    }
  }
  b.exact("quadratic Gauss sum fuzz 1 <= a,c <= 30", "G(a,b,c) = 0 when gcd(a,c) does not divide b", bad.empty(),
          bad.empty() ? std::to_string(checked) + " sums" : bad);

  for (std::int64_t k = 1; k <= std::min<std::int64_t>(opt.k_max, 6); ++k) gauss_sum_lemmas(b, d, eps, k);

  // Constant-term identity G^omega G^varpi = constant_term_sum and the
  // beta-weighted vanishing, on a few small mu.
  for (std::int64_t k = 2; k <= std::min<std::int64_t>(opt.k_max, 4); ++k) {
    std::string bad_ct, bad_beta;
    for (std::int64_t m : {1, 3}) {
      for (std::int64_t n : {1, 3}) {
        if (m % k == 0 || n % k == 0) continue;
        auto [lhs, rhs] = g_constant_term_check(d, m, n, k);
        if (!cyc_is_zero(lhs - rhs) && bad_ct.empty()) bad_ct = "m=" + std::to_string(m) + " n=" + std::to_string(n);
      }
    }
    Rational kr = make_rational(k);
    const WeightMap bs[] = {[](const Rational&) -> Rational { return Rational(1); }, [](const Rational& x) -> Rational { return x; },
                            [kr](const Rational& x) -> Rational { return b1(x / kr); }};
    for (std::int64_t m = 1; m < 2 * k * d.M; m += 2) {
      if (m % k == 0) continue;
      for (std::int64_t n : {0, 1, 2}) {
        for (const auto& B : bs) {
          if (!cyc_is_zero(beta_weighted_sum(d, m, n, k, B)) && bad_beta.empty()) {
            bad_beta = "m=" + std::to_string(m) + " n=" + std::to_string(n);
          }
        }
      }
    }
    b.exact(kname("leaf generating functions as constant terms", k),
            "G^omega(zeta^{m/2M}) G^varpi(zeta^{n/2N}) equals the weighted Gauss sum", bad_ct.empty(), bad_ct);
    b.exact(kname("beta-weighted sums vanish off k | m", k), "sum eps e(gamma.mu/k) B(beta) = 0 unless k | m",
            bad_beta.empty(), bad_beta);
  }
  return b.done();
}

SuiteReport suite_series_identity(const DerivedData& d, const VerifyOptions& opt) {
  Builder b("series-identity");
  Rational bound = zhat_bound_for_strata(d, opt.strata);
  QSeries direct = zhat_direct(d, bound);
  QSeries ft = zhat_false_theta(d, bound);
  std::string n = std::to_string(opt.strata);
  auto first_diff = [](const QSeries& x, const QSeries& y) {
    auto tx = x.terms(), ty = y.terms();
    for (std::size_t i = 0; i < std::max(tx.size(), ty.size()); ++i) {
      if (i >= tx.size() || i >= ty.size() || tx[i].exponent != ty[i].exponent || tx[i].coeff != ty[i].coeff) {
        const auto& t = i < tx.size() ? tx[i] : ty[i];
        return "first difference at q^" + to_string(t.exponent);
      }
    }
    return std::string();
  };
  b.exact("block from definition equals false-theta form through " + n + " strata",
          "Zhat = 1/2 q^pref (F+ - F-) termwise", direct == ft, first_diff(direct, ft));
  b.info("block from definition equals minus the false-theta form", "Zhat = -1/2 q^pref (F+ - F-) termwise", true,
         direct == ft * Rational(-1));
  if (d.graph == reference_graph()) {
    auto terms = direct.terms();
    bool ok = !terms.empty() && terms[0].exponent == Rational(1, 2) && terms[0].coeff == -1;
    std::string detail = terms.empty() ? "empty series"
                                       : "leading term " + to_string(terms[0].coeff) + " q^" + to_string(terms[0].exponent);
    b.exact("leading term is -q^(1/2)", "leading term of the reference block", ok, detail);
  }
  return b.done();
}

SuiteReport suite_asymptotics(const DerivedData& d, const VerifyOptions& opt) {
  Builder b("asymptotics");
  for (std::int64_t k = 1; k <= opt.k_max; ++k) {
    std::string bad_rows, bad_a0;
    for (std::int64_t h : units_mod(k)) {
      AsymptoticRow row = asymptotic_coeffs(d, h, k, 2);
      if (!row.boundary_rows_zero && bad_rows.empty()) bad_rows = "h=" + std::to_string(h);
      if (!cyc_is_zero(row.a[0] - radial_limit_closed(d, h, k)) && bad_a0.empty()) bad_a0 = "h=" + std::to_string(h);
    }
    b.exact(kname("boundary Euler-Maclaurin rows vanish", k), "eps-prefactors of the j = -1 and l = -1 terms are zero",
            bad_rows.empty(), bad_rows);
    b.exact(kname("a(0) equals the closed radial limit", k), "constant asymptotic coefficient is the radial limit",
            bad_a0.empty(), bad_a0);
  }
  if (opt.numeric) {
    for (auto [h, k] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {1, 3}, {2, 3}}) {
      if (k > opt.k_max) continue;
      std::string hk = "h=" + std::to_string(h) + " k=" + std::to_string(k);
      auto describe = [](const RemainderProfile& p) {
        std::ostringstream os;
        os.precision(4);
        os << "slope " << p.slope << "; remainder " << fmt(p.remainder.front()) << " at t=" << p.t.front() << ", "
           << fmt(p.remainder.back()) << " at t=" << p.t.back();
        return os.str();
      };
      RemainderProfile wide = asymptotic_remainder(d, h, k, 1e-3, 1e-1, 9);
      b.numeric("remainder slope on [1e-3, 1e-1] " + hk, "F+ minus its r <= 2 expansion is O(t^3)", wide.slope >= 2.9,
                describe(wide));
      RemainderProfile small = asymptotic_remainder(d, h, k, 1e-4, 1e-3, 5);
      b.info("remainder slope on [1e-4, 1e-3] " + hk, "F+ minus its r <= 2 expansion is O(t^3)", false,
             small.slope >= 2.9, describe(small));
    }
  }
  return b.done();
}

SuiteReport suite_main_theorem(const DerivedData& d, const VerifyOptions& opt) {
  Builder b("main-theorem");
  for (std::int64_t k = 2; k <= opt.k_max; ++k) {
    MainTheoremReport r = verify_main_theorem(d, k, opt.precision_bits, opt.numeric);
    b.exact(kname("tau equals the normalized exact radial limit", k),
            "tau_k = e(pref/k) (lim F+ - lim F-) / 2 normalized", r.diff_exact < 1e-25L,
            "|diff| = " + fmt(r.diff_exact));
    b.info(kname("tau equals minus the normalized exact radial limit", k), "sign-corrected exact chain", true,
           r.diff_exact_sign_corrected < 1e-25L, "|diff| = " + fmt(r.diff_exact_sign_corrected));
    if (opt.numeric) {
      b.numeric(kname("tau equals the extrapolated radial limit of the block", k), "tau_k = lim Zhat(q), q -> e(1/k)",
                r.diff_numeric < 1e-6L,
                "|diff| = " + fmt(r.diff_numeric) + ", extrapolation error " + fmt(r.numeric_error_estimate));
    }
  }
  return b.done();
}

SuiteReport suite_quantum_set(const DerivedData& d, const EpsilonMap& eps, const VerifyOptions& opt) {
  Builder b("quantum-set");
  for (std::int64_t k = 1; k <= opt.k_max; ++k) {
    std::int64_t h = first_failure(k, [&](std::int64_t h) { return cyc_is_zero(vanishing_i(d, eps, h, k)); });
    b.exact(kname("radial limits exist at every h/k", k), "weighted Gauss sum vanishes for all h coprime to k", h == 0,
            h ? "h=" + std::to_string(h) : std::to_string(units_mod(k).size()) + " fractions");
  }
  return b.done();
}

SuiteReport suite_reciprocity(const DerivedData& d, const VerifyOptions& opt) {
  Builder b("reciprocity");
  long double tol = std::ldexp(1.0L, 20 - opt.precision_bits);
  std::vector<LatticeData> lattices = random_lattices(opt.seed, opt.random_lattices);
  lattices.push_back(two_s_lattice(d));
  for (DualQuotient q : {DualQuotient::HOfDual, DualQuotient::HOfLattice}) {
    std::size_t bad = 0, nonzero = 0;
    long double worst = 0;
    std::string first_bad;
    for (std::size_t i = 0; i < lattices.size(); ++i) {
      auto [l, r] = reciprocity_sides(lattices[i], opt.precision_bits, q);
      long double diff = distance(l, r);
      worst = std::max(worst, diff);
      nonzero += l.abs().to_long_double() > tol;
      if (!(diff < tol)) {
        ++bad;
        if (first_bad.empty()) first_bad = i + 1 == lattices.size() ? "the 2S lattice" : "lattice " + std::to_string(i);
      }
    }
    std::string name = "Gauss sum reciprocity on " + std::to_string(lattices.size()) + " lattices, dual sum over " +
                       (q == DualQuotient::HOfDual ? "L'/h(L')" : "L'/h(L)");
    std::string detail = std::to_string(bad) + " disagree, " + std::to_string(nonzero) + " with nonzero sums, worst |diff| = " +
                         fmt(worst) + (first_bad.empty() ? "" : ", first failure " + first_bad);
    if (q == DualQuotient::HOfDual) {
      b.numeric(name, "lattice Gauss sum reciprocity as usually quoted, within 2^(20 - precision)", bad == 0, detail);
    } else {
      b.info(name, "lattice Gauss sum reciprocity with the dual sum over L'/h(L)", false, bad == 0, detail);
    }
  }
  for (std::int64_t k = 2; k <= std::min<std::int64_t>(opt.k_max, 5); ++k) {
    long double diff = distance(cyc_eval(gauss_sum_2S(d, k), opt.precision_bits),
                                gauss_sum_2S_expected(d, k, opt.precision_bits));
    b.numeric(kname("2S Gauss sum", k), "sum e(-mu S^-1 mu / 4k) = -2ki sqrt(MN)", diff < 1e-25L,
              "|diff| = " + fmt(diff));
  }
  return b.done();
}

}  // namespace

SuiteReport run_suite(const std::string& suite, const DerivedData& d, const EpsilonMap& eps, const VerifyOptions& opt) {
  if (opt.k_max < 1) throw std::invalid_argument("k_max must be positive");
  if (suite == "assumption") return suite_assumption(d, eps);
  if (suite == "gauss-sums") return suite_gauss_sums(d, eps, opt);
  if (suite == "series-identity") return suite_series_identity(d, opt);
  if (suite == "asymptotics") return suite_asymptotics(d, opt);
  if (suite == "main-theorem") return suite_main_theorem(d, opt);
  if (suite == "quantum-set") return suite_quantum_set(d, eps, opt);
  if (suite == "reciprocity") return suite_reciprocity(d, opt);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

double loglog_slope(const std::vector<double>& t, const std::vector<double>& r) {
  if (t.size() != r.size() || t.size() < 2) throw std::invalid_argument("need at least two points");
  double n = static_cast<double>(t.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double x = std::log(t[i]), y = std::log(r[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RemainderProfile asymptotic_remainder(const DerivedData& d, std::int64_t h, std::int64_t k, double t_lo, double t_hi,
                                      int points, int prec) {
  AsymptoticRow row = asymptotic_coeffs(d, h, k, 2);
  std::vector<std::complex<long double>> a;
  for (int r = 0; r <= 2; ++r) a.push_back(row.coefficient(r, TimeConvention::TwoPi, prec).to_complex());
  RemainderProfile p;
  for (int i = 0; i < points; ++i) {
    double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (points - 1));
    std::complex<long double> f = numeric_radial(d, SeriesKind::FPlus, h, k, t, prec).value.to_complex();
    std::complex<long double> expansion = a[0] + a[1] * static_cast<long double>(t) +
                                          a[2] * static_cast<long double>(t) * static_cast<long double>(t);
    p.t.push_back(t);
    p.remainder.push_back(static_cast<double>(std::abs(f - expansion)));
  }
  p.slope = loglog_slope(p.t, p.remainder);
  return p;
}

std::vector<LatticeData> random_lattices(std::uint64_t seed, int count) {
  // h = T G with T symmetric of even diagonal: G h = G T G is symmetric, h
  // maps the dual lattice G^-1 Z^n into itself, and <y, h y> on the dual
  // is y-integral with even diagonal, so every level works once it is a
  // multiple of |det G|.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  std::vector<LatticeData> out;
  while (static_cast<int>(out.size()) < count) {
    int n = static_cast<int>(uniform(1, 3));
    LatticeData L;
    L.rank = n;
    L.gram.assign(n, std::vector<Integer>(n));
    IntMatrix T(n, std::vector<Integer>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        L.gram[i][j] = L.gram[j][i] = Integer(static_cast<long>(i == j ? uniform(-3, 3) : uniform(-1, 1)));
        T[i][j] = T[j][i] = Integer(static_cast<long>(i == j ? 2 * uniform(-1, 1) : uniform(-1, 1)));
      }
    }
    Rational det_g = rat_det(to_rational(L.gram));
    Rational det_t = rat_det(to_rational(T));
    if (det_g == 0 || det_t == 0) continue;
    std::int64_t disc = to_int64(abs(det_g.get_num()));
    std::int64_t max_level = n == 3 ? 12 : (n == 2 ? 30 : 60);
    if (disc > max_level) continue;
    std::int64_t level = disc * uniform(1, max_level / disc);
    RatMatrix h(n, RatVector(n, Rational(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) h[i][j] += Rational(T[i][l] * L.gram[l][j]);
    L.automorphism = h;
    L.level = level;
    L.shift.assign(n, Rational(0));
    for (int i = 0; i < n; ++i) L.shift[i] = make_rational(uniform(0, level - 1), level);
    check_lattice_data(L);
    out.push_back(std::move(L));
  }
  return out;
}

LatticeData two_s_lattice(const DerivedData& d) {
  LatticeData L;
  L.rank = 2;
  L.gram = {{Integer(static_cast<long>(2 * d.S[0][0])), Integer(static_cast<long>(2 * d.S[0][1]))},
            {Integer(static_cast<long>(2 * d.S[1][0])), Integer(static_cast<long>(2 * d.S[1][1]))}};
  L.automorphism = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  L.shift = {Rational(0), Rational(0)};
  std::int64_t disc = to_int64(abs(rat_det(to_rational(L.gram)).get_num()));
  for (std::int64_t m = 1;; ++m) {
    L.level = disc * m;
    try {
      check_lattice_data(L);
      return L;
    } catch (const PreconditionError&) {
      if (m > 8) throw;
    }
  }
}

}  // namespace hblock
