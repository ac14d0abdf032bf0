// Acceptance checks, one per invocation: `acceptance <id>` prints
// "criterion <id>: PASS|FAIL|SKIP: <detail>" and exits 0, 1 or 77.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "hblock/parallel.hpp"
#include "hblock/verify.hpp"
#include "hblock/wrt.hpp"

using namespace hblock;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Result {
  Outcome outcome;
  std::string detail;
};

double seconds(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(long double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3Le", x);
  return buf;
}

std::string fixed(double x, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::vector<DerivedData> graph_list() {
  std::vector<DerivedData> out;
  for (const HGraph& g : enumerate_unimodular(12, true)) out.push_back(validate(g));
  return out;
}

// Names of failing non-informational assertions, comma separated.
std::string failing(const SuiteReport& r) {
  std::string s;
  for (const auto& a : r.assertions) {
    if (a.informational || a.passed) continue;
    if (!s.empty()) s += ", ";
    s += a.name;
  }
  return s;
}

Result enumeration() {
  std::vector<HGraph> at12, at20;
  double t = seconds([&] {
    at12 = enumerate_unimodular(12, true);
    at20 = enumerate_unimodular(20, true);
  });
  bool ok = at12.size() == 39 && at20 == at12 && t < 60;
  return {ok ? Outcome::Pass : Outcome::Fail, std::to_string(at12.size()) + " classes at bound 12, " +
                                                  std::to_string(at20.size()) + " at bound 20 (expected 39 and stable), " +
                                                  fixed(t) + " s"};
}

Result main_theorem() {
  std::vector<std::pair<DerivedData, std::int64_t>> cases;
  DerivedData ref = validate(reference_graph());
  for (std::int64_t k : {2, 3, 4, 5, 7}) cases.push_back({ref, k});
  int extra = 0;
  for (const DerivedData& d : graph_list()) {
    if (d.graph == canonical_form(ref.graph) || extra == 3) continue;
    ++extra;
    for (std::int64_t k : {2, 3}) cases.push_back({d, k});
  }
  long double worst_exact = 0, worst_corrected = 0, worst_numeric = 0;
  int exact_fail = 0, numeric_fail = 0;
  for (const auto& [d, k] : cases) {
    MainTheoremReport r = verify_main_theorem(d, k, 256, true);
    worst_exact = std::max(worst_exact, r.diff_exact);
    worst_corrected = std::max(worst_corrected, r.diff_exact_sign_corrected);
    worst_numeric = std::max(worst_numeric, r.diff_numeric);
    exact_fail += !(r.diff_exact < 1e-25L);
    numeric_fail += !(r.diff_numeric < 1e-6L);
  }
  bool ok = exact_fail == 0 && numeric_fail == 0;
  return {ok ? Outcome::Pass : Outcome::Fail,
          std::to_string(cases.size()) + " cases; exact path fails " + std::to_string(exact_fail) + " (worst " +
              sci(worst_exact) + ", with the overall sign flipped worst " + sci(worst_corrected) + "); numeric path fails " +
              std::to_string(numeric_fail) + " (worst " + sci(worst_numeric) + ")"};
}

Result gauss_sums() {
  VerifyOptions opt;
  opt.k_max = 5;
  int graphs = 0, bad = 0;
  std::string first;
  auto run = [&](const DerivedData& d) {
    SuiteReport r = run_suite("gauss-sums", d, EpsilonMap(d), opt);
    ++graphs;
    if (!r.all_passed()) {
      ++bad;
      if (first.empty()) first = d.graph.to_string() + ": " + failing(r);
    }
  };
  double t = seconds([&] {
    for (const DerivedData& d : graph_list()) run(d);
    opt.k_max = 12;
    run(validate(reference_graph()));
  });
  return {bad == 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(graphs) + " suite runs (all graphs at k <= 5, reference at k <= 12), " + std::to_string(bad) +
              " failing" + (first.empty() ? "" : "; first " + first) + ", " + fixed(t) + " s"};
}

Result series_identity() {
  VerifyOptions opt;
  int bad = 0, graphs = 0;
  std::string first;
  double t = seconds([&] {
    for (const DerivedData& d : graph_list()) {
      ++graphs;
      SuiteReport r = run_suite("series-identity", d, EpsilonMap(d), opt);
      if (!r.all_passed()) {
        ++bad;
        if (first.empty()) first = d.graph.to_string() + ": " + failing(r);
      }
    }
  });
  DerivedData ref = validate(reference_graph());
  auto lead = zhat_direct(ref, Rational(1)).terms();
  std::string lead_s = lead.empty() ? "none" : to_string(lead.front().coeff) + " q^" + to_string(lead.front().exponent);
  return {bad == 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(bad) + " of " + std::to_string(graphs) + " graphs fail" + (first.empty() ? "" : " (" + first + ")") +
              "; leading term of the directly defined block on the reference graph is " + lead_s + ", " + fixed(t) + " s"};
}

Result suite_on_reference(const std::string& name) {
  DerivedData d = validate(reference_graph());
  VerifyOptions opt;
  SuiteReport r;
  double t = seconds([&] { r = run_suite(name, d, EpsilonMap(d), opt); });
  std::string detail = std::to_string(r.failures()) + " failing assertions";
  for (const auto& a : r.assertions) {
    if (a.informational || !a.passed) detail += "; " + a.name + (a.passed ? " ok" : " FAILED") + (a.detail.empty() ? "" : " [" + a.detail + "]");
  }
  detail += ", " + fixed(t) + " s";
  return {r.all_passed() ? Outcome::Pass : Outcome::Fail, detail};
}

Result quantum_set() {
  QuantumSetReport r = quantum_set_check(validate(reference_graph()), 8);
  std::string detail = std::to_string(r.checked) + " fractions h/k with k <= 8";
  if (!r.passed) detail += ", first failure " + std::to_string(r.witness_h) + "/" + std::to_string(r.witness_k);
  return {r.passed ? Outcome::Pass : Outcome::Fail, detail};
}

Result special_value_check() {
  DerivedData d = validate(reference_graph());
  long double worst = 0, worst_negated = 0;
  for (std::int64_t k = 2; k <= 5; ++k) {
    BigComplex naive = tau_naive(d, k, 256);
    BigComplex sv = special_value(d, k, 256);
    worst = std::max(worst, distance(sv, naive));
    worst_negated = std::max(worst_negated, distance(sv, -naive));
  }
  return {worst < 1e-25L ? Outcome::Pass : Outcome::Fail,
          "worst |special value - tau| = " + sci(worst) + "; against -tau " + sci(worst_negated)};
}

Result perf_k200() {
  DerivedData d = validate(reference_graph());
  set_thread_count(1);
  double tr = seconds([&] { tau_reduced(d, 200, kDefaultPrecision); });
  double tc = seconds([&] { tau_closed(d, 200, kDefaultPrecision); });
  bool ok = tr < 10 && tc < 10;
  return {ok ? Outcome::Pass : Outcome::Fail, "k = 200 single-threaded: reduced " + fixed(tr, 3) + " s, closed " + fixed(tc, 3) + " s"};
}

double best_of(int n, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < n; ++i) best = std::min(best, seconds(f));
  return best;
}

Result perf_speedup() {
  DerivedData d = validate(reference_graph());
  set_thread_count(1);
  double tn = best_of(5, [&] { tau_naive(d, 4, kDefaultPrecision); });
  double tr = best_of(5, [&] { tau_reduced(d, 4, kDefaultPrecision); });
  double tc = best_of(5, [&] { tau_closed(d, 4, kDefaultPrecision); });
  double sr = tn / tr, sc = tn / tc;
  bool ok = sr >= 100 && sc >= 100;
  return {ok ? Outcome::Pass : Outcome::Fail, "k = 4, best of 5: naive " + fixed(tn * 1e3, 3) + " ms, reduced " +
                                                  fixed(tr * 1e3, 3) + " ms (" + fixed(sr, 1) + "x), closed " +
                                                  fixed(tc * 1e3, 3) + " ms (" + fixed(sc, 1) + "x)"};
}

Result perf_parallel() {
  DerivedData d = validate(reference_graph());
  BigComplex n1, n4;
  set_thread_count(1);
  double t1 = best_of(2, [&] { n1 = tau_naive(d, 7, kDefaultPrecision); });
  set_thread_count(4);
  double t4 = best_of(2, [&] { n4 = tau_naive(d, 7, kDefaultPrecision); });
  set_thread_count(1);
  if (!(n1 == n4)) return {Outcome::Fail, "naive k = 7 differs between 1 and 4 threads"};
  unsigned cores = std::thread::hardware_concurrency();
  std::string timing = "naive k = 7: 1 thread " + fixed(t1, 3) + " s, 4 threads " + fixed(t4, 3) + " s (" +
                       fixed(t1 / t4, 2) + "x), output bit-identical";
  if (cores < 4) return {Outcome::Skip, timing + "; only " + std::to_string(cores) + " hardware threads available"};
  return {t1 / t4 >= 3 ? Outcome::Pass : Outcome::Fail, timing};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Result()>> criteria{
      {"1", enumeration},
      {"2", main_theorem},
      {"3", gauss_sums},
      {"4", series_identity},
      {"5", [] { return suite_on_reference("asymptotics"); }},
      {"6", [] { return suite_on_reference("reciprocity"); }},
      {"7", quantum_set},
      {"8", special_value_check},
      {"9a", perf_k200},
      {"9b", perf_speedup},
      {"9c", perf_parallel},
  };
  if (argc != 2 || !criteria.count(argv[1])) {
    std::cerr << "usage: acceptance <1|2|3|4|5|6|7|8|9a|9b|9c>\n";
    return 2;
  }
  Result r;
  try {
    r = criteria.at(argv[1])();
  } catch (const std::exception& e) {
    r = {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  const char* word = r.outcome == Outcome::Pass ? "PASS" : (r.outcome == Outcome::Fail ? "FAIL" : "SKIP");
  std::cout << "criterion " << argv[1] << ": " << word << ": " << r.detail << std::endl;
  return r.outcome == Outcome::Pass ? 0 : (r.outcome == Outcome::Fail ? 1 : 77);
}
