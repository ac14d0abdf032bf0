#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hblock/json_io.hpp"
#include "hblock/parallel.hpp"
#include "hblock/qseries.hpp"
#include "hblock/radial.hpp"
#include "hblock/verify.hpp"
#include "hblock/wrt.hpp"

using namespace hblock;

namespace {

enum Exit { kOk = 0, kInputError = 1, kInvalidGraph = 2, kAssertionFailed = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised after the report for an invalid graph has been printed.
struct InvalidGraphExit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json invalid_report(const std::string& reason, const std::string& detail) {
  return Json{{"valid", false}, {"reason", reason}, {"detail", detail}};
}

struct LoadedGraph {
  GraphDocument doc;
  DerivedData d;
};

// Parse errors are input errors, except for a non-negative weight, which is
// reported like any other invalid graph.
LoadedGraph load(const std::string& path) {
  LoadedGraph g;
  try {
    g.doc = parse_graph_document(read_file(path));
  } catch (const GraphParseError& e) {
    if (e.kind() == GraphParseError::Kind::NonNegativeWeight) {
      emit(invalid_report("NonNegativeWeight", e.what()));
      throw InvalidGraphExit(e.what());
    }
    throw UsageError(e.what());
  }
  try {
    g.d = validate(g.doc.graph);
  } catch (const InvalidGraph& e) {
    Json r = invalid_report(e.kind_name(), e.what());
    r["weights"] = to_json(g.doc.graph);
    if (e.kind() == InvalidGraph::Kind::NotNegativeDefinite) r["failing_minor"] = e.failing_minor();
    if (e.kind() == InvalidGraph::Kind::DeterminantNotOne) r["det_w"] = to_string(e.det());
    emit(r);
    throw InvalidGraphExit(e.what());
  }
  return g;
}

void require_precision(int bits) {
  if (bits < kMinPrecision) throw UsageError("precision must be at least " + std::to_string(kMinPrecision) + " bits");
}

std::string sci(long double x) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << static_cast<double>(x);
  return os.str();
}

WrtMethod parse_method(const std::string& m) {
  if (m == "naive") return WrtMethod::Naive;
  if (m == "reduced") return WrtMethod::Reduced;
  return WrtMethod::Closed;
}

Json leading_term(const QSeries& s) {
  auto terms = s.terms();
  if (terms.empty()) return nullptr;
  return Json{{"exponent", to_string(terms[0].exponent)}, {"coeff", to_string(terms[0].coeff)}};
}

struct Options {
  std::string file;
  std::int64_t h = 1, k = 0, k_max = 0;
  std::string method = "all", format = "json", construction = "both", suite = "all";
  int precision = kDefaultPrecision;
  std::size_t strata = 0;
  std::string bound;
  bool numeric = false, no_numeric = false, le_minus2 = false;
  std::int64_t enum_bound = 12;
  std::uint64_t seed = VerifyOptions{}.seed;
};

int cmd_validate(const Options& o) {
  LoadedGraph g = load(o.file);
  Json j = to_json(g.d);
  j["valid"] = true;
  emit(j);
  return kOk;
}

int cmd_wrt(const Options& o) {
  if (o.k < 2) throw UsageError("k must be at least 2 (tau_1 = 1 by convention and is not computed)");
  require_precision(o.precision);
  LoadedGraph g = load(o.file);
  std::int64_t k_last = o.k_max ? o.k_max : o.k;
  if (k_last < o.k) throw UsageError("--kmax must be at least --k");
  std::vector<WrtMethod> methods;
  if (o.method == "all") methods = {WrtMethod::Naive, WrtMethod::Reduced, WrtMethod::Closed};
  else methods = {parse_method(o.method)};

  Json rows = Json::array();
  if (o.format == "csv") std::cout << (methods.size() > 1 ? "k,method,re,im\n" : "k,re,im\n");
  for (std::int64_t k = o.k; k <= k_last; ++k) {
    std::vector<WrtValue> values;
    Json timed = Json::array();
    for (WrtMethod m : methods) {
      auto t0 = std::chrono::steady_clock::now();
      values.push_back(evaluate_wrt(g.d, k, m, o.precision));
      Json v = to_json(values.back());
      v["seconds"] = seconds_since(t0);
      timed.push_back(v);
      if (o.format == "csv") {
        std::cout << k << "," << (methods.size() > 1 ? to_string(m) + "," : std::string()) << values.back().value.re().to_string()
                  << "," << values.back().value.im().to_string() << "\n";
      }
    }
    if (methods.size() == 1) {
      rows.push_back(timed[0]);
      continue;
    }
    Json deltas = Json::object();
    long double worst = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        long double dd = distance(values[i].value, values[j].value);
        worst = std::max(worst, dd);
        deltas[to_string(values[i].method) + "-" + to_string(values[j].method)] = sci(dd);
      }
    }
    rows.push_back(Json{{"k", k}, {"values", timed}, {"deltas", deltas}, {"max_pairwise_delta", sci(worst)}});
  }
  if (o.format == "json") emit(rows.size() == 1 ? rows[0] : rows);
  return kOk;
}

int cmd_zhat(const Options& o) {
  if ((o.strata == 0) == o.bound.empty()) throw UsageError("give exactly one of --strata N (N >= 1) or --bound B");
  LoadedGraph g = load(o.file);
  Rational bound;
  if (!o.bound.empty()) {
    try {
      bound = parse_rational(o.bound);
    } catch (const std::exception&) {
      throw UsageError("--bound must be a rational number");
    }
    if (bound <= 0) throw UsageError("--bound must be positive");
  } else {
    bound = zhat_bound_for_strata(g.d, o.strata);
  }
  Json out{{"weights", to_json(g.d.graph)}, {"energy_bound", to_string(bound)}};
  std::optional<QSeries> ft, direct;
  if (o.construction != "direct") ft = zhat_false_theta(g.d, bound);
  if (o.construction != "false-theta") direct = zhat_direct(g.d, bound);
  if (ft) {
    out["false_theta"] = to_json(*ft);
    out["false_theta_leading"] = leading_term(*ft);
  }
  if (direct) {
    out["direct"] = to_json(*direct);
    out["direct_leading"] = leading_term(*direct);
  }
  if (ft && direct) {
    out["match"] = *ft == *direct;
    out["match_up_to_sign"] = *ft == *direct || *ft == *direct * Rational(-1);
  }
  emit(out);
  return kOk;
}

Json limit_side(const DerivedData& d, std::int64_t h, std::int64_t k, ThetaSign sign, int prec) {
  CycNum c = radial_limit_closed(d, h, k, sign);
  return Json{{"exact", to_json(c)}, {"value", to_json(cyc_eval(c, prec))}};
}

int cmd_limit(const Options& o) {
  if (o.k < 1) throw UsageError("k must be positive");
  if (gcd64(o.h, o.k) != 1) throw UsageError("h and k must be coprime");
  require_precision(o.precision);
  LoadedGraph g = load(o.file);
  const DerivedData& d = g.d;
  CycNum zl = (radial_limit_closed(d, o.h, o.k, ThetaSign::Plus) - radial_limit_closed(d, o.h, o.k, ThetaSign::Minus)) *
              Rational(1, 2);
  zl *= root_of_unity(d.zhat_prefactor * Rational(o.h) / Rational(o.k));
  Json out{{"h", o.h},
           {"k", o.k},
           {"plus", limit_side(d, o.h, o.k, ThetaSign::Plus, o.precision)},
           {"minus", limit_side(d, o.h, o.k, ThetaSign::Minus, o.precision)},
           {"false_theta_block", Json{{"exact", to_json(zl)}, {"value", to_json(cyc_eval(zl, o.precision))}}}};
  if (o.numeric) {
    RichardsonResult r = numeric_radial_limit(d, SeriesKind::Zhat, o.h, o.k);
    out["block_numeric"] = Json{{"value", to_json(r.estimate)}, {"error_estimate", sci(r.error_estimate)}};
  }
  emit(out);
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.k_max < 1) throw UsageError("--kmax must be positive");
  require_precision(o.precision);
  std::vector<std::string> suites;
  if (o.suite == "all") suites = suite_names();
  else suites = {o.suite};
  LoadedGraph g = load(o.file);
  EpsilonMap eps = epsilon_for(g.d, g.doc);
  VerifyOptions opt;
  opt.k_max = o.k_max;
  opt.precision_bits = o.precision;
  opt.numeric = !o.no_numeric;
  opt.seed = o.seed;
  Json reports = Json::array();
  bool ok = true;
  for (const auto& s : suites) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport r = run_suite(s, g.d, eps, opt);
    Json j = to_json(r);
    j["seconds"] = seconds_since(t0);
    reports.push_back(j);
    ok = ok && r.all_passed();
    for (const auto& a : r.assertions) {
      if (!a.passed && !a.informational) std::cerr << "FAIL [" << s << "] " << a.name << ": " << a.detail << "\n";
    }
  }
  emit(suites.size() == 1 ? reports[0] : Json{{"passed", ok}, {"suites", reports}});
  return ok ? kOk : kAssertionFailed;
}

int cmd_enumerate(const Options& o) {
  if (o.enum_bound < 1) throw UsageError("--bound must be positive");
  Json out = Json::array();
  for (const auto& g : enumerate_unimodular(o.enum_bound, o.le_minus2)) out.push_back(to_json(g));
  emit(out);
  return kOk;
}

int cmd_qmf(const Options& o) {
  if (o.k < 1) throw UsageError("k must be positive");
  if (gcd64(o.h, o.k) != 1) throw UsageError("h and k must be coprime");
  require_precision(o.precision);
  LoadedGraph g = load(o.file);
  CycNum f = f_gamma(g.d, o.h, o.k);
  std::size_t summands = EpsilonMap(g.d).support().size() * static_cast<std::size_t>(o.k * o.k);
  Json out{{"h", o.h},
           {"k", o.k},
           {"exact", to_json(f)},
           {"summands", summands},
           {"nonzero_coeffs", f.nonzero_count()},
           {"value", to_json(cyc_eval(f, o.precision))}};
  if (o.h == 1 && o.k >= 2) {
    BigComplex sv = special_value(g.d, o.k, o.precision);
    BigComplex tau = tau_reduced(g.d, o.k, o.precision);
    long double diff = distance(sv, tau), diff_neg = distance(sv, -tau);
    out["special_value"] = Json{{"value", to_json(sv)},
                                {"tau", to_json(tau)},
                                {"diff", sci(diff)},
                                {"matches", diff < 1e-25L},
                                {"matches_negated", diff_neg < 1e-25L}};
  }
  emit(out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WRT invariants, homological blocks and radial limits of H-shaped plumbing graphs"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  Options o;
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: HBLOCK_THREADS or 1)")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "validate a graph and print its derived data");
  validate_cmd->add_option("file", o.file)->required();

  auto* wrt = app.add_subcommand("wrt", "WRT invariant tau_k");
  wrt->add_option("--k", o.k)->required();
  wrt->add_option("--kmax", o.k_max, "evaluate k, k+1, ..., kmax");
  wrt->add_option("--method", o.method)->check(CLI::IsMember({"naive", "reduced", "closed", "all"}));
  wrt->add_option("--precision", o.precision);
  wrt->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  wrt->add_option("file", o.file)->required();

  auto* zhat = app.add_subcommand("zhat", "q-series of the homological block");
  zhat->add_option("--strata", o.strata);
  zhat->add_option("--bound", o.bound, "absolute exponent bound, e.g. 25/2");
  zhat->add_option("--construction", o.construction)->check(CLI::IsMember({"false-theta", "direct", "both"}));
  zhat->add_option("file", o.file)->required();

  auto* limit = app.add_subcommand("limit", "radial limits at e(h/k)");
  limit->set_help_flag("--help", "print this help");
  limit->add_option("--h", o.h);
  limit->add_option("--k", o.k)->required();
  limit->add_option("--precision", o.precision);
  limit->add_flag("--numeric", o.numeric, "also extrapolate the block series numerically");
  limit->add_option("file", o.file)->required();

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::vector<std::string> suite_choices = suite_names();
  suite_choices.push_back("all");
  verify->add_option("--suite", o.suite)->check(CLI::IsMember(suite_choices));
  verify->add_option("--kmax", o.k_max)->required();
  verify->add_option("--precision", o.precision);
  verify->add_option("--seed", o.seed);
  verify->add_flag("--no-numeric", o.no_numeric, "skip numeric extrapolations");
  verify->add_option("file", o.file)->required();

  auto* enumerate = app.add_subcommand("enumerate", "unimodular H-graphs up to symmetry");
  enumerate->add_option("--bound", o.enum_bound, "largest |leaf weight|");
  enumerate->add_flag("--leaves-le-minus2", o.le_minus2);

  auto* qmf = app.add_subcommand("qmf", "f_Gamma(h/k)");
  qmf->set_help_flag("--help", "print this help");
  qmf->add_option("--h", o.h);
  qmf->add_option("--k", o.k)->required();
  qmf->add_option("--precision", o.precision);
  qmf->add_option("file", o.file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*wrt) return cmd_wrt(o);
    if (*zhat) return cmd_zhat(o);
    if (*limit) return cmd_limit(o);
    if (*verify) return cmd_verify(o);
    if (*enumerate) return cmd_enumerate(o);
    if (*qmf) return cmd_qmf(o);
  } catch (const InvalidGraphExit& e) {
    std::cerr << "invalid graph: " << e.what() << "\n";
    return kInvalidGraph;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const TruncationInsufficient& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
