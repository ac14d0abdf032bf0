#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hblock/characters.hpp"
#include "hblock/json_io.hpp"
#include "hblock/plumbing.hpp"

namespace hblock {

struct Assertion {
  std::string name;
  std::string anchor;  // the identity or lemma being checked
  bool exact = true;   // exact cyclotomic check vs. numeric tolerance
  bool passed = false;
  // Informational rows are reported but never decide the suite outcome.
  bool informational = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Assertion> assertions;
  bool all_passed() const;
  std::size_t failures() const;
};

struct VerifyOptions {
  std::int64_t k_max = 5;
  int precision_bits = kDefaultPrecision;
  bool numeric = true;
  std::uint64_t seed = 20240611;
  int random_lattices = 100;
  std::size_t strata = 10;
};

// assumption, gauss-sums, series-identity, asymptotics, main-theorem,
// quantum-set, reciprocity
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& suite, const DerivedData& d, const EpsilonMap& eps, const VerifyOptions& opt);

Json to_json(const SuiteReport& r);

// Least-squares slope of log|r_i| against log t_i.
double loglog_slope(const std::vector<double>& t, const std::vector<double>& r);

// Remainder |F+(h/k, t) - sum_{r <= 2} a(r) t^r| on log-spaced t in [t_lo, t_hi].
struct RemainderProfile {
  std::vector<double> t, remainder;
  double slope = 0;
};
RemainderProfile asymptotic_remainder(const DerivedData& d, std::int64_t h, std::int64_t k, double t_lo, double t_hi,
                                      int points, int precision_bits = kMinPrecision);

// Random admissible lattice data of rank 1..3 for the reciprocity formula.
std::vector<LatticeData> random_lattices(std::uint64_t seed, int count);
// L = Z^2 with gram 2S, h = identity, the smallest admissible level.
LatticeData two_s_lattice(const DerivedData& d);

}  // namespace hblock
