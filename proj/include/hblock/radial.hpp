#pragma once

#include <stdexcept>
#include <vector>

#include "hblock/bigcomplex.hpp"
#include "hblock/plumbing.hpp"

namespace hblock {

enum class SeriesKind { FPlus, FMinus, Zhat };

class TruncationInsufficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RadialSample {
  BigComplex value;
  long double t = 0;
  // Certified bound on the discarded tail.
  long double tail_bound = 0;
  // Terms with scaled energy below this cutoff were summed.
  long double energy_cutoff = 0;
  std::int64_t terms = 0;
};

// The series evaluated at q = e(h/k) exp(-t). Zhat is summed from its
// definition (the lattice of odd central values), not from F+-. The sum is
// truncated where the certified tail drops below 2^-precision_bits.
RadialSample numeric_radial(const DerivedData& d, SeriesKind which, std::int64_t h, std::int64_t k, long double t,
                            int precision_bits = kMinPrecision);

// Richardson extrapolation to t = 0 of samples at t0, t0/2, ..., assuming an
// expansion in integer powers of t. Returns the full Neville table diagonal
// estimate and the difference of the last two diagonal entries.
struct RichardsonResult {
  BigComplex estimate;
  long double error_estimate = 0;
  std::vector<RadialSample> samples;
};
RichardsonResult richardson(std::vector<RadialSample> samples);

struct RadialOptions {
  long double t0 = 0;  // 0 selects the default ladder start
  int levels = 4;
  int precision_bits = kMinPrecision;
};

// Default first step of the ladder: 0.0035 * 4 pi^2 / (k^2 (Ma + Nc)).
long double default_t0(const DerivedData& d, std::int64_t k);

RichardsonResult numeric_radial_limit(const DerivedData& d, SeriesKind which, std::int64_t h, std::int64_t k,
                                      const RadialOptions& options = {});

}  // namespace hblock
