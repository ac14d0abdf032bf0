#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hblock/bigcomplex.hpp"
#include "hblock/cyclotomic.hpp"
#include "hblock/rational.hpp"

namespace hblock {

using IntMatrix = std::vector<std::vector<Integer>>;
using RatMatrix = std::vector<std::vector<Rational>>;
using RatVector = std::vector<Rational>;

// G(a, b, c) = sum_{n mod c} e((a n^2 + b n) / c), exact.
CycNum quadratic_gauss_sum(std::int64_t a, std::int64_t b, std::int64_t c);

// Lattice L = Z^rank with bilinear form <x, y> = x^T gram y, a self-adjoint
// map h (matrix `automorphism` acting on coordinates), a shift z and a
// level k.
struct LatticeData {
  int rank = 0;
  IntMatrix gram;
  RatMatrix automorphism;
  RatVector shift;
  std::int64_t level = 1;
};

class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string which, const std::string& detail)
      : std::invalid_argument(which + ": " + detail), which_(std::move(which)) {}
  const std::string& which() const { return which_; }

 private:
  std::string which_;
};

// Throws PreconditionError naming the first violated condition:
// "shape", "gram_degenerate", "not_self_adjoint", "not_invertible",
// "dual_not_preserved", "not_integral_on_dual", "level_not_multiple",
// "shift_not_in_lattice".
void check_lattice_data(const LatticeData& data);

Rational rat_det(RatMatrix m);
RatMatrix rat_inverse(const RatMatrix& m);
RatMatrix to_rational(const IntMatrix& m);
// Signature (positive minus negative inertia) of a symmetric rational
// matrix by exact symmetric elimination.
int signature(RatMatrix m);

// Index set of the dual-side sum: y in L'/h(L') as usually quoted, or
// y in L'/h(L). The summand is h(L')-periodic, so the two differ by the
// factor |L'/L| and only the second makes the two sides equal.
enum class DualQuotient { HOfDual, HOfLattice };

// Both sides of the lattice Gauss-sum reciprocity formula:
//   sqrt|L'/L| sum_{x in L/kL} e(<x,h x>/2k + <x,z>)
//   e(sigma/8) k^{n/2} / sqrt|det h| sum_{y in L'/Q} e(-(k/2)<y+z, h^{-1}(y+z)>)
// with Q = h(L') or h(L).
std::pair<BigComplex, BigComplex> reciprocity_sides(const LatticeData& data, int precision_bits,
                                                    DualQuotient quotient = DualQuotient::HOfLattice);

}  // namespace hblock
