#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hblock/gauss.hpp"
#include "hblock/rational.hpp"

namespace hblock {

// Weights w1..w6 of the H-graph: vertices 1 and 2 are joined and carry the
// leaves 3, 4 and 5, 6 respectively. Stored zero-based: w[0] is w1.
struct HGraph {
  std::array<std::int64_t, 6> w{};

  auto operator<=>(const HGraph&) const = default;
  std::string to_string() const;
};

using LinkingMatrix = std::array<std::array<std::int64_t, 6>, 6>;

// Zero-based edges {1,2},{1,3},{1,4},{2,5},{2,6}.
inline constexpr std::array<std::array<int, 2>, 5> kEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}}};
inline constexpr std::array<int, 6> kDegree{3, 3, 1, 1, 1, 1};

struct DerivedData {
  HGraph graph;
  std::int64_t M = 0, N = 0, a = 0, b = -1, c = 0;
  std::array<std::array<std::int64_t, 2>, 2> S{};
  // A = ((c, -Nb), (-Mb, a)) with S * A = diag(M, N).
  std::array<std::array<std::int64_t, 2>, 2> A{};
  Integer det_w;
  int sigma = -6;
  std::array<int, 6> delta{1, 1, 1, 1, 1, 1};
  Rational zhat_prefactor;
  Rational tau_prefactor;

  // Q(alpha, beta) = M a alpha^2 + 2 M N b alpha beta + N c beta^2.
  Rational Q(const Rational& alpha, const Rational& beta) const;
  // 4MN * Q(s/2M, t/2N) = N a s^2 + 2 M N b s t + M c t^2, an integer.
  std::int64_t Q_scaled(std::int64_t s, std::int64_t t) const { return N * a * s * s + 2 * M * N * b * s * t + M * c * t * t; }
};

class InvalidGraph : public std::runtime_error {
 public:
  enum class Kind { NonNegativeWeight, NotNegativeDefinite, DeterminantNotOne };
  InvalidGraph(Kind kind, const std::string& detail, int failing_minor = 0, Integer det = 0)
      : std::runtime_error(detail), kind_(kind), failing_minor_(failing_minor), det_(std::move(det)) {}
  Kind kind() const { return kind_; }
  std::string kind_name() const;
  // 1-based size of the first non-positive leading minor of -W.
  int failing_minor() const { return failing_minor_; }
  const Integer& det() const { return det_; }

 private:
  Kind kind_;
  int failing_minor_;
  Integer det_;
};

class GraphParseError : public std::runtime_error {
 public:
  enum class Kind { MalformedJson, WrongArity, NonInteger, NonNegativeWeight };
  GraphParseError(Kind kind, const std::string& detail) : std::runtime_error(detail), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

LinkingMatrix linking_matrix(const HGraph& g);

// Fraction-free (Bareiss) determinant.
Integer determinant(const std::vector<std::vector<Integer>>& m);

// Derived data without any validity check; used for negative controls and
// for graphs that are only partially valid.
DerivedData derive(const HGraph& g);

// Accepts iff all weights are negative, -W has positive leading minors and
// det W = 1. Throws InvalidGraph otherwise.
DerivedData validate(const HGraph& g);

// The 8 images of g under w3<->w4, w5<->w6 and the arm swap.
std::vector<HGraph> orbit(const HGraph& g);
HGraph canonical_form(const HGraph& g);

// One canonical representative per class of valid H-graphs whose leaf
// weights satisfy |w_v| <= leaf_weight_max_abs (and w_v <= -2 if asked),
// sorted ascending.
std::vector<HGraph> enumerate_unimodular(std::int64_t leaf_weight_max_abs, bool require_leaves_le_minus2);

// {"weights":[w1,...,w6]}
HGraph parse_graph(const std::string& text);

// W^{-1} as an exact rational matrix.
RatMatrix linking_inverse(const HGraph& g);

// Reference graph (-1,-7,-2,-3,-2,-3).
HGraph reference_graph();

}  // namespace hblock
