#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hblock/json_io.hpp"
#include "hblock/plumbing.hpp"

using namespace hblock;

namespace {

// -W positive definite by Cholesky, and det W, in long double.
bool oracle_valid(const std::array<std::int64_t, 6>& w) {
  long double m[6][6] = {};
  for (int i = 0; i < 6; ++i) m[i][i] = -static_cast<long double>(w[i]);
  for (const auto& e : kEdges) m[e[0]][e[1]] = m[e[1]][e[0]] = -1;
  long double det = 1;
  for (int i = 0; i < 6; ++i) {
    if (m[i][i] <= 0.5L / 1e6L) return false;
    det *= m[i][i];
    for (int r = i + 1; r < 6; ++r) {
      long double f = m[r][i] / m[i][i];
      for (int c = i; c < 6; ++c) m[r][c] -= f * m[i][c];
    }
  }
  return std::fabs(det - 1) < 1e-6L;
}

std::array<std::int64_t, 6> oracle_canonical(std::array<std::int64_t, 6> w) {
  std::array<std::int64_t, 6> best = w;
  for (int swap_arms = 0; swap_arms < 2; ++swap_arms) {
    std::array<std::int64_t, 6> v = w;
    if (swap_arms) v = {w[1], w[0], w[4], w[5], w[2], w[3]};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        std::array<std::int64_t, 6> u = v;
        if (a) std::swap(u[2], u[3]);
        if (b) std::swap(u[4], u[5]);
        best = std::min(best, u);
      }
  }
  return best;
}

}  // namespace

TEST(Plumbing, ReferenceGraphDerivedData) {
  DerivedData d = validate(reference_graph());
  EXPECT_EQ(d.M, 6);
  EXPECT_EQ(d.N, 6);
  EXPECT_EQ(d.a, 37);
  EXPECT_EQ(d.b, -1);
  EXPECT_EQ(d.c, 1);
  EXPECT_EQ(d.S, (std::array<std::array<std::int64_t, 2>, 2>{{{222, -36}, {-36, 6}}}));
  EXPECT_EQ(d.A, (std::array<std::array<std::int64_t, 2>, 2>{{{1, 6}, {6, 37}}}));
  EXPECT_EQ(d.det_w, 1);
  EXPECT_EQ(d.sigma, -6);
  EXPECT_EQ(d.zhat_prefactor, Rational(5, 12));
  EXPECT_EQ(d.tau_prefactor, Rational(5, 12));
}

TEST(Plumbing, RejectsInvalidGraphs) {
  try {
    validate(HGraph{{-1, -1, -1, -1, -1, -1}});
    FAIL();
  } catch (const InvalidGraph& e) {
    EXPECT_EQ(e.kind(), InvalidGraph::Kind::DeterminantNotOne);
    EXPECT_EQ(e.det(), 0);
  }
  try {
    validate(HGraph{{-2, -2, -2, -2, -2, -2}});
    FAIL();
  } catch (const InvalidGraph& e) {
    EXPECT_EQ(e.kind(), InvalidGraph::Kind::DeterminantNotOne);
  }
  try {
    validate(HGraph{{-1, -7, -2, 3, -2, -3}});
    FAIL();
  } catch (const InvalidGraph& e) {
    EXPECT_EQ(e.kind(), InvalidGraph::Kind::NonNegativeWeight);
  }
}

TEST(Plumbing, DeterminantIdentityOnRandomWeights) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> wd(-40, -1);
  for (int i = 0; i < 500; ++i) {
    HGraph g;
    for (auto& w : g.w) w = wd(rng);
    DerivedData d = derive(g);
    EXPECT_EQ(d.det_w, Integer(static_cast<long>(d.a * d.c - d.M * d.N)));
    std::vector<std::vector<Integer>> W(6, std::vector<Integer>(6));
    LinkingMatrix L = linking_matrix(g);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) W[r][c] = Integer(static_cast<long>(L[r][c]));
    EXPECT_EQ(determinant(W), d.det_w);
  }
}

TEST(Plumbing, QuadraticFormProperties) {
  for (const HGraph& g : enumerate_unimodular(12, true)) {
    DerivedData d = validate(g);
    // S positive definite with det S = MN; S A = diag(M, N); det A = 1.
    EXPECT_GT(d.S[0][0], 0);
    EXPECT_EQ(d.S[0][0] * d.S[1][1] - d.S[0][1] * d.S[1][0], d.M * d.N);
    EXPECT_EQ(d.S[0][0] * d.A[0][0] + d.S[0][1] * d.A[1][0], d.M);
    EXPECT_EQ(d.S[0][0] * d.A[0][1] + d.S[0][1] * d.A[1][1], 0);
    EXPECT_EQ(d.S[1][0] * d.A[0][0] + d.S[1][1] * d.A[1][0], 0);
    EXPECT_EQ(d.S[1][0] * d.A[0][1] + d.S[1][1] * d.A[1][1], d.N);
    EXPECT_EQ(d.A[0][0] * d.A[1][1] - d.A[0][1] * d.A[1][0], 1);
    // The central block of -W^{-1} is ((Ma, -MNb), (-MNb, Nc)).
    RatMatrix inv = linking_inverse(g);
    EXPECT_EQ(-inv[0][0], Rational(d.M * d.a));
    EXPECT_EQ(-inv[0][1], Rational(-d.M * d.N * d.b));
    EXPECT_EQ(-inv[1][1], Rational(d.N * d.c));
    // Q(s/2M, t/2N) * 4MN is the scaled integer form.
    for (std::int64_t s = -3; s <= 3; ++s)
      for (std::int64_t t = -3; t <= 3; ++t)
        EXPECT_EQ(d.Q(make_rational(s, 2 * d.M), make_rational(t, 2 * d.N)) * (4 * d.M * d.N), Rational(d.Q_scaled(s, t)));
    // S^{-1} has denominators dividing MN.
    Rational det = d.M * d.N;
    for (Rational e : {Rational(Rational(d.S[1][1]) / det), Rational(Rational(d.S[0][1]) / det), Rational(Rational(d.S[0][0]) / det)})
      EXPECT_EQ((d.M * d.N) % e.get_den().get_si(), 0);
  }
}

TEST(Plumbing, OrbitAndCanonicalForm) {
  HGraph g = reference_graph();
  auto orb = orbit(g);
  EXPECT_EQ(orb.size(), 8u);
  for (const HGraph& h : orb) {
    EXPECT_EQ(canonical_form(h), canonical_form(g));
    EXPECT_EQ(validate(h).det_w, 1);
    EXPECT_EQ(canonical_form(h).w, oracle_canonical(h.w));
  }
}

TEST(Plumbing, EnumerationMatchesBruteForce) {
  // Leaves in [-4, -2]: M, N <= 16, so |w1|, |w2| <= (MN + 1 + 8) / 4 < 80.
  std::set<std::array<std::int64_t, 6>> expect;
  std::array<std::int64_t, 6> w{};
  for (w[2] = -4; w[2] <= -2; ++w[2])
    for (w[3] = -4; w[3] <= -2; ++w[3])
      for (w[4] = -4; w[4] <= -2; ++w[4])
        for (w[5] = -4; w[5] <= -2; ++w[5])
          for (w[0] = -80; w[0] <= -1; ++w[0])
            for (w[1] = -80; w[1] <= -1; ++w[1])
              if (oracle_valid(w)) expect.insert(oracle_canonical(w));
  std::set<std::array<std::int64_t, 6>> got;
  for (const HGraph& g : enumerate_unimodular(4, true)) got.insert(g.w);
  EXPECT_EQ(got, expect);
}

TEST(Plumbing, EnumerationIsClosedAndCanonical) {
  auto list = enumerate_unimodular(12, true);
  EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
  EXPECT_TRUE(std::adjacent_find(list.begin(), list.end()) == list.end());
  EXPECT_NE(std::find(list.begin(), list.end(), canonical_form(reference_graph())), list.end());
  for (const HGraph& g : list) {
    EXPECT_NO_THROW(validate(g));
    EXPECT_EQ(canonical_form(g), g);
    for (std::int64_t w : {g.w[2], g.w[3], g.w[4], g.w[5]}) EXPECT_LE(w, -2);
  }
  // Every class found at bound 12 is still found at bound 20.
  auto wider = enumerate_unimodular(20, true);
  for (const HGraph& g : list) EXPECT_NE(std::find(wider.begin(), wider.end(), g), wider.end());
}

TEST(Plumbing, ParseErrors) {
  auto kind_of = [](const std::string& text) {
    try {
      parse_graph(text);
    } catch (const GraphParseError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  EXPECT_EQ(parse_graph(R"({"weights": [-1, -7, -2, -3, -2, -3]})"), reference_graph());
  EXPECT_EQ(kind_of(R"({"weights": [-1, -7, -2,)"), static_cast<int>(GraphParseError::Kind::MalformedJson));
  EXPECT_EQ(kind_of(R"({"weights": [-1, -7, -2, -3, -2]})"), static_cast<int>(GraphParseError::Kind::WrongArity));
  EXPECT_EQ(kind_of(R"({"weights": [-1, -7, -2.5, -3, -2, -3]})"), static_cast<int>(GraphParseError::Kind::NonInteger));
  EXPECT_EQ(kind_of(R"({"weights": [-1, -7, 2, -3, -2, -3]})"), static_cast<int>(GraphParseError::Kind::NonNegativeWeight));

  GraphDocument doc = parse_graph_document(R"({"weights": [-1, -7, -2, -3, -2, -3], "epsilon_overrides": [[1, 1, 0]]})");
  ASSERT_EQ(doc.epsilon_overrides.size(), 1u);
  EXPECT_EQ(doc.epsilon_overrides[0], (std::array<std::int64_t, 3>{1, 1, 0}));
}
