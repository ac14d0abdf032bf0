#include "hblock/plumbing.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "hblock/parallel.hpp"

namespace hblock {

std::string HGraph::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < 6; ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s + ")";
}

std::string InvalidGraph::kind_name() const {
  switch (kind_) {
    case Kind::NonNegativeWeight: return "NonNegativeWeight";
    case Kind::NotNegativeDefinite: return "NotNegativeDefinite";
    case Kind::DeterminantNotOne: return "DeterminantNotOne";
  }
  return "Unknown";
}

Rational DerivedData::Q(const Rational& alpha, const Rational& beta) const {
  Rational q = Rational(M * a) * alpha * alpha + Rational(2 * M * N * b) * alpha * beta + Rational(N * c) * beta * beta;
  q.canonicalize();
  return q;
}

LinkingMatrix linking_matrix(const HGraph& g) {
  LinkingMatrix W{};
  for (int i = 0; i < 6; ++i) W[i][i] = g.w[static_cast<std::size_t>(i)];
  for (const auto& e : kEdges) {
    W[e[0]][e[1]] = 1;
    W[e[1]][e[0]] = 1;
  }
  return W;
}

Integer determinant(const std::vector<std::vector<Integer>>& in) {
  auto m = in;
  std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace {

std::vector<std::vector<Integer>> leading_block(const LinkingMatrix& W, std::size_t k, int scale) {
  std::vector<std::vector<Integer>> m(k, std::vector<Integer>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m[i][j] = Integer(static_cast<long>(scale * W[i][j]));
  return m;
}

}  // namespace

DerivedData derive(const HGraph& g) {
  DerivedData d;
  d.graph = g;
  const auto& w = g.w;
  d.M = w[2] * w[3];
  d.N = w[4] * w[5];
  d.a = -w[1] * w[4] * w[5] + w[4] + w[5];
  d.c = -w[0] * w[2] * w[3] + w[2] + w[3];
  d.b = -1;
  d.S = {{{d.M * d.a, d.M * d.N * d.b}, {d.M * d.N * d.b, d.N * d.c}}};
  d.A = {{{d.c, -d.N * d.b}, {-d.M * d.b, d.a}}};
  d.det_w = determinant(leading_block(linking_matrix(g), 6, 1));
  Rational sum_w = 0;
  for (auto v : w) sum_w += Rational(static_cast<long>(v));
  Rational sum_inv = 0;
  for (std::size_t v = 2; v < 6; ++v) {
    if (w[v] != 0) sum_inv += make_rational(1, w[v]);
  }
  d.zhat_prefactor = (Rational(-18) - sum_w - sum_inv) / 4;
  d.zhat_prefactor.canonicalize();
  d.tau_prefactor = -(Rational(18) + sum_w + sum_inv) / 4;
  d.tau_prefactor.canonicalize();
  return d;
}

DerivedData validate(const HGraph& g) {
  for (std::size_t v = 0; v < 6; ++v) {
    if (g.w[v] >= 0) {
      throw InvalidGraph(InvalidGraph::Kind::NonNegativeWeight,
                         "weight w" + std::to_string(v + 1) + " = " + std::to_string(g.w[v]) + " is not negative");
    }
  }
  DerivedData d = derive(g);
  if (d.det_w != 1) {
    throw InvalidGraph(InvalidGraph::Kind::DeterminantNotOne, "det W = " + d.det_w.get_str(), 0, d.det_w);
  }
  LinkingMatrix W = linking_matrix(g);
  for (std::size_t k = 1; k <= 6; ++k) {
    Integer minor = determinant(leading_block(W, k, -1));
    if (minor <= 0) {
      throw InvalidGraph(InvalidGraph::Kind::NotNegativeDefinite,
                         "leading minor " + std::to_string(k) + " of -W is " + minor.get_str(), static_cast<int>(k));
    }
  }
  return d;
}

std::vector<HGraph> orbit(const HGraph& g) {
  std::vector<HGraph> out;
  for (int arm = 0; arm < 2; ++arm) {
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        HGraph h = g;
        if (arm) h.w = {g.w[1], g.w[0], g.w[4], g.w[5], g.w[2], g.w[3]};
        if (s1) std::swap(h.w[2], h.w[3]);
        if (s2) std::swap(h.w[4], h.w[5]);
        out.push_back(h);
      }
    }
  }
  return out;
}

HGraph canonical_form(const HGraph& g) {
  auto o = orbit(g);
  return *std::min_element(o.begin(), o.end());
}

std::vector<HGraph> enumerate_unimodular(std::int64_t bound, bool leaves_le_minus2) {
  if (bound < 2) throw std::invalid_argument("leaf weight bound must be at least 2");
  std::int64_t top = leaves_le_minus2 ? -2 : -1;
  std::int64_t span = bound + top + 1;  // leaf values -bound..top
  std::int64_t total = span;
  std::vector<std::set<HGraph>> partial(static_cast<std::size_t>(block_count(total)));
  run_blocks(total, [&](std::int64_t blk) {
    auto [lo, hi] = block_range(total, blk);
    auto& found = partial[static_cast<std::size_t>(blk)];
    for (std::int64_t i3 = lo; i3 < hi; ++i3) {
      std::int64_t w3 = -bound + i3;
      for (std::int64_t w4 = -bound; w4 <= top; ++w4) {
        for (std::int64_t w5 = -bound; w5 <= top; ++w5) {
          for (std::int64_t w6 = -bound; w6 <= top; ++w6) {
            std::int64_t M = w3 * w4, N = w5 * w6;
            std::int64_t P = M * N + 1;
            for (std::int64_t a = 1; a * a <= P; ++a) {
              if (P % a) continue;
              std::int64_t pair[2][2] = {{a, P / a}, {P / a, a}};
              for (auto& ac : pair) {
                std::int64_t A = ac[0], C = ac[1];
                if ((A - w5 - w6) % N != 0 || (C - w3 - w4) % M != 0) continue;
                std::int64_t w2 = -(A - w5 - w6) / N;
                std::int64_t w1 = -(C - w3 - w4) / M;
                if (w1 >= 0 || w2 >= 0) continue;
                HGraph g{{w1, w2, w3, w4, w5, w6}};
                try {
                  validate(g);
                } catch (const InvalidGraph&) {
                  continue;
                }
                found.insert(canonical_form(g));
              }
            }
          }
        }
      }
    }
  });
  std::set<HGraph> all;
  for (const auto& s : partial) all.insert(s.begin(), s.end());
  return {all.begin(), all.end()};
}

HGraph parse_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphParseError(GraphParseError::Kind::MalformedJson, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
    throw GraphParseError(GraphParseError::Kind::MalformedJson, "expected an object with a \"weights\" array");
  }
  const auto& arr = doc["weights"];
  if (arr.size() != 6) {
    throw GraphParseError(GraphParseError::Kind::WrongArity, "expected 6 weights, got " + std::to_string(arr.size()));
  }
  HGraph g;
  for (std::size_t i = 0; i < 6; ++i) {
    if (!arr[i].is_number_integer()) {
      throw GraphParseError(GraphParseError::Kind::NonInteger, "weight " + std::to_string(i + 1) + " is not an integer");
    }
    g.w[i] = arr[i].get<std::int64_t>();
    if (g.w[i] >= 0) {
      throw GraphParseError(GraphParseError::Kind::NonNegativeWeight,
                            "weight " + std::to_string(i + 1) + " = " + std::to_string(g.w[i]) + " is not negative");
    }
  }
  return g;
}

RatMatrix linking_inverse(const HGraph& g) {
  LinkingMatrix W = linking_matrix(g);
  RatMatrix m(6, RatVector(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) m[i][j] = Rational(static_cast<long>(W[i][j]));
  return rat_inverse(m);
}

HGraph reference_graph() { return HGraph{{-1, -7, -2, -3, -2, -3}}; }

}  // namespace hblock
