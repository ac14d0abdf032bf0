#include "hblock/json_io.hpp"

#include <stdexcept>

namespace hblock {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::int64_t int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("field \"") + key + "\" is not an integer");
  return v.get<std::int64_t>();
}

template <std::size_t R, std::size_t C>
Json matrix_json(const std::array<std::array<std::int64_t, C>, R>& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(Json(row));
  return out;
}

template <std::size_t R, std::size_t C>
std::array<std::array<std::int64_t, C>, R> matrix_from(const Json& j) {
  std::array<std::array<std::int64_t, C>, R> m{};
  if (!j.is_array() || j.size() != R) throw std::invalid_argument("matrix has the wrong shape");
  for (std::size_t i = 0; i < R; ++i) {
    if (!j[i].is_array() || j[i].size() != C) throw std::invalid_argument("matrix has the wrong shape");
    for (std::size_t k = 0; k < C; ++k) m[i][k] = j[i][k].get<std::int64_t>();
  }
  return m;
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const CycNum& x) {
  Json coeffs = Json::object();
  std::vector<Rational> c = x.coeffs();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] != 0) coeffs[std::to_string(j)] = to_string(c[j]);
  }
  return Json{{"order", x.order()}, {"coeffs", coeffs}};
}

Json to_json(const BigComplex& z) {
  return Json{{"re", z.re().to_string()}, {"im", z.im().to_string()}, {"precision_bits", z.precision()}};
}

Json to_json(const HGraph& g) { return Json(g.w); }

Json to_json(const DerivedData& d) {
  return Json{{"weights", to_json(d.graph)},
              {"M", d.M},
              {"N", d.N},
              {"a", d.a},
              {"b", d.b},
              {"c", d.c},
              {"S", matrix_json(d.S)},
              {"A", matrix_json(d.A)},
              {"det_w", to_string(d.det_w)},
              {"sigma", d.sigma},
              {"delta", Json(d.delta)},
              {"zhat_prefactor", to_string(d.zhat_prefactor)},
              {"tau_prefactor", to_string(d.tau_prefactor)}};
}

Json to_json(const QSeries& s) {
  Json coeffs = Json::array();
  for (std::size_t j = 0; j < s.coeffs().size(); ++j) {
    if (s.coeffs()[j] != 0) coeffs.push_back(Json{{"index", j}, {"value", to_string(s.coeffs()[j])}});
  }
  return Json{{"step", to_string(s.step())},
              {"offset", to_string(s.offset())},
              {"valid_below", to_string(s.valid_below())},
              {"coeffs", coeffs}};
}

Json to_json(const FactoredTau& f) {
  return Json{{"prefactor_exponent", to_string(f.prefactor_exponent)},
              {"normalization", to_json(f.normalization)},
              {"core", to_json(f.core)},
              {"overall_sign", f.overall_sign}};
}

Json to_json(const WrtValue& v) {
  Json out{{"graph", to_json(v.graph)}, {"k", v.k}, {"method", to_string(v.method)}, {"value", to_json(v.value)}};
  if (v.exact) out["exact"] = to_json(*v.exact);
  return out;
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  if (!j.is_string()) throw std::invalid_argument("rational must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

CycNum cycnum_from_json(const Json& j) {
  std::int64_t order = int_field(j, "order");
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_object()) throw std::invalid_argument("coeffs must be an object");
  std::vector<Rational> c(static_cast<std::size_t>(order), Rational(0));
  for (const auto& [key, value] : coeffs.items()) {
    std::size_t idx = 0;
    long long parsed = std::stoll(key, &idx);
    if (idx != key.size() || parsed < 0 || parsed >= order) throw std::invalid_argument("bad coefficient index " + key);
    c[static_cast<std::size_t>(parsed)] = rational_from_json(value);
  }
  return CycNum::from_coeffs(order, c);
}

BigComplex bigcomplex_from_json(const Json& j) {
  int prec = static_cast<int>(int_field(j, "precision_bits"));
  if (prec < 2) throw std::invalid_argument("precision_bits too small");
  return BigComplex(BigReal::parse(field(j, "re").get<std::string>(), prec),
                    BigReal::parse(field(j, "im").get<std::string>(), prec));
}

HGraph hgraph_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 6) throw std::invalid_argument("graph must be an array of 6 weights");
  HGraph g;
  for (std::size_t i = 0; i < 6; ++i) g.w[i] = j[i].get<std::int64_t>();
  return g;
}

DerivedData derived_from_json(const Json& j) {
  DerivedData d;
  d.graph = hgraph_from_json(field(j, "weights"));
  d.M = int_field(j, "M");
  d.N = int_field(j, "N");
  d.a = int_field(j, "a");
  d.b = int_field(j, "b");
  d.c = int_field(j, "c");
  d.S = matrix_from<2, 2>(field(j, "S"));
  d.A = matrix_from<2, 2>(field(j, "A"));
  d.det_w = Integer(field(j, "det_w").get<std::string>());
  d.sigma = static_cast<int>(int_field(j, "sigma"));
  d.delta = field(j, "delta").get<std::array<int, 6>>();
  d.zhat_prefactor = rational_from_json(field(j, "zhat_prefactor"));
  d.tau_prefactor = rational_from_json(field(j, "tau_prefactor"));
  return d;
}

QSeries qseries_from_json(const Json& j) {
  QSeries s(rational_from_json(field(j, "step")), rational_from_json(field(j, "offset")),
            rational_from_json(field(j, "valid_below")));
  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array()) throw std::invalid_argument("coeffs must be an array");
  for (const auto& c : coeffs) {
    std::int64_t idx = int_field(c, "index");
    if (idx < 0) throw std::invalid_argument("negative coefficient index");
    s.add_index(static_cast<std::size_t>(idx), rational_from_json(field(c, "value")));
  }
  return s;
}

FactoredTau factored_tau_from_json(const Json& j) {
  FactoredTau f;
  f.prefactor_exponent = rational_from_json(field(j, "prefactor_exponent"));
  f.normalization = cycnum_from_json(field(j, "normalization"));
  f.core = cycnum_from_json(field(j, "core"));
  f.overall_sign = static_cast<int>(int_field(j, "overall_sign"));
  return f;
}

WrtValue wrt_value_from_json(const Json& j) {
  WrtValue v;
  v.graph = hgraph_from_json(field(j, "graph"));
  v.k = int_field(j, "k");
  std::string m = field(j, "method").get<std::string>();
  if (m == "naive") v.method = WrtMethod::Naive;
  else if (m == "reduced") v.method = WrtMethod::Reduced;
  else if (m == "closed") v.method = WrtMethod::Closed;
  else throw std::invalid_argument("unknown method " + m);
  v.value = bigcomplex_from_json(field(j, "value"));
  if (j.contains("exact")) v.exact = factored_tau_from_json(j.at("exact"));
  return v;
}

bool same_derived(const DerivedData& x, const DerivedData& y) {
  return x.graph == y.graph && x.M == y.M && x.N == y.N && x.a == y.a && x.b == y.b && x.c == y.c && x.S == y.S &&
         x.A == y.A && x.det_w == y.det_w && x.sigma == y.sigma && x.delta == y.delta &&
         x.zhat_prefactor == y.zhat_prefactor && x.tau_prefactor == y.tau_prefactor;
}

bool same_wrt_value(const WrtValue& x, const WrtValue& y) {
  if (!(x.graph == y.graph && x.k == y.k && x.method == y.method && x.value == y.value)) return false;
  if (x.exact.has_value() != y.exact.has_value()) return false;
  if (!x.exact) return true;
  const FactoredTau& p = *x.exact;
  const FactoredTau& q = *y.exact;
  return p.prefactor_exponent == q.prefactor_exponent && p.normalization == q.normalization && p.core == q.core &&
         p.overall_sign == q.overall_sign;
}

GraphDocument parse_graph_document(const std::string& text) {
  GraphDocument doc;
  doc.graph = parse_graph(text);
  Json j = Json::parse(text);
  if (!j.contains("epsilon_overrides")) return doc;
  const Json& ov = j.at("epsilon_overrides");
  if (!ov.is_array()) throw GraphParseError(GraphParseError::Kind::MalformedJson, "epsilon_overrides must be an array");
  for (const auto& e : ov) {
    if (!e.is_array() || e.size() != 3) {
      throw GraphParseError(GraphParseError::Kind::WrongArity, "each epsilon override is [s, t, value]");
    }
    std::array<std::int64_t, 3> entry{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!e[i].is_number_integer()) throw GraphParseError(GraphParseError::Kind::NonInteger, "epsilon override entry is not an integer");
      entry[i] = e[i].get<std::int64_t>();
    }
    doc.epsilon_overrides.push_back(entry);
  }
  return doc;
}

EpsilonMap epsilon_for(const DerivedData& d, const GraphDocument& doc) {
  EpsilonMap eps(d);
  for (const auto& [s, t, v] : doc.epsilon_overrides) eps.set(s, t, static_cast<int>(v));
  return eps;
}

}  // namespace hblock
