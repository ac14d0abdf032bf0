#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "hblock/bigcomplex.hpp"
#include "hblock/cyclotomic.hpp"
#include "hblock/plumbing.hpp"
#include "hblock/qseries.hpp"
#include "hblock/wrt.hpp"

namespace hblock {

using Json = nlohmann::json;

// Rationals are "p/q" strings (or "p" for integers), CycNums are
// {order, coeffs: {"j": "p/q"}} with zero coefficients omitted, complex
// numbers are {re, im, precision_bits} with decimal strings.
Json to_json(const Rational& r);
Json to_json(const CycNum& x);
Json to_json(const BigComplex& z);
Json to_json(const HGraph& g);
Json to_json(const DerivedData& d);
Json to_json(const QSeries& s);
Json to_json(const FactoredTau& f);
Json to_json(const WrtValue& v);

// All parsers throw std::invalid_argument on malformed input.
Rational rational_from_json(const Json& j);
CycNum cycnum_from_json(const Json& j);
BigComplex bigcomplex_from_json(const Json& j);
HGraph hgraph_from_json(const Json& j);
DerivedData derived_from_json(const Json& j);
QSeries qseries_from_json(const Json& j);
FactoredTau factored_tau_from_json(const Json& j);
WrtValue wrt_value_from_json(const Json& j);

bool same_derived(const DerivedData& x, const DerivedData& y);
bool same_wrt_value(const WrtValue& x, const WrtValue& y);

// A graph file: {"weights": [...]} with an optional
// "epsilon_overrides": [[s, t, value], ...] used to build negative controls.
struct GraphDocument {
  HGraph graph;
  std::vector<std::array<std::int64_t, 3>> epsilon_overrides;
};

// Throws GraphParseError like parse_graph.
GraphDocument parse_graph_document(const std::string& text);

EpsilonMap epsilon_for(const DerivedData& d, const GraphDocument& doc);

}  // namespace hblock
