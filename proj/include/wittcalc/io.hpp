#pragma once

// Config ingestion and report serialization (JSON, text, markdown).

#include "wittcalc/dichotomy.hpp"
#include "wittcalc/divisor.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wittcalc {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "witt-recipe/1";

struct SchemeSpec {
  std::string name;
  std::vector<std::string> generators;
  bool regular = true;
  bool gorenstein = true;
};

struct HypothesisSpec {
  SchemeSpec Y;
  IntMatrix alpha_pullback;        // rank X x rank Y
  IntMatrix alpha_tilde_pullback;  // (rank X + 1) x rank Y
  std::int64_t fiber_dim = 0;
};

struct DiagramConfig {
  std::optional<std::string> name;
  SchemeSpec X;
  SchemeSpec Z;
  std::int64_t c = 2;
  IntMatrix iota_pullback;  // rank Z x rank X
  std::vector<Integer> omega_iota;
  std::optional<HypothesisSpec> hypothesis;
};

struct LoadedDiagram {
  DiagramConfig config;
  BlowupDiagram diagram;
  std::optional<HypothesisData> hypothesis;
};

/// Throws a parse error naming the offending field (including unknown ones).
DiagramConfig parse_config(const json& j);
DiagramConfig parse_config_text(const std::string& text);
json config_to_json(const DiagramConfig& c);

/// Builds the diagram (and hypothesis when present) described by a config.
LoadedDiagram build(const DiagramConfig& c);

/// Config of a Grassmannian instance, for round-tripping through build().
DiagramConfig grassmannian_config(std::int64_t d, std::int64_t n, const Integer& lambda_row,
                                  const Integer& omega_iota_coeff);

json integer_to_json(const Integer& v);
Integer integer_from_json(const json& j, const std::string& where);
json pic_to_json(const PicElement& v);

json witt_ref_to_json(const WittRef& r, bool fold_degrees = false);
/// Full recipe report, with the top-level "schema" field.
json recipe_to_json(const Recipe& r, bool fold_degrees = false);
std::string recipe_to_text(const Recipe& r, bool fold_degrees = false);
std::string recipe_to_markdown(const Recipe& r, bool fold_degrees = false);

json complex_to_json(const ChainComplex& c);
json pair_to_json(const SymmetricPair& p);
json factorization_to_json(const FactorizationReport& r);
json restriction_to_json(const RestrictionReport& r);

/// "diag(1,3)", "hyperbolic(2)", "matrix([[0,1],[1,0]])": a degree-0 form.
SymmetricPair parse_form(const PolyRing& ring, const std::string& text);

/// "2..4" or "3" -> inclusive range.
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text);

}  // namespace wittcalc
