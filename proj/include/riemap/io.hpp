#pragma once

// Text, JSON and CSV forms of the library's values. Rationals travel as
// decimal numerator/denominator strings and doubles in shortest round-trip
// form, so every writer/reader pair is lossless.

#include <string>
#include <vector>

#include <json.hpp>

#include "riemap/coefficients.hpp"
#include "riemap/conformal_map.hpp"
#include "riemap/potential.hpp"
#include "riemap/quadrature.hpp"
#include "riemap/verification.hpp"

namespace riemap::io {

using Json = nlohmann::ordered_json;

/// One line per term, `coeff * t0^a * t{k}^e * tbar{k}^e`, after a
/// `# policy n_max deg_max t0_max` header.
std::string series_to_text(const TruncatedSeries& s);
TruncatedSeries series_from_text(const std::string& text);

Json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const Json& j);

Json potential_to_json(const PotentialSeries& f);
PotentialSeries potential_from_json(const Json& j);

Json moments_to_json(const MomentVector& m);
MomentVector moments_from_json(const Json& j);
/// k, re, im, abs rows for k = 0 (t0) .. n.
std::string moments_to_csv(const MomentVector& m);

Json curve_to_json(const BoundaryCurve& c);
BoundaryCurve curve_from_json(const Json& j);

Json map_to_json(const ExteriorMapSeries& w);
ExteriorMapSeries map_from_json(const Json& j);

struct CoefficientRow {
  NKey key;
  Rational value;
};

/// Every key of weight <= i_max with indices <= n_max and total degree
/// <= deg_max, ordered as the potential enumerates them; zeros included.
std::vector<CoefficientRow> coefficient_table(CoefficientEngine& engine, int i_max, int n_max, int deg_max);
std::string coefficient_table_csv(const std::vector<CoefficientRow>& rows);
Json coefficient_table_json(const std::vector<CoefficientRow>& rows);
std::vector<CoefficientRow> coefficient_table_from_csv(const std::string& csv);

Json verification_to_json(const std::vector<VerificationItem>& items);

/// Parses text as JSON, mapping syntax errors to parse_error.
Json parse_json(const std::string& text);

}  // namespace riemap::io
