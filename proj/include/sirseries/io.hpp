#pragma once

#include <string>

#include <json.hpp>

#include "sirseries/format.hpp"
#include "sirseries/series.hpp"

namespace sirseries {

/// Serializes a series as a JSON array of coefficients, lowest degree first,
/// with 17 significant digits so parsing restores the exact bits.
inline std::string to_json(const PowerSeriesd& a) {
  std::string out = "[";
  for (Index k = 0; k < a.size(); ++k) {
    if (k > 0) out += ", ";
    out += format_full(a[k]);
  }
  out += "]";
  return out;
}

inline PowerSeriesd power_series_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw ParseError("series JSON: expected a nonempty array of numbers");
  PowerSeriesd::Coeffs coeffs(Index(doc.size()));
  Index k = 0;
  for (const auto& item : doc) {
    if (!item.is_number())
      throw ParseError("series JSON: coefficient " + std::to_string(k) +
                       " is not a number");
    coeffs[k++] = item.get<double>();
  }
  return PowerSeriesd(std::move(coeffs));
}

}  // namespace sirseries
