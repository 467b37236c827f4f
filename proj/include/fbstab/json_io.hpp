#pragma once

// JSON forms of the library values. Sequences are
// {"offset": int, "coeffs": [c, ...]} where c is a number or [re, im];
// coefficients with zero imaginary part are written as plain numbers.

#include <json.hpp>

#include "fbstab/filters.hpp"
#include "fbstab/iterate.hpp"
#include "fbstab/seq.hpp"
#include "fbstab/stability.hpp"

namespace fbstab {

using json = nlohmann::json;

json to_json(const FiniteSeq& x);
/// Throws InvalidArgument on malformed input.
FiniteSeq seq_from_json(const json& j);

json to_json(const FactoredLowpass& f);
FactoredLowpass factored_from_json(const json& j);

json to_json(const AnalysisOutput& a);
json to_json(const BesselCertificate& c);
json to_json(const ExpandCertificate& c);
json to_json(const SpanCertificate& c);
json to_json(const ContractionCertificate& c);
json to_json(const GramianReport& r);

/// Parses text, turning parse errors into InvalidArgument.
json parse_json(const std::string& text);

}  // namespace fbstab
