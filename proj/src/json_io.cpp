#include "fbstab/json_io.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fbstab {
namespace {

json number(double v) {
  // JSON has no inf / nan; null keeps the document valid.
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json coeff(const cplx& c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

double as_double(const json& v, const char* what) {
  if (!v.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InvalidArgument(std::string(what) + " must be finite");
  return d;
}

}  // namespace

json to_json(const FiniteSeq& x) {
  json coeffs = json::array();
  for (const auto& c : x.coeffs()) coeffs.push_back(coeff(c));
  return {{"offset", x.offset()}, {"coeffs", std::move(coeffs)}};
}

FiniteSeq seq_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("sequence must be a JSON object");
  if (!j.contains("offset") || !j.contains("coeffs")) {
    throw InvalidArgument("sequence needs \"offset\" and \"coeffs\"");
  }
  const json& off = j.at("offset");
  if (!off.is_number_integer()) throw InvalidArgument("\"offset\" must be an integer");
  const json& cs = j.at("coeffs");
  if (!cs.is_array()) throw InvalidArgument("\"coeffs\" must be an array");
  std::vector<cplx> coeffs;
  coeffs.reserve(cs.size());
  for (const json& c : cs) {
    if (c.is_number()) {
      coeffs.emplace_back(as_double(c, "coefficient"), 0.0);
    } else if (c.is_array() && c.size() == 2) {
      coeffs.emplace_back(as_double(c[0], "coefficient real part"),
                          as_double(c[1], "coefficient imaginary part"));
    } else {
      throw InvalidArgument("each coefficient must be a number or a [re, im] pair");
    }
  }
  return FiniteSeq(off.get<std::int64_t>(), std::move(coeffs));
}

json to_json(const FactoredLowpass& f) { return {{"n", f.n}, {"p", to_json(f.p)}}; }

FactoredLowpass factored_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("p")) {
    throw InvalidArgument("factored filter needs \"n\" and \"p\"");
  }
  if (!j.at("n").is_number_integer()) throw InvalidArgument("\"n\" must be an integer");
  FactoredLowpass f{j.at("n").get<int>(), seq_from_json(j.at("p"))};
  validate(f);
  return f;
}

json to_json(const AnalysisOutput& a) {
  json channels = json::array();
  for (const auto& c : a.channels) channels.push_back(to_json(c));
  const std::vector<double> e = a.energies();
  double total = 0.0;
  for (double v : e) total += v;
  return {{"order", a.order},
          {"channels", std::move(channels)},
          {"residual", to_json(a.lowpass_residual)},
          {"energies", e},
          {"total_energy", total}};
}

json to_json(const BesselCertificate& c) {
  return {{"s", c.s},
          {"n", c.n},
          {"sup_value", number(c.sup_value)},
          {"grid_max", number(c.grid_max)},
          {"threshold", number(c.threshold)},
          {"epsilon", number(c.epsilon)},
          {"verdict", c.verdict},
          {"degree", c.degree},
          {"grid", c.grid},
          {"tolerances", json::object()}};
}

json to_json(const ExpandCertificate& c) {
  return {{"grid_min", number(c.grid_min)},
          {"verdict", c.verdict},
          {"worst_xi", c.worst_xi},
          {"grid", c.grid},
          {"tolerances", {{"tol_expand", c.tol_expand}}}};
}

json to_json(const SpanCertificate& c) {
  return {{"det_min", number(c.det_min)},
          {"det_max", number(c.det_max)},
          {"verdict", c.verdict},
          {"worst_xi", c.worst_xi},
          {"grid", c.grid},
          {"tolerances", {{"tol_span", c.tol_span}}}};
}

json to_json(const ContractionCertificate& c) {
  return {{"L", c.L},
          {"hypothesis_holds", c.hypothesis_holds},
          {"even_sum", coeff(c.even_sum)},
          {"odd_sum", coeff(c.odd_sum)},
          {"sums_ok", c.sums_ok},
          {"spectral_radius", number(c.spectral_radius)},
          {"verdict", c.verdict},
          {"tolerances", {{"nonnegativity", 1e-12}, {"sums", 1e-10}, {"radius", 1e-9}}}};
}

json to_json(const GramianReport& r) {
  return {{"j", r.j},
          {"lower", number(r.lower)},
          {"upper", number(r.upper)},
          {"lower_xi", r.lower_xi},
          {"upper_xi", r.upper_xi},
          {"grid", r.grid},
          {"tolerances", json::object()}};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace fbstab
