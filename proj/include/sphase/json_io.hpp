#pragma once

/// JSON forms of singularity data and transform reports.
///
/// Data file:
///   { "version": 1, "line": "V" | "V*",
///     "points": [ { "point": {"type": "finite", "re": r, "im": i} | {"type": "infinity"},
///                   "factors": [ {"germ": "<expr>", "ramification": p, "multiplicity": m} ] } ] }
///
/// Angles in reports are in degrees.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sphase/error.hpp"
#include "sphase/fourier.hpp"
#include "sphase/io.hpp"
#include "sphase/oracle.hpp"
#include "sphase/stokes.hpp"

namespace sphase {

using Json = nlohmann::json;

inline constexpr int kDataFileVersion = 1;

inline double to_degrees(double rad) { return rad * 180.0 / kPi; }
inline double to_radians(double deg) { return deg * kPi / 180.0; }

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::InvalidData, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int require_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidData, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline double require_number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw Error(ErrorCode::InvalidData, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

inline Json point_to_json(const BasePoint& p) {
  if (p.is_infinity()) return Json{{"type", "infinity"}};
  return Json{{"type", "finite"}, {"re", p.value().real()}, {"im", p.value().imag()}};
}

inline BasePoint point_from_json(const Json& j) {
  const Json& type = detail::require(j, "type");
  if (type == "infinity") return BasePoint::infinity();
  if (type == "finite") return BasePoint::finite({detail::require_number(j, "re"), detail::require_number(j, "im")});
  throw Error(ErrorCode::InvalidData, "point type must be 'finite' or 'infinity'");
}

inline Json complex_to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

inline Json factor_to_json(const PuiseuxGerm& rep, int ramification, int multiplicity) {
  return Json{{"germ", print_germ(rep)}, {"ramification", ramification}, {"multiplicity", multiplicity}};
}

inline Json data_to_json(const SingularityData& data) {
  Json points = Json::array();
  for (const auto& pd : data.points) {
    Json factors = Json::array();
    for (const auto& o : pd.factors) factors.push_back(factor_to_json(o.representative, o.orbit_size, o.multiplicity));
    points.push_back(Json{{"point", point_to_json(pd.point)}, {"factors", factors}});
  }
  return Json{{"version", kDataFileVersion}, {"line", to_string(data.line)}, {"points", points}};
}

inline SingularityData data_from_json(const Json& j) {
  if (detail::require_int(j, "version") != kDataFileVersion) throw Error(ErrorCode::InvalidData, "unsupported version");
  SingularityData data;
  const Json& line = detail::require(j, "line");
  if (line == "V") {
    data.line = Line::V;
  } else if (line == "V*") {
    data.line = Line::VStar;
  } else {
    throw Error(ErrorCode::InvalidData, "line must be 'V' or 'V*'");
  }
  const Json& points = detail::require(j, "points");
  if (!points.is_array()) throw Error(ErrorCode::InvalidData, "'points' must be an array");
  for (const Json& pj : points) {
    PointData pd;
    pd.point = point_from_json(detail::require(pj, "point"));
    const Json& factors = detail::require(pj, "factors");
    if (!factors.is_array()) throw Error(ErrorCode::InvalidData, "'factors' must be an array");
    for (const Json& fj : factors) {
      const Json& germ = detail::require(fj, "germ");
      if (!germ.is_string()) throw Error(ErrorCode::InvalidData, "'germ' must be a string");
      const int ram = detail::require_int(fj, "ramification");
      if (ram < 1) throw Error(ErrorCode::InvalidData, "ramification must be positive");
      const int mult = detail::require_int(fj, "multiplicity");
      pd.factors.push_back(FactorOrbit::make(parse_germ(germ.get<std::string>(), pd.point, ram), mult));
    }
    data.points.push_back(std::move(pd));
  }
  return data;
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline SingularityData load_data(const std::string& path) { return data_from_json(parse_json_text(read_file(path))); }

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json direction_to_json(const Direction& d) {
  return Json{{"point", point_to_json(d.base)}, {"angle_deg", to_degrees(d.angle)}, {"branch", d.branch}};
}

inline Json factor_ref_to_json(const FactorRef& f) {
  return Json{{"point", point_to_json(f.point)},
              {"germ", print_germ(f.representative)},
              {"ramification", f.representative.ramification()},
              {"multiplicity", f.multiplicity}};
}

inline Json report_to_json(const TransformReport& r) {
  Json entries = Json::array();
  Json residuals = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(Json{{"source", factor_ref_to_json(e.source)},
                           {"source_direction", direction_to_json(e.source_dir)},
                           {"case", to_string(e.admissibility.kind)},
                           {"lambda", e.admissibility.lambda.str()},
                           {"target_order", e.admissibility.target_order().str()},
                           {"beta", complex_to_json(e.beta)},
                           {"eta", direction_to_json(e.eta)},
                           {"target", factor_ref_to_json(e.target)},
                           {"residual", e.residual}});
    residuals.push_back(e.residual);
  }
  Json skipped = Json::array();
  for (const auto& s : r.skipped) {
    skipped.push_back(Json{{"source", factor_ref_to_json(s.source)}, {"reason", to_string(s.reason)}});
  }
  Json merges = Json::array();
  for (const auto& m : r.merges) merges.push_back(Json{{"entry", m.entry}, {"merged_into", m.merged_into}});
  return Json{{"entries", entries},
              {"skipped", skipped},
              {"residuals", residuals},
              {"merges", merges},
              {"generic_direction_policy", r.generic_direction_policy}};
}

inline Json pair_to_json(const LegendrePair& p) {
  const auto order = pole_order(p.reduced_target());
  return Json{{"source", Json{{"point", point_to_json(p.source.dir.base)},
                              {"germ", print_germ(p.source.germ)},
                              {"direction", direction_to_json(p.source.dir)}}},
              {"case", to_string(p.admissibility.kind)},
              {"lambda", p.admissibility.lambda.str()},
              {"target", Json{{"point", point_to_json(p.target.dir.base)},
                              {"germ", print_germ(p.target.germ)},
                              {"ramification", p.target.germ.ramification()},
                              {"known_order", p.target.germ.known_order() ? p.target.germ.known_order()->str() : "exact"},
                              {"direction", direction_to_json(p.target.dir)}}},
              {"target_order", order ? order->str() : "-inf"},
              {"psi", print_germ(p.psi)},
              {"beta", complex_to_json(p.beta)},
              {"residual", p.residual},
              {"inverse", p.inverse}};
}

inline Json saddle_check_to_json(const SaddleCheck& c) {
  Json samples = Json::array();
  for (const auto& s : c.per_sample) {
    samples.push_back(Json{{"radius", s.radius},
                           {"w", complex_to_json(s.w)},
                           {"z_star", complex_to_json(s.z_star)},
                           {"g_series", complex_to_json(s.g_series)},
                           {"g_saddle", complex_to_json(s.g_saddle)},
                           {"error", s.error}});
  }
  Json j{{"samples", samples}, {"max_abs_error", c.max_abs_error}, {"max_rel_error", c.max_rel_error}};
  j["fitted_exponent"] = c.fitted_exponent ? Json(*c.fitted_exponent) : Json(nullptr);
  j["predicted_exponent"] = c.predicted_exponent ? Json(*c.predicted_exponent) : Json(nullptr);
  return j;
}

}  // namespace sphase
