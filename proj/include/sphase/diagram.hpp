#pragma once

/// Stokes diagrams: the circle of directions with one segment per Stokes ray
/// and, in every sector, the factors listed from lowest to highest growth.

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "sphase/io.hpp"
#include "sphase/json_io.hpp"
#include "sphase/stokes.hpp"

namespace sphase {

namespace detail {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string angle_text(double rad) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", to_degrees(rad));
  return buf;
}

/// Factor indices of a sector, lowest first.
inline std::vector<std::size_t> dominance_order(const Sector& sec) {
  std::vector<std::size_t> idx(sec.ranks.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sec.ranks[a].le < sec.ranks[b].le; });
  return idx;
}

}  // namespace detail

[[nodiscard]] inline std::string stokes_svg(const StokesStructure& s) {
  constexpr double kCenter = 240, kRadius = 170;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  out += "  <title>Stokes diagram at " + detail::xml_escape(format_point(s.point)) + "</title>\n";
  out += "  <circle cx=\"240\" cy=\"240\" r=\"170\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (const auto& r : s.rays) {
    const double x = kCenter + kRadius * std::cos(r.angle);
    const double y = kCenter - kRadius * std::sin(r.angle);
    out += "  <line x1=\"240\" y1=\"240\" x2=\"" + detail::fixed3(x) + "\" y2=\"" + detail::fixed3(y) +
           "\" stroke=\"firebrick\" stroke-width=\"1.5\"><title>" + detail::angle_text(r.angle) +
           " deg</title></line>\n";
  }
  for (const auto& sec : s.sectors) {
    std::string label;
    for (const std::size_t i : detail::dominance_order(sec)) {
      if (!label.empty()) label += " < ";
      label += print_germ(s.factors[i].germ);
    }
    const double lr = s.rays.empty() ? 0.0 : 0.62 * kRadius;
    const double x = kCenter + lr * std::cos(sec.midpoint);
    const double y = kCenter - lr * std::sin(sec.midpoint);
    out += "  <text x=\"" + detail::fixed3(x) + "\" y=\"" + detail::fixed3(y) +
           "\" font-family=\"monospace\" font-size=\"9\" text-anchor=\"middle\">" + detail::xml_escape(label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

/// One row per (ray, germ pair).
[[nodiscard]] inline std::string stokes_csv(const StokesStructure& s) {
  std::string out = "ray_angle,germ_pair\n";
  for (const auto& r : s.rays) {
    for (const auto& [a, b] : r.pairs) {
      out += detail::angle_text(r.angle) + "," +
             detail::csv_quote(print_germ(s.factors[a].germ) + " | " + print_germ(s.factors[b].germ)) + "\n";
    }
  }
  return out;
}

inline void emit_stokes_svg(const StokesStructure& s, const std::string& path) { write_file(path, stokes_svg(s)); }
inline void emit_stokes_csv(const StokesStructure& s, const std::string& path) { write_file(path, stokes_csv(s)); }

}  // namespace sphase
