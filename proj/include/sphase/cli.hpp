#pragma once

/// Command-line front end. Exit codes: 0 ok, 2 validation failure,
/// 3 truncation insufficient, 4 parse error (input or arguments), 1 other.

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sphase/diagram.hpp"
#include "sphase/fourier.hpp"
#include "sphase/io.hpp"
#include "sphase/json_io.hpp"
#include "sphase/legendre.hpp"
#include "sphase/oracle.hpp"
#include "sphase/stokes.hpp"

namespace sphase {

enum ExitCode : int { kExitOk = 0, kExitOther = 1, kExitValidation = 2, kExitTruncation = 3, kExitParse = 4 };

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::TruncationInsufficient:
    case ErrorCode::IndeterminateOrder: return kExitTruncation;
    case ErrorCode::SyntaxError:
    case ErrorCode::DenominatorMismatch: return kExitParse;
    case ErrorCode::IoError:
    case ErrorCode::NoConvergence: return kExitOther;
    default: return kExitValidation;
  }
}

/// A pair passes when its direction agrees to 1e-6 rad and its saddle error is
/// either machine-zero or decays with the predicted exponent (within 0.1).
struct PairVerdict {
  SaddleCheck saddle;
  double direction_error = 0.0;
  bool pass = false;
};

/// Empty radii select suggested_radii(pair).
inline PairVerdict judge_pair(const LegendrePair& pair, const std::vector<double>& radii = {}) {
  PairVerdict v;
  v.saddle = verify_pair(pair, radii.empty() ? suggested_radii(pair) : radii);
  v.direction_error = verify_direction(pair.source, pair.target.dir, pair.inverse ? -1.0 : 1.0);
  const bool machine_zero = v.saddle.max_rel_error <= 1e-9;
  const bool decays = v.saddle.fitted_exponent && v.saddle.predicted_exponent &&
                      std::abs(*v.saddle.fitted_exponent - *v.saddle.predicted_exponent) <= 0.1;
  v.pass = v.direction_error < 1e-6 && (machine_zero || decays);
  return v;
}

namespace detail {

struct CliOptions {
  std::string input, output, report, germ, base = "inf", point;
  int precision = kDefaultPrecision;
  int branch = 0;
  int ramification = 0;
  double dir_deg = 0.0;
  bool inverse = false;
  bool json = false;
  std::vector<double> radii;
};

inline int cmd_transform(const CliOptions& o, bool inverse, std::ostream& out) {
  const SingularityData data = load_data(o.input);
  const TransformResult r = inverse ? inverse_fourier_transform(data, o.precision) : fourier_transform(data, o.precision);
  const std::string text = dump(data_to_json(r.data));
  if (o.output.empty()) {
    out << text;
  } else {
    write_file(o.output, text);
  }
  if (!o.report.empty()) write_file(o.report, dump(report_to_json(r.report)));
  return r.report.merges.empty() ? kExitOk : kExitValidation;
}

inline int cmd_legendre(const CliOptions& o, std::ostream& out) {
  const BasePoint base = parse_point(o.base);
  const PuiseuxGerm g = parse_germ(o.germ, base, o.ramification);
  if (o.branch < 0 || o.branch >= g.ramification()) throw Error(ErrorCode::InvalidData, "branch out of range");
  const DirectedGerm f{g, Direction{base, mod_two_pi(to_radians(o.dir_deg)), o.branch}};
  const LegendrePair p = o.inverse ? inverse_legendre(f, o.precision) : legendre_transform(f, o.precision);
  if (o.json) {
    out << dump(pair_to_json(p));
    return kExitOk;
  }
  const auto ord = pole_order(p.reduced_target());
  out << "case: " << to_string(p.admissibility.kind) << "\n";
  out << "target base: " << format_point(p.target.dir.base) << "\n";
  out << "eta: " << format_double(to_degrees(p.target.dir.angle)) << " deg, branch " << p.target.dir.branch << "\n";
  out << "order: " << (ord ? ord->str() : "-inf") << "\n";
  out << "g: " << print_germ(p.target.germ) << "\n";
  out << "residual: " << format_double(p.residual) << "\n";
  return kExitOk;
}

inline const PointData& pick_point(const SingularityData& data, const std::string& point) {
  if (point.empty()) {
    if (data.points.size() != 1) throw Error(ErrorCode::InvalidData, "--point is required when the data has several points");
    return data.points.front();
  }
  const PointData* pd = data.find(parse_point(point));
  if (!pd) throw Error(ErrorCode::InvalidData, "no data at point " + point);
  return *pd;
}

inline int cmd_stokes(const CliOptions& o) {
  const SingularityData data = load_data(o.input);
  const auto violations = validate(data);
  if (!violations.empty()) throw Error(ErrorCode::InvalidData, to_string(violations.front().kind));
  const StokesStructure s = stokes_structure(pick_point(data, o.point));
  const bool csv = o.output.size() >= 4 && o.output.compare(o.output.size() - 4, 4, ".csv") == 0;
  write_file(o.output, csv ? stokes_csv(s) : stokes_svg(s));
  return kExitOk;
}

inline int cmd_check(const CliOptions& o, std::ostream& out) {
  const SingularityData data = load_data(o.input);
  const BasePoint base = pick_point(data, o.point).point;
  const PuiseuxGerm g = parse_germ(o.germ, base, o.ramification);
  const DirectedGerm f{g, Direction{base, mod_two_pi(to_radians(o.dir_deg)), o.branch}};
  const StationaryPhaseCheck c = check_stationary_phase(data, f, o.precision);
  out << "lhs=" << c.lhs << " rhs=" << c.rhs << " eta=" << format_double(to_degrees(c.eta.angle)) << " deg"
      << (c.perturbed ? " (perturbed)" : "") << "\n";
  return c.holds() ? kExitOk : kExitValidation;
}

inline int cmd_verify(const CliOptions& o, std::ostream& out) {
  const SingularityData data = load_data(o.input);
  const auto violations = validate(data);
  if (!violations.empty()) throw Error(ErrorCode::InvalidData, to_string(violations.front().kind));
  const bool inverse = data.line == Line::VStar;
  Json pairs = Json::array();
  bool all = true;
  for (const auto& pd : data.points) {
    if (pd.factors.empty()) continue;
    const double phi = base_angle(pd);
    for (const auto& orbit : pd.factors) {
      const DirectedGerm f{orbit.representative, Direction{pd.point, phi, 0}};
      if (!classify(f).admissible()) continue;
      const LegendrePair p = inverse ? inverse_legendre(f, o.precision) : legendre_transform(f, o.precision);
      const PairVerdict v = judge_pair(p, o.radii);
      all = all && v.pass;
      pairs.push_back(Json{{"pair", pair_to_json(p)},
                           {"saddle", saddle_check_to_json(v.saddle)},
                           {"direction_error", v.direction_error},
                           {"pass", v.pass}});
    }
  }
  const std::string text = dump(Json{{"pairs", pairs}, {"pass", all}});
  if (o.output.empty()) {
    out << text;
  } else {
    write_file(o.output, text);
  }
  return all ? kExitOk : kExitValidation;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Legendre transform of Puiseux germs and stationary phase on exponential-factor data", "sphase"};
  app.require_subcommand(1);
  detail::CliOptions o;

  auto add_precision = [&](CLI::App* c) {
    c->add_option("--precision", o.precision, "number of guaranteed series terms")->check(CLI::PositiveNumber);
  };
  auto* transform = app.add_subcommand("transform", "transform data on V to data on V*");
  auto* inverse = app.add_subcommand("inverse-transform", "transform data on V* back to V");
  for (auto* c : {transform, inverse}) {
    c->add_option("input", o.input, "data file")->required();
    c->add_option("-o,--output", o.output, "output data file (default: stdout)");
    c->add_option("--report", o.report, "transform report file");
    add_precision(c);
  }

  auto* legendre = app.add_subcommand("legendre", "Legendre transform of one directed germ");
  legendre->add_option("--germ", o.germ, "germ expression")->required();
  legendre->add_option("--base", o.base, "base point: complex literal or inf");
  legendre->add_option("--dir", o.dir_deg, "direction angle in degrees");
  legendre->add_option("--branch", o.branch, "branch index");
  legendre->add_option("--ramification", o.ramification, "ramification (default: exponent lattice)");
  legendre->add_flag("--inverse", o.inverse, "inverse transform");
  legendre->add_flag("--json", o.json, "print JSON");
  add_precision(legendre);

  auto* stokes = app.add_subcommand("stokes", "Stokes diagram of one point");
  stokes->add_option("input", o.input, "data file")->required();
  stokes->add_option("--point", o.point, "point (default: the only point)");
  stokes->add_option("-o,--output", o.output, "output .svg or .csv")->required();

  auto* check = app.add_subcommand("check", "stationary phase rank equality for one germ");
  check->add_option("input", o.input, "data file")->required();
  check->add_option("--germ", o.germ, "germ expression")->required();
  check->add_option("--dir", o.dir_deg, "direction angle in degrees")->required();
  check->add_option("--branch", o.branch, "branch index");
  check->add_option("--point", o.point, "point (default: the only point)");
  check->add_option("--ramification", o.ramification, "ramification (default: exponent lattice)");
  add_precision(check);

  auto* verify = app.add_subcommand("verify", "numeric saddle-point checks of every transformed factor");
  verify->add_option("input", o.input, "data file")->required();
  verify->add_option("-o,--output", o.output, "report file (default: stdout)");
  verify->add_option("--radii", o.radii, "sampling radii (default: chosen per pair)");
  add_precision(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (transform->parsed()) return detail::cmd_transform(o, false, out);
    if (inverse->parsed()) return detail::cmd_transform(o, true, out);
    if (legendre->parsed()) return detail::cmd_legendre(o, out);
    if (stokes->parsed()) return detail::cmd_stokes(o);
    if (check->parsed()) return detail::cmd_check(o, out);
    if (verify->parsed()) return detail::cmd_verify(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}

}  // namespace sphase
