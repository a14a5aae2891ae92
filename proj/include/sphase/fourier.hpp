#pragma once

/// Stationary phase on singularity data: every admissible factor orbit is sent
/// through the Legendre transform, multiplicities travel unchanged, and the
/// images are regrouped by target point. Bounded and linear factors are
/// reported as skipped.

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "sphase/error.hpp"
#include "sphase/legendre.hpp"
#include "sphase/puiseux.hpp"
#include "sphase/stokes.hpp"

namespace sphase {

/// An output direction closer than this to a Stokes ray is rotated by kGenericShift.
inline constexpr double kGenericWindow = 1e-6;
inline constexpr double kGenericShift = 1e-3;
inline constexpr const char* kGenericDirectionPolicy =
    "eta within 1e-6 rad of an output Stokes ray is rotated by +1e-3 rad";

struct FactorRef {
  BasePoint point = BasePoint::infinity();
  PuiseuxGerm representative;
  int multiplicity = 1;
};

struct TransformEntry {
  FactorRef source;
  AdmissibilityClass admissibility;
  Complex beta{};
  Direction source_dir;
  Direction eta;
  FactorRef target;
  double residual = 0.0;
};

struct SkippedFactor {
  FactorRef source;
  InadmissibleReason reason = InadmissibleReason::Bounded;
};

/// Two entries landed on the same class; never expected on valid data.
struct MergeEvent {
  std::size_t entry = 0;
  std::size_t merged_into = 0;
};

struct TransformReport {
  std::vector<TransformEntry> entries;
  std::vector<SkippedFactor> skipped;
  std::vector<MergeEvent> merges;
  std::string generic_direction_policy = kGenericDirectionPolicy;
};

struct TransformResult {
  SingularityData data;
  TransformReport report;
};

namespace detail {

/// Finite points by (re, im), infinity last.
inline bool point_less(const BasePoint& a, const BasePoint& b) {
  if (a.is_infinity() || b.is_infinity()) return !a.is_infinity() && b.is_infinity();
  return std::make_tuple(a.value().real(), a.value().imag()) < std::make_tuple(b.value().real(), b.value().imag());
}

inline bool germ_less(const PuiseuxGerm& a, const PuiseuxGerm& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first > ib->first;
    const auto ka = std::make_tuple(ia->second.real(), ia->second.imag());
    const auto kb = std::make_tuple(ib->second.real(), ib->second.imag());
    if (ka != kb) return ka < kb;
  }
  return ia == a.terms().end() && ib != b.terms().end();
}

/// Base direction for transforming orbits at a point: the smallest sector
/// midpoint of its Stokes structure (pi when there are no rays).
inline double base_angle(const PointData& pd) {
  const StokesStructure s = stokes_structure(pd);
  double best = kTwoPi;
  for (const auto& sec : s.sectors) best = std::min(best, mod_two_pi(sec.midpoint));
  return best;
}

inline TransformResult transform_data(const SingularityData& data, int precision, bool inverse) {
  const Line expected = inverse ? Line::VStar : Line::V;
  if (data.line != expected) {
    throw Error(ErrorCode::InvalidData, std::string("data lives on ") + to_string(data.line) + ", expected " +
                                            to_string(expected));
  }
  const auto violations = validate(data);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidData, std::string(to_string(violations.front().kind)) + " at point " +
                                            std::to_string(violations.front().point) + ": " +
                                            violations.front().detail);
  }

  std::vector<const PointData*> points;
  for (const auto& pd : data.points) points.push_back(&pd);
  std::sort(points.begin(), points.end(), [](const PointData* a, const PointData* b) { return point_less(a->point, b->point); });

  TransformResult out;
  out.data.line = inverse ? Line::V : Line::VStar;
  for (const PointData* pd : points) {
    if (pd->factors.empty()) continue;
    const double phi = base_angle(*pd);
    std::vector<const FactorOrbit*> orbits;
    for (const auto& o : pd->factors) orbits.push_back(&o);
    std::sort(orbits.begin(), orbits.end(), [](const FactorOrbit* a, const FactorOrbit* b) {
      return germ_less(a->representative, b->representative);
    });
    for (const FactorOrbit* o : orbits) {
      const FactorRef src{pd->point, o->representative, o->multiplicity};
      const DirectedGerm f{o->representative, Direction{pd->point, phi, 0}};
      const AdmissibilityClass k = classify(f);
      if (!k.admissible()) {
        out.report.skipped.push_back({src, k.reason});
        continue;
      }
      const LegendrePair pair = inverse ? inverse_legendre(f, precision) : legendre_transform(f, precision);
      const FactorOrbit image = FactorOrbit::make(pair.target.germ, o->multiplicity);
      TransformEntry e{src, k, pair.beta, f.dir, pair.target.dir,
                       FactorRef{pair.target.dir.base, image.representative, image.multiplicity}, pair.residual};
      out.report.entries.push_back(e);

      PointData* target = nullptr;
      for (auto& q : out.data.points) {
        if (same_point(q.point, e.target.point)) target = &q;
      }
      if (!target) {
        out.data.points.push_back(PointData{e.target.point, {}});
        target = &out.data.points.back();
      }
      bool merged = false;
      for (std::size_t t = 0; t < target->factors.size() && !merged; ++t) {
        FactorOrbit& existing = target->factors[t];
        for (int j = 0; j < existing.orbit_size; ++j) {
          if (same_class(monodromy(existing.representative, j), image.representative)) {
            existing.multiplicity += image.multiplicity;
            // locate the entry that created the orbit
            std::size_t first = 0;
            for (std::size_t q = 0; q + 1 < out.report.entries.size(); ++q) {
              if (same_point(out.report.entries[q].target.point, target->point) &&
                  same_class(out.report.entries[q].target.representative, existing.representative)) {
                first = q;
                break;
              }
            }
            out.report.merges.push_back({out.report.entries.size() - 1, first});
            merged = true;
            break;
          }
        }
      }
      if (!merged) target->factors.push_back(image);
    }
  }
  std::sort(out.data.points.begin(), out.data.points.end(),
            [](const PointData& a, const PointData& b) { return point_less(a.point, b.point); });
  return out;
}

}  // namespace detail

[[nodiscard]] inline TransformResult fourier_transform(const SingularityData& data, int precision = kDefaultPrecision) {
  return detail::transform_data(data, precision, false);
}

[[nodiscard]] inline TransformResult inverse_fourier_transform(const SingularityData& data,
                                                               int precision = kDefaultPrecision) {
  return detail::transform_data(data, precision, true);
}

struct StationaryPhaseCheck {
  int lhs = 0;  ///< rank at the transformed germ in the transformed data
  int rhs = 0;  ///< rank at the query in the input data
  Direction eta;
  bool perturbed = false;
  [[nodiscard]] bool holds() const { return lhs == rhs; }
};

/// Rotates eta off the Stokes rays of the output point (and of the rays
/// between the query image and the output factors).
inline Direction generic_direction(const PointData* out_point, const PuiseuxGerm& g, const Direction& eta,
                                   bool* perturbed) {
  std::vector<double> rays;
  if (out_point) {
    const auto fs = instantiate(*out_point);
    for (const auto& r : stokes_rays(fs)) rays.push_back(r.angle);
    for (const auto& h : fs) {
      for (const auto& d : stokes_directions(h.germ, g)) {
        if (d.branch == 0) rays.push_back(d.angle);
      }
    }
  }
  Direction d = eta;
  for (const double r : rays) {
    if (std::abs(wrap_angle(d.angle - r)) < kGenericWindow) {
      d.angle = mod_two_pi(d.angle + kGenericShift);
      if (perturbed) *perturbed = true;
      break;
    }
  }
  return d;
}

[[nodiscard]] inline StationaryPhaseCheck check_stationary_phase(const SingularityData& data, const DirectedGerm& f_query,
                                                                 int precision = kDefaultPrecision) {
  const bool inverse = data.line == Line::VStar;
  const LegendrePair pair = inverse ? inverse_legendre(f_query, precision) : legendre_transform(f_query, precision);
  const TransformResult transformed = inverse ? inverse_fourier_transform(data, precision) : fourier_transform(data, precision);

  StationaryPhaseCheck out;
  const PuiseuxGerm g = polar_part(pair.target.germ);
  const PointData* target = transformed.data.find(pair.target.dir.base);
  out.eta = generic_direction(target, g, pair.target.dir, &out.perturbed);
  if (target) out.lhs = gr_rank(*target, Direction{target->point, out.eta.angle, 0}, g);
  if (const PointData* source = data.find(f_query.dir.base)) {
    out.rhs = gr_rank(*source, Direction{source->point, f_query.dir.angle, f_query.dir.branch}, f_query.germ);
  }
  return out;
}

}  // namespace sphase
