#pragma once

/// Exponential-factor data with multiplicities, and the rank data of the
/// Stokes filtration it determines.
///
/// A point carries finitely many factor orbits. Each orbit is stored once, by
/// its polar part; its members are the monodromy conjugates of that
/// representative. Every query reads the conjugates at branch 0 of the query
/// angle, which is legitimate because the instantiated set is closed under
/// monodromy.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sphase/error.hpp"
#include "sphase/puiseux.hpp"

namespace sphase {

struct FactorOrbit {
  PuiseuxGerm representative;
  int multiplicity = 1;
  int orbit_size = 1;

  /// Normal form: polar part on its minimal lattice; the orbit size is that lattice.
  static FactorOrbit make(const PuiseuxGerm& germ, int multiplicity) {
    const PuiseuxGerm polar = polar_part(germ);
    const int lattice = polar.exponent_lattice();
    return FactorOrbit{polar.with_ramification(lattice), multiplicity, lattice};
  }
};

struct PointData {
  BasePoint point = BasePoint::infinity();
  std::vector<FactorOrbit> factors;
};

enum class Line { V, VStar };

inline const char* to_string(Line l) noexcept { return l == Line::V ? "V" : "V*"; }

struct SingularityData {
  Line line = Line::V;
  std::vector<PointData> points;

  /// Point data at p, or nullptr.
  [[nodiscard]] const PointData* find(const BasePoint& p) const {
    for (const auto& pd : points) {
      if (same_point(pd.point, p)) return &pd;
    }
    return nullptr;
  }
};

enum class ViolationKind { DuplicatePoint, InvalidMultiplicity, BoundedFactor, OrbitNotClosed, NotWellSeparated, Undetermined };

inline const char* to_string(ViolationKind v) noexcept {
  switch (v) {
    case ViolationKind::DuplicatePoint: return "DuplicatePoint";
    case ViolationKind::InvalidMultiplicity: return "InvalidMultiplicity";
    case ViolationKind::BoundedFactor: return "BoundedFactor";
    case ViolationKind::OrbitNotClosed: return "OrbitNotClosed";
    case ViolationKind::NotWellSeparated: return "NotWellSeparated";
    case ViolationKind::Undetermined: return "Undetermined";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::size_t point = 0;
  std::string detail;
};

/// One member of an orbit, read at branch 0.
struct InstantiatedFactor {
  PuiseuxGerm germ;
  int multiplicity = 1;
  std::size_t orbit = 0;
  int conjugate = 0;  ///< j in monodromy^j(representative)
};

/// All monodromy conjugates of all orbits; length = sum of orbit sizes.
[[nodiscard]] inline std::vector<InstantiatedFactor> instantiate(const PointData& pd) {
  std::vector<InstantiatedFactor> out;
  for (std::size_t i = 0; i < pd.factors.size(); ++i) {
    const FactorOrbit& o = pd.factors[i];
    for (int j = 0; j < o.orbit_size; ++j) out.push_back({monodromy(o.representative, j), o.multiplicity, i, j});
  }
  return out;
}

/// Same list, checked against a direction: the germs are to be read with
/// Direction{dir.base, dir.angle, 0}.
[[nodiscard]] inline std::vector<InstantiatedFactor> instantiate(const PointData& pd, const Direction& dir) {
  if (!same_point(pd.point, dir.base)) throw Error(ErrorCode::MismatchedBasePoint, "direction at a different point");
  return instantiate(pd);
}

struct StokesRay {
  double angle = 0.0;  ///< in [0, 2*pi)
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< instantiated factors exchanging order here
};

struct FactorRanks {
  int le = 0;  ///< F_{<= f}
  int lt = 0;  ///< F_{< f}
  [[nodiscard]] int gr() const { return le - lt; }
};

/// Ranks are indexed by the factors read at branch 0 of the midpoint angle
/// (reduced mod 2*pi). In the wrapping sector, continuing across angle 0 moves
/// those readings onto a neighbouring branch.
struct Sector {
  double start = 0.0;
  double end = kTwoPi;  ///< may exceed 2*pi for the wrapping sector
  double midpoint = kPi;
  std::vector<std::pair<std::size_t, std::size_t>> below;  ///< (h, f) with h strictly below f
  std::vector<FactorRanks> ranks;                          ///< indexed like StokesStructure::factors
  [[nodiscard]] int total_gr() const {
    int s = 0;
    for (const auto& r : ranks) s += r.gr();
    return s;
  }
};

struct StokesStructure {
  BasePoint point = BasePoint::infinity();
  std::vector<InstantiatedFactor> factors;
  std::vector<StokesRay> rays;  ///< sorted by angle
  std::vector<Sector> sectors;
  int total_rank = 0;
};

namespace detail {

inline constexpr double kRayMergeTolerance = 1e-12;

inline Direction branch_zero(const BasePoint& base, double angle) { return Direction{base, mod_two_pi(angle), 0}; }

inline FactorRanks ranks_against(const std::vector<InstantiatedFactor>& fs, const PuiseuxGerm& f,
                                 const Direction& dir, bool* incomparable = nullptr) {
  FactorRanks r;
  for (const auto& h : fs) {
    const Comparison c = compare_at(f, h.germ, dir);
    if (c == Comparison::Incomparable) {
      if (incomparable) *incomparable = true;
      continue;
    }
    if (c == Comparison::StrictlyBelow) r.lt += h.multiplicity;
    if (c == Comparison::StrictlyBelow || c == Comparison::Equivalent) r.le += h.multiplicity;
  }
  return r;
}

}  // namespace detail

[[nodiscard]] inline std::vector<Violation> validate(const SingularityData& data) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const PointData& pd = data.points[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (same_point(pd.point, data.points[j].point)) out.push_back({ViolationKind::DuplicatePoint, i, "point repeated"});
    }
    bool usable = true;
    for (std::size_t k = 0; k < pd.factors.size(); ++k) {
      const FactorOrbit& o = pd.factors[k];
      const std::string tag = "factor " + std::to_string(k);
      if (o.multiplicity < 1) out.push_back({ViolationKind::InvalidMultiplicity, i, tag});
      if (!(o.representative.base() == pd.point) && !same_point(o.representative.base(), pd.point)) {
        out.push_back({ViolationKind::Undetermined, i, tag + " lives at another point"});
        usable = false;
        continue;
      }
      try {
        const auto ord = pole_order(o.representative);
        if (!ord || *ord <= Rational{0}) {
          out.push_back({ViolationKind::BoundedFactor, i, tag});
          usable = false;
          continue;
        }
        const int lattice = polar_part(o.representative).exponent_lattice();
        bool closed = o.orbit_size == lattice && same_class(monodromy(o.representative, o.orbit_size), o.representative);
        for (int j = 1; closed && j < o.orbit_size; ++j) {
          if (same_class(monodromy(o.representative, j), o.representative)) closed = false;
        }
        if (!closed) out.push_back({ViolationKind::OrbitNotClosed, i, tag});
      } catch (const Error& e) {
        out.push_back({ViolationKind::Undetermined, i, tag + ": " + e.what()});
        usable = false;
      }
    }
    if (!usable) continue;
    // Class equality does not depend on the direction, so one pass over the
    // instantiated set covers every probe direction.
    const auto fs = instantiate(pd);
    for (std::size_t a = 0; a < fs.size(); ++a) {
      for (std::size_t b = a + 1; b < fs.size(); ++b) {
        try {
          if (same_class(fs[a].germ, fs[b].germ)) {
            out.push_back({ViolationKind::NotWellSeparated, i,
                           "factors " + std::to_string(fs[a].orbit) + " and " + std::to_string(fs[b].orbit) +
                               " share a class"});
          }
        } catch (const Error& e) {
          out.push_back({ViolationKind::Undetermined, i, e.what()});
        }
      }
    }
  }
  return out;
}

/// Stokes rays of the instantiated factors, sorted by angle; coincident rays merge.
[[nodiscard]] inline std::vector<StokesRay> stokes_rays(const std::vector<InstantiatedFactor>& fs) {
  std::vector<StokesRay> rays;
  for (std::size_t a = 0; a < fs.size(); ++a) {
    for (std::size_t b = a + 1; b < fs.size(); ++b) {
      for (const Direction& d : stokes_directions(fs[a].germ, fs[b].germ)) {
        if (d.branch != 0) continue;
        auto it = std::find_if(rays.begin(), rays.end(), [&](const StokesRay& r) {
          return std::abs(wrap_angle(r.angle - d.angle)) <= detail::kRayMergeTolerance;
        });
        if (it == rays.end()) {
          rays.push_back({d.angle, {{a, b}}});
        } else {
          it->pairs.emplace_back(a, b);
        }
      }
    }
  }
  std::sort(rays.begin(), rays.end(), [](const StokesRay& x, const StokesRay& y) { return x.angle < y.angle; });
  return rays;
}

[[nodiscard]] inline StokesStructure stokes_structure(const PointData& pd) {
  StokesStructure s;
  s.point = pd.point;
  s.factors = instantiate(pd);
  for (const auto& f : s.factors) s.total_rank += f.multiplicity;
  s.rays = stokes_rays(s.factors);

  auto fill = [&](Sector sec) {
    const Direction dir = detail::branch_zero(s.point, sec.midpoint);
    for (std::size_t f = 0; f < s.factors.size(); ++f) {
      bool bad = false;
      sec.ranks.push_back(detail::ranks_against(s.factors, s.factors[f].germ, dir, &bad));
      if (bad) throw Error(ErrorCode::NonGenericDirection, "sector midpoint lies on a Stokes ray");
      for (std::size_t h = 0; h < s.factors.size(); ++h) {
        if (compare_at(s.factors[f].germ, s.factors[h].germ, dir) == Comparison::StrictlyBelow) {
          sec.below.emplace_back(h, f);
        }
      }
    }
    s.sectors.push_back(std::move(sec));
  };

  if (s.rays.empty()) {
    fill(Sector{0.0, kTwoPi, kPi, {}, {}});
    return s;
  }
  for (std::size_t r = 0; r < s.rays.size(); ++r) {
    const double start = s.rays[r].angle;
    const double end = r + 1 < s.rays.size() ? s.rays[r + 1].angle : s.rays.front().angle + kTwoPi;
    fill(Sector{start, end, 0.5 * (start + end), {}, {}});
  }
  return s;
}

/// Multiplicity of the class of f (read at dir) in the data, else 0.
[[nodiscard]] inline int gr_rank(const PointData& pd, const Direction& dir, const PuiseuxGerm& f) {
  const PuiseuxGerm f0 = at_branch_zero(f, dir);
  for (const auto& h : instantiate(pd, dir)) {
    if (same_class(h.germ, f0)) return h.multiplicity;
  }
  return 0;
}

/// Sum of multiplicities of factors below f (strict) or below-or-equivalent to f.
[[nodiscard]] inline int filtration_rank(const PointData& pd, const Direction& dir, const PuiseuxGerm& f, bool strict) {
  const PuiseuxGerm f0 = at_branch_zero(f, dir);
  bool bad = false;
  const FactorRanks r = detail::ranks_against(instantiate(pd, dir), f0, detail::branch_zero(dir.base, dir.angle), &bad);
  if (bad) throw Error(ErrorCode::NonGenericDirection, "direction is a Stokes direction for the query");
  return strict ? r.lt : r.le;
}

}  // namespace sphase
