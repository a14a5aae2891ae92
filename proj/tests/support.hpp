#pragma once

// Random generators and small helpers shared by the test binaries.

#include <random>
#include <string>
#include <vector>

#include "sphase/sphase.hpp"

namespace sphase::testing {

using Rng = std::mt19937_64;

inline Complex random_coefficient(Rng& rng, double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> mod(lo, hi), ang(0.0, kTwoPi);
  return std::polar(mod(rng), ang(rng));
}

/// Pole orders k/d with d <= 4 in [1/3, 4].
inline std::vector<Rational> lambda_pool() {
  std::vector<Rational> out;
  for (int d = 1; d <= 4; ++d) {
    for (int k = 1; k <= 4 * d; ++k) {
      const Rational r{k, d};
      if (r.den() != d || r < Rational{1, 3}) continue;
      out.push_back(r);
    }
  }
  return out;
}

enum class Kind { Finite, LinearTwist, InfinityLarge };

struct AdmissibleSample {
  DirectedGerm f;
  Kind kind;
  Rational lambda;
};

/// Exact germ with leading term c * z_a^(-lambda) and up to `extra` lower terms
/// on the lattice (1/p)Z, some of them bounded.
inline PuiseuxGerm random_germ_with_lead(Rng& rng, BasePoint base, const Rational& lambda, int p, int extra) {
  PuiseuxGerm::TermMap t;
  t[lambda] = random_coefficient(rng);
  std::uniform_int_distribution<int> step(1, 2 * p);
  Rational mu = lambda;
  for (int i = 0; i < extra; ++i) {
    mu -= Rational{step(rng), p};
    t[mu] = random_coefficient(rng, 0.1, 1.0);
  }
  return {base, p, std::move(t)};
}

inline Direction random_direction(Rng& rng, BasePoint base, int p) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_int_distribution<int> br(0, p - 1);
  return Direction{base, ang(rng), br(rng)};
}

inline AdmissibleSample random_admissible(Rng& rng, Kind kind) {
  static const std::vector<Rational> pool = lambda_pool();
  std::vector<Rational> allowed;
  for (const auto& l : pool) {
    if (kind == Kind::LinearTwist && !(l < Rational{1})) continue;
    if (kind == Kind::InfinityLarge && !(l > Rational{1})) continue;
    allowed.push_back(l);
  }
  const Rational lambda = allowed[std::uniform_int_distribution<std::size_t>(0, allowed.size() - 1)(rng)];
  const int p = static_cast<int>(lambda.den()) * std::uniform_int_distribution<int>(1, 2)(rng);
  const int extra = std::uniform_int_distribution<int>(0, 3)(rng);
  BasePoint base = BasePoint::infinity();
  if (kind == Kind::Finite) {
    std::uniform_int_distribution<int> coin(0, 2);
    base = coin(rng) == 0 ? BasePoint::finite(0.0) : BasePoint::finite(random_coefficient(rng, 0.2, 3.0));
  }
  PuiseuxGerm g = random_germ_with_lead(rng, base, lambda, p, extra);
  if (kind == Kind::LinearTwist && std::uniform_int_distribution<int>(0, 4)(rng) != 0) {
    PuiseuxGerm::TermMap t = g.terms();
    t[Rational{1}] = random_coefficient(rng);
    g = PuiseuxGerm(base, p, std::move(t));
  }
  return {DirectedGerm{g, random_direction(rng, base, p)}, kind, lambda};
}

/// 300 admissible germs, 100 per case, fixed seed.
inline std::vector<AdmissibleSample> admissible_corpus(std::size_t per_case = 100, std::uint64_t seed = 20240611) {
  Rng rng(seed);
  std::vector<AdmissibleSample> out;
  for (const Kind k : {Kind::Finite, Kind::LinearTwist, Kind::InfinityLarge}) {
    for (std::size_t i = 0; i < per_case; ++i) out.push_back(random_admissible(rng, k));
  }
  return out;
}

/// Random germ with exponents <= 0 (a bounded perturbation).
inline PuiseuxGerm random_bounded(Rng& rng, BasePoint base, int p) {
  PuiseuxGerm::TermMap t;
  std::uniform_int_distribution<int> n(0, 3 * p);
  for (int i = 0; i < 3; ++i) t[Rational{-n(rng), p}] = random_coefficient(rng, 0.1, 3.0);
  return {base, p, std::move(t)};
}

/// Valid singularity data: 1-3 points (finite and/or infinity), 1-3 admissible
/// orbits per point, multiplicities 1-3.
inline SingularityData random_dataset(Rng& rng) {
  for (;;) {
    SingularityData d;
    std::uniform_int_distribution<int> npts(1, 3), nfac(1, 3), mult(1, 3);
    const int n = npts(rng);
    for (int i = 0; i < n; ++i) {
      const bool inf = i == 0 ? std::uniform_int_distribution<int>(0, 1)(rng) == 0 : false;
      const BasePoint base = inf ? BasePoint::infinity() : BasePoint::finite(Complex{static_cast<double>(i), 0.5 * i});
      PointData pd{base, {}};
      const int k = nfac(rng);
      for (int j = 0; j < k; ++j) {
        Kind kind = Kind::Finite;
        if (inf) kind = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? Kind::LinearTwist : Kind::InfinityLarge;
        AdmissibleSample s = random_admissible(rng, kind);
        PuiseuxGerm g = s.f.germ;
        if (!inf) g = PuiseuxGerm(base, g.ramification(), g.terms());
        pd.factors.push_back(FactorOrbit::make(g, mult(rng)));
      }
      d.points.push_back(std::move(pd));
    }
    if (validate(d).empty()) return d;
  }
}

}  // namespace sphase::testing
