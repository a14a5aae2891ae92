#pragma once

/// Legendre transform of directed Puiseux germs.
///
/// For an admissible (a, theta, f) the transform is (b, eta, g) with
///   w = f'(z),  z = -g'(w),  z*w - f(z) + g(w) = 0.
/// The inverse uses z = -g'(w), f(z) = g(w) + z*w. Both directions share one
/// code path parametrised by the sign of the dual variable.
///
/// Computation happens on uniformizers. With x = z_a^(1/p) on the source
/// branch, the local dual value is W = gamma * x^(-m) * (1 + D(x)) for an
/// integer m != 0. The target uniformizer y satisfies W = y^(-m), so
/// y = kappa * x * (1 + D)^(-1/m); reverting that series gives x as a series
/// in y, from which psi = z(w) and g follow. The target ramification is |m|.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sphase/error.hpp"
#include "sphase/puiseux.hpp"
#include "sphase/rational.hpp"
#include "sphase/series.hpp"

namespace sphase {

inline constexpr int kDefaultPrecision = 16;

/// Relative bound on the defining identity z*w - f(psi) + g.
inline constexpr double kResidualTolerance = 1e-9;

struct DirectedGerm {
  PuiseuxGerm germ;
  Direction dir;
};

enum class TransformCase { FiniteToInfinity, LinearTwistToFinite, InfinityToInfinity, Inadmissible };
enum class InadmissibleReason { None, Bounded, Linear };

struct AdmissibilityClass {
  TransformCase kind = TransformCase::Inadmissible;
  Rational lambda;  ///< pole order of f (of f - bz in the linear-twist case)
  Complex b{};      ///< coefficient of z at infinity (linear-twist case)
  InadmissibleReason reason = InadmissibleReason::None;

  [[nodiscard]] bool admissible() const noexcept { return kind != TransformCase::Inadmissible; }

  /// Exact pole order of the transformed germ (without its linear part).
  [[nodiscard]] Rational target_order() const {
    switch (kind) {
      case TransformCase::FiniteToInfinity: return lambda / (lambda + 1);
      case TransformCase::LinearTwistToFinite: return lambda / (Rational{1} - lambda);
      case TransformCase::InfinityToInfinity: return lambda / (lambda - 1);
      case TransformCase::Inadmissible: break;
    }
    throw Error(ErrorCode::InadmissibleGerm, "no target order for an inadmissible germ");
  }
};

inline const char* to_string(TransformCase c) noexcept {
  switch (c) {
    case TransformCase::FiniteToInfinity: return "finite_to_infinity";
    case TransformCase::LinearTwistToFinite: return "linear_twist_to_finite";
    case TransformCase::InfinityToInfinity: return "infinity_to_infinity";
    case TransformCase::Inadmissible: return "inadmissible";
  }
  return "?";
}

inline const char* to_string(InadmissibleReason r) noexcept {
  switch (r) {
    case InadmissibleReason::None: return "none";
    case InadmissibleReason::Bounded: return "Bounded";
    case InadmissibleReason::Linear: return "Linear";
  }
  return "?";
}

struct LegendrePair {
  DirectedGerm source;
  DirectedGerm target;  ///< read at branch 0 of its direction
  PuiseuxGerm psi;      ///< z - a (finite source) or z (infinite source) as a germ in the target coordinate
  AdmissibilityClass admissibility;
  Complex beta{};            ///< leading coefficient of the dual variable, from the closed-form formula
  double target_lift = 0.0;  ///< lifted target argument obtained by continuity along the source ray
  double residual = 0.0;     ///< max |coeff| of z*w - f(psi) + g over the guaranteed window, relative
  int precision = kDefaultPrecision;
  bool inverse = false;

  /// g without its linear part (the part carrying the pole-order law).
  [[nodiscard]] PuiseuxGerm reduced_target() const {
    if (admissibility.kind != TransformCase::FiniteToInfinity) return target.germ;
    PuiseuxGerm::TermMap t = target.germ.terms();
    t.erase(Rational{1});
    return {target.germ.base(), target.germ.ramification(), std::move(t), target.germ.known_order()};
  }
};

namespace detail {

/// Leading positive term of f, or nullopt if f is bounded; throws when the
/// stored precision cannot decide.
inline std::optional<std::pair<Rational, Complex>> leading_polar_term(const PuiseuxGerm& f) {
  if (!f.empty() && f.terms().begin()->first > Rational{0}) return *f.terms().begin();
  if (f.known_order() && *f.known_order() < Rational{0}) {
    throw Error(ErrorCode::TruncationInsufficient, "pole order not determined by stored terms");
  }
  return std::nullopt;
}

inline PuiseuxGerm without_term(const PuiseuxGerm& f, const Rational& mu) {
  PuiseuxGerm::TermMap t = f.terms();
  t.erase(mu);
  return {f.base(), f.ramification(), std::move(t), f.known_order()};
}

}  // namespace detail

[[nodiscard]] inline AdmissibilityClass classify(const DirectedGerm& f) {
  const PuiseuxGerm& h = f.germ;
  AdmissibilityClass out;
  const auto lead = detail::leading_polar_term(h);
  if (!lead) {
    out.reason = InadmissibleReason::Bounded;
    return out;
  }
  const Rational lambda = lead->first;
  out.lambda = lambda;
  if (h.base().is_finite()) {
    out.kind = TransformCase::FiniteToInfinity;
    return out;
  }
  if (lambda > Rational{1}) {
    out.kind = TransformCase::InfinityToInfinity;
    return out;
  }
  if (lambda < Rational{1}) {
    out.kind = TransformCase::LinearTwistToFinite;
    return out;
  }
  out.b = lead->second;
  const auto rest = detail::leading_polar_term(detail::without_term(h, Rational{1}));
  if (!rest) {
    out.reason = InadmissibleReason::Linear;
    out.lambda = Rational{1};
    return out;
  }
  out.kind = TransformCase::LinearTwistToFinite;
  out.lambda = rest->first;
  return out;
}

namespace detail {

/// Outcome of reverting W = gamma x^(-m) (1 + D(x)) on a chosen branch.
struct Reversion {
  int p = 1;             ///< source ramification (x = z_a^(1/p))
  std::int64_t m = 0;    ///< W ~ x^(-m)
  Complex gamma{};       ///< leading coefficient of W in x
  Complex kappa{};       ///< y = kappa * x * (1 + ...)
  double theta_out = 0;  ///< lifted target argument (of W, resp. of 1/W when m < 0 is read at a finite point)
  series::Series x_of_u; ///< x as a series in u = y / kappa: x = u + ...
  int terms = 0;         ///< guaranteed relative terms

  [[nodiscard]] int target_ramification() const { return static_cast<int>(m > 0 ? m : -m); }
  [[nodiscard]] bool target_at_infinity() const { return m > 0; }
};

/// Argument of the uniformizer x at the source direction.
inline double uniformizer_arg(const BasePoint& base, const Direction& dir, int p) {
  return (base.is_infinity() ? -dir.lifted() : dir.lifted()) / p;
}

/// Dense coefficients of a germ relative to its leading term on the lattice
/// (1/p)Z: out[n] is the coefficient of exponent lead - n/p.
inline series::Series relative_coefficients(const PuiseuxGerm& f, const Rational& lead, int p, int n_terms) {
  series::Series out(static_cast<std::size_t>(n_terms));
  for (const auto& [mu, c] : f.terms()) {
    if (mu > lead) continue;
    const Rational n = (lead - mu) * Rational{p};
    if (!n.is_integer()) throw Error(ErrorCode::DenominatorMismatch, "exponent off the ramification lattice");
    if (n.num() < n_terms) out[static_cast<std::size_t>(n.num())] = c;
  }
  return out;
}

/// Number of lattice steps below `lead` covered by the known order.
inline void require_terms(const PuiseuxGerm& f, const Rational& lead, int p, int n_terms) {
  if (!f.known_order()) return;
  // positions lead - n/p with n < n_terms must satisfy mu > -tau
  const Rational lowest = lead - Rational{n_terms - 1, p};
  if (!(lowest > -*f.known_order())) {
    throw Error(ErrorCode::TruncationInsufficient,
                "germ known to order " + f.known_order()->str() + ", need " + std::to_string(n_terms) + " terms");
  }
}

inline Reversion revert(const PuiseuxGerm& w_of_x, const Direction& dir, int n_terms) {
  const auto lead = pole_order(w_of_x);
  if (!lead || *lead == Rational{0}) throw Error(ErrorCode::NotInvertible, "no dominant term of nonzero order");
  const int p = w_of_x.ramification();
  require_terms(w_of_x, *lead, p, n_terms);
  Reversion r;
  r.p = p;
  r.terms = n_terms;
  const Rational m = *lead * Rational{p};
  r.m = m.num();
  series::Series coeffs = relative_coefficients(w_of_x, *lead, p, n_terms);
  r.gamma = coeffs[0];
  for (auto& c : coeffs) c /= r.gamma;
  const double md = static_cast<double>(r.m);
  const double arg_gamma = std::arg(r.gamma);
  r.theta_out = arg_gamma - md * uniformizer_arg(w_of_x.base(), dir, p);
  r.kappa = std::polar(std::pow(std::abs(r.gamma), -1.0 / md), -arg_gamma / md);
  // u = x * G(x) with G = (1 + D)^(-1/m); revert to x(u).
  const series::Series g = series::pow(coeffs, -1.0 / md, static_cast<std::size_t>(n_terms));
  series::Series xg(static_cast<std::size_t>(n_terms) + 1);
  for (std::size_t i = 0; i < g.size(); ++i) xg[i + 1] = g[i];
  r.x_of_u = series::revert(xg, static_cast<std::size_t>(n_terms) + 1);
  return r;
}

/// Turns sum_n s[n] u^(j0 + n) into a germ in the target coordinate, where
/// u = y / kappa and y^j has pole-scale exponent -j/P. A coefficient that is
/// roundoff against the earlier (more singular) ones is zero.
inline PuiseuxGerm u_series_to_germ(const series::Series& s, std::int64_t j0, const Reversion& r, BasePoint target,
                                    int n_terms) {
  const int big_p = r.target_ramification();
  PuiseuxGerm::TermMap t;
  double running = 0;
  for (int n = 0; n < n_terms && n < static_cast<int>(s.size()); ++n) {
    const std::int64_t j = j0 + n;
    const Complex c = s[static_cast<std::size_t>(n)] * std::pow(r.kappa, -static_cast<double>(j));
    const double mag = std::abs(c);
    if (mag > kZeroTolerance * running) t[Rational{-j, big_p}] += c;
    running = std::max(running, mag);
  }
  return {target, big_p, std::move(t), Rational{j0 + n_terms, big_p}};
}

/// R(u) = x(u)/u, n terms.
inline series::Series ratio_series(const Reversion& r, int n_terms) {
  series::Series out(static_cast<std::size_t>(n_terms));
  for (int i = 0; i < n_terms; ++i) out[static_cast<std::size_t>(i)] = r.x_of_u[static_cast<std::size_t>(i) + 1];
  return out;
}

/// x^(sign*p) = u^(sign*p) * R^(sign*p): the source displacement z - a or z.
inline PuiseuxGerm displacement_germ(const Reversion& r, bool source_infinite, BasePoint target, int n_terms) {
  const int sign = source_infinite ? -1 : 1;
  const series::Series rp =
      series::pow(ratio_series(r, n_terms), static_cast<double>(sign * r.p), static_cast<std::size_t>(n_terms));
  return u_series_to_germ(rp, sign * r.p, r, target, n_terms);
}

}  // namespace detail

/// Inverts the germ w(z) on the branch fixed by dir: returns z - a (finite
/// base) or z (infinity) as a germ in w, read at branch 0 of the target
/// direction. The target is infinity when w has a pole, the point 0 otherwise.
[[nodiscard]] inline DirectedGerm invert_series(const PuiseuxGerm& w_of_z, const Direction& dir,
                                                int precision = kDefaultPrecision) {
  detail::require_same_base(w_of_z, dir);
  const auto r = detail::revert(w_of_z, dir, precision);
  const BasePoint target = r.target_at_infinity() ? BasePoint::infinity() : BasePoint::finite(0.0);
  const Direction out_dir = Direction::from_lift(target, r.theta_out, r.target_ramification());
  const PuiseuxGerm psi = detail::displacement_germ(r, w_of_z.base().is_infinity(), target, precision);
  return {at_branch_zero(psi, out_dir), Direction{target, out_dir.angle, 0}};
}

namespace detail {

/// The closed-form leading coefficient of the dual variable at the source ray.
inline Complex beta_formula(const DirectedGerm& f, const AdmissibilityClass& k, double dual_sign) {
  const double lam = k.lambda.to_double();
  const double phi = f.dir.angle;
  switch (k.kind) {
    case TransformCase::FiniteToInfinity:
      return dual_sign * -lam * std::polar(1.0, -(lam + 1) * phi) * sigma(f.germ, f.dir);
    case TransformCase::LinearTwistToFinite:
      return dual_sign * lam * std::polar(1.0, (lam - 1) * phi) *
             sigma(detail::without_term(f.germ, Rational{1}), f.dir);
    case TransformCase::InfinityToInfinity:
      return dual_sign * lam * std::polar(1.0, (lam - 1) * phi) * sigma(f.germ, f.dir);
    case TransformCase::Inadmissible: break;
  }
  throw Error(ErrorCode::InadmissibleGerm, "beta of an inadmissible germ");
}

/// Term map with a known order but no tolerance dropping, so that residuals
/// report roundoff as it is.
struct RawSeries {
  PuiseuxGerm::TermMap terms;
  KnownOrder known;

  static RawSeries of(const PuiseuxGerm& g) { return {g.terms(), g.known_order()}; }
  static RawSeries monomial(const Rational& mu, Complex c) { return {{{mu, c}}, std::nullopt}; }

  [[nodiscard]] PoleOrder bound() const {
    if (!terms.empty()) return terms.begin()->first;
    if (known) return -*known;
    return std::nullopt;
  }
  [[nodiscard]] bool kept(const Rational& mu) const { return !known || mu > -*known; }
};

inline RawSeries raw_add(const RawSeries& a, const RawSeries& b, Complex sb = 1.0) {
  RawSeries r{{}, min_order(a.known, b.known)};
  for (const auto& [mu, c] : a.terms) {
    if (r.kept(mu)) r.terms[mu] += c;
  }
  for (const auto& [mu, c] : b.terms) {
    if (r.kept(mu)) r.terms[mu] += sb * c;
  }
  return r;
}

inline RawSeries raw_mul(const RawSeries& a, const RawSeries& b) {
  RawSeries r;
  const auto la = a.bound();
  const auto lb = b.bound();
  if (a.known && lb) r.known = min_order(r.known, *a.known - *lb);
  if (b.known && la) r.known = min_order(r.known, *b.known - *la);
  if (a.known && b.known && !la && !lb) r.known = *a.known + *b.known;
  for (const auto& [x, cx] : a.terms) {
    for (const auto& [y, cy] : b.terms) {
      if (r.kept(x + y)) r.terms[x + y] += cx * cy;
    }
  }
  return r;
}

/// psi^s with the leading argument lifted so that arg(psi) continues the
/// source lift `source_theta`.
inline RawSeries lifted_power(const PuiseuxGerm& psi, const Rational& s, double source_theta,
                              const Direction& target_dir) {
  const auto& [nu0, c0] = *psi.terms().begin();
  const double phase = (psi.base().is_infinity() ? 1.0 : -1.0) * nu0.to_double() * target_dir.lifted();
  const double lead_arg = source_theta - phase;
  if (std::abs(wrap_angle(lead_arg - std::arg(c0))) > 1e-6) {
    throw Error(ErrorCode::WrongSector, "inverse series leaves the source sector");
  }
  // delta = psi / (c0 T^nu0) - 1
  const RawSeries unit = RawSeries::monomial(Rational{0}, 1.0);
  RawSeries delta = raw_mul(RawSeries::of(psi), RawSeries::monomial(-nu0, 1.0 / c0));
  delta.terms.erase(Rational{0});
  RawSeries acc = unit;
  RawSeries term = unit;
  const double sd = s.to_double();
  // delta is O(T^step); the series is cut once every new term lies in the remainder
  for (int k = 1; !delta.terms.empty(); ++k) {
    term = raw_mul(term, delta);
    for (auto& [mu, c] : term.terms) c *= (sd - (k - 1)) / k;
    const KnownOrder tau = acc.known;
    if (term.terms.empty() || (tau && !(term.terms.begin()->first > -*tau))) break;
    acc = raw_add(acc, term);
    if (!tau && k > 4096) throw Error(ErrorCode::NoConvergence, "binomial series of an exact germ does not terminate");
  }
  const Complex lead = std::polar(std::pow(std::abs(c0), sd), sd * lead_arg);
  return raw_mul(acc, RawSeries::monomial(nu0 * s, lead));
}

/// Max relative coefficient of z*w - f(psi) + g over the window fixed by the
/// known orders. For the inverse the dual sign flips the z*w term.
inline double defining_identity_residual(const LegendrePair& pair) {
  const PuiseuxGerm& f = pair.source.germ;
  const BasePoint tb = pair.target.germ.base();
  RawSeries w = RawSeries::monomial(Rational{tb.is_infinity() ? 1 : -1}, 1.0);
  if (tb.is_finite()) w.terms[Rational{0}] += tb.value();
  RawSeries z = RawSeries::of(pair.psi);
  if (f.base().is_finite()) z = raw_add(z, RawSeries::monomial(Rational{0}, f.base().value()));
  const double theta_src = pair.source.dir.lifted();
  RawSeries f_of_psi;
  for (const auto& [mu, c] : f.terms()) {
    const Rational s = f.base().is_infinity() ? mu : -mu;
    const RawSeries term = s == Rational{0} ? RawSeries::monomial(Rational{0}, 1.0)
                                            : lifted_power(pair.psi, s, theta_src, pair.target.dir);
    f_of_psi = raw_add(f_of_psi, term, c);
  }
  const RawSeries zw = raw_add(RawSeries{}, raw_mul(z, w), pair.inverse ? -1.0 : 1.0);
  const RawSeries g = RawSeries::of(pair.target.germ);
  RawSeries res = raw_add(zw, f_of_psi, -1.0);
  res = raw_add(res, g);
  // each coefficient against the largest term meeting at its exponent, floored by |f|
  const auto at = [](const RawSeries& s, const Rational& mu) {
    const auto it = s.terms.find(mu);
    return it == s.terms.end() ? 0.0 : std::abs(it->second);
  };
  const double floor = f.max_abs_coefficient();
  double worst = 0;
  for (const auto& [mu, c] : res.terms) {
    const double scale = std::max({floor, at(zw, mu), at(f_of_psi, mu), at(g, mu)});
    worst = std::max(worst, std::abs(c) / scale);
  }
  return worst;
}

inline LegendrePair dual_transform(const DirectedGerm& f, int precision, bool inverse) {
  detail::require_same_base(f.germ, f.dir);
  if (precision < 1) throw Error(ErrorCode::InvalidData, "precision must be positive");
  const AdmissibilityClass k = classify(f);
  if (!k.admissible()) {
    throw Error(ErrorCode::InadmissibleGerm, std::string("germ is ") + to_string(k.reason));
  }
  const double eps = inverse ? -1.0 : 1.0;
  const PuiseuxGerm& h = f.germ;
  const int p = h.ramification();
  const bool src_inf = h.base().is_infinity();
  const PuiseuxGerm reduced = k.kind == TransformCase::LinearTwistToFinite ? without_term(h, Rational{1}) : h;
  // The polar part of g spans q lattice steps; `precision` more are guaranteed below it.
  const std::int64_t q = (k.lambda * Rational{p}).num();
  const int terms = precision + static_cast<int>(q);
  require_terms(reduced, k.lambda, p, terms);

  // Local dual value W = eps * d(reduced)/dz, reverted on the source branch.
  const PuiseuxGerm w_local = scale(derive(reduced), eps);
  const Reversion r = revert(w_local, f.dir, terms);

  BasePoint target = BasePoint::infinity();
  if (k.kind == TransformCase::LinearTwistToFinite) target = BasePoint::finite(eps * k.b);
  const int big_p = r.target_ramification();
  const auto n = static_cast<std::size_t>(terms);

  // out = u^(-q) [ R^(-q) C(uR) - eps*gamma*R^(+-p) ]
  const series::Series c = relative_coefficients(reduced, k.lambda, p, terms);
  const series::Series ratio = ratio_series(r, terms);
  const series::Series x_full = series::resized(r.x_of_u, n);
  series::Series body = series::mul(series::pow(ratio, -static_cast<double>(q), n), series::compose(c, x_full, n), n);
  const series::Series rp = series::pow(ratio, src_inf ? -static_cast<double>(p) : static_cast<double>(p), n);
  for (std::size_t i = 0; i < n; ++i) body[i] -= eps * r.gamma * rp[i];
  PuiseuxGerm g = u_series_to_germ(body, -q, r, target, terms);
  if (h.base().is_finite() && h.base().value() != Complex{}) {
    // translation: z = a + z_a contributes -eps * a * w
    g = add(g, PuiseuxGerm::monomial(target, Rational{1}, -eps * h.base().value(), big_p));
  }
  PuiseuxGerm psi = displacement_germ(r, src_inf, target, terms);

  const Direction lifted = Direction::from_lift(target, r.theta_out, big_p);
  LegendrePair pair;
  pair.source = f;
  pair.admissibility = k;
  pair.precision = precision;
  pair.inverse = inverse;
  pair.target_lift = r.theta_out;
  pair.target = DirectedGerm{at_branch_zero(g, lifted), Direction{target, lifted.angle, 0}};
  pair.psi = at_branch_zero(psi, lifted);
  pair.beta = beta_formula(f, k, eps);
  pair.residual = defining_identity_residual(pair);
  return pair;
}

}  // namespace detail

[[nodiscard]] inline LegendrePair legendre_transform(const DirectedGerm& f, int precision = kDefaultPrecision) {
  return detail::dual_transform(f, precision, false);
}

[[nodiscard]] inline LegendrePair inverse_legendre(const DirectedGerm& g, int precision = kDefaultPrecision) {
  return detail::dual_transform(g, precision, true);
}

}  // namespace sphase
