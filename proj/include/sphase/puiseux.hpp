#pragma once

/// Truncated Puiseux germs at a point of the projective line.
///
/// A germ is stored in the pole scale: f = sum c_mu * z_a^(-mu), so a
/// positive exponent is a pole. At infinity z_inf = 1/z, hence the stored
/// term c_mu means c_mu * z^mu. Exponents are exact rationals and live in
/// (1/p)Z for the germ's ramification p; coefficients are complex doubles.
///
/// known_order tau records precision: the germ equals its stored terms plus
/// an unknown O(z_a^tau). An empty optional means the germ is exact.
///
/// Directions carry an integer branch k; the lifted argument is
/// Theta = angle + 2*pi*k. At a finite point Theta is the argument of z - a,
/// at infinity it is the argument of z. A stored term is evaluated as
/// |z_a|^(-mu) * exp(-i*mu*Theta) (finite) or |z|^mu * exp(+i*mu*Theta)
/// (infinity).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "sphase/error.hpp"
#include "sphase/rational.hpp"

namespace sphase {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A computed coefficient counts as zero when it is below this fraction of the
/// magnitudes that produced it (the operands at the same exponent).
inline constexpr double kZeroTolerance = 1e-10;

/// Real or imaginary parts below this, relative to the coefficient's modulus, are set to zero.
inline constexpr double kRoundoffSnap = 1e-14;

/// Reduce an angle to [0, 2*pi).
inline double mod_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

/// Reduce an angle to (-pi, pi].
inline double wrap_angle(double x) {
  double r = mod_two_pi(x);
  if (r > kPi) r -= kTwoPi;
  return r;
}

/// exp(i * 2*pi * r) for a rational r, reduced mod 1 first so that integer
/// multiples give exactly 1.
inline Complex unit_phase(const Rational& r) {
  const Rational frac = r - Rational{r.floor()};
  if (frac == Rational{0}) return {1.0, 0.0};
  if (frac == Rational{1, 2}) return {-1.0, 0.0};
  if (frac == Rational{1, 4}) return {0.0, 1.0};
  if (frac == Rational{3, 4}) return {0.0, -1.0};
  return std::polar(1.0, kTwoPi * frac.to_double());
}

class BasePoint {
 public:
  static BasePoint finite(Complex a) { return BasePoint{false, a}; }
  static BasePoint infinity() { return BasePoint{true, {}}; }

  [[nodiscard]] bool is_infinity() const noexcept { return infinite_; }
  [[nodiscard]] bool is_finite() const noexcept { return !infinite_; }
  /// The point a; zero at infinity.
  [[nodiscard]] Complex value() const noexcept { return a_; }

  friend bool operator==(const BasePoint& x, const BasePoint& y) noexcept {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
    return x.a_ == y.a_;
  }

 private:
  BasePoint(bool inf, Complex a) : infinite_{inf}, a_{a} {}
  bool infinite_ = true;
  Complex a_{};
};

/// Base points agree, finite ones up to an absolute tolerance.
inline bool same_point(const BasePoint& x, const BasePoint& y, double tol = 1e-9) {
  if (x.is_infinity() || y.is_infinity()) return x.is_infinity() == y.is_infinity();
  return std::abs(x.value() - y.value()) <= tol * std::max(1.0, std::abs(x.value()));
}

struct Direction {
  BasePoint base = BasePoint::infinity();
  double angle = 0.0;  ///< in [0, 2*pi)
  int branch = 0;      ///< 0 <= branch < ramification of the germ it is used with

  [[nodiscard]] double lifted() const noexcept { return angle + kTwoPi * branch; }

  /// Direction whose lift is theta, with the branch reduced modulo p.
  static Direction from_lift(BasePoint base, double theta, int p) {
    const double turns = std::floor(theta / kTwoPi);
    double angle = theta - turns * kTwoPi;
    auto k = static_cast<std::int64_t>(turns);
    if (angle >= kTwoPi) {
      angle -= kTwoPi;
      ++k;
    }
    if (angle < 0) angle = 0;
    k %= p;
    if (k < 0) k += p;
    return Direction{base, angle, static_cast<int>(k)};
  }
};

enum class Comparison { Equivalent, StrictlyBelow, StrictlyAbove, Incomparable };

inline const char* to_string(Comparison c) noexcept {
  switch (c) {
    case Comparison::Equivalent: return "Equivalent";
    case Comparison::StrictlyBelow: return "StrictlyBelow";
    case Comparison::StrictlyAbove: return "StrictlyAbove";
    case Comparison::Incomparable: return "Incomparable";
  }
  return "?";
}

/// Precision of a germ: nullopt means exact.
using KnownOrder = std::optional<Rational>;

/// Pole order: nullopt stands for -infinity (the zero germ).
using PoleOrder = std::optional<Rational>;

inline KnownOrder min_order(const KnownOrder& a, const KnownOrder& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

class PuiseuxGerm {
 public:
  using TermMap = std::map<Rational, Complex, std::greater<>>;

  PuiseuxGerm() : PuiseuxGerm(BasePoint::infinity(), 1, {}) {}

  /// Builds a germ, dropping zero coefficients and terms inside the
  /// O(z_a^tau) remainder. Cancellation is judged by the operations that
  /// produce coefficients (see add and mul), never against other exponents.
  PuiseuxGerm(BasePoint base, int ramification, TermMap terms, KnownOrder known = std::nullopt)
      : base_{base}, ramification_{ramification}, terms_{std::move(terms)}, known_{known} {
    if (ramification_ < 1) throw Error(ErrorCode::InvalidData, "ramification must be positive");
    for (auto it = terms_.begin(); it != terms_.end();) {
      const bool in_remainder = known_ && !(it->first > -*known_);
      Complex& c = it->second;
      if (c == Complex{} || !std::isfinite(std::abs(c)) || in_remainder) {
        if (c != Complex{} && !in_remainder) throw Error(ErrorCode::InvalidData, "non-finite coefficient");
        it = terms_.erase(it);
        continue;
      }
      // a component at roundoff level of the coefficient itself is noise
      const double mag = std::abs(c);
      if (std::abs(c.real()) <= kRoundoffSnap * mag) c.real(0.0);
      if (std::abs(c.imag()) <= kRoundoffSnap * mag) c.imag(0.0);
      if (ramification_ % it->first.den() != 0) {
        throw Error(ErrorCode::DenominatorMismatch,
                    "exponent " + it->first.str() + " not in (1/" + std::to_string(ramification_) + ")Z");
      }
      ++it;
    }
  }

  static PuiseuxGerm monomial(BasePoint base, Rational mu, Complex c, int ramification = 0) {
    const int p = ramification > 0 ? ramification : static_cast<int>(mu.den());
    return PuiseuxGerm(base, p, TermMap{{mu, c}});
  }

  static PuiseuxGerm zero(BasePoint base, KnownOrder known = std::nullopt) {
    return PuiseuxGerm(base, 1, {}, known);
  }

  [[nodiscard]] const BasePoint& base() const noexcept { return base_; }
  [[nodiscard]] int ramification() const noexcept { return ramification_; }
  [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
  [[nodiscard]] const KnownOrder& known_order() const noexcept { return known_; }
  [[nodiscard]] bool is_exact() const noexcept { return !known_.has_value(); }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

  [[nodiscard]] Complex coefficient(const Rational& mu) const {
    auto it = terms_.find(mu);
    return it == terms_.end() ? Complex{} : it->second;
  }

  [[nodiscard]] double max_abs_coefficient() const {
    double m = 0;
    for (const auto& [mu, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Lattice actually used by the stored exponents (lcm of denominators).
  [[nodiscard]] int exponent_lattice() const {
    std::int64_t l = 1;
    for (const auto& [mu, c] : terms_) l = lcm(l, mu.den());
    return static_cast<int>(l);
  }

  /// Same terms, new ramification (must be a multiple of the exponent lattice).
  [[nodiscard]] PuiseuxGerm with_ramification(int p) const { return {base_, p, terms_, known_}; }
  [[nodiscard]] PuiseuxGerm with_known_order(KnownOrder k) const { return {base_, ramification_, terms_, k}; }

 private:
  BasePoint base_;
  int ramification_ = 1;
  TermMap terms_;
  KnownOrder known_;
};

namespace detail {

inline void require_same_base(const PuiseuxGerm& f, const PuiseuxGerm& g) {
  if (!(f.base() == g.base())) throw Error(ErrorCode::MismatchedBasePoint, "germs live at different base points");
}

inline void require_same_base(const PuiseuxGerm& f, const Direction& d) {
  if (!(f.base() == d.base)) throw Error(ErrorCode::MismatchedBasePoint, "direction at a different base point");
}

/// Upper bound for the exponents the germ can carry, stored or not.
inline PoleOrder order_bound(const PuiseuxGerm& f) {
  if (!f.empty()) return f.terms().begin()->first;
  if (f.known_order()) return -*f.known_order();
  return std::nullopt;
}

/// exp(i * sign * mu * theta) with sign = -1 at finite points and +1 at infinity.
inline Complex direction_phase(const BasePoint& base, const Rational& mu, double theta) {
  const double s = base.is_infinity() ? 1.0 : -1.0;
  return std::polar(1.0, s * mu.to_double() * theta);
}

}  // namespace detail

[[nodiscard]] inline PuiseuxGerm scale(const PuiseuxGerm& f, Complex s) {
  PuiseuxGerm::TermMap t;
  for (const auto& [mu, c] : f.terms()) t[mu] = c * s;
  return {f.base(), f.ramification(), std::move(t), f.known_order()};
}

[[nodiscard]] inline PuiseuxGerm add(const PuiseuxGerm& f, const PuiseuxGerm& g) {
  detail::require_same_base(f, g);
  PuiseuxGerm::TermMap t = f.terms();
  for (const auto& [mu, c] : g.terms()) {
    const Complex a = t[mu];
    const Complex sum = a + c;
    t[mu] = std::abs(sum) <= kZeroTolerance * std::max(std::abs(a), std::abs(c)) ? Complex{} : sum;
  }
  return {f.base(), static_cast<int>(lcm(f.ramification(), g.ramification())), std::move(t),
          min_order(f.known_order(), g.known_order())};
}

[[nodiscard]] inline PuiseuxGerm negate(const PuiseuxGerm& f) { return scale(f, -1.0); }

[[nodiscard]] inline PuiseuxGerm sub(const PuiseuxGerm& f, const PuiseuxGerm& g) { return add(f, negate(g)); }

[[nodiscard]] inline PuiseuxGerm mul(const PuiseuxGerm& f, const PuiseuxGerm& g) {
  detail::require_same_base(f, g);
  KnownOrder known;
  const auto lf = detail::order_bound(f);
  const auto lg = detail::order_bound(g);
  if (f.known_order() && lg) known = min_order(known, *f.known_order() - *lg);
  if (g.known_order() && lf) known = min_order(known, *g.known_order() - *lf);
  if (f.known_order() && g.known_order() && !lf && !lg) known = *f.known_order() + *g.known_order();
  PuiseuxGerm::TermMap t;
  std::map<Rational, double, std::greater<>> magnitude;
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) {
      const Rational e = a + b;
      if (known && !(e > -*known)) continue;
      t[e] += ca * cb;
      magnitude[e] += std::abs(ca) * std::abs(cb);
    }
  }
  for (auto& [e, c] : t) {
    if (std::abs(c) <= kZeroTolerance * magnitude[e]) c = Complex{};
  }
  return {f.base(), static_cast<int>(lcm(f.ramification(), g.ramification())), std::move(t), known};
}

/// Derivative with respect to the global coordinate z.
[[nodiscard]] inline PuiseuxGerm derive(const PuiseuxGerm& f) {
  PuiseuxGerm::TermMap t;
  const bool inf = f.base().is_infinity();
  for (const auto& [mu, c] : f.terms()) {
    if (mu == Rational{0}) continue;
    if (inf) {
      t[mu - 1] = c * mu.to_double();  // d/dz z^mu = mu z^(mu-1)
    } else {
      t[mu + 1] = -c * mu.to_double();  // d/dz z_a^(-mu) = -mu z_a^(-mu-1)
    }
  }
  KnownOrder known;
  if (f.known_order()) known = inf ? *f.known_order() + 1 : *f.known_order() - 1;
  return {f.base(), f.ramification(), std::move(t), known};
}

/// Largest stored exponent; nullopt (-infinity) for a vanishing germ.
[[nodiscard]] inline PoleOrder pole_order(const PuiseuxGerm& f) {
  if (!f.empty()) return f.terms().begin()->first;
  if (f.is_exact() || *f.known_order() > Rational{0}) return std::nullopt;
  throw Error(ErrorCode::IndeterminateOrder, "no stored terms and known_order <= 0");
}

/// Terms with positive exponent; the canonical class representative.
[[nodiscard]] inline PuiseuxGerm polar_part(const PuiseuxGerm& f) {
  if (f.known_order() && *f.known_order() < Rational{0}) {
    throw Error(ErrorCode::TruncationInsufficient, "polar part not determined by known_order");
  }
  PuiseuxGerm::TermMap t;
  for (const auto& [mu, c] : f.terms()) {
    if (mu > Rational{0}) t.emplace(mu, c);
  }
  return {f.base(), f.ramification(), std::move(t)};
}

/// Analytic continuation j times counterclockwise around the base point
/// (in the local coordinate): c_mu -> c_mu * exp(-2*pi*i*mu*j).
[[nodiscard]] inline PuiseuxGerm monodromy(const PuiseuxGerm& f, std::int64_t times = 1) {
  PuiseuxGerm::TermMap t;
  for (const auto& [mu, c] : f.terms()) t[mu] = c * unit_phase(-mu * Rational{times});
  return {f.base(), f.ramification(), std::move(t), f.known_order()};
}

/// Re-expresses a germ given at dir so that it is read with branch 0: the
/// returned coefficients evaluated at Theta = dir.angle give the same function.
[[nodiscard]] inline PuiseuxGerm at_branch_zero(const PuiseuxGerm& f, const Direction& dir) {
  if (dir.branch == 0) return f;
  return monodromy(f, f.base().is_infinity() ? -dir.branch : dir.branch);
}

/// Leading coefficient as seen through the determination fixed by dir.
[[nodiscard]] inline Complex sigma(const PuiseuxGerm& f, const Direction& dir) {
  detail::require_same_base(f, dir);
  if (f.empty()) throw Error(ErrorCode::ZeroGerm, "sigma of a germ without leading term");
  const auto& [mu, c] = *f.terms().begin();
  const Rational shift = mu * Rational{dir.branch};
  return c * unit_phase(f.base().is_infinity() ? shift : -shift);
}

namespace detail {

/// Leading polar term of h - f, or nullopt when the difference is bounded.
inline std::optional<std::pair<Rational, Complex>> leading_unbounded(const PuiseuxGerm& f, const PuiseuxGerm& h) {
  const PuiseuxGerm d = sub(h, f);
  if (!d.empty() && d.terms().begin()->first > Rational{0}) return *d.terms().begin();
  if (d.known_order() && *d.known_order() < Rational{0}) {
    throw Error(ErrorCode::TruncationInsufficient, "difference not determined up to bounded terms");
  }
  return std::nullopt;
}

}  // namespace detail

/// [f] == [h], i.e. h - f is bounded.
[[nodiscard]] inline bool same_class(const PuiseuxGerm& f, const PuiseuxGerm& h) {
  detail::require_same_base(f, h);
  return !detail::leading_unbounded(f, h).has_value();
}

/// Position of h relative to f at dir (StrictlyBelow means h is dominated by f).
[[nodiscard]] inline Comparison compare_at(const PuiseuxGerm& f, const PuiseuxGerm& h, const Direction& dir) {
  detail::require_same_base(f, h);
  detail::require_same_base(f, dir);
  const auto lead = detail::leading_unbounded(f, h);
  if (!lead) return Comparison::Equivalent;
  const auto& [lambda, c] = *lead;
  const double r = (c * detail::direction_phase(f.base(), lambda, dir.lifted())).real();
  if (std::abs(r) <= kZeroTolerance * std::abs(c)) return Comparison::Incomparable;
  return r < 0 ? Comparison::StrictlyBelow : Comparison::StrictlyAbove;
}

/// Lifted Stokes directions of the pair on [0, 2*pi*p), p = lcm of ramifications,
/// sorted by lift.
[[nodiscard]] inline std::vector<Direction> stokes_directions(const PuiseuxGerm& f, const PuiseuxGerm& h) {
  detail::require_same_base(f, h);
  const auto lead = detail::leading_unbounded(f, h);
  if (!lead) return {};
  const auto& [lambda, c] = *lead;
  const int p = static_cast<int>(lcm(f.ramification(), h.ramification()));
  const double lam = lambda.to_double();
  const double spacing = kPi / lam;
  // zeros of cos(arg c - lambda*Theta) (finite) or cos(arg c + lambda*Theta) (infinity)
  const double first = f.base().is_infinity() ? (kPi / 2 - std::arg(c)) / lam : (std::arg(c) - kPi / 2) / lam;
  double start = std::fmod(first, spacing);
  if (start < 0) start += spacing;
  const auto count = static_cast<int>((Rational{2 * p} * lambda).floor());
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out.push_back(Direction::from_lift(f.base(), start + j * spacing, p));
  return out;
}

/// Numeric value at the point z, reading fractional powers through the lift of
/// dir continued to arg(z). radius_bound limits |z_a| (finite) or |1/z| (infinity).
[[nodiscard]] inline Complex evaluate(const PuiseuxGerm& f, Complex z, const Direction& dir,
                                      double radius_bound = std::numeric_limits<double>::infinity()) {
  detail::require_same_base(f, dir);
  if (f.empty()) return {};
  const bool inf = f.base().is_infinity();
  const Complex local = inf ? z : z - f.base().value();
  const double t = std::abs(local);
  if (t == 0.0) throw Error(ErrorCode::OutOfSector, "evaluation at the base point");
  const double lam = std::max(1.0, f.terms().begin()->first.to_double());
  const double offset = wrap_angle(std::arg(local) - dir.angle);
  if (std::abs(offset) > kPi / (2 * lam) + 1e-12) throw Error(ErrorCode::OutOfSector, "point outside the sector");
  if ((inf ? 1.0 / t : t) > radius_bound) throw Error(ErrorCode::OutOfSector, "point outside the radius bound");
  const double theta = dir.lifted() + offset;
  Complex sum{};
  for (const auto& [mu, c] : f.terms()) {
    const double e = mu.to_double();
    sum += c * std::pow(t, inf ? e : -e) * detail::direction_phase(f.base(), mu, theta);
  }
  return sum;
}

}  // namespace sphase
