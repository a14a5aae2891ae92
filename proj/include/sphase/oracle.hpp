#pragma once

/// Numeric checks that do not go through series reversion.
///
/// Everything is evaluated in the source uniformizer x (z - a = x^p at a
/// finite point, z = x^(-p) at infinity), where every stored term is an
/// integer power of x and no branch cut is crossed. The branch enters only
/// through the argument of x on the source ray.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sphase/error.hpp"
#include "sphase/legendre.hpp"
#include "sphase/puiseux.hpp"

namespace sphase {

struct SaddleSample {
  Complex w{};
  Complex z_star{};
  Complex g_series{};
  Complex g_saddle{};
  double radius = 0.0;
  double error = 0.0;
};

struct SaddleCheck {
  std::vector<Complex> w_samples;
  std::vector<SaddleSample> per_sample;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  ///< error / max(1, |g|)
  /// Log-log slope of error against radius (when at least two errors are above roundoff).
  std::optional<double> fitted_exponent;
  /// Exponent of the first term beyond the guaranteed window.
  std::optional<double> predicted_exponent;
};

namespace detail {

/// Terms of a germ as integer powers of the uniformizer: c * x^n.
struct XSeries {
  std::vector<std::pair<std::int64_t, Complex>> terms;

  [[nodiscard]] Complex operator()(Complex x) const {
    Complex s{};
    for (const auto& [n, c] : terms) s += c * std::pow(x, static_cast<double>(n));
    return s;
  }
  [[nodiscard]] Complex derivative(Complex x) const {
    Complex s{};
    for (const auto& [n, c] : terms) {
      if (n != 0) s += c * static_cast<double>(n) * std::pow(x, static_cast<double>(n - 1));
    }
    return s;
  }
};

/// Pole-scale exponent mu becomes x^(-p*mu) in both base conventions.
inline XSeries in_uniformizer(const PuiseuxGerm& f, int p, bool drop_constant = false) {
  XSeries s;
  for (const auto& [mu, c] : f.terms()) {
    if (drop_constant && mu == Rational{0}) continue;
    const Rational n = -mu * Rational{p};
    s.terms.emplace_back(n.num(), c);
  }
  return s;
}

/// z - a = x^p, resp. z = x^(-p), as a function of x.
inline Complex z_of_x(const BasePoint& base, int p, Complex x) {
  return base.is_infinity() ? std::pow(x, -static_cast<double>(p)) : base.value() + std::pow(x, static_cast<double>(p));
}

/// Saddle-equation data shared by the solver and the direction check.
struct SaddleEquation {
  int p = 1;
  double arg_x = 0.0;  ///< argument of x on the source ray
  Complex b{};         ///< constant part of the dual variable
  XSeries dual;        ///< dual variable minus b, in x
  std::int64_t m = 0;  ///< dual ~ gamma * x^(-m)
  Complex gamma{};
  double lambda = 1.0;
};

inline SaddleEquation saddle_equation(const DirectedGerm& f, double dual_sign) {
  require_same_base(f.germ, f.dir);
  SaddleEquation e;
  e.p = f.germ.ramification();
  e.arg_x = uniformizer_arg(f.germ.base(), f.dir, e.p);
  const PuiseuxGerm d = scale(derive(f.germ), dual_sign);
  e.b = d.coefficient(Rational{0});
  e.dual = in_uniformizer(d, e.p, true);
  if (e.dual.terms.empty()) throw Error(ErrorCode::InadmissibleGerm, "dual variable is constant");
  std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
  for (const auto& [n, c] : e.dual.terms) {
    if (n < lowest) {
      lowest = n;
      e.gamma = c;
    }
  }
  e.m = -lowest;
  if (e.m == 0) throw Error(ErrorCode::InadmissibleGerm, "dual variable has no dominant term");
  const auto ord = pole_order(f.germ.base().is_infinity() && f.germ.coefficient(Rational{1}) != Complex{}
                                  ? without_term(f.germ, Rational{1})
                                  : f.germ);
  e.lambda = ord ? std::abs(ord->to_double()) : 1.0;
  return e;
}

/// Newton in x for dual(x) = target, target being w - b given directly;
/// returns the uniformizer value of the saddle point.
inline Complex solve_saddle_offset(const SaddleEquation& e, Complex target) {
  if (target == Complex{}) throw Error(ErrorCode::NoConvergence, "w sits at the target point");
  const double md = static_cast<double>(e.m);
  const Complex ratio = e.gamma / target;
  const double mod = std::pow(std::abs(ratio), 1.0 / md);
  double best = std::numeric_limits<double>::infinity();
  Complex x;
  const auto roots = static_cast<std::int64_t>(e.m > 0 ? e.m : -e.m);
  for (std::int64_t j = 0; j < roots; ++j) {
    const double a = (std::arg(ratio) + kTwoPi * static_cast<double>(j)) / md;
    const double dist = std::abs(wrap_angle(a - e.arg_x));
    if (dist < best) {
      best = dist;
      x = std::polar(mod, a);
    }
  }
  const double scale_ref = std::abs(target);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const Complex r = e.dual(x) - target;
    if (std::abs(r) <= 1e-13 * scale_ref) {
      converged = true;
      break;
    }
    const Complex step = r / e.dual.derivative(x);
    x -= step;
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) break;
    if (std::abs(step) <= 1e-16 * std::abs(x)) {
      converged = std::abs(e.dual(x) - target) <= 1e-10 * scale_ref;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "saddle Newton iteration did not converge");
  const double half_width = kPi / (4.0 * std::max(e.lambda, 0.5)) / e.p;
  if (std::abs(wrap_angle(std::arg(x) - e.arg_x)) > half_width) {
    throw Error(ErrorCode::WrongSector, "saddle point left the source sector");
  }
  return x;
}

inline Complex solve_saddle_x(const SaddleEquation& e, Complex w) { return solve_saddle_offset(e, w - e.b); }

}  // namespace detail

/// Root z of f'(z) = w on the branch of f.dir (dual_sign -1 solves f'(z) = -w).
[[nodiscard]] inline Complex solve_saddle(const DirectedGerm& f, Complex w, double dual_sign = 1.0) {
  const auto e = detail::saddle_equation(f, dual_sign);
  return detail::z_of_x(f.germ.base(), e.p, detail::solve_saddle_x(e, w));
}

namespace detail {

/// Least-squares slope of log(err) against log(r) over samples whose error
/// exceeds rel_floor * max(1, |g|).
inline std::optional<double> loglog_slope(const std::vector<SaddleSample>& s, double rel_floor) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& x : s) {
    if (x.error > rel_floor * std::max(1.0, std::abs(x.g_saddle))) pts.emplace_back(std::log(x.radius), std::log(x.error));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (const auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

/// Radii inside the asymptotic window of the pair: the saddle point sits at
/// |x| = s * rho for s in {1/10, 1/20, 1/40, 1/80}, rho being the radius of
/// convergence of the dual variable relative to its leading term, estimated
/// from the available coefficients.
[[nodiscard]] inline std::vector<double> suggested_radii(const LegendrePair& pair) {
  const auto e = detail::saddle_equation(pair.source, pair.inverse ? -1.0 : 1.0);
  double growth = 0.0;
  for (const auto& [n, c] : e.dual.terms) {
    const std::int64_t k = n + e.m;
    if (k > 0) growth = std::max(growth, std::pow(std::abs(c / e.gamma), 1.0 / static_cast<double>(k)));
  }
  const double rho = growth > 0.0 ? std::min(1.0, 1.0 / growth) : 1.0;
  const bool at_infinity = pair.target.dir.base.is_infinity();
  std::vector<double> radii;
  for (const double s : {0.1, 0.05, 0.025, 0.0125}) {
    const double dw = std::abs(e.gamma) * std::pow(s * rho, -static_cast<double>(e.m));
    radii.push_back(at_infinity ? dw : 1.0 / dw);
  }
  return radii;
}

/// Compares the series g with f(z*) - z* w at w on the target ray. A radius r
/// means |w| = r at infinity and |w - b| = 1/r at a finite b, so growing radii
/// approach the target point and the error of a truncated g behaves like
/// r^(first omitted exponent).
[[nodiscard]] inline SaddleCheck verify_pair(const LegendrePair& pair, const std::vector<double>& radii) {
  const double eps = pair.inverse ? -1.0 : 1.0;
  const DirectedGerm& src = pair.source;
  const auto e = detail::saddle_equation(src, eps);
  const BasePoint tb = pair.target.dir.base;
  const Direction& eta = pair.target.dir;

  // f(z) - eps*z*w cancels badly when f has a linear part; split it off:
  // f = rest + lin with eps*b the derivative of lin, so the value is
  // rest(z) - eps*z*(w - b) + lin(z) - eps*b*z, the last two being exactly
  // 0 at infinity and -c*a at a finite point a.
  const bool src_inf = src.germ.base().is_infinity();
  const Rational lin_mu = src_inf ? Rational{1} : Rational{-1};
  const Complex lin_c = src.germ.coefficient(lin_mu);
  const detail::XSeries rest_x = detail::in_uniformizer(detail::without_term(src.germ, lin_mu), e.p);
  const Complex lin_const = src_inf ? Complex{} : -lin_c * src.germ.base().value();

  SaddleCheck out;
  for (const double r : radii) {
    Complex w = std::polar(tb.is_infinity() ? r : 1.0 / r, eta.angle);
    Complex offset = w - e.b;
    if (!tb.is_infinity()) {
      w += tb.value();
      // the offset as the evaluation will see it
      offset = (w - tb.value()) + (tb.value() - e.b);
    }
    const Complex x = detail::solve_saddle_offset(e, offset);
    const Complex z = detail::z_of_x(src.germ.base(), e.p, x);
    SaddleSample s;
    s.w = w;
    s.z_star = z;
    s.radius = r;
    s.g_saddle = rest_x(x) - eps * z * offset + lin_const;
    s.g_series = evaluate(pair.target.germ, w, eta);
    s.error = std::abs(s.g_series - s.g_saddle);
    out.max_abs_error = std::max(out.max_abs_error, s.error);
    out.max_rel_error = std::max(out.max_rel_error, s.error / std::max(1.0, std::abs(s.g_saddle)));
    out.w_samples.push_back(w);
    out.per_sample.push_back(s);
  }
  out.fitted_exponent = detail::loglog_slope(out.per_sample, 1e-12);

  // a truncated source cannot be extended, so it has no prediction
  if (const auto& tau = pair.target.germ.known_order(); tau && !src.germ.known_order()) {
    const LegendrePair longer = pair.inverse ? inverse_legendre(src, pair.precision + 8)
                                             : legendre_transform(src, pair.precision + 8);
    for (const auto& [mu, c] : longer.target.germ.terms()) {
      if (!(mu > -*tau)) {
        out.predicted_exponent = mu.to_double();
        break;
      }
    }
  }
  return out;
}

/// Angular distance between the limit direction of the dual variable along
/// the source ray and eta_predicted.
[[nodiscard]] inline double verify_direction(const DirectedGerm& f, const Direction& eta_predicted,
                                             double dual_sign = 1.0) {
  const auto e = detail::saddle_equation(f, dual_sign);
  // unit(dual(x)) is smooth in s = |x|; extrapolate s -> 0 by Neville on a
  // geometric sequence, after removing the exact leading rotation.
  constexpr int kLevels = 8;
  const double md = static_cast<double>(e.m);
  const Complex lead_dir = std::polar(1.0, std::arg(e.gamma) - md * e.arg_x);
  std::vector<double> s(kLevels);
  std::vector<Complex> v(kLevels);
  double spread = 0;
  for (const auto& [n, c] : e.dual.terms) spread = std::max(spread, std::abs(c / e.gamma));
  const double s0 = 0.05 / (1.0 + spread);
  for (int k = 0; k < kLevels; ++k) {
    s[k] = s0 * std::pow(0.5, k);
    const Complex val = e.dual(std::polar(s[k], e.arg_x));
    v[k] = val / std::abs(val) / lead_dir;
  }
  for (int level = 1; level < kLevels; ++level) {
    for (int k = kLevels - 1; k >= level; --k) {
      v[k] = (s[k - level] * v[k] - s[k] * v[k - 1]) / (s[k - level] - s[k]);
    }
  }
  const double observed = std::arg(lead_dir) + std::arg(v[kLevels - 1]);
  return std::abs(wrap_angle(observed - eta_predicted.angle));
}

}  // namespace sphase
