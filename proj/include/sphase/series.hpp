#pragma once

// Dense truncated power series in one variable u: coefficients of u^0 .. u^(n-1).

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "sphase/error.hpp"

namespace sphase::series {

using Complex = std::complex<double>;
using Series = std::vector<Complex>;

inline Series resized(Series a, std::size_t n) {
  a.resize(n);
  return a;
}

inline Series mul(const Series& a, const Series& b, std::size_t n) {
  Series c(n);
  for (std::size_t i = 0; i < std::min(a.size(), n); ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; j < std::min(b.size(), n - i); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

/// a^alpha for a[0] == 1 (J.C.P. Miller recurrence; exact for integer alpha).
inline Series pow(const Series& a, double alpha, std::size_t n) {
  Series b(n);
  if (n == 0) return b;
  b[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    Complex s{};
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) {
      s += (alpha * static_cast<double>(j) - static_cast<double>(k - j)) * a[j] * b[k - j];
    }
    b[k] = s / static_cast<double>(k);
  }
  return b;
}

/// 1/a for a[0] != 0.
inline Series inverse(const Series& a, std::size_t n) {
  Series b(n);
  if (n == 0) return b;
  b[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    Complex s{};
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * b[k - j];
    b[k] = -s * b[0];
  }
  return b;
}

/// a(b(u)) for b[0] == 0, by Horner's scheme.
inline Series compose(const Series& a, const Series& b, std::size_t n) {
  Series r(n);
  for (std::size_t i = std::min(a.size(), n); i-- > 0;) {
    r = mul(r, b, n);
    r[0] += a[i];
  }
  return r;
}

inline Series derivative(const Series& a) {
  if (a.size() <= 1) return {};
  Series d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<double>(i);
  return d;
}

/// Compositional inverse of F = u + f_2 u^2 + ...: returns X with F(X(u)) = u + O(u^n).
/// Newton iteration X <- X - (F(X) - u) / F'(X), doubling the precision each step.
inline Series revert(const Series& f, std::size_t n) {
  if (f.size() < 2 || f[0] != Complex{} || std::abs(f[1] - Complex{1.0}) > 1e-12) {
    throw Error(ErrorCode::NotInvertible, "reversion needs F = u + O(u^2)");
  }
  const Series df = derivative(f);
  Series x{Complex{}, Complex{1.0}};
  std::size_t prec = 2;
  auto newton_step = [&](std::size_t m) {
    x.resize(m);
    Series fx = compose(f, x, m);
    fx[1] -= 1.0;
    const Series step = mul(fx, inverse(compose(df, x, m), m), m);
    for (std::size_t i = 0; i < m; ++i) x[i] -= step[i];
  };
  while (prec < n) {
    prec = std::min(2 * prec, n);
    newton_step(prec);
  }
  newton_step(n);
  // Acceptance is the residual, measured against the magnitude of the terms
  // that produced each coefficient.
  Series check = compose(f, x, n);
  if (n > 1) check[1] -= 1.0;
  Series abs_f(f.size()), abs_x(x.size());
  std::transform(f.begin(), f.end(), abs_f.begin(), [](Complex c) { return Complex{std::abs(c)}; });
  std::transform(x.begin(), x.end(), abs_x.begin(), [](Complex c) { return Complex{std::abs(c)}; });
  const Series bound = compose(abs_f, abs_x, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(check[i]) <= 1e-10 * bound[i].real() + 1e-300)) {
      throw Error(ErrorCode::NoConvergence, "series reversion residual did not contract");
    }
  }
  return resized(std::move(x), n);
}

}  // namespace sphase::series
