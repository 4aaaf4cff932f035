// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "moe/core/errors.hpp"

namespace moe::wireless {

namespace detail {

inline constexpr int kGammaMaxIterations = 10000;
inline constexpr double kGammaEps = 1e-16;

// log of x^a e^{-x} / Gamma(a)
inline double gamma_prefactor_log(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

// Series for P(a, x); converges quickly for x < a + 1.
inline double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kGammaMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(gamma_prefactor_log(a, x));
}

// Modified Lentz continued fraction for Q(a, x); used for x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(gamma_prefactor_log(a, x)) * h;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
///
/// For integer a this is the Poisson tail 1 - e^{-x} sum_{k<a} x^k/k!, i.e. the
/// CDF of a Gamma(a, 1) variable. Throws DomainError unless a > 0 and x >= 0.
inline double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("regularized_lower_gamma: shape must be positive, got " + std::to_string(a));
  }
  if (!(x >= 0.0)) {
    throw DomainError("regularized_lower_gamma: argument must be nonnegative, got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return detail::lower_gamma_series(a, x);
  return 1.0 - detail::upper_gamma_fraction(a, x);
}

/// Complement Q(a, x) = 1 - P(a, x), computed without cancellation.
inline double regularized_upper_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("regularized_upper_gamma: shape must be positive");
  if (!(x >= 0.0)) throw DomainError("regularized_upper_gamma: argument must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - detail::lower_gamma_series(a, x);
  return detail::upper_gamma_fraction(a, x);
}

}  // namespace moe::wireless
