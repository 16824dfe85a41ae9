#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's GL or residual code paths.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracles {

/// Unit-step response of 1 / (s + 1).
inline double first_order_step(double t) { return 1.0 - std::exp(-t); }

/// Unit-step response of w^2 / (s^2 + 2 zeta w s + w^2), 0 < zeta < 1.
inline double second_order_step(double t, double zeta, double w) {
  const double wd = w * std::sqrt(1.0 - zeta * zeta);
  return 1.0 - std::exp(-zeta * w * t) *
                   (std::cos(wd * t) + zeta / std::sqrt(1.0 - zeta * zeta) * std::sin(wd * t));
}

/// Peak overshoot of the classical second-order response, percent.
inline double second_order_overshoot(double zeta) {
  return 100.0 * std::exp(-std::numbers::pi * zeta / std::sqrt(1.0 - zeta * zeta));
}

/// Backward-Euler recursion for y' + y = u, u = 1, from rest.
inline std::vector<double> backward_euler_first_order(double h, std::size_t n) {
  std::vector<double> y(n, 0.0);
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // (y_k - y_{k-1}) / h + y_k = 1
    y[k] = (prev / h + 1.0) / (1.0 / h + 1.0);
    prev = y[k];
  }
  return y;
}

/// Backward second differences for y'' + a1 y' + a0 y = b0 u, u = 1, from rest
/// (zero pre-history).
inline std::vector<double> backward_difference_second_order(double a1, double a0, double b0,
                                                            double h, std::size_t n) {
  std::vector<double> y(n, 0.0);
  double y1 = 0.0;  // y_{k-1}
  double y2 = 0.0;  // y_{k-2}
  const double h2 = h * h;
  for (std::size_t k = 0; k < n; ++k) {
    // (y_k - 2 y1 + y2) / h^2 + a1 (y_k - y1) / h + a0 y_k = b0
    const double lead = 1.0 / h2 + a1 / h + a0;
    y[k] = (b0 + (2.0 * y1 - y2) / h2 + a1 * y1 / h) / lead;
    y2 = y1;
    y1 = y[k];
  }
  return y;
}

/// (-1)^j C(alpha, j) from the gamma function, independent of the
/// multiplicative recurrence. Valid for j <= 30.
inline double gl_weight_gamma(double alpha, std::size_t j) {
  const double jd = static_cast<double>(j);
  if (alpha == std::floor(alpha) && alpha >= 0.0) {
    if (jd > alpha) return 0.0;
    double c = 1.0;
    for (std::size_t i = 0; i < j; ++i) c *= (alpha - static_cast<double>(i)) / static_cast<double>(i + 1);
    return (j % 2 == 0) ? c : -c;
  }
  return std::tgamma(jd - alpha) / (std::tgamma(-alpha) * std::tgamma(jd + 1.0));
}

/// Repeated multiplication z^n for integer n >= 0.
inline std::complex<double> int_power(std::complex<double> z, int n) {
  std::complex<double> out{1.0, 0.0};
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

}  // namespace oracles
