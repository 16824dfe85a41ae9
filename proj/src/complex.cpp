#include "fopid/complex.hpp"

#include <cmath>
#include <numbers>

namespace fopid {

Polar polar(ComplexValue z) {
  const double re = z.real();
  const double im = z.imag();
  if (re == 0.0 && im == 0.0) {
    return {0.0, 0.0};
  }
  double arg = std::atan2(im, re);
  // atan2(-0.0, x<0) yields -pi; fold onto the closed end of (-pi, pi].
  if (arg == -std::numbers::pi) {
    arg = std::numbers::pi;
  }
  return {std::hypot(re, im), arg};
}

ComplexValue cpow(ComplexValue z, double alpha) {
  const Polar p = polar(z);
  if (p.magnitude == 0.0) {
    if (alpha < 0.0) {
      throw DomainError("cpow: zero base with negative exponent");
    }
    return alpha == 0.0 ? ComplexValue{1.0, 0.0} : ComplexValue{0.0, 0.0};
  }
  if (alpha == 0.0) {
    return {1.0, 0.0};
  }
  if (alpha == 1.0) {
    return z;
  }
  const double mag = std::pow(p.magnitude, alpha);
  const double ang = alpha * p.argument;
  return {mag * std::cos(ang), mag * std::sin(ang)};
}

}  // namespace fopid
