#pragma once

#include <complex>
#include <stdexcept>

namespace fopid {

using ComplexValue = std::complex<double>;

/// Raised when an operation is evaluated outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Polar {
  double magnitude = 0.0;
  /// Principal argument in (-pi, pi]; 0 for the origin.
  double argument = 0.0;
};

Polar polar(ComplexValue z);

/// Principal-branch real power |z|^alpha * exp(j * alpha * arg z).
///
/// cpow(0, alpha) is 0 for alpha > 0 and 1 for alpha == 0. A negative
/// exponent at the origin throws DomainError.
ComplexValue cpow(ComplexValue z, double alpha);

}  // namespace fopid
