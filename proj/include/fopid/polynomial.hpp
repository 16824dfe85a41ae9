#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fopid/complex.hpp"

namespace fopid {

/// One c * s^alpha term.
struct Term {
  double coefficient = 0.0;
  double exponent = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Exponents closer than this are treated as the same power of s.
inline constexpr double kExponentMergeTolerance = 1e-12;

/// Finite sum of c * s^alpha with non-negative real exponents.
///
/// Construction normalizes: terms are sorted by exponent, terms whose
/// exponents agree within kExponentMergeTolerance are merged, and zero
/// coefficients are dropped. The empty polynomial is the zero polynomial.
class FractionalPolynomial {
 public:
  FractionalPolynomial() = default;
  FractionalPolynomial(std::initializer_list<Term> terms);
  explicit FractionalPolynomial(std::vector<Term> terms);

  static FractionalPolynomial constant(double c) { return FractionalPolynomial{{c, 0.0}}; }
  static FractionalPolynomial monomial(double c, double exponent) {
    return FractionalPolynomial{{c, exponent}};
  }

  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double max_exponent() const;

  ComplexValue evaluate(ComplexValue s) const;

  friend bool operator==(const FractionalPolynomial&, const FractionalPolynomial&) = default;

 private:
  std::vector<Term> terms_;
};

/// Merge, sort and prune a raw term list. Idempotent.
std::vector<Term> normalize_terms(std::vector<Term> terms);

ComplexValue evaluate_poly(const FractionalPolynomial& p, ComplexValue s);
FractionalPolynomial poly_multiply(const FractionalPolynomial& a, const FractionalPolynomial& b);
FractionalPolynomial poly_add(const FractionalPolynomial& a, const FractionalPolynomial& b);

class FractionalTransferFunction {
 public:
  /// Throws std::invalid_argument for an identically zero denominator.
  FractionalTransferFunction(FractionalPolynomial numerator, FractionalPolynomial denominator);

  /// Build from raw term lists that may carry negative exponents; both sides
  /// are multiplied by s^|min exponent| first.
  static FractionalTransferFunction from_terms(std::vector<Term> numerator,
                                               std::vector<Term> denominator);

  const FractionalPolynomial& numerator() const { return num_; }
  const FractionalPolynomial& denominator() const { return den_; }

  /// Throws DomainError when the denominator vanishes at s.
  ComplexValue evaluate(ComplexValue s) const;

 private:
  FractionalPolynomial num_;
  FractionalPolynomial den_;
};

/// Kp + Ti s^-lambda + Td s^delta.
struct ControllerParams {
  double kp = 0.0;
  double ti = 0.0;
  double td = 0.0;
  double lambda = 1.0;
  double delta = 1.0;

  bool is_integer_order() const { return lambda == 1.0 && delta == 1.0; }
  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

/// Controller as (kp s^lambda + ti + td s^(lambda+delta)) / s^lambda so that
/// both polynomials carry non-negative exponents.
FractionalTransferFunction controller_tf(const ControllerParams& c);

/// Direct evaluation of kp + ti s^-lambda + td s^delta.
ComplexValue evaluate_controller(const ControllerParams& c, ComplexValue s);

/// Unity-feedback loop Nc Np / (Dc Dp + Nc Np).
FractionalTransferFunction closed_loop(const FractionalTransferFunction& gc,
                                       const FractionalTransferFunction& gp);

std::string to_string(const FractionalPolynomial& p);

}  // namespace fopid
