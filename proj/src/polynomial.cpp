#include "fopid/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fopid {

std::vector<Term> normalize_terms(std::vector<Term> terms) {
  for (const Term& t : terms) {
    if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent)) {
      throw std::invalid_argument("polynomial term must be finite");
    }
    if (t.exponent < 0.0) {
      throw std::invalid_argument("polynomial exponents must be non-negative");
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.exponent < b.exponent; });

  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && t.exponent - merged.back().exponent <= kExponentMergeTolerance) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coefficient == 0.0; });
  return merged;
}

FractionalPolynomial::FractionalPolynomial(std::initializer_list<Term> terms)
    : terms_(normalize_terms(std::vector<Term>(terms))) {}

FractionalPolynomial::FractionalPolynomial(std::vector<Term> terms)
    : terms_(normalize_terms(std::move(terms))) {}

double FractionalPolynomial::max_exponent() const {
  return terms_.empty() ? 0.0 : terms_.back().exponent;
}

ComplexValue FractionalPolynomial::evaluate(ComplexValue s) const {
  ComplexValue sum{0.0, 0.0};
  for (const Term& t : terms_) {
    sum += t.coefficient * cpow(s, t.exponent);
  }
  return sum;
}

ComplexValue evaluate_poly(const FractionalPolynomial& p, ComplexValue s) { return p.evaluate(s); }

FractionalPolynomial poly_multiply(const FractionalPolynomial& a, const FractionalPolynomial& b) {
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const Term& x : a.terms()) {
    for (const Term& y : b.terms()) {
      out.push_back({x.coefficient * y.coefficient, x.exponent + y.exponent});
    }
  }
  return FractionalPolynomial(std::move(out));
}

FractionalPolynomial poly_add(const FractionalPolynomial& a, const FractionalPolynomial& b) {
  std::vector<Term> out(a.terms().begin(), a.terms().end());
  out.insert(out.end(), b.terms().begin(), b.terms().end());
  return FractionalPolynomial(std::move(out));
}

FractionalTransferFunction::FractionalTransferFunction(FractionalPolynomial numerator,
                                                       FractionalPolynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) {
    throw std::invalid_argument("transfer function denominator is identically zero");
  }
}

FractionalTransferFunction FractionalTransferFunction::from_terms(std::vector<Term> numerator,
                                                                 std::vector<Term> denominator) {
  double lowest = 0.0;
  for (const auto* side : {&numerator, &denominator}) {
    for (const Term& t : *side) {
      lowest = std::min(lowest, t.exponent);
    }
  }
  if (lowest < 0.0) {
    for (auto* side : {&numerator, &denominator}) {
      for (Term& t : *side) {
        t.exponent -= lowest;
      }
    }
  }
  return {FractionalPolynomial(std::move(numerator)), FractionalPolynomial(std::move(denominator))};
}

ComplexValue FractionalTransferFunction::evaluate(ComplexValue s) const {
  const ComplexValue d = den_.evaluate(s);
  if (d == ComplexValue{0.0, 0.0}) {
    throw DomainError("transfer function denominator vanishes at evaluation point");
  }
  return num_.evaluate(s) / d;
}

FractionalTransferFunction controller_tf(const ControllerParams& c) {
  if (c.lambda < 0.0) {
    throw std::invalid_argument("controller integration order must be non-negative");
  }
  FractionalPolynomial num{
      {c.kp, c.lambda}, {c.ti, 0.0}, {c.td, c.lambda + c.delta}};
  return {std::move(num), FractionalPolynomial::monomial(1.0, c.lambda)};
}

ComplexValue evaluate_controller(const ControllerParams& c, ComplexValue s) {
  return c.kp + c.ti * cpow(s, -c.lambda) + c.td * cpow(s, c.delta);
}

FractionalTransferFunction closed_loop(const FractionalTransferFunction& gc,
                                       const FractionalTransferFunction& gp) {
  FractionalPolynomial open_num = poly_multiply(gc.numerator(), gp.numerator());
  FractionalPolynomial open_den = poly_multiply(gc.denominator(), gp.denominator());
  FractionalPolynomial den = poly_add(open_den, open_num);
  if (den.is_zero()) {
    throw std::invalid_argument("closed-loop denominator is identically zero");
  }
  return {std::move(open_num), std::move(den)};
}

std::string to_string(const FractionalPolynomial& p) {
  if (p.is_zero()) {
    return "0";
  }
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    double c = it->coefficient;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      c = std::abs(c);
    }
    os << c;
    if (it->exponent != 0.0) {
      os << " s^" << it->exponent;
    }
    first = false;
  }
  return os.str();
}

}  // namespace fopid
