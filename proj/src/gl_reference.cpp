#include <algorithm>
#include <cmath>

#include "fopid/gl_simulator.hpp"

namespace fopid::gl::reference {

StepResponse simulate_step(const FractionalTransferFunction& tf, const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.sample_count();
  const double h = cfg.time_step;

  struct Operator {
    double scale;
    std::vector<double> w;
  };
  auto build = [&](const FractionalPolynomial& p) {
    std::vector<Operator> ops;
    for (const Term& t : p.terms()) {
      ops.push_back({t.coefficient * std::pow(h, -t.exponent), gl_weights(t.exponent, n).weights});
    }
    return ops;
  };
  const std::vector<Operator> den = build(tf.denominator());
  const std::vector<Operator> num = build(tf.numerator());

  double lead = 0.0;
  for (const Operator& op : den) {
    lead += op.scale;
  }
  if (lead == 0.0 || !std::isfinite(lead)) {
    throw SimulationError("denominator leading GL coefficient is zero; y_k cannot be isolated");
  }

  const std::vector<double> input(n, 1.0);
  StepResponse out{h, std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t len = cfg.memory_length ? std::min(k, *cfg.memory_length) : k;
    double rhs = 0.0;
    for (const Operator& op : num) {
      double acc = 0.0;
      for (std::size_t m = 0; m <= len; ++m) {
        acc += op.w[m] * input[k - m];
      }
      rhs += op.scale * acc;
    }
    double history = 0.0;
    for (const Operator& op : den) {
      double acc = 0.0;
      for (std::size_t m = 1; m <= len; ++m) {
        acc += op.w[m] * out.samples[k - m];
      }
      history += op.scale * acc;
    }
    const double y = (rhs - history) / lead;
    if (!std::isfinite(y)) {
      out.samples.resize(k);
      throw DivergenceError(k, std::move(out));
    }
    out.samples[k] = y;
  }
  return out;
}

}  // namespace fopid::gl::reference
