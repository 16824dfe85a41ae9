#include "fopid/gl_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fopid::gl {

namespace {

constexpr std::size_t kBlock = 2048;

std::size_t window(std::size_t k, const std::optional<std::size_t>& memory) {
  return memory ? std::min(k, *memory) : k;
}

// sum_{m=1}^{len} c[m] * y[k-m], reduced block by block in index order.
double history_sum(const std::vector<double>& c, const std::vector<double>& y, std::size_t k,
                   std::size_t len, Execution execution, std::vector<double>& partial) {
  const std::size_t blocks = (len + kBlock - 1) / kBlock;
  if (blocks <= 1) {
    double acc = 0.0;
    for (std::size_t m = 1; m <= len; ++m) {
      acc += c[m] * y[k - m];
    }
    return acc;
  }
  partial.assign(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (execution == Execution::Parallel)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t begin = 1 + static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(len, begin + kBlock - 1);
    double acc = 0.0;
    for (std::size_t m = begin; m <= end; ++m) {
      acc += c[m] * y[k - m];
    }
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) {
    total += p;
  }
  return total;
}

// c_m = sum_i coef_i h^-alpha_i w_m^(alpha_i) for m < count.
std::vector<double> combined_weights(const FractionalPolynomial& p, double h, std::size_t count,
                                     Execution execution) {
  std::vector<double> out(count, 0.0);
  for (const Term& t : p.terms()) {
    const GlWeights w = gl_weights(t.exponent, count);
    const double scale = t.coefficient * std::pow(h, -t.exponent);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) if (execution == Execution::Parallel && count > 4 * kBlock)
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      out[static_cast<std::size_t>(m)] += scale * w.weights[static_cast<std::size_t>(m)];
    }
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (!(time_step > 0.0) || !std::isfinite(time_step)) {
    throw std::invalid_argument("time_step must be positive");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive");
  }
  if (horizon / time_step > kMaxStepsPerSimulation) {
    throw std::invalid_argument("horizon / time_step exceeds 1e7 steps");
  }
  if (memory_length && *memory_length == 0) {
    throw std::invalid_argument("memory_length must be positive");
  }
  if (sample_count() < 2) {
    throw std::invalid_argument("simulation must produce at least two samples");
  }
}

std::size_t SimConfig::sample_count() const {
  return static_cast<std::size_t>(std::floor(horizon / time_step + 0.5)) + 1;
}

GlWeights gl_weights(double alpha, std::size_t count) {
  if (count == 0) {
    throw std::invalid_argument("gl_weights: count must be at least 1");
  }
  GlWeights w{alpha, std::vector<double>(count)};
  w.weights[0] = 1.0;
  for (std::size_t j = 1; j < count; ++j) {
    w.weights[j] = w.weights[j - 1] * (1.0 - (1.0 + alpha) / static_cast<double>(j));
  }
  return w;
}

DivergenceError::DivergenceError(std::size_t first_bad_index, StepResponse partial)
    : SimulationError([&] {
        std::ostringstream os;
        os << "simulation diverged: sample " << first_bad_index << " is not finite";
        return os.str();
      }()),
      index_(first_bad_index),
      partial_(std::move(partial)) {}

StepResponse simulate_step(const FractionalTransferFunction& tf, const SimConfig& cfg,
                           Execution execution) {
  cfg.validate();
  const std::size_t n = cfg.sample_count();
  const double h = cfg.time_step;
  const std::size_t count = cfg.memory_length ? std::min(n, *cfg.memory_length + 1) : n;

  const std::vector<double> den = combined_weights(tf.denominator(), h, count, execution);
  const std::vector<double> num = combined_weights(tf.numerator(), h, count, execution);
  const double lead = den[0];
  if (lead == 0.0 || !std::isfinite(lead)) {
    throw SimulationError("denominator leading GL coefficient is zero; y_k cannot be isolated");
  }

  // Numerator operator on the unit step: prefix sums of its weights.
  std::vector<double> step_prefix(count);
  double acc = 0.0;
  for (std::size_t m = 0; m < count; ++m) {
    acc += num[m];
    step_prefix[m] = acc;
  }

  StepResponse out{h, std::vector<double>(n, 0.0)};
  std::vector<double> partial;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t len = window(k, cfg.memory_length);
    const double u = step_prefix[len];
    const double y = (u - history_sum(den, out.samples, k, len, execution, partial)) / lead;
    if (!std::isfinite(y)) {
      out.samples.resize(k);
      throw DivergenceError(k, std::move(out));
    }
    out.samples[k] = y;
  }
  return out;
}

std::vector<double> gl_derivative(std::span<const double> signal, double alpha, double time_step,
                                  std::optional<std::size_t> memory_length) {
  if (!(time_step > 0.0)) {
    throw std::invalid_argument("gl_derivative: time_step must be positive");
  }
  std::vector<double> out(signal.size(), 0.0);
  if (signal.empty()) {
    return out;
  }
  const GlWeights w = gl_weights(alpha, signal.size());
  const double scale = std::pow(time_step, -alpha);
  for (std::size_t k = 0; k < signal.size(); ++k) {
    const std::size_t len = window(k, memory_length);
    double acc = 0.0;
    for (std::size_t m = 0; m <= len; ++m) {
      acc += w.weights[m] * signal[k - m];
    }
    out[k] = scale * acc;
  }
  return out;
}

}  // namespace fopid::gl
