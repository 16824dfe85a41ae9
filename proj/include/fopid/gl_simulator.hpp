#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fopid/execution.hpp"
#include "fopid/polynomial.hpp"

namespace fopid::gl {

inline constexpr double kMaxStepsPerSimulation = 1e7;

struct SimConfig {
  /// Sampling interval h in seconds.
  double time_step = 1e-3;
  double horizon = 10.0;
  /// Short-memory window L; empty means the full history is used.
  std::optional<std::size_t> memory_length;

  void validate() const;
  /// Number of samples, t = 0 .. horizon inclusive.
  std::size_t sample_count() const;
};

/// Grunwald-Letnikov binomial weights w_j = (-1)^j C(alpha, j).
struct GlWeights {
  double alpha = 0.0;
  std::vector<double> weights;
};

/// w_0 = 1, w_j = w_{j-1} (1 - (1 + alpha) / j).
GlWeights gl_weights(double alpha, std::size_t count);

struct StepResponse {
  double time_step = 0.0;
  std::vector<double> samples;
  std::string input_label = "unit step";

  double time(std::size_t k) const { return static_cast<double>(k) * time_step; }
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The recursion produced a non-finite sample. Carries the samples computed
/// before it.
class DivergenceError : public SimulationError {
 public:
  DivergenceError(std::size_t first_bad_index, StepResponse partial);
  std::size_t first_bad_index() const { return index_; }
  const StepResponse& partial() const { return partial_; }

 private:
  std::size_t index_;
  StepResponse partial_;
};

/// Unit-step response of tf from rest.
///
/// Each power s^a is replaced by the GL operator h^-a sum_m w_m^(a) x_{k-m}
/// over the sampled signal with zero pre-history, for both the output and
/// the step input. y_k is isolated from the m = 0 terms:
///
///   y_k = (u_k - sum_{m>=1} c_m y_{k-m}) / c_0,   c_m = sum_i a_i h^-a_i w_m^(a_i)
///
/// where u_k is the numerator operator applied to the step. The weights of all
/// denominator terms are folded into c once; the history sum is split into
/// fixed-size blocks evaluated concurrently and reduced in block order, so the
/// serial and parallel paths agree bit for bit.
///
/// Throws SimulationError if c_0 is zero and DivergenceError on the first
/// non-finite sample.
StepResponse simulate_step(const FractionalTransferFunction& tf, const SimConfig& cfg,
                           Execution execution = Execution::Parallel);

/// GL derivative of order alpha of a sampled signal with zero pre-history.
std::vector<double> gl_derivative(std::span<const double> signal, double alpha, double time_step,
                                  std::optional<std::size_t> memory_length = std::nullopt);

namespace reference {

/// Term-by-term evaluation of the same scheme with plain loops. Quadratic in
/// the number of terms as well as the number of samples; test oracle only.
StepResponse simulate_step(const FractionalTransferFunction& tf, const SimConfig& cfg);

}  // namespace reference

}  // namespace fopid::gl
