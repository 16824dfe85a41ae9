#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fopid/gl_simulator.hpp"
#include "fopid/metrics.hpp"
#include "oracles.hpp"

using namespace fopid;
using namespace fopid::gl;

namespace {

FractionalTransferFunction first_order() {
  return {FractionalPolynomial::constant(1.0), FractionalPolynomial{{1.0, 1.0}, {1.0, 0.0}}};
}

FractionalTransferFunction second_order(double zeta, double w) {
  return {FractionalPolynomial::constant(w * w),
          FractionalPolynomial{{1.0, 2.0}, {2.0 * zeta * w, 1.0}, {w * w, 0.0}}};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return worst;
}

double first_order_error(double h) {
  const StepResponse r = simulate_step(first_order(), {h, 5.0});
  double worst = 0.0;
  for (std::size_t k = 0; k < r.samples.size(); ++k) {
    worst = std::max(worst, std::abs(r.samples[k] - oracles::first_order_step(r.time(k))));
  }
  return worst;
}

}  // namespace

TEST_CASE("weights from the recurrence") {
  const GlWeights half = gl_weights(0.5, 4);
  CHECK(half.weights == std::vector<double>{1.0, -0.5, -0.125, -0.0625});

  const GlWeights one = gl_weights(1.0, 6);
  CHECK(one.weights == std::vector<double>{1.0, -1.0, 0.0, 0.0, 0.0, 0.0});

  const GlWeights zero = gl_weights(0.0, 3);
  CHECK(zero.weights == std::vector<double>{1.0, 0.0, 0.0});

  CHECK(gl_weights(0.7, 1).weights == std::vector<double>{1.0});
  CHECK_THROWS_AS(gl_weights(0.5, 0), std::invalid_argument);
}

TEST_CASE("weights agree with the gamma-function form") {
  for (double alpha : {0.3, 0.5, 0.9, 1.41, 1.5, 2.0, 2.2}) {
    const GlWeights w = gl_weights(alpha, 31);
    for (std::size_t j = 0; j <= 30; ++j) {
      const double expected = oracles::gl_weight_gamma(alpha, j);
      CHECK(w.weights[j] == doctest::Approx(expected).epsilon(1e-11).scale(1e-300));
    }
  }
}

TEST_CASE("weight partial sums decay") {
  // Sum of the first n weights is n^-alpha / Gamma(1 - alpha) asymptotically.
  for (double alpha : {0.9, 1.41}) {
    const GlWeights w = gl_weights(alpha, 5000);
    const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    CHECK(std::abs(sum) < 0.05);
  }
  const GlWeights w = gl_weights(0.3, 5000);
  const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
  CHECK(sum == doctest::Approx(std::pow(5000.0, -0.3) / std::tgamma(0.7)).epsilon(1e-3));
}

TEST_CASE("first-order step response") {
  const StepResponse r = simulate_step(first_order(), {1e-3, 5.0});
  CHECK(r.samples.size() == 5001);
  CHECK(r.time(5000) == doctest::Approx(5.0));
  CHECK(r.input_label == "unit step");
  CHECK(first_order_error(1e-3) < 5e-3);

  // Matches the backward-Euler recursion the scheme reduces to.
  const auto euler = oracles::backward_euler_first_order(1e-3, r.samples.size());
  CHECK(max_abs_diff(r.samples, euler) < 1e-12);
}

TEST_CASE("halving the step reduces the error") {
  const double coarse = first_order_error(1e-2);
  const double fine = first_order_error(5e-3);
  CHECK(fine < coarse);
  CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("second-order step response") {
  const double zeta = 0.65;
  const double w = 2.2;
  const StepResponse r = simulate_step(second_order(zeta, w), {1e-3, 10.0});
  double worst = 0.0;
  for (std::size_t k = 0; k < r.samples.size(); ++k) {
    worst = std::max(worst, std::abs(r.samples[k] - oracles::second_order_step(r.time(k), zeta, w)));
  }
  CHECK(worst < 1e-2);

  const auto diff = oracles::backward_difference_second_order(2.0 * zeta * w, w * w, w * w, 1e-3,
                                                              r.samples.size());
  CHECK(max_abs_diff(r.samples, diff) < 1e-9);

  const ResponseMetrics m = analyze(r);
  CHECK(m.overshoot_percent == doctest::Approx(oracles::second_order_overshoot(zeta)).epsilon(0.3 / 6.81));
  CHECK(m.overshoot_percent == doctest::Approx(6.81).epsilon(0.3 / 6.81));
}

TEST_CASE("kernel matches the term-by-term reference") {
  const FractionalTransferFunction tf(
      FractionalPolynomial{{2.0, 0.0}, {0.3, 0.7}},
      FractionalPolynomial{{0.8, 2.2}, {0.5, 0.9}, {1.0, 0.0}});
  const SimConfig cfg{1e-2, 20.0};
  const StepResponse fast = simulate_step(tf, cfg, Execution::Serial);
  const StepResponse ref = reference::simulate_step(tf, cfg);
  REQUIRE(fast.samples.size() == ref.samples.size());
  double scale = 0.0;
  for (double v : ref.samples) scale = std::max(scale, std::abs(v));
  CHECK(max_abs_diff(fast.samples, ref.samples) <= 1e-10 * scale);
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  const FractionalTransferFunction tf(
      FractionalPolynomial{{324.03, 0.0}, {442.68, 1.5}, {115.27, 2.91}},
      FractionalPolynomial{{0.8, 3.7}, {0.5, 2.4}, {1.0, 1.5}, {324.03, 0.0}, {442.68, 1.5},
                           {115.27, 2.91}});
  const SimConfig cfg{1e-3, 6.0};
  const StepResponse serial = simulate_step(tf, cfg, Execution::Serial);
  const StepResponse parallel = simulate_step(tf, cfg, Execution::Parallel);
  CHECK(serial.samples == parallel.samples);

  SimConfig windowed = cfg;
  windowed.memory_length = 3000;
  CHECK(simulate_step(tf, windowed, Execution::Serial).samples ==
        simulate_step(tf, windowed, Execution::Parallel).samples);
}

TEST_CASE("half derivative composed twice is the first derivative") {
  const double h = 1e-2;
  std::vector<double> signal(400);
  for (std::size_t k = 0; k < signal.size(); ++k) {
    const double t = static_cast<double>(k) * h;
    signal[k] = t * t + std::sin(t);
  }
  const auto half = gl_derivative(signal, 0.5, h);
  const auto twice = gl_derivative(half, 0.5, h);
  const auto once = gl_derivative(signal, 1.0, h);
  double scale = 0.0;
  for (double v : once) scale = std::max(scale, std::abs(v));
  CHECK(max_abs_diff(twice, once) <= 1e-9 * scale);
  CHECK(once[5] == doctest::Approx((signal[5] - signal[4]) / h).epsilon(1e-12));
}

TEST_CASE("short memory") {
  const std::vector<double> ones(50, 1.0);
  const auto full = gl_derivative(ones, 0.5, 0.1);
  const auto windowed = gl_derivative(ones, 0.5, 0.1, 10);
  const GlWeights w = gl_weights(0.5, 11);
  const double window_sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
  CHECK(windowed[30] == doctest::Approx(std::pow(0.1, -0.5) * window_sum));
  CHECK(windowed[5] == full[5]);
  CHECK(windowed[30] != full[30]);

  const SimConfig cfg{1e-2, 5.0};
  SimConfig long_memory = cfg;
  long_memory.memory_length = 10000;
  CHECK(simulate_step(first_order(), long_memory).samples ==
        simulate_step(first_order(), cfg).samples);

  // Integer orders only look back two samples, so any window >= 2 is exact.
  SimConfig two = cfg;
  two.memory_length = 2;
  CHECK(simulate_step(second_order(0.65, 2.2), two).samples ==
        simulate_step(second_order(0.65, 2.2), cfg).samples);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(simulate_step(first_order(), {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(simulate_step(first_order(), {1e-3, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(simulate_step(first_order(), {1e-6, 100.0}), std::invalid_argument);
  CHECK_THROWS_AS(simulate_step(first_order(), {1.0, 0.2}), std::invalid_argument);
  SimConfig zero_memory{1e-3, 1.0};
  zero_memory.memory_length = 0;
  CHECK_THROWS_AS(simulate_step(first_order(), zero_memory), std::invalid_argument);
  CHECK_THROWS_AS(gl_derivative(std::vector<double>{1.0}, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("vanishing leading coefficient") {
  // h^-1 - 2 = 0 at h = 0.5.
  const FractionalTransferFunction tf(FractionalPolynomial::constant(1.0),
                                      FractionalPolynomial{{1.0, 1.0}, {-2.0, 0.0}});
  CHECK_THROWS_AS(simulate_step(tf, {0.5, 10.0}), SimulationError);
}

TEST_CASE("divergence keeps the finite prefix") {
  // y_k = 0.002 + 2 y_{k-1} overflows after roughly 1024 steps.
  const FractionalTransferFunction tf(FractionalPolynomial::constant(1.0),
                                      FractionalPolynomial{{1.0, 1.0}, {-500.0, 0.0}});
  try {
    simulate_step(tf, {1e-3, 2.0});
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.first_bad_index() > 1000);
    CHECK(e.first_bad_index() < 1100);
    CHECK(e.partial().samples.size() == e.first_bad_index());
    CHECK(std::all_of(e.partial().samples.begin(), e.partial().samples.end(),
                      [](double v) { return std::isfinite(v); }));
  }
}

TEST_CASE("fractional plant settles to its static gain") {
  const FractionalTransferFunction plant(FractionalPolynomial::constant(1.0),
                                         FractionalPolynomial{{0.8, 2.2}, {0.5, 0.9}, {1.0, 0.0}});
  const StepResponse r = simulate_step(plant, {1e-2, 100.0});
  const ResponseMetrics m = analyze(r);
  CHECK(m.steady_state == doctest::Approx(1.0).epsilon(0.02));
}
