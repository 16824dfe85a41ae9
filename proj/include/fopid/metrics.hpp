#pragma once

#include "fopid/gl_simulator.hpp"

namespace fopid {

enum class RiseTimeConvention {
  /// First crossing of 90% minus first crossing of 10% of steady state.
  TenToNinety,
  /// First crossing of 100% of steady state, measured from t = 0.
  ZeroToHundred,
};

/// Quantities that cannot be computed are NaN (rise time that never
/// completes, everything but steady state for a zero final value, anything on a
/// response containing non-finite samples).
struct ResponseMetrics {
  double overshoot_percent = 0.0;
  double rise_time = 0.0;
  double settling_time = 0.0;
  double steady_state = 0.0;
  bool stable = false;
};

struct MetricsOptions {
  RiseTimeConvention rise = RiseTimeConvention::TenToNinety;
  /// Trailing fraction of samples averaged for the steady-state value.
  double tail_fraction = 0.05;
  /// Half-width of the settling band, relative to steady state.
  double settling_band = 0.02;
  /// Every tail sample must lie within this relative band for `stable`.
  double stability_band = 0.05;
};

/// Throws std::invalid_argument for fewer than two samples.
ResponseMetrics analyze(const gl::StepResponse& response, const MetricsOptions& options = {});

}  // namespace fopid
