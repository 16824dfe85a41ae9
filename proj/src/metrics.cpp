#include "fopid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fopid {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Time at which y first reaches `level` from below, linearly interpolated.
double first_crossing(const std::vector<double>& y, double level, double h) {
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] >= level) {
      if (k == 0) {
        return 0.0;
      }
      const double frac = (level - y[k - 1]) / (y[k] - y[k - 1]);
      return (static_cast<double>(k - 1) + frac) * h;
    }
  }
  return kNaN;
}

}  // namespace

ResponseMetrics analyze(const gl::StepResponse& response, const MetricsOptions& options) {
  const std::vector<double>& raw = response.samples;
  if (raw.size() < 2) {
    throw std::invalid_argument("analyze: response needs at least two samples");
  }
  const double h = response.time_step;

  ResponseMetrics m{kNaN, kNaN, kNaN, kNaN, false};
  if (!std::all_of(raw.begin(), raw.end(), [](double v) { return std::isfinite(v); })) {
    return m;
  }

  const auto n = raw.size();
  const auto tail = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(n))));
  const double ss =
      std::accumulate(raw.end() - static_cast<std::ptrdiff_t>(tail), raw.end(), 0.0) /
      static_cast<double>(tail);
  m.steady_state = ss;

  const double stab = options.stability_band * std::abs(ss);
  m.stable = std::all_of(raw.end() - static_cast<std::ptrdiff_t>(tail), raw.end(),
                         [&](double v) { return std::abs(v - ss) <= stab; });

  if (ss == 0.0) {
    return m;
  }

  // Work on the response oriented towards a positive final value.
  std::vector<double> y = raw;
  double target = ss;
  if (ss < 0.0) {
    for (double& v : y) {
      v = -v;
    }
    target = -ss;
  }

  const double peak = *std::max_element(y.begin(), y.end());
  m.overshoot_percent = std::max(0.0, (peak - target) / target * 100.0);

  if (options.rise == RiseTimeConvention::TenToNinety) {
    m.rise_time = first_crossing(y, 0.9 * target, h) - first_crossing(y, 0.1 * target, h);
  } else {
    m.rise_time = first_crossing(y, target, h);
  }

  const double band = options.settling_band * target;
  std::size_t last_out = n;
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(y[k] - target) > band) {
      last_out = k;
      break;
    }
  }
  if (last_out == n) {
    m.settling_time = 0.0;
  } else if (last_out + 1 < n) {
    const double edge = y[last_out] > target ? target + band : target - band;
    const double frac = (edge - y[last_out]) / (y[last_out + 1] - y[last_out]);
    m.settling_time = (static_cast<double>(last_out) + frac) * h;
  }
  return m;
}

}  // namespace fopid
