#pragma once

#include <array>
#include <utility>
#include <variant>

#include "fopid/complex.hpp"
#include "fopid/polynomial.hpp"
#include "fopid/pso.hpp"

namespace fopid {

/// Closed-loop requirements: peak overshoot as a fraction in (0,1) and rise
/// time in seconds.
struct OvershootRiseTime {
  double peak_overshoot = 0.0;
  double rise_time = 0.0;
};

/// Second-order shape given directly.
struct DampingFrequency {
  double damping_ratio = 0.0;
  double natural_frequency = 0.0;
};

using DesignSpec = std::variant<OvershootRiseTime, DampingFrequency>;

/// The dominant pair -x +- jy.
struct DominantPoles {
  double x = 0.0;
  double y = 0.0;

  ComplexValue upper() const { return {-x, y}; }
  ComplexValue lower() const { return {-x, -y}; }
};

/// Which member of the conjugate pair the characteristic equation is forced at.
enum class PoleBranch { Upper, Lower };

/// -zeta w0 +- j w0 sqrt(1 - zeta^2). Throws DomainError unless 0 < zeta < 1
/// and w0 > 0.
DominantPoles poles_from_damping(double zeta, double omega0);

/// Classical underdamped second-order mapping. Throws DomainError unless
/// 0 < mp < 1 and trise > 0.
DampingFrequency spec_to_damping(double mp, double trise);

/// Resolves either spec form to (zeta, w0), validating the direct form.
DampingFrequency resolve(const DesignSpec& spec);

enum class TuningMode { Fractional, Integer };

struct ParameterBounds {
  std::pair<double, double> kp{1.0, 1000.0};
  std::pair<double, double> ti{1.0, 500.0};
  std::pair<double, double> td{1.0, 500.0};
  std::pair<double, double> lambda{0.0, 2.0};
  std::pair<double, double> delta{0.0, 2.0};
};

struct TuningProblem {
  FractionalTransferFunction plant;
  DominantPoles poles;
  TuningMode mode = TuningMode::Fractional;
  ParameterBounds bounds{};
  PoleBranch branch = PoleBranch::Upper;

  ComplexValue pole() const { return branch == PoleBranch::Upper ? poles.upper() : poles.lower(); }
  std::size_t dims() const { return mode == TuningMode::Fractional ? 5 : 3; }
};

/// Real part, imaginary part and phase atan(I/R) of the characteristic
/// expression, and the fitness |R| + |I| + |P|.
struct ResidualValue {
  double r = 0.0;
  double i = 0.0;
  double p = 0.0;
  double f = 0.0;
};

/// atan(i/r) with p = sign(i) pi/2 at r = 0 and p = 0 at the origin.
double residual_phase(double r, double i);

ResidualValue make_residual(ComplexValue value);

/// Characteristic expression Dp(s) + Np(s) Gc(s) at the chosen dominant pole,
/// i.e. 1 + Gc Gp with the plant denominator cleared. Throws DomainError if
/// the plant denominator vanishes at the pole.
ResidualValue residual(const ControllerParams& params, const TuningProblem& problem);

/// Same expression evaluated at an arbitrary point.
ResidualValue residual_at(const ControllerParams& params, const FractionalTransferFunction& plant,
                          ComplexValue s);

/// Hand-reduced real/imaginary formulas for the 1 / (0.8 s^2.2 + 0.5 s^0.9 + 1)
/// plant at the pole 2.2 at 130.57 degrees, with the constants rounded to four
/// significant figures. Kept as an independent cross-check of residual().
ResidualValue residual_closed_form_example1(const ControllerParams& params);

/// Plant and pole values at the fixed pole are cached so the fitness only
/// evaluates the controller. Cheap to copy, reentrant.
class ResidualEvaluator {
 public:
  explicit ResidualEvaluator(const TuningProblem& problem);

  ResidualValue operator()(const ControllerParams& params) const;
  ControllerParams decode(std::span<const double> position) const;
  double fitness(std::span<const double> position) const { return (*this)(decode(position)).f; }

 private:
  ComplexValue pole_;
  ComplexValue plant_num_;
  ComplexValue plant_den_;
  TuningMode mode_;
};

struct TuneResult {
  ControllerParams params;
  pso::SwarmResult swarm;
  bool converged = false;
};

/// Builds a PsoConfig of the right dimension from the problem bounds, keeping
/// the coefficient, budget and seed settings of `base`.
pso::PsoConfig make_pso_config(const TuningProblem& problem, pso::PsoConfig base);

/// Runs PSO over (kp, ti, td, lambda, delta), or over (kp, ti, td) with
/// lambda = delta = 1 in integer mode. `pso_config` bounds and dims are taken
/// from the problem. Non-convergence is reported via TuneResult::converged.
TuneResult tune(const TuningProblem& problem, const pso::PsoConfig& pso_config);

}  // namespace fopid
