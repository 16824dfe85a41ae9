#include "fopid/tuner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fopid {

DominantPoles poles_from_damping(double zeta, double omega0) {
  if (!(zeta > 0.0 && zeta < 1.0)) {
    throw DomainError("damping ratio must lie in (0, 1) for a complex dominant pair");
  }
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw DomainError("natural frequency must be positive");
  }
  return {zeta * omega0, omega0 * std::sqrt(1.0 - zeta * zeta)};
}

DampingFrequency spec_to_damping(double mp, double trise) {
  if (!(mp > 0.0 && mp < 1.0)) {
    throw DomainError("peak overshoot fraction must lie in (0, 1)");
  }
  if (!(trise > 0.0) || !std::isfinite(trise)) {
    throw DomainError("rise time must be positive");
  }
  const double log_mp = std::log(mp);
  const double zeta = -log_mp / std::sqrt(std::numbers::pi * std::numbers::pi + log_mp * log_mp);
  const double omega0 = (std::numbers::pi - std::acos(zeta)) / (trise * std::sqrt(1.0 - zeta * zeta));
  return {zeta, omega0};
}

DampingFrequency resolve(const DesignSpec& spec) {
  if (const auto* direct = std::get_if<DampingFrequency>(&spec)) {
    // Validation shares the pole construction's checks.
    poles_from_damping(direct->damping_ratio, direct->natural_frequency);
    return *direct;
  }
  const auto& req = std::get<OvershootRiseTime>(spec);
  return spec_to_damping(req.peak_overshoot, req.rise_time);
}

double residual_phase(double r, double i) {
  if (r == 0.0) {
    if (i == 0.0) {
      return 0.0;
    }
    return std::copysign(std::numbers::pi / 2.0, i);
  }
  return std::atan(i / r);
}

ResidualValue make_residual(ComplexValue value) {
  ResidualValue out;
  out.r = value.real();
  out.i = value.imag();
  out.p = residual_phase(out.r, out.i);
  out.f = std::abs(out.r) + std::abs(out.i) + std::abs(out.p);
  return out;
}

namespace {

void check_plant_at_pole(const FractionalTransferFunction& plant, ComplexValue s,
                         ComplexValue den_value) {
  double scale = 0.0;
  for (const Term& t : plant.denominator().terms()) {
    scale += std::abs(t.coefficient) * std::pow(std::abs(s), t.exponent);
  }
  if (std::abs(den_value) <= 1e-12 * scale) {
    throw DomainError("dominant pole coincides with a pole of the plant");
  }
}

}  // namespace

ResidualEvaluator::ResidualEvaluator(const TuningProblem& problem)
    : pole_(problem.pole()),
      plant_num_(problem.plant.numerator().evaluate(pole_)),
      plant_den_(problem.plant.denominator().evaluate(pole_)),
      mode_(problem.mode) {
  check_plant_at_pole(problem.plant, pole_, plant_den_);
}

ResidualValue ResidualEvaluator::operator()(const ControllerParams& params) const {
  return make_residual(plant_den_ + plant_num_ * evaluate_controller(params, pole_));
}

ControllerParams ResidualEvaluator::decode(std::span<const double> position) const {
  if (mode_ == TuningMode::Integer) {
    return {position[0], position[1], position[2], 1.0, 1.0};
  }
  return {position[0], position[1], position[2], position[3], position[4]};
}

ResidualValue residual(const ControllerParams& params, const TuningProblem& problem) {
  return ResidualEvaluator(problem)(params);
}

ResidualValue residual_at(const ControllerParams& params, const FractionalTransferFunction& plant,
                          ComplexValue s) {
  const ComplexValue den = plant.denominator().evaluate(s);
  check_plant_at_pole(plant, s, den);
  return make_residual(den + plant.numerator().evaluate(s) * evaluate_controller(params, s));
}

ResidualValue residual_closed_form_example1(const ControllerParams& c) {
  constexpr double kAngle = 130.57 * std::numbers::pi / 180.0;
  constexpr double kMagnitude = 2.2;
  const double integral = c.ti / std::pow(kMagnitude, c.lambda);
  const double derivative = c.td * std::pow(kMagnitude, c.delta);
  const double r = (c.kp + 1.0) + integral * std::cos(kAngle * c.lambda) +
                   derivative * std::cos(kAngle * c.delta) + 0.875;
  const double i =
      -integral * std::sin(kAngle * c.lambda) + derivative * std::sin(kAngle * c.delta) - 3.428;
  return make_residual({r, i});
}

pso::PsoConfig make_pso_config(const TuningProblem& problem, pso::PsoConfig base) {
  const ParameterBounds& b = problem.bounds;
  base.lower_bounds = {b.kp.first, b.ti.first, b.td.first};
  base.upper_bounds = {b.kp.second, b.ti.second, b.td.second};
  if (problem.mode == TuningMode::Fractional) {
    base.lower_bounds.insert(base.lower_bounds.end(), {b.lambda.first, b.delta.first});
    base.upper_bounds.insert(base.upper_bounds.end(), {b.lambda.second, b.delta.second});
  }
  base.dims = problem.dims();
  return base;
}

TuneResult tune(const TuningProblem& problem, const pso::PsoConfig& pso_config) {
  const pso::PsoConfig config = make_pso_config(problem, pso_config);
  config.validate();
  const ResidualEvaluator evaluator(problem);

  TuneResult out;
  out.swarm = pso::minimize(
      config, [&evaluator](std::span<const double> x) { return evaluator.fitness(x); });
  out.params = evaluator.decode(out.swarm.best_position);
  out.converged = out.swarm.best_fitness <= config.target_fitness;
  return out;
}

}  // namespace fopid
