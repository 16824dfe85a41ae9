#include "fopid/pso.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace fopid::pso {

void PsoConfig::validate() const {
  if (swarm_size == 0) {
    throw std::invalid_argument("swarm_size must be positive");
  }
  if (dims == 0) {
    throw std::invalid_argument("dims must be positive");
  }
  if (lower_bounds.size() != dims || upper_bounds.size() != dims) {
    throw std::invalid_argument("bounds must have exactly dims entries");
  }
  for (std::size_t d = 0; d < dims; ++d) {
    if (!(lower_bounds[d] < upper_bounds[d]) || !std::isfinite(lower_bounds[d]) ||
        !std::isfinite(upper_bounds[d])) {
      std::ostringstream os;
      os << "bounds of dimension " << d << " must be finite with lower < upper";
      throw std::invalid_argument(os.str());
    }
  }
  if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0)) {
    throw std::invalid_argument("inertia, cognitive and social must be non-negative");
  }
  if (max_iterations == 0) {
    throw std::invalid_argument("max_iterations must be positive");
  }
  if (!(target_fitness >= 0.0)) {
    throw std::invalid_argument("target_fitness must be non-negative");
  }
  if (!(velocity_limit_fraction > 0.0) || !std::isfinite(velocity_limit_fraction)) {
    throw std::invalid_argument("velocity_limit_fraction must be positive");
  }
}

namespace {

double velocity_limit(const PsoConfig& config, std::size_t d) {
  return config.velocity_limit_fraction * (config.upper_bounds[d] - config.lower_bounds[d]);
}

// Evaluates fitness at every particle's current position into `out`.
// Exceptions cannot leave an OpenMP region, so failures are collected per
// particle and the lowest failing index is rethrown afterwards.
void evaluate_all(const std::vector<Particle>& particles, const FitnessFunction& fitness,
                  Execution execution, std::vector<double>& out) {
  const auto n = static_cast<std::ptrdiff_t>(particles.size());
  out.assign(particles.size(), 0.0);
  std::vector<std::exception_ptr> failures(particles.size());

  auto eval_one = [&](std::ptrdiff_t i) {
    try {
      out[i] = fitness(particles[i].position);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      eval_one(i);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      eval_one(i);
    }
  }

  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (failures[i]) {
      std::string msg = "fitness evaluation failed";
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        msg += ": ";
        msg += e.what();
      } catch (...) {
      }
      throw OptimizerError(msg, particles[i].position);
    }
    if (std::isnan(out[i])) {
      throw OptimizerError("fitness evaluation returned NaN", particles[i].position);
    }
  }
}

// gbest candidate: lowest personal best, first index on ties; replaces the
// incumbent only on strict improvement.
void advance_global_best(const std::vector<Particle>& particles, GlobalBest& gbest) {
  const Particle* best = nullptr;
  for (const Particle& p : particles) {
    if (best == nullptr || p.best_fitness < best->best_fitness) {
      best = &p;
    }
  }
  if (best != nullptr && best->best_fitness < gbest.fitness) {
    gbest.fitness = best->best_fitness;
    gbest.position = best->best_position;
  }
}

}  // namespace

std::vector<Particle> initialize(const PsoConfig& config, Rng& rng) {
  config.validate();
  std::vector<Particle> particles(config.swarm_size);
  for (Particle& p : particles) {
    p.position.resize(config.dims);
    p.velocity.resize(config.dims);
    for (std::size_t d = 0; d < config.dims; ++d) {
      p.position[d] = std::clamp(rng.uniform(config.lower_bounds[d], config.upper_bounds[d]),
                                 config.lower_bounds[d], config.upper_bounds[d]);
    }
    for (std::size_t d = 0; d < config.dims; ++d) {
      const double vmax = velocity_limit(config, d);
      p.velocity[d] = rng.uniform(-vmax, vmax);
    }
    p.best_position = p.position;
    p.best_fitness = std::numeric_limits<double>::infinity();
  }
  return particles;
}

GlobalBest evaluate_initial(std::vector<Particle>& particles, const PsoConfig& config,
                            const FitnessFunction& fitness) {
  std::vector<double> values;
  evaluate_all(particles, fitness, config.execution, values);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    particles[i].best_position = particles[i].position;
    particles[i].best_fitness = values[i];
  }
  GlobalBest gbest{particles.front().best_position, particles.front().best_fitness};
  advance_global_best(particles, gbest);
  return gbest;
}

void step(std::vector<Particle>& particles, GlobalBest& gbest, const PsoConfig& config, Rng& rng,
          const FitnessFunction& fitness) {
  const std::size_t dims = config.dims;
  // Random draws stay on the calling thread in a fixed order, so the run is
  // reproducible whatever the evaluation thread count.
  for (Particle& p : particles) {
    double phi1 = 0.0;
    double phi2 = 0.0;
    if (config.draw == CoefficientDraw::PerParticle) {
      phi1 = rng.uniform();
      phi2 = rng.uniform();
    }
    for (std::size_t d = 0; d < dims; ++d) {
      if (config.draw == CoefficientDraw::PerDimension) {
        phi1 = rng.uniform();
        phi2 = rng.uniform();
      }
      const double x = p.position[d];
      double v = config.inertia * p.velocity[d] +
                 config.cognitive * phi1 * (p.best_position[d] - x) +
                 config.social * phi2 * (gbest.position[d] - x);
      const double vmax = velocity_limit(config, d);
      v = std::clamp(v, -vmax, vmax);
      const double moved = x + v;
      const double clamped = std::clamp(moved, config.lower_bounds[d], config.upper_bounds[d]);
      if (clamped != moved && config.boundary == BoundaryVelocity::Zero) {
        v = 0.0;
      }
      p.velocity[d] = v;
      p.position[d] = clamped;
    }
  }

  std::vector<double> values;
  evaluate_all(particles, fitness, config.execution, values);

  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (values[i] < particles[i].best_fitness) {
      particles[i].best_fitness = values[i];
      particles[i].best_position = particles[i].position;
    }
  }
  advance_global_best(particles, gbest);
}

SwarmResult minimize(const PsoConfig& config, const FitnessFunction& fitness) {
  config.validate();
  Rng rng(config.seed);
  std::vector<Particle> particles = initialize(config, rng);
  GlobalBest gbest = evaluate_initial(particles, config, fitness);

  SwarmResult result;
  result.fitness_history.reserve(config.max_iterations + 1);
  result.fitness_history.push_back(gbest.fitness);
  while (result.iterations_run < config.max_iterations && gbest.fitness > config.target_fitness) {
    step(particles, gbest, config, rng, fitness);
    ++result.iterations_run;
    result.fitness_history.push_back(gbest.fitness);
  }
  result.best_position = gbest.position;
  result.best_fitness = gbest.fitness;
  return result;
}

}  // namespace fopid::pso
