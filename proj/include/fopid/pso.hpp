#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fopid/execution.hpp"

namespace fopid::pso {

/// How the two uniform [0,1] factors of the velocity update are sampled.
enum class CoefficientDraw {
  /// One phi1/phi2 pair per particle per iteration, shared by all dimensions.
  PerParticle,
  /// Fresh phi1/phi2 for every particle and every dimension.
  PerDimension,
};

/// What happens to a velocity component whose move was clamped at a bound.
enum class BoundaryVelocity {
  /// Keep the clamped velocity.
  Keep,
  /// Zero it; the particle rests on the bound until attracted back.
  Zero,
};

struct PsoConfig {
  std::size_t swarm_size = 30;
  std::size_t dims = 0;
  double inertia = 0.729;
  double cognitive = 1.494;
  double social = 1.494;
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;
  std::size_t max_iterations = 500;
  double target_fitness = 1e-6;
  std::uint64_t seed = 1;
  /// Velocity components are clamped to +-fraction * (upper - lower).
  double velocity_limit_fraction = 0.1;
  CoefficientDraw draw = CoefficientDraw::PerParticle;
  BoundaryVelocity boundary = BoundaryVelocity::Zero;
  Execution execution = Execution::Parallel;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_fitness = 0.0;
};

struct GlobalBest {
  std::vector<double> position;
  double fitness = 0.0;
};

struct SwarmResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::size_t iterations_run = 0;
  /// Entry 0 is the best fitness after initialization, entry k the best after
  /// iteration k.
  std::vector<double> fitness_history;
};

/// Fitness functions must be pure and reentrant; they are evaluated
/// concurrently within one iteration.
using FitnessFunction = std::function<double(std::span<const double>)>;

/// A fitness evaluation threw or returned NaN.
class OptimizerError : public std::runtime_error {
 public:
  OptimizerError(const std::string& what, std::vector<double> position)
      : std::runtime_error(what), position_(std::move(position)) {}
  const std::vector<double>& position() const { return position_; }

 private:
  std::vector<double> position_;
};

/// mt19937_64 with a fixed 53-bit mantissa mapping, so draws do not depend
/// on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Positions uniform in the bounds, velocities uniform in the velocity limit.
/// Personal bests are set to the initial positions with fitness not yet
/// evaluated (see evaluate_initial).
std::vector<Particle> initialize(const PsoConfig& config, Rng& rng);

/// Evaluate the initial positions, fill personal bests and return gbest.
GlobalBest evaluate_initial(std::vector<Particle>& particles, const PsoConfig& config,
                            const FitnessFunction& fitness);

/// One synchronous iteration: move every particle, evaluate all of them, then
/// update personal and global bests (strict improvement only).
void step(std::vector<Particle>& particles, GlobalBest& gbest, const PsoConfig& config, Rng& rng,
          const FitnessFunction& fitness);

SwarmResult minimize(const PsoConfig& config, const FitnessFunction& fitness);

}  // namespace fopid::pso
