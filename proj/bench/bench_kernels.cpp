#include <benchmark/benchmark.h>

#include "fopid/gl_simulator.hpp"
#include "fopid/tuner.hpp"

using namespace fopid;

namespace {

FractionalTransferFunction fractional_loop() {
  const FractionalTransferFunction plant(FractionalPolynomial::constant(1.0),
                                         FractionalPolynomial{{0.8, 2.2}, {0.5, 0.9}, {1.0, 0.0}});
  return closed_loop(controller_tf({442.68, 324.03, 115.27, 1.5, 1.41}), plant);
}

gl::SimConfig horizon_for(benchmark::State& state) {
  return {1e-3, static_cast<double>(state.range(0)) * 1e-3};
}

void BM_GlReference(benchmark::State& state) {
  const auto tf = fractional_loop();
  const auto cfg = horizon_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gl::reference::simulate_step(tf, cfg));
  }
  state.SetComplexityN(state.range(0));
}

void BM_GlSerial(benchmark::State& state) {
  const auto tf = fractional_loop();
  const auto cfg = horizon_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gl::simulate_step(tf, cfg, Execution::Serial));
  }
  state.SetComplexityN(state.range(0));
}

void BM_GlParallel(benchmark::State& state) {
  const auto tf = fractional_loop();
  const auto cfg = horizon_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gl::simulate_step(tf, cfg, Execution::Parallel));
  }
  state.SetComplexityN(state.range(0));
}

void BM_GlShortMemory(benchmark::State& state) {
  const auto tf = fractional_loop();
  auto cfg = horizon_for(state);
  cfg.memory_length = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gl::simulate_step(tf, cfg, Execution::Parallel));
  }
}

void tune_bench(benchmark::State& state, Execution execution) {
  const TuningProblem problem{
      {FractionalPolynomial::constant(1.0),
       FractionalPolynomial{{0.8, 2.2}, {0.5, 0.9}, {1.0, 0.0}}},
      poles_from_damping(0.65, 2.2)};
  pso::PsoConfig cfg;
  cfg.swarm_size = static_cast<std::size_t>(state.range(0));
  cfg.max_iterations = 200;
  cfg.target_fitness = 0.0;
  cfg.execution = execution;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tune(problem, cfg));
  }
}

void BM_TuneSerial(benchmark::State& state) { tune_bench(state, Execution::Serial); }
void BM_TuneParallel(benchmark::State& state) { tune_bench(state, Execution::Parallel); }

}  // namespace

BENCHMARK(BM_GlReference)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GlSerial)->RangeMultiplier(2)->Range(1000, 16000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_GlParallel)->RangeMultiplier(2)->Range(1000, 16000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_GlShortMemory)->Arg(16000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TuneSerial)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TuneParallel)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
