#include <benchmark/benchmark.h>

#include <cmath>

#include "dlmorse/difference.hpp"
#include "dlmorse/integrator.hpp"
#include "dlmorse/lyapunov.hpp"
#include "dlmorse/spectrum.hpp"

using namespace dlmorse;

namespace {

CyclicSystemSpec wright() {
  return CyclicSystemSpec::make({Nonlinearity::tanh_feedback(-1, -2, 2)}, Feedback::Negative, 3.0);
}

DelayKernel plateau() { return DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5); }

Segment wave(std::size_t nodes) {
  return sample_segment([](double s) { return 0.5 + std::sin(7 * s); }, [](double s) { return 7 * std::cos(7 * s); },
                        1.0, {}, nodes);
}

void BM_ThresholdDelay(benchmark::State& state) {
  const auto seg = wave(static_cast<std::size_t>(state.range(0)));
  const auto k = plateau();
  for (auto _ : state) benchmark::DoNotOptimize(solve_threshold_delay(seg, k));
}
BENCHMARK(BM_ThresholdDelay)->Arg(51)->Arg(201)->Arg(801);

void BM_LyapunovValue(benchmark::State& state) {
  const auto seg = wave(201);
  const auto k = plateau();
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_value(seg, k, Feedback::Negative));
}
BENCHMARK(BM_LyapunovValue);

void BM_Integrate(benchmark::State& state) {
  const auto sys = wright();
  const auto k = plateau();
  const auto init = wave(201);
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sys, k, init, horizon, 0.0025).states.back());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(horizon / 0.0025));
}
BENCHMARK(BM_Integrate)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_CountUnstableRoots(benchmark::State& state) {
  const double mu[] = {0.0};
  const double gamma[] = {-static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(count_unstable_roots(mu, gamma, 1.0).m_star);
}
BENCHMARK(BM_CountUnstableRoots)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_DiscreteOrbit(benchmark::State& state) {
  const auto spec = DiscreteSystemSpec::make(2, Nonlinearity::tanh_feedback(0.5, -1, 1), Feedback::Negative);
  std::vector<double> x{0.3, -0.2, 0.1};
  for (auto _ : state) {
    advance(spec, x);
    benchmark::DoNotOptimize(v_vector(x, Feedback::Negative).value);
  }
}
BENCHMARK(BM_DiscreteOrbit);

}  // namespace
BENCHMARK_MAIN();
