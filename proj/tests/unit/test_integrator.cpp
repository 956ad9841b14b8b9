#include <gtest/gtest.h>

#include <cmath>

#include "dlmorse/error.hpp"
#include "dlmorse/integrator.hpp"

using namespace dlmorse;

namespace {

CyclicSystemSpec wright() {
  return CyclicSystemSpec::make({Nonlinearity::tanh_feedback(-1, -2, 2)}, Feedback::Negative, 3.0);
}

DelayKernel plateau() { return DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5); }

}  // namespace

TEST(Integrator, OriginIsAnEquilibrium) {
  const auto tr = integrate(wright(), plateau(), constant_segment(0.0, 1.0), 5.0, 0.005);
  for (double x : tr.states) EXPECT_EQ(x, 0.0);
  EXPECT_TRUE(trajectory_checks(tr).clean());
}

TEST(Integrator, ConstantRightHandSide) {
  // x' = -x(t - 1) with x = 1 on the history: exactly 1 - t on [0, 1].
  const auto sys = CyclicSystemSpec::make({Nonlinearity::linear(0, -1)}, Feedback::Negative, 3.0);
  const auto k = DelayKernel::constant(1.0, 1.0);
  const auto tr = integrate(sys, k, constant_segment(1.0, 1.0), 1.0, 0.005);
  for (std::size_t i = 0; i < tr.size(); ++i) EXPECT_NEAR(tr.state(i)[0], 1 - tr.times[i], 1e-12);
  const auto seg = segment_at(tr, 1.0, 11);
  for (std::size_t j = 0; j < seg.size(); ++j) EXPECT_NEAR(seg.values()[j], -seg.time(j), 1e-12);
}

TEST(Integrator, SegmentAtZeroIsInitial) {
  const auto init = sample_segment([](double s) { return std::sin(3 * s) + 0.2; },
                                   [](double s) { return 3 * std::cos(3 * s); }, 1.0);
  const auto tr = integrate(wright(), plateau(), init, 2.0, 0.005);
  EXPECT_LT(sup_distance(segment_at(tr, 0.0), init), 1e-12);
}

TEST(Integrator, FourthOrderConvergence) {
  const auto init = sample_segment([](double s) { return 0.5 * std::cos(2 * s); },
                                   [](double s) { return -std::sin(2 * s); }, 1.0, {}, 101);
  auto run = [&](double dt) { return integrate(wright(), plateau(), init, 3.0, dt).component(0, 3.0); };
  const double e1 = std::abs(run(0.01) - run(0.00125));
  const double e2 = std::abs(run(0.005) - run(0.00125));
  EXPECT_GT(e1 / e2, 8.0);
}

TEST(Integrator, Deterministic) {
  const auto init = sample_segment([](double s) { return std::sin(5 * s); },
                                   [](double s) { return 5 * std::cos(5 * s); }, 1.0, {});
  const auto a = integrate(wright(), plateau(), init, 10.0, 0.005);
  const auto b = integrate(wright(), plateau(), init, 10.0, 0.005);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.eta, b.eta);
}

TEST(Integrator, EtaIncreasesAndChecksFlagCorruption) {
  const auto init = sample_segment([](double s) { return std::sin(5 * s); },
                                   [](double s) { return 5 * std::cos(5 * s); }, 1.0, {});
  auto tr = integrate(wright(), plateau(), init, 20.0, 0.005);
  const auto rep = trajectory_checks(tr);
  EXPECT_EQ(rep.eta_violations, 0u);
  EXPECT_TRUE(rep.entry_time.has_value());
  tr.eta[tr.eta.size() / 2] = tr.eta.front() - 1.0;
  EXPECT_GT(trajectory_checks(tr).eta_violations, 0u);
}

TEST(Integrator, StepSizeLimit) {
  try {
    integrate(wright(), plateau(), constant_segment(0.5, 1.0), 1.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepSize);
  }
}

TEST(Integrator, CountNonIncreasing) {
  const double s[] = {0, 1, 1, 2, 1.5};
  EXPECT_EQ(count_non_increasing(s), 2u);
}
