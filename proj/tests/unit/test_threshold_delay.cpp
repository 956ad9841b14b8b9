#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dlmorse/error.hpp"
#include "dlmorse/threshold_delay.hpp"
#include "oracles.hpp"

using namespace dlmorse;

namespace {

Segment ramp_segment() {
  return sample_segment([](double s) { return s; }, [](double) { return 1.0; }, 1.0);
}

DelayKernel quadratic_kernel() {
  return DelayKernel::custom([](double x) { return 1.0 + x * x; }, 1.0, 2.0);
}

Segment random_smooth(std::mt19937& rng, double r, double amp, std::size_t nodes = 101) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double a = u(rng), b = u(rng), w = 1 + 6 * std::abs(u(rng)), c = u(rng);
  return sample_segment([=](double s) { return amp * (c + a * std::sin(w * s) + b * std::cos(2 * w * s)) / 3; },
                        [=](double s) { return amp * (a * w * std::cos(w * s) - 2 * b * w * std::sin(2 * w * s)) / 3; },
                        r, {}, nodes);
}

}  // namespace

TEST(KernelIntegral, ConstantKernel) {
  const auto k = DelayKernel::constant(2.0, 1.5);
  const auto seg = sample_segment([](double s) { return std::sin(4 * s); }, [](double s) { return 4 * std::cos(4 * s); }, 2.0);
  EXPECT_NEAR(kernel_integral(seg, k, 0.7), 1.5 * 0.7, 1e-14);
  EXPECT_EQ(kernel_integral(seg, k, 0.0), 0.0);
}

TEST(KernelIntegral, QuadraticProfile) {
  EXPECT_NEAR(kernel_integral(ramp_segment(), quadratic_kernel(), 0.5), 0.5 + 0.125 / 3.0, 1e-12);
}

TEST(KernelIntegral, RejectsTauOutsideWindow) {
  const auto seg = ramp_segment();
  EXPECT_THROW(kernel_integral(seg, quadratic_kernel(), 1.5), Error);
  EXPECT_THROW(kernel_integral(seg, quadratic_kernel(), -0.1), Error);
}

TEST(KernelIntegral, StrictlyIncreasing) {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto k = DelayKernel::plateau_ramp(1.0, 1.0 + (rng() % 3) * 0.2, 2.0, 0.1, 1.5);
    const auto seg = random_smooth(rng, 1.0, 2.0);
    double prev = -1.0;
    for (int j = 0; j <= 200; ++j) {
      const double v = kernel_integral(seg, k, j / 200.0);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(SolveDelay, ConstantKernel) {
  std::mt19937 rng(1);
  for (double a0 : {1.0, 2.0, 4.0}) {
    const auto k = DelayKernel::constant(1.0, a0);
    EXPECT_NEAR(solve_threshold_delay(random_smooth(rng, 1.0, 2.0), k), 1.0 / a0, 1e-12);
  }
}

TEST(SolveDelay, CubicMatchesBisection) {
  const double oracle = oracle::bisect([](double t) { return t + t * t * t / 3 - 1; }, 0, 1);
  const double tau = solve_threshold_delay(ramp_segment(), quadratic_kernel());
  EXPECT_NEAR(tau, oracle, 1e-8);
  EXPECT_NEAR(tau, 0.8177, 5e-5);
}

TEST(SolveDelay, Bounds) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const double r = 0.5 + u(rng);
    const double a0 = 1 / r + u(rng);
    const double a2 = a0 + u(rng);
    const auto k = DelayKernel::plateau_ramp(r, a0, a2, 0.05, 4 * (u(rng) - 0.5));
    const double tau = solve_threshold_delay(random_smooth(rng, r, 4 * u(rng), 41), k);
    EXPECT_GE(tau, 1 / a2 - 1e-12);
    EXPECT_LE(tau, r + 1e-12);
  }
}

TEST(SolveDelay, PlateauGivesConstantDelay) {
  const auto k = DelayKernel::plateau_ramp(1.0, 1.25, 1.5, 0.1, 2.0);
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(solve_threshold_delay(random_smooth(rng, 1.0, 0.09), k), 0.8, 1e-12);
}

TEST(SolveDelay, EmpiricalLipschitzStableUnderRefinement) {
  const auto k = DelayKernel::plateau_ramp(1.0, 1.0, 1.5, 0.05, 1.0);
  double worst_coarse = 0.0, worst_fine = 0.0;
  for (std::size_t nodes : {51u, 401u}) {
    std::mt19937 rng(9);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const auto p = random_smooth(rng, 1.0, 2.0, nodes);
      const auto q = random_smooth(rng, 1.0, 2.0, nodes);
      const double d = sup_distance(p, q);
      if (d > 0) worst = std::max(worst, std::abs(solve_threshold_delay(p, k) - solve_threshold_delay(q, k)) / d);
    }
    (nodes == 51 ? worst_coarse : worst_fine) = worst;
  }
  EXPECT_LE(worst_fine, delay_lipschitz_bound(k) + 1e-9);
  EXPECT_LE(worst_fine, 2 * worst_coarse + 1e-9);
}

TEST(DelayKernel, ValidationCatchesBadProfile) {
  const auto good = DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5);
  EXPECT_TRUE(good.validate(5.0).empty());
  EXPECT_DOUBLE_EQ(good.tau0(), 1.0);
  EXPECT_DOUBLE_EQ(good.alpha1(), 1.0);
  const auto bad = DelayKernel::custom([](double x) { return 0.5 + x * x; }, 1.0, 2.0, 0.5, 0.1);
  EXPECT_FALSE(bad.validate(5.0).empty());
}

TEST(SolveDelay, BracketFailureOnOutOfBoundsKernel) {
  // alpha falls below 1/r, so the integral never reaches 1 inside [0, r].
  const auto bad = DelayKernel::custom([](double) { return 0.5; }, 1.0, 2.0);
  try {
    solve_threshold_delay(constant_segment(1.0, 1.0), bad);
    FAIL() << "expected a bracket failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BracketFailure);
  }
}
