#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace dlmorse;

TEST(Oracle, BruteForceSignChanges) {
  const double a[] = {1, -1, 1};
  EXPECT_EQ(oracle::brute_force_sign_changes(a), 2);
  const double b[] = {1, 0, 0, -2, 0, 3};
  EXPECT_EQ(oracle::brute_force_sign_changes(b), 2);
  const double c[] = {0, 0};
  EXPECT_EQ(oracle::brute_force_sign_changes(c), 0);
  const double d[] = {1e-12, -1};
  EXPECT_EQ(oracle::brute_force_sign_changes(d, 1e-9), 0);
}

TEST(Oracle, Bisect) {
  EXPECT_NEAR(oracle::bisect([](double x) { return x * x - 2; }, 0, 2), std::sqrt(2.0), 1e-13);
}

TEST(Oracle, NewtonScanFindsHopfPair) {
  const double mu[] = {0.0}, g[] = {-2.0};
  const auto roots = oracle::newton_root_scan(mu, g, 1.0, 4.0);
  EXPECT_EQ(oracle::count_right_half(roots), 2);
}

TEST(Oracle, ScalarCrossings) {
  EXPECT_EQ(oracle::scalar_crossing_count(-1.0, 1.0), 0);
  EXPECT_EQ(oracle::scalar_crossing_count(-2.0, 1.0), 2);
  EXPECT_EQ(oracle::scalar_crossing_count(-8.0, 1.0), 4);
  EXPECT_EQ(oracle::scalar_crossing_count(1.0, 1.0), 0);
}
