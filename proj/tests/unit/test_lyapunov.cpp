#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dlmorse/error.hpp"
#include "dlmorse/lyapunov.hpp"
#include "oracles.hpp"

using namespace dlmorse;

namespace {

// Zero slopes keep each Hermite cell monotone, so the interpolant changes
// sign exactly where the node sequence does.
Segment flat_segment(std::vector<double> values, std::vector<double> discrete = {}, double r = 1.0) {
  std::vector<double> slopes(values.size(), 0.0);
  const std::size_t N = discrete.size();
  return Segment::make(std::move(values), std::move(slopes), std::move(discrete), r, N);
}

bool has(const RegularityVerdict& v, RegularitySet::Kind k) {
  return std::any_of(v.failed_sets.begin(), v.failed_sets.end(), [&](const auto& s) { return s.kind == k; });
}

Segment random_smooth(std::mt19937& rng, std::size_t N, std::size_t nodes = 201) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double a = u(rng), b = u(rng), c = 0.3 * u(rng), w = 2 + 10 * std::abs(u(rng));
  std::vector<double> disc(N);
  for (auto& x : disc) x = u(rng);
  return sample_segment([=](double s) { return c + a * std::sin(w * s) + b * std::cos(0.5 * w * s); },
                        [=](double s) { return a * w * std::cos(w * s) - 0.5 * b * w * std::sin(0.5 * w * s); }, 1.0,
                        disc, nodes);
}

}  // namespace

TEST(SignChanges, ConstantHasNone) {
  EXPECT_EQ(count_sign_changes(constant_segment(1.0, 1.0, 2), -1.0), 0);
  EXPECT_EQ(count_sign_changes(constant_segment(1.0, 1.0, 2), -0.3), 0);
}

TEST(SignChanges, ThreeSamples) {
  EXPECT_EQ(count_sign_changes(flat_segment({1, -1, 1}), -1.0), 2);
}

TEST(SignChanges, RejectsWindowOutsideHistory) {
  const auto seg = flat_segment({1, -1, 1});
  EXPECT_THROW(count_sign_changes(seg, 0.0), Error);
  EXPECT_THROW(count_sign_changes(seg, -1.5), Error);
}

TEST(SignChanges, MatchesBruteForceOnTernarySequences) {
  std::mt19937 rng(17);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> seq(9);
    for (auto& x : seq) x = static_cast<double>(static_cast<int>(rng() % 3) - 1);
    if (std::all_of(seq.begin(), seq.end(), [](double x) { return x == 0; })) seq[4] = 1;
    const auto seg = flat_segment(seq);
    EXPECT_EQ(count_sign_changes(seg, -1.0), oracle::brute_force_sign_changes(seq)) << i;
  }
}

TEST(SignChanges, IncludesDiscreteCoordinates) {
  EXPECT_EQ(count_sign_changes(flat_segment({1, 1, 1}, {-1, 2}), -1.0), 2);
}

TEST(SignChanges, SeesOscillationInsideCells) {
  // Node values all positive, but the Hermite slopes force a dip below zero.
  const auto seg = Segment::make({0.1, 0.1}, {-3.0, 3.0}, {}, 1.0, 0);
  EXPECT_EQ(count_sign_changes(seg, -1.0), 2);
}

TEST(SignChanges, MonotoneInWindow) {
  std::mt19937 rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto seg = random_smooth(rng, rng() % 3);
    int prev = 1 << 30;
    for (int j = 0; j < 100; ++j) {
      const double a = -1.0 + j / 100.0;
      const int sc = count_sign_changes(seg, a);
      EXPECT_LE(sc, prev);
      prev = sc;
    }
  }
}

TEST(VSigned, CaseTables) {
  const auto two = flat_segment({1, -1, 1});
  EXPECT_EQ(v_signed(two, -1.0), std::make_pair(2, 3));
  const auto zero = flat_segment({1, 1});
  EXPECT_EQ(v_signed(zero, -1.0), std::make_pair(0, 1));
  const auto five = flat_segment({1, -1, 1, -1, 1, -1});
  EXPECT_EQ(v_signed(five, -1.0), std::make_pair(6, 5));
}

TEST(VSigned, UndefinedAtOriginIndeterminateOnZeroWindow) {
  try {
    v_signed(constant_segment(0.0, 1.0), -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedOnOrigin);
  }
  // Zero on the window [-0.25, 0] but not globally.
  const auto seg = flat_segment({1, 0, 0, 0, 0});
  try {
    v_signed(seg, -0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Indeterminate);
  }
}

TEST(LyapunovValue, ConstantSegments) {
  const auto k = DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5);
  const auto one = constant_segment(1.0, 1.0, 1);
  const auto neg = lyapunov_value(one, k, Feedback::Negative);
  EXPECT_EQ(neg.value, 1);
  EXPECT_EQ(neg.branch, ParityBranch::Minus);
  EXPECT_EQ(lyapunov_value(one, k, Feedback::Positive).value, 0);
}

TEST(LyapunovValue, SineWindow) {
  const auto k = DelayKernel::constant(1.0, 1.0);
  const double w = 4 * std::numbers::pi;
  // sin(4 pi s) vanishes at s = -1, -0.75, -0.5, -0.25, 0: three interior sign changes.
  const auto aligned = sample_segment([=](double s) { return std::sin(w * s); },
                                      [=](double s) { return w * std::cos(w * s); }, 1.0);
  const auto v = lyapunov_value(aligned, k, Feedback::Negative);
  EXPECT_NEAR(v.a, -1.0, 1e-12);
  EXPECT_EQ(v.sc, 3);
  EXPECT_EQ(v.value, 3);
  // A phase shift moves the zeros off the window ends: four interior crossings.
  const auto shifted = sample_segment([=](double s) { return std::sin(w * s + 0.3); },
                                      [=](double s) { return w * std::cos(w * s + 0.3); }, 1.0);
  const auto u = lyapunov_value(shifted, k, Feedback::Negative);
  EXPECT_EQ(u.sc, 4);
  EXPECT_EQ(u.value, 5);
}

TEST(Regularity, NoZerosMeansMember) {
  const auto seg = sample_segment([](double s) { return 2 + s; }, [](double) { return 1.0; }, 1.0, {0.5, 0.7});
  const auto v = regularity_membership(seg, -0.8, Feedback::Negative);
  EXPECT_TRUE(v.in_R);
  EXPECT_TRUE(v.failed_sets.empty());
  EXPECT_GT(v.margin, 0.0);
}

TEST(Regularity, ScalarEndpointCondition) {
  // phi(a) = 0 at a = -1 with phi'(a) = 1 and phi(0) = 1.
  const auto seg = sample_segment([](double s) { return s + 1; }, [](double) { return 1.0; }, 1.0);
  const auto v = regularity_membership(seg, -1.0, Feedback::Negative);
  EXPECT_FALSE(has(v, RegularitySet::Kind::Sa));
  const auto pos = regularity_membership(seg, -1.0, Feedback::Positive);
  EXPECT_TRUE(has(pos, RegularitySet::Kind::Sa));
}

TEST(Regularity, InteriorCoordinateCondition) {
  const auto seg = flat_segment({1, 1, 1}, {0.0, 1.0});
  const auto v = regularity_membership(seg, -1.0, Feedback::Negative);
  EXPECT_FALSE(v.in_R);
  ASSERT_FALSE(v.failed_sets.empty());
  EXPECT_TRUE(std::any_of(v.failed_sets.begin(), v.failed_sets.end(),
                          [](const auto& s) { return s.kind == RegularitySet::Kind::Si && s.index == 1; }));
}

TEST(Regularity, DoubleZeroFailsStar) {
  // phi(s) = (s + 0.5)^2 touches zero without crossing.
  const auto seg = sample_segment([](double s) { return (s + 0.5) * (s + 0.5); },
                                  [](double s) { return 2 * (s + 0.5); }, 1.0);
  const auto v = regularity_membership(seg, -1.0, Feedback::Negative);
  EXPECT_TRUE(has(v, RegularitySet::Kind::SStar));
}

TEST(LyapunovProperties, ParityOnRandomSegments) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 5000; ++i) {
    std::vector<double> v(15), d(15), disc(rng() % 4);
    for (auto& x : v) x = u(rng);
    for (auto& x : d) x = 4 * u(rng);
    for (auto& x : disc) x = u(rng);
    const std::size_t N = disc.size();
    const auto seg = Segment::make(v, d, disc, 1.0, N);
    const auto [vp, vm] = v_signed(seg, -0.9);
    EXPECT_EQ(vp % 2, 0);
    EXPECT_EQ(vm % 2, 1);
  }
}

TEST(LyapunovProperties, LowerSemicontinuity) {
  const auto k = DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const auto seg = random_smooth(rng, rng() % 3);
    const int v0 = lyapunov_value(seg, k, Feedback::Negative).value;
    for (double eps : {1e-4, 1e-6, 1e-8}) {
      std::vector<double> v(seg.values().begin(), seg.values().end());
      std::vector<double> d(seg.slopes().begin(), seg.slopes().end());
      std::vector<double> disc(seg.discrete().begin(), seg.discrete().end());
      for (auto& x : v) x += eps * u(rng);
      for (auto& x : disc) x += eps * u(rng);
      const auto p = Segment::make(v, d, disc, 1.0, disc.size());
      if (eps <= 1e-8) EXPECT_GE(lyapunov_value(p, k, Feedback::Negative).value, v0);
    }
  }
}

TEST(LyapunovProperties, RegularPointsAreStable) {
  const auto k = DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5);
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(-1, 1);
  int members = 0;
  for (int i = 0; i < 400 && members < 100; ++i) {
    const std::size_t N = rng() % 3;
    const auto seg = random_smooth(rng, N);
    const auto verdict = regularity_at_delay(seg, k, Feedback::Negative);
    if (!verdict.in_R) continue;
    ++members;
    const int v0 = lyapunov_value(seg, k, Feedback::Negative).value;
    for (int p = 0; p < 10; ++p) {
      const double amp = 0.45 * verdict.margin * std::abs(u(rng));
      const double w = 1 + 4 * std::abs(u(rng)), ph = u(rng);
      // sup |amp sin(ws + ph)/(1 + w)| + sup |amp w cos(ws + ph)/(1 + w)| <= amp
      std::vector<double> v(seg.values().begin(), seg.values().end());
      std::vector<double> d(seg.slopes().begin(), seg.slopes().end());
      std::vector<double> disc(seg.discrete().begin(), seg.discrete().end());
      for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] += amp * std::sin(w * seg.time(j) + ph) / (1 + w);
        d[j] += amp * w * std::cos(w * seg.time(j) + ph) / (1 + w);
      }
      for (auto& x : disc) x += amp * u(rng) / (1 + w);
      const auto q = Segment::make(v, d, disc, 1.0, N);
      EXPECT_EQ(lyapunov_value(q, k, Feedback::Negative).value, v0);
    }
  }
  EXPECT_GT(members, 50);
}
