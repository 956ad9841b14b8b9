#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dlmorse/morse.hpp"

using namespace dlmorse;

TEST(OmegaLevel, Examples) {
  const std::vector<int> steady{5, 3, 3, 3, 3};
  EXPECT_EQ(estimate_omega_level(std::span<const int>(steady), 4), 3);
  EXPECT_EQ(estimate_omega_level(std::span<const int>(steady), 5), std::nullopt);
  const std::vector<std::optional<int>> holes{3, std::nullopt, 3};
  EXPECT_EQ(estimate_omega_level(std::span<const std::optional<int>>(holes), 3), std::nullopt);
  const std::vector<int> shortseq{1};
  EXPECT_EQ(estimate_omega_level(std::span<const int>(shortseq), 3), std::nullopt);
}

TEST(LevelTracker, RunsAndIncreases) {
  LevelTracker<long> tr(7, 2);
  const int levels[] = {5, 5, 3, 3, 4, 3};
  for (long t = 0; t < 6; ++t) tr.push(t, levels[t]);
  TrajectoryRecord<long> rec;
  rec.seed = 7;
  tr.finish(rec, 2);
  const auto v = tr.take_violations();
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::VIncrease);
  EXPECT_EQ(v[0].time, 4);
  EXPECT_EQ(rec.earliest_level, 3);
  EXPECT_EQ(rec.min_level, 3);
  EXPECT_EQ(rec.max_level, 4);
  EXPECT_EQ(rec.expand().size(), rec.samples());
}

TEST(LevelGraph, DagCheck) {
  const std::vector<LevelEdge> down{{5, 3, 1}, {3, 1, 2}, {5, 1, 1}, {3, 3, 4}};
  EXPECT_TRUE(is_dag(down));
  const std::vector<LevelEdge> cycle{{3, 1, 1}, {1, 3, 1}};
  EXPECT_FALSE(is_dag(cycle));
}

TEST(AssembleReport, EdgesAndBucket) {
  MorseReport<long> rep;
  rep.n0 = 2;
  for (std::size_t s = 0; s < 3; ++s) {
    LevelTracker<long> tr(s, 0);
    const std::vector<int> lv = s == 0 ? std::vector<int>{3, 3, 1, 1} : std::vector<int>{3, 3, 3, 3};
    for (long t = 0; t < 4; ++t) tr.push(t, lv[t]);
    TrajectoryRecord<long> rec;
    rec.seed = s;
    tr.finish(rec, 2);
    rep.trajectories.push_back(rec);
  }
  assemble_report(rep);
  EXPECT_TRUE(rep.level_graph_is_dag);
  EXPECT_EQ(rep.resolved, 3u);
  EXPECT_EQ(rep.splus_bucket, (std::vector<std::size_t>{1, 2}));
  bool has_edge = false;
  for (const auto& e : rep.level_graph) has_edge = has_edge || (e.from == 3 && e.to == 1);
  EXPECT_TRUE(has_edge);
  EXPECT_EQ(rep.required_violations(), 0u);
}

TEST(NStarConsistency, NegativeControl) {
  MorseReport<long> rep;
  TrajectoryRecord<long> rec;
  rec.seed = 0;
  rec.near_origin_tail = true;
  rec.min_level = 1;
  rec.omega_level = 1;
  rep.trajectories.push_back(rec);
  EXPECT_EQ(check_nstar_consistency(rep, 2, 1e-3), 1u);
  EXPECT_EQ(rep.count(ViolationKind::NStar), 1u);
  MorseReport<long> ok;
  rec.min_level = 3;
  rec.omega_level = 3;
  ok.trajectories.push_back(rec);
  EXPECT_EQ(check_nstar_consistency(ok, 2, 1e-3), 0u);
}

TEST(DetectPeriodic, SyntheticSine) {
  std::vector<double> xs;
  const double dx = 0.05;
  for (int i = 0; i < 800; ++i) xs.push_back(std::sin(2 * std::numbers::pi * i * dx / 3.0));
  const auto p = detect_periodic(xs, 1, dx, 1e-3, 1.0, 10.0);
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR(*p, 3.0, 0.01);
}

TEST(DetectPeriodic, EquilibriumHasNoPeriod) {
  const std::vector<double> xs(400, 0.25);
  EXPECT_FALSE(detect_periodic(xs, 1, 0.05, 1e-3, 1.0, 10.0).has_value());
}

TEST(DetectPeriodic, DecayingOscillationIsNotPeriodic) {
  std::vector<double> xs;
  for (int i = 0; i < 800; ++i) {
    const double t = i * 0.05;
    xs.push_back(std::exp(-0.1 * t) * std::sin(2 * std::numbers::pi * t / 3.0));
  }
  EXPECT_FALSE(detect_periodic(xs, 1, 0.05, 1e-3, 1.0, 10.0).has_value());
}

TEST(Ensemble, OriginSeedIsExcluded) {
  const auto sys = CyclicSystemSpec::make({Nonlinearity::tanh_feedback(-1, -0.4, 2)}, Feedback::Negative, 3.0);
  const auto k = DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5);
  std::vector<Segment> seeds{constant_segment(0.0, 1.0),
                             sample_segment([](double s) { return 0.5 * std::cos(s); },
                                            [](double s) { return -0.5 * std::sin(s); }, 1.0)};
  EnsembleOptions opts;
  opts.horizon = 30;
  opts.window = 10;
  opts.threads = 1;
  const auto rep = run_ensemble(sys, k, seeds, opts);
  ASSERT_EQ(rep.trajectories.size(), 2u);
  EXPECT_TRUE(rep.trajectories[0].excluded);
  EXPECT_EQ(rep.excluded, 1u);
  EXPECT_EQ(rep.required_violations(), 0u);
  EXPECT_EQ(rep.n_star, 0);
}

TEST(Ensemble, ThreadCountDoesNotChangeResult) {
  const auto sys = CyclicSystemSpec::make({Nonlinearity::tanh_feedback(-1, -2, 2)}, Feedback::Negative, 3.0);
  const auto k = DelayKernel::plateau_ramp(1.0, 1.0, 1.2, 0.05, 0.5);
  EnsembleOptions opts;
  opts.horizon = 20;
  opts.window = 5;
  SeedSpec spec;
  spec.count = 4;
  opts.threads = 1;
  const auto a = run_ensemble(sys, k, spec, opts);
  opts.threads = 3;
  const auto b = run_ensemble(sys, k, spec, opts);
  ASSERT_EQ(a.trajectories.size(), b.trajectories.size());
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    EXPECT_EQ(a.trajectories[i].expand(), b.trajectories[i].expand());
    EXPECT_EQ(a.trajectories[i].tail_sup_norm, b.trajectories[i].tail_sup_norm);
  }
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}
