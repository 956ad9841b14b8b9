#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dlmorse/cyclic_system.hpp"
#include "dlmorse/segment.hpp"
#include "dlmorse/threshold_delay.hpp"

namespace dlmorse {

struct IntegratorOptions {
  /// Keep every k-th step in the trajectory record.
  std::size_t record_stride = 1;
  /// Extra dense history kept behind t - r, in steps.
  std::size_t history_margin_steps = 4;
};

/// Recorded solution of the cyclic system. Records are uniformly spaced by
/// `record_dt`; x^0 before t = 0 comes from the initial segment. Plain data:
/// produced once by `integrate` and read-only afterwards.
struct Trajectory {
  CyclicSystemSpec system;
  DelayKernel kernel;
  Segment initial;
  double dt = 0.0;
  double record_dt = 0.0;
  std::size_t width = 1;  // N + 1

  std::vector<double> times;
  std::vector<double> states;    // width values per record
  std::vector<double> slopes;    // width values per record
  std::vector<double> eta;       // t - tau(x_t)
  std::vector<double> integral;  // running integral of alpha(x^0)

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t i) const { return {states.data() + i * width, width}; }
  std::span<const double> slope(std::size_t i) const { return {slopes.data() + i * width, width}; }
  double end_time() const noexcept { return times.empty() ? 0.0 : times.back(); }

  /// Dense component i at time t (t >= -r for i = 0, t >= 0 otherwise).
  double component(std::size_t i, double t) const;
  double component_slope(std::size_t i, double t) const;
};

/// Advances the semiflow from `initial` over [0, horizon] with the classical
/// four-stage method and cubic Hermite dense output. The delay is re-solved
/// at every stage. Requires dt <= min(h, 1/(2 alpha2)).
Trajectory integrate(const CyclicSystemSpec& system, const DelayKernel& kernel, const Segment& initial,
                     double horizon, double dt, const IntegratorOptions& options = {});

/// x_t resampled on a grid of `nodes` points over [-r, 0].
Segment segment_at(const Trajectory& traj, double t, std::size_t nodes = kDefaultGridNodes);

struct TrajectoryCheckReport {
  std::size_t eta_violations = 0;
  std::size_t bound_exits = 0;
  std::size_t slope_violations = 0;
  std::optional<double> entry_time;  // first time with ||x_t|| < M

  bool clean() const noexcept { return eta_violations == 0 && bound_exits == 0 && slope_violations == 0; }
};

std::size_t count_non_increasing(std::span<const double> series) noexcept;

TrajectoryCheckReport trajectory_checks(const Trajectory& traj);

}  // namespace dlmorse
