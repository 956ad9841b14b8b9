#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlmorse/integrator.hpp"
#include "dlmorse/seeds.hpp"
#include "dlmorse/spectrum.hpp"

namespace dlmorse {

/// Maximal block of consecutive samples sharing one level. An undefined
/// level (V not defined near the origin) is stored as nullopt.
template <class T>
struct LevelRun {
  T start{};
  T end{};
  std::optional<int> level;
  std::size_t count = 0;
};

enum class ViolationKind {
  VIncrease,          // V grew between consecutive defined samples
  UpwardEdge,         // level graph edge K -> N with N > K
  OmegaAboveEarliest, // resolved omega-level above the earliest level
  NStar,              // tail near the origin but some level below n_star
  PeriodicLevel,      // V not constant over one detected period
  LevelRange,         // level beyond what the grid can represent
  EtaNonIncreasing,   // delayed argument failed to increase
  BoundExit,          // left {||x_t|| < M} after entering it
  SlopeBound,         // |x0'| > L0 after the transient
};

std::string to_string(ViolationKind kind);

/// Kinds that make a scan fail.
bool is_required(ViolationKind kind) noexcept;

template <class T>
struct Violation {
  ViolationKind kind = ViolationKind::VIncrease;
  std::size_t seed = 0;
  T time{};
  int from = 0;
  int to = 0;
  /// False for seeds flagged as perturbed off an exact zero.
  bool required = true;
};

template <class T>
struct TrajectoryRecord {
  std::size_t seed = 0;
  std::optional<int> initial_level;
  /// Post-transient level series, run-length encoded.
  std::vector<LevelRun<T>> runs;
  std::optional<int> earliest_level;
  std::optional<int> omega_level;
  std::optional<int> min_level;
  std::optional<int> max_level;
  std::optional<T> period;
  double tail_sup_norm = 0.0;
  bool near_origin_tail = false;
  bool excluded = false;  // seed at the origin
  bool perturbed = false; // an exact zero iterate was nudged by 1e-12
  std::string error;      // integrator failure, if any
  TrajectoryCheckReport checks;

  std::vector<std::optional<int>> expand() const;
  std::size_t samples() const noexcept;
};

struct LevelEdge {
  int from = 0;
  int to = 0;
  std::size_t count = 0;
};

template <class T>
struct MorseReport {
  std::vector<TrajectoryRecord<T>> trajectories;
  std::vector<LevelEdge> level_graph;
  std::vector<Violation<T>> violations;
  int n_star = 0;
  int n0 = 2;
  /// Seeds whose post-transient levels all stay >= n0.
  std::vector<std::size_t> splus_bucket;
  bool level_graph_is_dag = true;
  std::size_t resolved = 0;
  std::size_t unresolved = 0;
  std::size_t excluded = 0;
  std::size_t failed = 0;

  std::size_t count(ViolationKind kind, bool required_only = true) const noexcept;
  std::size_t required_violations() const noexcept;
};

/// Streaming accumulator for one trajectory's level series.
template <class T>
class LevelTracker {
 public:
  /// Samples before `transient` are only checked for increases.
  LevelTracker(std::size_t seed, T transient) : seed_(seed), transient_(transient) {}

  void push(T t, std::optional<int> level);

  std::vector<Violation<T>> take_violations() { return std::move(violations_); }
  void finish(TrajectoryRecord<T>& rec, std::size_t window) const;

 private:
  std::size_t seed_;
  T transient_;
  std::optional<int> last_;
  std::vector<LevelRun<T>> runs_;
  std::optional<int> earliest_, min_, max_;
  std::vector<Violation<T>> violations_;
};

/// Level shared by the last `window` samples, or nullopt.
std::optional<int> estimate_omega_level(std::span<const std::optional<int>> series, std::size_t window);
std::optional<int> estimate_omega_level(std::span<const int> series, std::size_t window);

/// Edges, DAG check, omega ordering, bucket and counters from the records.
template <class T>
void assemble_report(MorseReport<T>& report);

/// Kahn's algorithm on the edge list; self-loops are ignored.
bool is_dag(std::span<const LevelEdge> edges);

/// Appends an NStar violation for each record with a near-origin tail that
/// holds a level below n_star. Returns the number appended.
template <class T>
std::size_t check_nstar_consistency(MorseReport<T>& report, int n_star, double origin_radius);

/// Smallest shift p in [min_period, max_period] that is a local minimum of
/// d(p) = max_u |x(u) - x(u - p)| over the sampled tail with d(p) < tol.
/// `samples` holds `width` values per point at uniform `spacing`.
/// A tail with amplitude below tol (an equilibrium) yields nullopt.
std::optional<double> detect_periodic(std::span<const double> samples, std::size_t width, double spacing,
                                      double tol, double min_period, double max_period);

/// Same on the last `tail` time units of a trajectory, resampled at `spacing`.
std::optional<double> detect_periodic(const Trajectory& traj, double tol, double min_period,
                                      double max_period, double tail, double spacing = 0.05);

/// max |x^i(t)| over records with t in the final `fraction` of the run.
double tail_sup_norm(const Trajectory& traj, double fraction = 0.25);

struct EnsembleOptions {
  double horizon = 500.0;
  double dt = 1.0 / 400.0;
  double sample_dt = 0.5;
  std::size_t window = 40;
  /// Levels before this time do not enter the level graph; 2r(N + 2) when unset.
  std::optional<double> transient;
  std::size_t nodes = kDefaultGridNodes;
  /// Spectrum-derived threshold; computed from the system when unset.
  std::optional<int> n_star;
  /// Cap for the S+ bucket; n_star + 2 when unset.
  std::optional<int> n0;
  double origin_radius = 1e-3;
  double periodic_tol = 1e-3;
  double min_period = 1.0;
  double max_period = 20.0;
  /// Worker threads; 0 reads DLMORSE_THREADS, then hardware concurrency.
  unsigned threads = 0;
};

/// Integrates each seed, samples V every sample_dt for t >= r, estimates
/// omega-levels, detects periodic tails and assembles the report.
/// Integrator failures are recorded per seed.
MorseReport<double> run_ensemble(const CyclicSystemSpec& system, const DelayKernel& kernel,
                                 std::span<const Segment> seeds, const EnsembleOptions& options);

MorseReport<double> run_ensemble(const CyclicSystemSpec& system, const DelayKernel& kernel,
                                 const SeedSpec& seeds, const EnsembleOptions& options);

/// Thread count from DLMORSE_THREADS, else hardware concurrency (at least 1).
unsigned default_thread_count() noexcept;

/// Runs job(i) for i in [0, n) on `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job);

extern template struct TrajectoryRecord<double>;
extern template struct TrajectoryRecord<long>;
extern template struct MorseReport<double>;
extern template struct MorseReport<long>;
extern template class LevelTracker<double>;
extern template class LevelTracker<long>;
extern template void assemble_report(MorseReport<double>&);
extern template void assemble_report(MorseReport<long>&);
extern template std::size_t check_nstar_consistency(MorseReport<double>&, int, double);
extern template std::size_t check_nstar_consistency(MorseReport<long>&, int, double);

}  // namespace dlmorse
