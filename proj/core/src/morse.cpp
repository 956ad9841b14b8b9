#include "dlmorse/morse.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <set>
#include <thread>

#include "dlmorse/error.hpp"
#include "dlmorse/lyapunov.hpp"

namespace dlmorse {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::VIncrease: return "v-increase";
    case ViolationKind::UpwardEdge: return "upward-edge";
    case ViolationKind::OmegaAboveEarliest: return "omega-above-earliest";
    case ViolationKind::NStar: return "nstar";
    case ViolationKind::PeriodicLevel: return "periodic-level";
    case ViolationKind::LevelRange: return "level-range";
    case ViolationKind::EtaNonIncreasing: return "eta-non-increasing";
    case ViolationKind::BoundExit: return "bound-exit";
    case ViolationKind::SlopeBound: return "slope-bound";
  }
  return "unknown";
}

bool is_required(ViolationKind) noexcept { return true; }

template <class T>
std::vector<std::optional<int>> TrajectoryRecord<T>::expand() const {
  std::vector<std::optional<int>> out;
  out.reserve(samples());
  for (const auto& run : runs) out.insert(out.end(), run.count, run.level);
  return out;
}

template <class T>
std::size_t TrajectoryRecord<T>::samples() const noexcept {
  std::size_t n = 0;
  for (const auto& run : runs) n += run.count;
  return n;
}

template <class T>
std::size_t MorseReport<T>::count(ViolationKind kind, bool required_only) const noexcept {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(), [&](const auto& v) {
    return v.kind == kind && (!required_only || v.required);
  }));
}

template <class T>
std::size_t MorseReport<T>::required_violations() const noexcept {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [](const auto& v) { return v.required && is_required(v.kind); }));
}

template <class T>
void LevelTracker<T>::push(T t, std::optional<int> level) {
  if (level) {
    if (last_ && *level > *last_) {
      violations_.push_back({ViolationKind::VIncrease, seed_, t, *last_, *level, true});
    }
    last_ = level;
  }
  if (t < transient_) return;
  if (!runs_.empty() && runs_.back().level == level) {
    runs_.back().end = t;
    ++runs_.back().count;
  } else {
    runs_.push_back({t, t, level, 1});
  }
  if (level) {
    if (!earliest_) earliest_ = level;
    min_ = min_ ? std::min(*min_, *level) : *level;
    max_ = max_ ? std::max(*max_, *level) : *level;
  }
}

template <class T>
void LevelTracker<T>::finish(TrajectoryRecord<T>& rec, std::size_t window) const {
  rec.runs = runs_;
  rec.earliest_level = earliest_;
  rec.min_level = min_;
  rec.max_level = max_;
  rec.omega_level.reset();
  if (!runs_.empty() && runs_.back().level && runs_.back().count >= window && window > 0) {
    rec.omega_level = runs_.back().level;
  }
}

std::optional<int> estimate_omega_level(std::span<const std::optional<int>> series, std::size_t window) {
  if (window == 0 || series.size() < window) return std::nullopt;
  const auto tail = series.last(window);
  if (!tail[0]) return std::nullopt;
  for (const auto& v : tail) {
    if (v != tail[0]) return std::nullopt;
  }
  return tail[0];
}

std::optional<int> estimate_omega_level(std::span<const int> series, std::size_t window) {
  std::vector<std::optional<int>> s(series.begin(), series.end());
  return estimate_omega_level(std::span<const std::optional<int>>(s), window);
}

bool is_dag(std::span<const LevelEdge> edges) {
  std::map<int, std::vector<int>> out;
  std::map<int, int> indeg;
  for (const auto& e : edges) {
    indeg.try_emplace(e.from, 0);
    indeg.try_emplace(e.to, 0);
    if (e.from == e.to) continue;
    out[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  std::queue<int> ready;
  for (const auto& [v, d] : indeg) {
    if (d == 0) ready.push(v);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const int v = ready.front();
    ready.pop();
    ++seen;
    for (int w : out[v]) {
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  return seen == indeg.size();
}

template <class T>
void assemble_report(MorseReport<T>& report) {
  std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> edges;  // count, first seed
  report.resolved = report.unresolved = report.excluded = report.failed = 0;
  report.splus_bucket.clear();
  for (const auto& rec : report.trajectories) {
    if (rec.excluded) {
      ++report.excluded;
      continue;
    }
    if (!rec.error.empty()) {
      ++report.failed;
      continue;
    }
    if (rec.min_level && *rec.min_level >= report.n0) report.splus_bucket.push_back(rec.seed);
    if (!rec.omega_level) {
      ++report.unresolved;
      continue;
    }
    ++report.resolved;
    if (!rec.earliest_level) continue;
    const int K = *rec.earliest_level, N = *rec.omega_level;
    if (N > K) report.violations.push_back({ViolationKind::OmegaAboveEarliest, rec.seed, T{}, K, N, !rec.perturbed});
    auto [it, inserted] = edges.try_emplace({K, N}, 0, rec.seed);
    ++it->second.first;
  }
  report.level_graph.clear();
  for (const auto& [key, val] : edges) {
    report.level_graph.push_back({key.first, key.second, val.first});
    if (key.second > key.first) {
      report.violations.push_back({ViolationKind::UpwardEdge, val.second, T{}, key.first, key.second, true});
    }
  }
  report.level_graph_is_dag = is_dag(report.level_graph);
}

template <class T>
std::size_t check_nstar_consistency(MorseReport<T>& report, int n_star, double origin_radius) {
  std::size_t added = 0;
  for (auto& rec : report.trajectories) {
    if (rec.excluded || !rec.error.empty()) continue;
    rec.near_origin_tail = rec.tail_sup_norm < origin_radius;
    if (!rec.near_origin_tail || !rec.min_level || *rec.min_level >= n_star) continue;
    T when{};
    for (const auto& run : rec.runs) {
      if (run.level && *run.level == *rec.min_level) {
        when = run.start;
        break;
      }
    }
    report.violations.push_back({ViolationKind::NStar, rec.seed, when, n_star, *rec.min_level, !rec.perturbed});
    ++added;
  }
  return added;
}

namespace {

using Dense = std::function<double(std::size_t, double)>;

// Periodicity search on a dense signal over [t0, t1]: coarse scan of the
// shift on the sampling grid, then golden-section refinement of each
// coarse local minimum.
std::optional<double> periodic_search(const Dense& x, std::size_t width, double t0, double t1, double spacing,
                                      double tol, double min_period, double max_period) {
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / spacing + 1e-9)) + 1;
  if (n < 4) return std::nullopt;
  std::vector<double> grid(n * width);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < width; ++c) grid[k * width + c] = x(c, t0 + static_cast<double>(k) * spacing);
  }
  double amplitude = 0.0;
  for (std::size_t c = 0; c < width; ++c) {
    double lo = grid[c], hi = grid[c];
    for (std::size_t k = 0; k < n; ++k) {
      lo = std::min(lo, grid[k * width + c]);
      hi = std::max(hi, grid[k * width + c]);
    }
    amplitude = std::max(amplitude, hi - lo);
  }
  if (amplitude < tol) return std::nullopt;

  const auto q_lo = static_cast<std::size_t>(std::max(1.0, std::ceil(min_period / spacing - 1e-9)));
  const auto q_hi = std::min(static_cast<std::size_t>(std::floor(max_period / spacing + 1e-9)) + 1, n / 2);
  if (q_hi <= q_lo + 1) return std::nullopt;
  const std::size_t start = q_hi;  // common comparison window for every shift

  std::vector<double> d(q_hi + 1, 0.0);
  for (std::size_t q = q_lo - 1; q <= q_hi; ++q) {
    double m = 0.0;
    for (std::size_t u = start; u < n; ++u) {
      for (std::size_t c = 0; c < width; ++c) {
        m = std::max(m, std::abs(grid[u * width + c] - grid[(u - q) * width + c]));
      }
    }
    d[q] = m;
  }
  auto D = [&](double p) {
    double m = 0.0;
    for (std::size_t u = start; u < n; ++u) {
      const double t = t0 + static_cast<double>(u) * spacing;
      for (std::size_t c = 0; c < width; ++c) m = std::max(m, std::abs(grid[u * width + c] - x(c, t - p)));
    }
    return m;
  };
  constexpr double g = 0.6180339887498949;
  for (std::size_t q = q_lo; q < q_hi; ++q) {
    if (!(d[q] <= d[q - 1] && d[q] <= d[q + 1])) continue;
    if (d[q] >= 0.5 * amplitude) continue;
    double a = (static_cast<double>(q) - 1.0) * spacing, b = (static_cast<double>(q) + 1.0) * spacing;
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double f1 = D(c1), f2 = D(c2);
    for (int it = 0; it < 40; ++it) {
      if (f1 < f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - g * (b - a);
        f1 = D(c1);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + g * (b - a);
        f2 = D(c2);
      }
    }
    const double p = f1 < f2 ? c1 : c2;
    if (std::min(f1, f2) < tol && p >= min_period) return p;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> detect_periodic(std::span<const double> samples, std::size_t width, double spacing,
                                      double tol, double min_period, double max_period) {
  if (width == 0 || samples.size() % width != 0 || !(spacing > 0)) {
    fail(ErrorCode::InvalidArgument, "periodicity search needs uniform samples of a fixed width");
  }
  const std::size_t n = samples.size() / width;
  if (n < 4) return std::nullopt;
  // Catmull-Rom interpolation between samples.
  const Dense x = [&](std::size_t c, double t) {
    const double pos = std::clamp(t / spacing, 0.0, static_cast<double>(n - 1));
    const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
    const double u = pos - static_cast<double>(k);
    auto at = [&](std::ptrdiff_t j) {
      j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n - 1));
      return samples[static_cast<std::size_t>(j) * width + c];
    };
    const auto kk = static_cast<std::ptrdiff_t>(k);
    const double p0 = at(kk - 1), p1 = at(kk), p2 = at(kk + 1), p3 = at(kk + 2);
    return 0.5 * (2 * p1 + (-p0 + p2) * u + (2 * p0 - 5 * p1 + 4 * p2 - p3) * u * u +
                  (-p0 + 3 * p1 - 3 * p2 + p3) * u * u * u);
  };
  return periodic_search(x, width, 0.0, static_cast<double>(n - 1) * spacing, spacing, tol, min_period, max_period);
}

std::optional<double> detect_periodic(const Trajectory& traj, double tol, double min_period, double max_period,
                                      double tail, double spacing) {
  const double t1 = traj.end_time();
  const double t0 = std::max(0.0, t1 - tail);
  const Dense x = [&](std::size_t c, double t) { return traj.component(c, std::clamp(t, t0, t1)); };
  return periodic_search(x, traj.width, t0, t1, spacing, tol, min_period, max_period);
}

double tail_sup_norm(const Trajectory& traj, double fraction) {
  const double from = traj.end_time() * (1.0 - fraction);
  double m = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] < from) continue;
    for (double x : traj.state(i)) m = std::max(m, std::abs(x));
  }
  return m;
}

unsigned default_thread_count() noexcept {
  if (const char* env = std::getenv("DLMORSE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
}

namespace {

std::optional<int> level_or_undefined(const Segment& seg, const DelayKernel& kernel, Feedback delta) {
  if (seg.near_origin()) return std::nullopt;
  try {
    return lyapunov_value(seg, kernel, delta).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Indeterminate || e.code() == ErrorCode::UndefinedOnOrigin) return std::nullopt;
    throw;
  }
}

struct SeedOutcome {
  TrajectoryRecord<double> record;
  std::vector<Violation<double>> violations;
};

SeedOutcome run_seed(const CyclicSystemSpec& system, const DelayKernel& kernel, const Segment& seed,
                     std::size_t index, const EnsembleOptions& opt) {
  SeedOutcome out;
  auto& rec = out.record;
  rec.seed = index;
  if (seed.near_origin()) {
    rec.excluded = true;
    rec.near_origin_tail = true;
    return out;
  }
  const double r = kernel.r();
  const std::size_t N = system.n_components();
  // Largest count an interpolant on `nodes` grid points can carry.
  const int level_cap = static_cast<int>(3 * opt.nodes + N + 1);
  try {
    rec.initial_level = level_or_undefined(seed, kernel, system.delta());
    const Trajectory traj = integrate(system, kernel, seed, opt.horizon, opt.dt);
    rec.checks = trajectory_checks(traj);
    if (rec.checks.eta_violations) {
      out.violations.push_back({ViolationKind::EtaNonIncreasing, index, 0.0, 0,
                                static_cast<int>(rec.checks.eta_violations), true});
    }
    if (rec.checks.bound_exits) {
      out.violations.push_back({ViolationKind::BoundExit, index, 0.0, 0, static_cast<int>(rec.checks.bound_exits), true});
    }
    if (rec.checks.slope_violations) {
      out.violations.push_back({ViolationKind::SlopeBound, index, 0.0, 0,
                                static_cast<int>(rec.checks.slope_violations), true});
    }

    LevelTracker<double> tracker(index, opt.transient.value_or(2.0 * r * static_cast<double>(N + 2)));
    const double end = traj.end_time();
    const auto first = static_cast<std::size_t>(std::ceil(r / opt.sample_dt - 1e-9));
    for (std::size_t k = first;; ++k) {
      const double t = static_cast<double>(k) * opt.sample_dt;
      if (t > end + 1e-9) break;
      const auto level = level_or_undefined(segment_at(traj, std::min(t, end), opt.nodes), kernel, system.delta());
      if (level && *level > level_cap) out.violations.push_back({ViolationKind::LevelRange, index, t, level_cap, *level, true});
      tracker.push(t, level);
    }
    tracker.finish(rec, opt.window);
    auto v = tracker.take_violations();
    out.violations.insert(out.violations.end(), v.begin(), v.end());

    rec.tail_sup_norm = tail_sup_norm(traj);
    rec.near_origin_tail = rec.tail_sup_norm < opt.origin_radius;
    if (!rec.near_origin_tail) {
      const double tail = std::min(end - r, 3.0 * opt.max_period);
      rec.period = detect_periodic(traj, opt.periodic_tol, opt.min_period, opt.max_period, tail);
      if (rec.period && !rec.runs.empty()) {
        const auto need = static_cast<std::size_t>(std::ceil(*rec.period / opt.sample_dt)) + 1;
        const auto& last = rec.runs.back();
        if (!last.level || last.count < need) {
          int prev = 0;
          if (rec.runs.size() > 1 && rec.runs[rec.runs.size() - 2].level) prev = *rec.runs[rec.runs.size() - 2].level;
          out.violations.push_back({ViolationKind::PeriodicLevel, index, last.start, prev, last.level.value_or(-1), true});
        }
      }
    }
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return out;
}

}  // namespace

MorseReport<double> run_ensemble(const CyclicSystemSpec& system, const DelayKernel& kernel,
                                 std::span<const Segment> seeds, const EnsembleOptions& options) {
  if (!(options.sample_dt > 0) || !(options.horizon > 0)) {
    fail(ErrorCode::InvalidArgument, "horizon and sample_dt must be positive");
  }
  MorseReport<double> report;
  report.n_star = options.n_star ? *options.n_star : spectrum_report(system, kernel).n_star;
  report.n0 = options.n0 ? *options.n0 : report.n_star + 2;

  std::vector<SeedOutcome> outcomes(seeds.size());
  parallel_for(seeds.size(), options.threads,
               [&](std::size_t i) { outcomes[i] = run_seed(system, kernel, seeds[i], i, options); });

  report.trajectories.reserve(seeds.size());
  for (auto& o : outcomes) {
    report.trajectories.push_back(std::move(o.record));
    report.violations.insert(report.violations.end(), o.violations.begin(), o.violations.end());
  }
  assemble_report(report);
  check_nstar_consistency(report, report.n_star, options.origin_radius);
  return report;
}

MorseReport<double> run_ensemble(const CyclicSystemSpec& system, const DelayKernel& kernel, const SeedSpec& seeds,
                                 const EnsembleOptions& options) {
  const auto segs = make_seeds(system, kernel.r(), seeds, options.nodes);
  return run_ensemble(system, kernel, std::span<const Segment>(segs), options);
}

template struct TrajectoryRecord<double>;
template struct TrajectoryRecord<long>;
template struct MorseReport<double>;
template struct MorseReport<long>;
template class LevelTracker<double>;
template class LevelTracker<long>;
template void assemble_report(MorseReport<double>&);
template void assemble_report(MorseReport<long>&);
template std::size_t check_nstar_consistency(MorseReport<double>&, int, double);
template std::size_t check_nstar_consistency(MorseReport<long>&, int, double);

}  // namespace dlmorse
