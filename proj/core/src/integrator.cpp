#include "dlmorse/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dlmorse/error.hpp"
#include "dlmorse/hermite.hpp"

namespace dlmorse {

namespace {

// One dense-output node of x^0 and of I(t) = integral of alpha(x^0).
// Slopes are one-sided so the kink at t = 0 between the initial data and
// the solution is represented exactly.
struct Node {
  double t;
  double x;
  double dx_left;
  double dx_right;
  double I;
  double dI;
};

class HistoryStore {
 public:
  void push(const Node& n) { nodes_.push_back(n); }

  void prune(double keep_from) {
    while (nodes_.size() > 2 && nodes_[1].t <= keep_from) nodes_.pop_front();
  }

  Node& back() { return nodes_.back(); }

  struct Delayed {
    double eta;
    double x;
  };

  // Solves I(eta) = target on the stored history and evaluates x^0(eta).
  Delayed delayed(double target) const {
    // tau = r is attained by constant kernels; absorb the quadrature rounding there.
    const double slack = 1e-12 * std::max(1.0, std::abs(target));
    if (target < nodes_.front().I && target >= nodes_.front().I - slack) target = nodes_.front().I;
    if (target < nodes_.front().I) {
      fail(ErrorCode::HistoryUnderrun, "delayed argument reaches before the stored history");
    }
    if (target > nodes_.back().I) {
      fail(ErrorCode::HistoryUnderrun, "delayed argument lies ahead of the stored history");
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), target,
                               [](double v, const Node& n) { return v < n.I; });
    if (it == nodes_.end()) --it;
    const std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const Node& a = nodes_[j];
    const Node& b = nodes_[j + 1];
    const double h = b.t - a.t;
    if (target == a.I) return {a.t, a.x};

    auto g = [&](double u) { return hermite::value(a.I, a.dI, b.I, b.dI, h, u) - target; };
    double lo = 0.0, hi = 1.0;
    double glo = a.I - target, ghi = b.I - target;
    int side = 0;
    double u = 0.5;
    for (int it2 = 0; it2 < 80; ++it2) {
      u = lo - glo * (hi - lo) / (ghi - glo);
      if (!(u > lo && u < hi)) u = 0.5 * (lo + hi);
      const double gu = g(u);
      if (gu == 0.0 || (hi - lo) * h < 1e-15) break;
      if ((gu < 0) == (glo < 0)) {
        lo = u;
        glo = gu;
        if (side == -1) ghi *= 0.5;
        side = -1;
      } else {
        hi = u;
        ghi = gu;
        if (side == 1) glo *= 0.5;
        side = 1;
      }
      if (std::abs(gu) < 1e-15 * std::max(1.0, std::abs(target))) break;
    }
    return {a.t + u * h, hermite::value(a.x, a.dx_right, b.x, b.dx_left, h, u)};
  }

 private:
  std::deque<Node> nodes_;
};

double record_hermite(const Trajectory& tr, std::size_t i, double t, bool derivative) {
  const double pos = t / tr.record_dt;
  const double nearest = std::round(pos);
  const auto last = static_cast<double>(tr.size() - 1);
  if (std::abs(pos - nearest) < 1e-9 && nearest >= 0 && nearest <= last) {
    const auto j = static_cast<std::size_t>(nearest);
    return derivative ? tr.slopes[j * tr.width + i] : tr.states[j * tr.width + i];
  }
  auto j = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, last - 1));
  const double u = pos - static_cast<double>(j);
  const double y0 = tr.states[j * tr.width + i], y1 = tr.states[(j + 1) * tr.width + i];
  const double d0 = tr.slopes[j * tr.width + i], d1 = tr.slopes[(j + 1) * tr.width + i];
  return derivative ? hermite::derivative(y0, d0, y1, d1, tr.record_dt, u)
                    : hermite::value(y0, d0, y1, d1, tr.record_dt, u);
}

void require_in_record(const Trajectory& tr, std::size_t i, double t) {
  if (i >= tr.width) fail(ErrorCode::OutOfDomain, "component index out of range");
  const double lo = i == 0 ? -tr.initial.r() : 0.0;
  if (!(t >= lo - 1e-12) || t > tr.end_time() + 1e-9 * std::max(1.0, tr.end_time())) {
    fail(ErrorCode::OutOfDomain, "time " + std::to_string(t) + " outside the recorded trajectory");
  }
}

}  // namespace

double Trajectory::component(std::size_t i, double t) const {
  require_in_record(*this, i, t);
  if (i == 0 && t <= 0.0) return initial.eval(std::max(t, -initial.r()));
  if (t <= 0.0) return states[i];
  return record_hermite(*this, i, t, false);
}

double Trajectory::component_slope(std::size_t i, double t) const {
  require_in_record(*this, i, t);
  if (i == 0 && t <= 0.0) return initial.slope_at(std::max(t, -initial.r()));
  if (t <= 0.0) return slopes[i];
  return record_hermite(*this, i, t, true);
}

Trajectory integrate(const CyclicSystemSpec& system, const DelayKernel& kernel, const Segment& initial,
                     double horizon, double dt, const IntegratorOptions& options) {
  const std::size_t N = system.n_components();
  if (initial.n_components() != N) fail(ErrorCode::InvalidArgument, "initial segment has the wrong N");
  if (!(horizon > 0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
  if (initial.r() < kernel.r() * (1.0 - 1e-12)) {
    fail(ErrorCode::InvalidArgument, "initial segment is shorter than the kernel's r");
  }
  const double max_dt = std::min(initial.step(), 0.5 / kernel.alpha2());
  if (!(dt > 0) || dt > max_dt * (1.0 + 1e-12)) {
    fail(ErrorCode::StepSize, "dt = " + std::to_string(dt) + " exceeds min(h, 1/(2 alpha2)) = " +
                                  std::to_string(max_dt));
  }
  if (options.record_stride == 0) fail(ErrorCode::InvalidArgument, "record stride must be positive");

  const std::size_t W = N + 1;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));

  HistoryStore hist;
  {
    const std::vector<double> tail = tail_kernel_integrals(initial, kernel);
    for (std::size_t k = 0; k < initial.size(); ++k) {
      const double x = initial.values()[k];
      const double d = initial.slopes()[k];
      hist.push({initial.time(k), x, d, d, -tail[k], kernel(x)});
    }
  }

  std::vector<double> y(W + 1), k1(W + 1), k2(W + 1), k3(W + 1), k4(W + 1), tmp(W + 1);
  for (std::size_t i = 0; i < W; ++i) y[i] = i == 0 ? initial.values().back() : initial.coordinate(i);
  y[W] = 0.0;

  auto rhs = [&](const std::vector<double>& s, std::vector<double>& out) {
    const auto del = hist.delayed(s[W] - 1.0);
    for (std::size_t i = 0; i < N; ++i) out[i] = system.component(i)(s[i], s[i + 1]);
    out[N] = system.component(N)(s[N], del.x);
    out[W] = kernel(s[0]);
    return del.eta;
  };

  Trajectory tr{system, kernel, initial, dt, dt * static_cast<double>(options.record_stride), W, {}, {}, {}, {}, {}};
  const std::size_t n_records = steps / options.record_stride + 1;
  tr.times.reserve(n_records);
  tr.states.reserve(n_records * W);
  tr.slopes.reserve(n_records * W);
  tr.eta.reserve(n_records);
  tr.integral.reserve(n_records);

  auto record = [&](std::size_t n, double eta) {
    tr.times.push_back(static_cast<double>(n / options.record_stride) * tr.record_dt);
    tr.states.insert(tr.states.end(), y.begin(), y.begin() + static_cast<std::ptrdiff_t>(W));
    tr.slopes.insert(tr.slopes.end(), k1.begin(), k1.begin() + static_cast<std::ptrdiff_t>(W));
    tr.eta.push_back(eta);
    tr.integral.push_back(y[W]);
  };

  double eta = rhs(y, k1);
  hist.back().dx_right = k1[0];
  record(0, eta);

  const double keep = initial.r() + static_cast<double>(options.history_margin_steps) * dt;
  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t i = 0; i <= W; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i <= W; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i <= W; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i <= W; ++i) y[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);

    for (std::size_t i = 0; i <= W; ++i) {
      if (!std::isfinite(y[i])) {
        fail(ErrorCode::BlowUp, "non-finite state at t = " + std::to_string(static_cast<double>(n + 1) * dt));
      }
    }
    eta = rhs(y, k1);
    const double t = static_cast<double>(n + 1) * dt;
    hist.push({t, y[0], k1[0], k1[0], y[W], k1[W]});
    hist.prune(t - keep);
    if ((n + 1) % options.record_stride == 0) record(n + 1, eta);
  }
  return tr;
}

Segment segment_at(const Trajectory& traj, double t, std::size_t nodes) {
  if (!(t >= 0.0) || t > traj.end_time() + 1e-9 * std::max(1.0, traj.end_time())) {
    fail(ErrorCode::OutOfDomain, "segment requested at t = " + std::to_string(t) + " outside coverage");
  }
  const double r = traj.initial.r();
  const double h = r / static_cast<double>(nodes - 1);
  std::vector<double> v(nodes), d(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double s = k + 1 == nodes ? 0.0 : -r + static_cast<double>(k) * h;
    double u = t + s;
    if (u <= 1e-12 * std::max(1.0, t)) {
      u = std::min(u, 0.0);
      v[k] = traj.initial.eval(std::max(u, -r));
      d[k] = traj.initial.slope_at(std::max(u, -r));
    } else {
      v[k] = traj.component(0, u);
      d[k] = traj.component_slope(0, u);
    }
  }
  std::vector<double> disc(traj.width - 1);
  for (std::size_t i = 1; i < traj.width; ++i) disc[i - 1] = traj.component(i, t);
  return Segment::make(std::move(v), std::move(d), std::move(disc), r, traj.width - 1);
}

std::size_t count_non_increasing(std::span<const double> series) noexcept {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i] > series[i - 1])) ++bad;
  }
  return bad;
}

TrajectoryCheckReport trajectory_checks(const Trajectory& traj) {
  TrajectoryCheckReport rep;
  rep.eta_violations = count_non_increasing(traj.eta);

  const double M = traj.system.dissipativity_bound();
  const double L0 = traj.system.lipschitz_bound();
  const double r = traj.initial.r();

  // Latest time at which |x^0| reached M, seeded from the initial data.
  double last_big = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.initial.size(); ++k) {
    if (std::abs(traj.initial.values()[k]) >= M) last_big = traj.initial.time(k);
  }
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double t = traj.times[j];
    const auto x = traj.state(j);
    double comp_max = 0.0;
    for (double xi : x) comp_max = std::max(comp_max, std::abs(xi));
    if (rep.entry_time) {
      if (comp_max >= M) ++rep.bound_exits;
    } else {
      if (std::abs(x[0]) >= M) last_big = t;
      if (t - r > last_big && comp_max < M) rep.entry_time = t;
    }
    if (t >= r && std::abs(traj.slope(j)[0]) > L0 * (1.0 + 1e-9)) ++rep.slope_violations;
  }
  return rep;
}

}  // namespace dlmorse
