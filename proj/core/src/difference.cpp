#include "dlmorse/difference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlmorse/error.hpp"
#include "dlmorse/spectrum.hpp"

namespace dlmorse {

DiscreteSystemSpec DiscreteSystemSpec::make(std::size_t n, Nonlinearity map, Feedback delta) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "delay n must be at least 1");
  return DiscreteSystemSpec(n, std::move(map), delta);
}

std::vector<std::string> DiscreteSystemSpec::validate(double range) const {
  std::vector<std::string> out;
  if (!satisfies_feedback(f_, to_int(delta_), range)) {
    out.push_back("feedback condition delta * v * f(0, v) > 0 fails");
  }
  return out;
}

void advance(const DiscreteSystemSpec& spec, std::vector<double>& state) {
  const double next = spec.map()(state.front(), state.back());
  if (!std::isfinite(next)) fail(ErrorCode::BlowUp, "non-finite iterate");
  std::rotate(state.rbegin(), state.rbegin() + 1, state.rend());
  state.front() = next;
}

std::vector<std::vector<double>> orbit(const DiscreteSystemSpec& spec, std::span<const double> initial,
                                       std::size_t steps) {
  if (initial.size() != spec.n() + 1) fail(ErrorCode::InvalidArgument, "initial vector needs n + 1 entries");
  for (double x : initial) {
    if (!std::isfinite(x)) fail(ErrorCode::NonFinite, "initial vector has a non-finite entry");
  }
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  std::vector<double> s(initial.begin(), initial.end());
  out.push_back(s);
  for (std::size_t k = 0; k < steps; ++k) {
    advance(spec, s);
    out.push_back(s);
  }
  return out;
}

LyapunovValue v_vector(std::span<const double> v, Feedback delta, double zeta) {
  SignCounter counter(zeta);
  for (double x : v) counter.push(x);
  if (!counter.saw_sign()) fail(ErrorCode::UndefinedOnOrigin, "V is undefined on the zero vector");
  LyapunovValue out;
  out.sc = counter.count();
  out.branch = branch_for(delta);
  out.value = apply_parity(out.sc, out.branch);
  return out;
}

SeedGrid SeedGrid::lattice(const std::vector<std::size_t>& counts, double lo, double hi) {
  if (counts.empty() || !(hi > lo)) fail(ErrorCode::InvalidArgument, "lattice needs axes and lo < hi");
  SeedGrid g;
  g.dim = counts.size();
  std::size_t total = 1;
  for (auto c : counts) {
    if (c == 0) fail(ErrorCode::InvalidArgument, "lattice axis without points");
    total *= c;
  }
  g.points.reserve(total * g.dim);
  std::vector<std::size_t> idx(g.dim, 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t j = 0; j < g.dim; ++j) {
      g.points.push_back(lo + (hi - lo) * (static_cast<double>(idx[j]) + 0.5) / static_cast<double>(counts[j]));
    }
    for (std::size_t j = g.dim; j-- > 0;) {
      if (++idx[j] < counts[j]) break;
      idx[j] = 0;
    }
  }
  return g;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  using C = std::complex<double>;
  const std::size_t d = coeffs.size();
  if (d == 0) return {};
  auto p = [&](C z) {
    C acc = 1.0;
    for (std::size_t j = d; j-- > 0;) acc = acc * z + coeffs[j];
    return acc;
  };
  double radius = 0.0;
  for (double c : coeffs) radius = std::max(radius, std::abs(c));
  radius = 1.0 + radius;  // Cauchy bound
  std::vector<C> z(d);
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = std::polar(radius * 0.9, 2 * std::numbers::pi * (static_cast<double>(i) + 0.25) / static_cast<double>(d));
  }
  for (int it = 0; it < 2000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      C den = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      if (std::abs(den) == 0.0) den = 1e-300;
      const C step = p(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (change < 1e-15) break;
  }
  std::sort(z.begin(), z.end(), [](C a, C b) { return std::abs(a) > std::abs(b); });
  return z;
}

DiscreteSpectrum discrete_spectrum(const DiscreteSystemSpec& spec, double tol) {
  DiscreteSpectrum out;
  const auto& f = spec.map();
  constexpr double h = 1e-6;
  out.a = f.d1_at_origin() ? *f.d1_at_origin() : (f(h, 0.0) - f(-h, 0.0)) / (2 * h);
  out.b = f.d2_at_origin() ? *f.d2_at_origin() : (f(0.0, h) - f(0.0, -h)) / (2 * h);
  if (!std::isfinite(out.a) || !std::isfinite(out.b)) fail(ErrorCode::NonFinite, "derivative estimate is not finite");
  const std::size_t n = spec.n();
  // z^{n+1} - a z^n - b
  std::vector<double> c(n + 1, 0.0);
  c[0] = -out.b;
  c[n] = -out.a;
  out.roots = polynomial_roots(c);
  for (const auto& z : out.roots) {
    const double m = std::abs(z);
    if (m > 1.0 + tol) ++out.m_star;
    if (std::abs(m - 1.0) <= tol) out.nonhyperbolic = true;
  }
  out.n_star = compute_nstar(out.m_star, out.nonhyperbolic, spec.delta());
  return out;
}

namespace {

struct DiscreteOutcome {
  TrajectoryRecord<long> record;
  std::vector<Violation<long>> violations;
};

DiscreteOutcome scan_seed(const DiscreteSystemSpec& spec, std::span<const double> init, std::size_t index,
                          const DiscreteScanOptions& opt) {
  DiscreteOutcome out;
  auto& rec = out.record;
  rec.seed = index;
  const bool origin = std::all_of(init.begin(), init.end(), [&](double x) { return std::abs(x) <= opt.zeta; });
  if (origin) {
    rec.excluded = true;
    rec.near_origin_tail = true;
    return out;
  }
  const long T = regularization_time(spec.n());
  const long tail_from = opt.steps - opt.steps / 4;
  const auto level_of = [&](const std::vector<double>& s) -> std::optional<int> {
    if (std::all_of(s.begin(), s.end(), [&](double x) { return std::abs(x) <= opt.zeta; })) return std::nullopt;
    return v_vector(s, spec.delta(), opt.zeta).value;
  };

  std::vector<double> s(init.begin(), init.end());
  const std::size_t width = s.size();
  const auto P = static_cast<std::size_t>(std::max(1L, opt.max_period));
  std::vector<double> history;  // last P + 1 states, for the period search
  try {
    for (double& x : s) {
      if (std::abs(x) <= opt.zeta) {
        x = 1e-12;
        rec.perturbed = true;
      }
    }
    LevelTracker<long> tracker(index, T);
    rec.initial_level = level_of(s);
    tracker.push(0, rec.initial_level);
    for (long k = 1; k <= opt.steps; ++k) {
      advance(spec, s);
      if (std::abs(s.front()) <= opt.zeta && !std::all_of(s.begin() + 1, s.end(), [&](double x) { return std::abs(x) <= opt.zeta; })) {
        s.front() = 1e-12;
        rec.perturbed = true;
      }
      tracker.push(k, level_of(s));
      if (k >= tail_from) {
        for (double x : s) rec.tail_sup_norm = std::max(rec.tail_sup_norm, std::abs(x));
      }
      if (opt.steps - k <= static_cast<long>(P)) history.insert(history.end(), s.begin(), s.end());
    }
    tracker.finish(rec, opt.window);
    out.violations = tracker.take_violations();
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.code())) + ": " + e.what();
    return out;
  }

  rec.near_origin_tail = rec.tail_sup_norm < opt.origin_radius;
  if (!rec.near_origin_tail && history.size() >= 2 * width) {
    const std::size_t m = history.size() / width;
    const auto last = std::span<const double>(history).subspan((m - 1) * width, width);
    for (std::size_t p = 1; p < m; ++p) {
      const auto prev = std::span<const double>(history).subspan((m - 1 - p) * width, width);
      double d = 0.0;
      for (std::size_t j = 0; j < width; ++j) d = std::max(d, std::abs(last[j] - prev[j]));
      if (d < opt.periodic_tol) {
        rec.period = static_cast<long>(p);
        break;
      }
    }
    // An equilibrium has period 1; level constancy over a period is then trivial.
    if (rec.period && !rec.runs.empty()) {
      const auto& run = rec.runs.back();
      if (!run.level || run.count < static_cast<std::size_t>(*rec.period) + 1) {
        out.violations.push_back({ViolationKind::PeriodicLevel, index, run.start, 0, run.level.value_or(-1), true});
      }
    }
  }
  if (rec.perturbed) {
    for (auto& v : out.violations) v.required = false;
  }
  return out;
}

}  // namespace

MorseReport<long> discrete_scan(const DiscreteSystemSpec& spec, const SeedGrid& seeds, const DiscreteScanOptions& options) {
  if (seeds.dim != spec.n() + 1) fail(ErrorCode::InvalidArgument, "seed dimension must be n + 1");
  if (options.steps < 1) fail(ErrorCode::InvalidArgument, "steps must be positive");
  MorseReport<long> report;
  report.n_star = options.n_star ? *options.n_star : discrete_spectrum(spec).n_star;
  report.n0 = options.n0 ? *options.n0 : report.n_star + 2;

  std::vector<DiscreteOutcome> outcomes(seeds.size());
  parallel_for(seeds.size(), options.threads,
               [&](std::size_t i) { outcomes[i] = scan_seed(spec, seeds.point(i), i, options); });
  report.trajectories.reserve(outcomes.size());
  for (auto& o : outcomes) {
    report.trajectories.push_back(std::move(o.record));
    report.violations.insert(report.violations.end(), o.violations.begin(), o.violations.end());
  }
  assemble_report(report);
  check_nstar_consistency(report, report.n_star, options.origin_radius);
  return report;
}

}  // namespace dlmorse
