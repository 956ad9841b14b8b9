#include "dlmorse/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlmorse/error.hpp"

namespace dlmorse {

namespace {

cplx char_fn_derivative(cplx lambda, std::span<const double> mu, std::span<const double> gamma, double tau0) {
  // d/dlambda prod (lambda - mu^i) by the product rule.
  cplx dp = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    cplx term = 1.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (j != i) term *= lambda - mu[j];
    }
    dp += term;
  }
  double g = 1.0;
  for (double x : gamma) g *= x;
  return dp + tau0 * std::exp(-lambda * tau0) * g;
}

struct Contour {
  std::span<const double> mu, gamma;
  double tau0;
  const SpectrumOptions& opt;
  double scale;  // length scale for the closeness test
  std::size_t evals = 0;

  cplx F(cplx z) {
    ++evals;
    return char_fn(z, mu, gamma, tau0);
  }

  // Accumulated phase change of F along [a, b]; splits while a step turns by
  // more than pi/2. Returns false when the path passes too close to a root.
  bool phase(cplx a, cplx b, cplx fa, cplx fb, int depth, double& acc) {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= std::numbers::pi / 2 || depth >= opt.max_depth) {
      if (depth >= opt.max_depth && std::abs(d) > std::numbers::pi / 2) return false;
      acc += d;
      return true;
    }
    const cplx m = 0.5 * (a + b);
    const cplx fm = F(m);
    if (std::abs(fm) < 1e-12) return false;
    return phase(a, m, fa, fm, depth + 1, acc) && phase(m, b, fm, fb, depth + 1, acc);
  }

  bool edge(cplx a, cplx b, double& acc) {
    const auto n = static_cast<std::size_t>(
        std::max(16.0, std::ceil(std::abs(b - a) * opt.density * std::max(1.0, tau0))));
    cplx za = a;
    cplx fa = F(za);
    if (std::abs(fa) < 1e-12) return false;
    for (std::size_t k = 1; k <= n; ++k) {
      const cplx zb = a + (b - a) * (static_cast<double>(k) / static_cast<double>(n));
      const cplx fb = F(zb);
      if (std::abs(fb) < 1e-12) return false;
      if (!phase(za, zb, fa, fb, 0, acc)) return false;
      za = zb;
      fa = fb;
    }
    return true;
  }
};

bool try_winding(std::span<const double> mu, std::span<const double> gamma, double tau0, double x0,
                 double x1, double y0, double y1, const SpectrumOptions& opt, int& winding,
                 std::size_t& evals) {
  Contour c{mu, gamma, tau0, opt, std::max({std::abs(x1 - x0), std::abs(y1 - y0), 1.0})};
  double acc = 0.0;
  const cplx p0(x0, y0), p1(x1, y0), p2(x1, y1), p3(x0, y1);
  const bool ok = c.edge(p0, p1, acc) && c.edge(p1, p2, acc) && c.edge(p2, p3, acc) && c.edge(p3, p0, acc);
  evals += c.evals;
  if (!ok) return false;
  winding = static_cast<int>(std::lround(acc / (2 * std::numbers::pi)));
  return true;
}

}  // namespace

double modulus_bound(std::span<const double> mu, std::span<const double> gamma) noexcept {
  double mu_max = 0.0;
  for (double m : mu) mu_max = std::max(mu_max, std::abs(m));
  double log_g = 0.0;
  for (double g : gamma) log_g += std::log(std::abs(g));
  return mu_max + std::exp(log_g / static_cast<double>(gamma.size())) + 1.0;
}

Linearization linearize(const CyclicSystemSpec& system, const DelayKernel& kernel) {
  Linearization lin;
  constexpr double h = 1e-6;
  for (const auto& f : system.components()) {
    const double d1 = f.d1_at_origin() ? *f.d1_at_origin() : (f(h, 0.0) - f(-h, 0.0)) / (2 * h);
    const double d2 = f.d2_at_origin() ? *f.d2_at_origin() : (f(0.0, h) - f(0.0, -h)) / (2 * h);
    if (!std::isfinite(d1) || !std::isfinite(d2)) {
      fail(ErrorCode::NonFinite, "derivative estimate at the origin is not finite");
    }
    lin.mu.push_back(d1);
    lin.gamma.push_back(d2);
  }
  lin.tau0 = kernel.tau0();
  return lin;
}

cplx char_fn(cplx lambda, std::span<const double> mu, std::span<const double> gamma, double tau0) {
  cplx p = 1.0;
  for (double m : mu) p *= lambda - m;
  double g = 1.0;
  for (double x : gamma) g *= x;
  return p - std::exp(-lambda * tau0) * g;
}

int winding_number(std::span<const double> mu, std::span<const double> gamma, double tau0, double x0,
                   double x1, double y0, double y1, const SpectrumOptions& options, std::size_t* samples) {
  int w = 0;
  std::size_t evals = 0;
  if (!try_winding(mu, gamma, tau0, x0, x1, y0, y1, options, w, evals)) {
    fail(ErrorCode::ContourFailure, "contour passes through a root");
  }
  if (samples) *samples = evals;
  return w;
}

RootCount count_unstable_roots(std::span<const double> mu, std::span<const double> gamma, double tau0,
                               const SpectrumOptions& options) {
  if (mu.size() != gamma.size() || mu.empty()) fail(ErrorCode::InvalidArgument, "mu and gamma must match");
  for (double g : gamma) {
    if (g == 0.0 || !std::isfinite(g)) fail(ErrorCode::InvalidArgument, "gamma entries must be nonzero");
  }
  for (std::size_t i = 0; i + 1 < gamma.size(); ++i) {
    if (!(gamma[i] > 0)) fail(ErrorCode::InvalidArgument, "gamma^i must be positive for i < N");
  }
  if (!(tau0 > 0)) fail(ErrorCode::InvalidArgument, "tau0 must be positive");

  RootCount out;
  const double B = modulus_bound(mu, gamma);
  const double tol = options.tol_hyp;
  out.contour.tol_hyp = tol;

  // Deterministic retry schedule: stretch the outer box, keep the inner edge.
  for (int attempt = 0; attempt < 6; ++attempt) {
    const double grow = 1.0 + 0.0137 * attempt;
    const double sigma_hi = B * grow;
    const double omega = B * grow * (1.0 + 0.0071 * attempt);
    const double sigma_lo = tol * (1.0 + 0.01 * attempt);
    std::size_t evals = 0, strip_evals = 0;
    int m = 0, strip = 0;
    if (!try_winding(mu, gamma, tau0, sigma_lo, sigma_hi, -omega, omega, options, m, evals)) continue;
    if (!try_winding(mu, gamma, tau0, -sigma_lo, sigma_lo, -omega, omega, options, strip, strip_evals)) continue;
    out.m_star = m;
    out.nonhyperbolic = strip > 0;
    out.contour = {sigma_lo, sigma_hi, omega, tol, evals, strip_evals, attempt};
    return out;
  }
  fail(ErrorCode::ContourFailure, "argument-principle contour kept passing within 1e-12 of a root");
}

int compute_nstar(int m_star, bool nonhyperbolic, Feedback delta) noexcept {
  const bool odd = m_star % 2 != 0;
  const bool bump = delta == Feedback::Positive ? odd : !odd;
  return nonhyperbolic && bump ? m_star + 1 : m_star;
}

std::vector<cplx> locate_roots(std::span<const double> mu, std::span<const double> gamma, double tau0,
                               double x0, double x1, double y0, double y1, int seeds_x, int seeds_y) {
  std::vector<cplx> roots;
  const double merge = 1e-6 * std::max(1.0, std::max(std::abs(x1 - x0), std::abs(y1 - y0)));
  for (int i = 0; i < seeds_x; ++i) {
    for (int j = 0; j < seeds_y; ++j) {
      cplx z(x0 + (x1 - x0) * (i + 0.5) / seeds_x, y0 + (y1 - y0) * (j + 0.5) / seeds_y);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const cplx f = char_fn(z, mu, gamma, tau0);
        const cplx df = char_fn_derivative(z, mu, gamma, tau0);
        if (std::abs(df) == 0.0) break;
        const cplx step = f / df;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e6) break;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      if (z.real() < x0 - 1.0 || z.real() > x1 + 1.0 || z.imag() < y0 - 1.0 || z.imag() > y1 + 1.0) continue;
      const bool seen = std::any_of(roots.begin(), roots.end(), [&](cplx w) { return std::abs(w - z) < merge; });
      if (!seen) roots.push_back(z);
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return roots;
}

SpectrumReport spectrum_report(const CyclicSystemSpec& system, const DelayKernel& kernel,
                               const SpectrumOptions& options) {
  SpectrumReport rep;
  rep.lin = linearize(system, kernel);
  rep.delta = system.delta();
  const RootCount rc = count_unstable_roots(rep.lin.mu, rep.lin.gamma, rep.lin.tau0, options);
  rep.m_star = rc.m_star;
  rep.nonhyperbolic = rc.nonhyperbolic;
  rep.contour = rc.contour;
  rep.n_star = compute_nstar(rc.m_star, rc.nonhyperbolic, rep.delta);
  rep.modulus_bound = modulus_bound(rep.lin.mu, rep.lin.gamma);
  const double B = rep.modulus_bound;
  rep.located_roots = locate_roots(rep.lin.mu, rep.lin.gamma, rep.lin.tau0, -B, B, -B, B);
  return rep;
}

}  // namespace dlmorse
