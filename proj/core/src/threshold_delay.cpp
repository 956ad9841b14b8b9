#include "dlmorse/threshold_delay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "dlmorse/error.hpp"
#include "dlmorse/hermite.hpp"

namespace dlmorse {

namespace {

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussNodes = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Integral of alpha(phi) over [s_k + u0 h, s_k + u1 h] inside cell k.
double cell_integral(const Segment& phi, const DelayKernel& alpha, std::size_t k, double u0, double u1) {
  const auto v = phi.values();
  const auto d = phi.slopes();
  const double h = phi.step();
  double acc = 0.0;
  for (std::size_t q = 0; q < 3; ++q) {
    const double u = u0 + (u1 - u0) * kGaussNodes[q];
    acc += kGaussWeights[q] * alpha(hermite::value(v[k], d[k], v[k + 1], d[k + 1], h, u));
  }
  return acc * (u1 - u0) * h;
}

// tail[k] = integral over [s_k, 0].
std::vector<double> tail_integrals(const Segment& phi, const DelayKernel& alpha) {
  const std::size_t n = phi.size();
  std::vector<double> tail(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) tail[k] = tail[k + 1] + cell_integral(phi, alpha, k, 0.0, 1.0);
  return tail;
}

double estimate_lipschitz(const DelayKernel::Profile& alpha, double range) {
  const std::size_t n = 20001;
  double lip = 0.0;
  double prev = alpha(-range);
  const double dx = 2 * range / static_cast<double>(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double cur = alpha(-range + static_cast<double>(k) * dx);
    lip = std::max(lip, std::abs(cur - prev) / dx);
    prev = cur;
  }
  return lip;
}

}  // namespace

DelayKernel DelayKernel::plateau_ramp(double r, double alpha0, double alpha2, double eps, double slope) {
  if (!(r > 0) || !(eps > 0)) fail(ErrorCode::InvalidArgument, "plateau kernel needs r > 0 and eps > 0");
  const double a1 = 1.0 / r;
  if (alpha2 < a1 || alpha0 < a1 || alpha0 > alpha2) {
    fail(ErrorCode::InvalidArgument, "plateau kernel needs 1/r <= alpha0 <= alpha2");
  }
  DelayKernel k;
  k.alpha_ = [=](double x) {
    const double ax = std::abs(x);
    if (ax < eps) return alpha0;
    return std::clamp(alpha0 + slope * (ax - eps), a1, alpha2);
  };
  k.r_ = r;
  k.alpha2_ = alpha2;
  k.alpha0_ = alpha0;
  k.eps_ = eps;
  k.lipschitz_ = std::abs(slope);
  k.description_ = {"plateau-ramp",
                    {{"r", r}, {"alpha0", alpha0}, {"alpha2", alpha2}, {"eps", eps}, {"slope", slope}}};
  return k;
}

DelayKernel DelayKernel::constant(double r, double alpha0) {
  if (!(r > 0) || alpha0 < 1.0 / r) fail(ErrorCode::InvalidArgument, "constant kernel needs alpha0 >= 1/r");
  DelayKernel k;
  k.alpha_ = [=](double) { return alpha0; };
  k.r_ = r;
  k.alpha2_ = alpha0;
  k.alpha0_ = alpha0;
  k.eps_ = std::numeric_limits<double>::infinity();
  k.lipschitz_ = 0.0;
  k.description_ = {"constant", {{"r", r}, {"alpha0", alpha0}}};
  return k;
}

DelayKernel DelayKernel::custom(Profile alpha, double r, double alpha2, std::optional<double> alpha0,
                                double eps, double lipschitz) {
  if (!alpha) fail(ErrorCode::InvalidArgument, "custom kernel needs a profile");
  if (!(r > 0) || alpha2 < 1.0 / r) fail(ErrorCode::InvalidArgument, "custom kernel needs alpha2 >= 1/r");
  DelayKernel k;
  k.r_ = r;
  k.alpha2_ = alpha2;
  k.alpha0_ = alpha0;
  k.eps_ = eps;
  k.lipschitz_ = lipschitz > 0 ? lipschitz : estimate_lipschitz(alpha, 10.0);
  k.alpha_ = std::move(alpha);
  return k;
}

double DelayKernel::tau0() const {
  if (!alpha0_) fail(ErrorCode::InvalidArgument, "kernel has no plateau value alpha0");
  return 1.0 / *alpha0_;
}

std::vector<std::string> DelayKernel::validate(double range, std::size_t samples) const {
  std::vector<std::string> out;
  const double a1 = alpha1();
  const double tol = 1e-12 * std::max(1.0, alpha2_);
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = -range + 2 * range * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double a = alpha_(x);
    if (!std::isfinite(a) || a < a1 - tol || a > alpha2_ + tol) {
      std::ostringstream os;
      os << "alpha(" << x << ") = " << a << " outside [" << a1 << ", " << alpha2_ << "]";
      out.push_back(os.str());
      break;
    }
    if (alpha0_ && std::abs(x) < eps_ && a != *alpha0_) {
      std::ostringstream os;
      os << "alpha(" << x << ") = " << a << " differs from plateau value " << *alpha0_;
      out.push_back(os.str());
      break;
    }
  }
  return out;
}

std::vector<double> tail_kernel_integrals(const Segment& phi, const DelayKernel& kernel) {
  return tail_integrals(phi, kernel);
}

double kernel_integral(const Segment& phi, const DelayKernel& kernel, double tau) {
  if (!(tau >= 0.0) || tau > phi.r() * (1.0 + 1e-12)) {
    fail(ErrorCode::OutOfDomain, "tau " + std::to_string(tau) + " outside [0, r]");
  }
  if (tau == 0.0) return 0.0;
  double u = 0.0;
  const std::size_t k = phi.locate(-tau, u);
  double acc = cell_integral(phi, kernel, k, u, 1.0);
  for (std::size_t j = k + 1; j + 1 < phi.size(); ++j) acc += cell_integral(phi, kernel, j, 0.0, 1.0);
  return acc;
}

double solve_threshold_delay(const Segment& phi, const DelayKernel& kernel) {
  const std::vector<double> tail = tail_integrals(phi, kernel);
  const double lo_tau = 1.0 / kernel.alpha2();
  const double hi_tau = std::min(kernel.r(), phi.r());

  if (tail.front() < 1.0 - 1e-12 || kernel_integral(phi, kernel, hi_tau) < 1.0 - 1e-10) {
    fail(ErrorCode::BracketFailure, "threshold integral never reaches 1: alpha fell below 1/r");
  }
  if (kernel_integral(phi, kernel, lo_tau) > 1.0 + 1e-10) {
    fail(ErrorCode::BracketFailure, "threshold integral exceeds 1 before 1/alpha2: alpha above alpha2");
  }

  // Bisection over cells: tail[] is decreasing in the node index.
  std::size_t lo = 0;
  std::size_t hi = phi.size() - 1;  // tail[hi] = 0 < 1 <= tail[lo]
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (tail[mid] >= 1.0) lo = mid;
    else hi = mid;
  }
  const std::size_t k = lo;

  // Root of g(u) = tail[k+1] + int_{u}^{1} - 1 on the cell; g decreasing in u.
  auto g = [&](double u) { return tail[k + 1] + cell_integral(phi, kernel, k, u, 1.0) - 1.0; };
  double a = 0.0, b = 1.0;
  double ga = g(a), gb = g(b);
  if (ga <= 0.0) return std::clamp(-phi.time(k), lo_tau, hi_tau);

  // Illinois-modified regula falsi with a bisection guard.
  int side = 0;
  for (int it = 0; it < 100 && (b - a) * phi.step() > 1e-15; ++it) {
    double c = b - gb * (b - a) / (gb - ga);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    const double gc = g(c);
    if (gc == 0.0) {
      a = b = c;
      break;
    }
    if ((gc > 0) == (ga > 0)) {
      a = c;
      ga = gc;
      if (side == -1) gb *= 0.5;
      side = -1;
    } else {
      b = c;
      gb = gc;
      if (side == 1) ga *= 0.5;
      side = 1;
    }
    if (std::abs(gc) < 1e-15) {
      a = b = c;
      break;
    }
  }
  const double u = 0.5 * (a + b);
  const double tau = -(phi.time(k) + u * phi.step());
  return std::clamp(tau, lo_tau, hi_tau);
}

double delay_lipschitz_bound(const DelayKernel& kernel) noexcept {
  return kernel.r() * kernel.r() * kernel.lipschitz();
}

}  // namespace dlmorse
