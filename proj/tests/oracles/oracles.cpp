#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dlmorse::oracle {

int brute_force_sign_changes(std::span<const double> seq, double zeta) {
  const std::size_t n = seq.size();
  int best = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    int picked = 0;
    bool ok = true;
    double prev = 0.0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      if (std::abs(seq[i]) <= zeta) {
        ok = false;
        break;
      }
      if (picked > 0 && prev * seq[i] >= 0) ok = false;
      prev = seq[i];
      ++picked;
    }
    if (ok) best = std::max(best, picked - 1);
  }
  return best;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::complex<double>> newton_root_scan(std::span<const double> mu, std::span<const double> gamma,
                                                   double tau0, double box, int per_axis) {
  using C = std::complex<double>;
  double g = 1.0;
  for (double x : gamma) g *= x;
  auto F = [&](C z) {
    C p = 1.0;
    for (double m : mu) p *= z - m;
    return p - std::exp(-z * tau0) * g;
  };
  auto dF = [&](C z) {
    // Logarithmic derivative of the polynomial part.
    C p = 1.0, s = 0.0;
    for (double m : mu) {
      p *= z - m;
      s += 1.0 / (z - m);
    }
    return p * s + tau0 * std::exp(-z * tau0) * g;
  };
  std::vector<C> roots;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      C z(-box + 2 * box * (i + 0.37) / per_axis, -box + 2 * box * (j + 0.61) / per_axis);
      bool done = false;
      for (int it = 0; it < 100; ++it) {
        const C d = dF(z);
        if (!std::isfinite(std::abs(d)) || std::abs(d) == 0.0) break;
        const C step = F(z) / d;
        z -= step;
        if (std::abs(z) > 10 * box) break;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
          done = true;
          break;
        }
      }
      if (!done || std::abs(F(z)) > 1e-8 * std::max(1.0, std::abs(z))) continue;
      if (std::none_of(roots.begin(), roots.end(), [&](C w) { return std::abs(w - z) < 1e-6; })) roots.push_back(z);
    }
  }
  return roots;
}

int count_right_half(const std::vector<std::complex<double>>& roots, double threshold) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](auto z) { return z.real() > threshold; }));
}

int scalar_crossing_count(double gamma, double tau0) {
  if (gamma >= 0) return 0;
  const double s = std::abs(gamma) * tau0;
  int count = 0;
  for (int k = 0; std::numbers::pi / 2 + 2 * std::numbers::pi * k < s; ++k) count += 2;
  return count;
}

}  // namespace dlmorse::oracle
