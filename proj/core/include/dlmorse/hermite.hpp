#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace dlmorse::hermite {

// Cubic Hermite on one cell [t0, t0 + h] with end values y0, y1 and end
// derivatives d0, d1. `u` is the local coordinate (t - t0) / h in [0, 1].

inline double value(double y0, double d0, double y1, double d1, double h, double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

inline double derivative(double y0, double d0, double y1, double d1, double h, double u) {
  const double u2 = u * u;
  const double g00 = 6 * u2 - 6 * u;
  const double g10 = 3 * u2 - 4 * u + 1;
  const double g01 = -6 * u2 + 6 * u;
  const double g11 = 3 * u2 - 2 * u;
  return (g00 * y0 + g01 * y1) / h + g10 * d0 + g11 * d1;
}

/// Interior critical points of the cubic, as local coordinates in (0, 1).
/// Returns the number written to `out`.
inline std::size_t critical_points(double y0, double d0, double y1, double d1, double h,
                                   std::array<double, 2>& out) {
  // p'(u)/h = A u^2 + B u + C after collecting the derivative weights.
  const double A = (6 * y0 - 6 * y1) / h + 3 * d0 + 3 * d1;
  const double B = (-6 * y0 + 6 * y1) / h - 4 * d0 - 2 * d1;
  const double C = d0;
  std::size_t n = 0;
  auto keep = [&](double u) {
    if (u > 0.0 && u < 1.0) out[n++] = u;
  };
  const double scale = std::abs(A) + std::abs(B) + std::abs(C);
  if (scale == 0.0) return 0;
  if (std::abs(A) <= 1e-14 * scale) {
    if (std::abs(B) > 1e-14 * scale) keep(-C / B);
    return n;
  }
  const double disc = B * B - 4 * A * C;
  if (disc < 0) return 0;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (B + std::copysign(sq, B));
  double r1 = q / A;
  double r2 = q != 0.0 ? C / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  keep(r1);
  if (r2 != r1) keep(r2);
  return n;
}

}  // namespace dlmorse::hermite
