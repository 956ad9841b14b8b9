#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dlmorse {

/// Default number of history nodes on [-r, 0].
inline constexpr std::size_t kDefaultGridNodes = 201;

/// Absolute sup-norm threshold below which a segment is treated as the origin.
inline constexpr double kOriginThreshold = 1e-9;

struct Norms {
  double sup = 0.0;
  double c1 = 0.0;
};

/// A phase-space point: x0 sampled on a uniform grid over [-r, 0] together
/// with its slopes, plus the discrete coordinates x1..xN. Immutable once
/// built; evaluation between nodes is cubic Hermite.
class Segment {
 public:
  /// Validates lengths, finiteness and r > 0. `n_components` must match
  /// discrete.size(); pass it explicitly so call sites state N.
  static Segment make(std::vector<double> values, std::vector<double> slopes,
                      std::vector<double> discrete, double r, std::size_t n_components);

  /// Convenience: N inferred from `discrete`.
  static Segment make(std::vector<double> values, std::vector<double> slopes,
                      std::vector<double> discrete, double r);

  double r() const noexcept { return r_; }
  double step() const noexcept { return h_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t n_components() const noexcept { return discrete_.size(); }

  double time(std::size_t k) const noexcept;
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> slopes() const noexcept { return slopes_; }
  std::span<const double> discrete() const noexcept { return discrete_; }

  /// phi(s) on K = [-r, 0] u {1..N}; positive s must be an integer index.
  double eval(double s) const;
  /// Hermite derivative on [-r, 0].
  double slope_at(double s) const;
  /// x^i for i in 1..N.
  double coordinate(std::size_t i) const;
  /// phi(N): the last discrete coordinate, or phi(0) when N = 0.
  double last_coordinate() const noexcept;

  /// Index of the cell containing s in [-r, 0] and the local coordinate.
  std::size_t locate(double s, double& u) const noexcept;

  Norms norms() const noexcept;
  double sup_norm() const noexcept { return norms().sup; }
  double max_abs_slope() const noexcept;

  bool near_origin() const noexcept { return sup_norm() <= kOriginThreshold; }

  /// Membership test for the phase space {||phi|| < M, L0-Lipschitz}, with
  /// the Lipschitz condition read off the slope samples.
  bool in_phase_space(double M, double L0, double tol = 1e-9) const noexcept;

 private:
  Segment() = default;

  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> discrete_;
  double r_ = 1.0;
  double h_ = 1.0;
};

/// Samples f and its derivative on the standard grid over [-r, 0].
template <class F, class DF>
Segment sample_segment(F&& f, DF&& df, double r, std::vector<double> discrete = {},
                       std::size_t nodes = kDefaultGridNodes) {
  std::vector<double> v(nodes), d(nodes);
  const double h = r / static_cast<double>(nodes - 1);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double s = k + 1 == nodes ? 0.0 : -r + static_cast<double>(k) * h;
    v[k] = f(s);
    d[k] = df(s);
  }
  const std::size_t n = discrete.size();
  return Segment::make(std::move(v), std::move(d), std::move(discrete), r, n);
}

/// Constant segment phi = c on K.
Segment constant_segment(double c, double r, std::size_t n_components = 0,
                         std::size_t nodes = kDefaultGridNodes);

/// Distances require matching grids (same r, node count and N).
double sup_distance(const Segment& a, const Segment& b);
double c1_distance(const Segment& a, const Segment& b);

}  // namespace dlmorse
