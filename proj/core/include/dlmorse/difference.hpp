#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlmorse/cyclic_system.hpp"
#include "dlmorse/lyapunov.hpp"
#include "dlmorse/morse.hpp"

namespace dlmorse {

/// x_{k+1} = f(x_k, x_{k-n}) with feedback sign delta.
class DiscreteSystemSpec {
 public:
  static DiscreteSystemSpec make(std::size_t n, Nonlinearity map, Feedback delta);

  std::size_t n() const noexcept { return n_; }
  const Nonlinearity& map() const noexcept { return f_; }
  Feedback delta() const noexcept { return delta_; }

  /// Sampled check of delta * v * f(0, v) > 0.
  std::vector<std::string> validate(double range = 2.0) const;

 private:
  DiscreteSystemSpec(std::size_t n, Nonlinearity f, Feedback delta) : n_(n), f_(std::move(f)), delta_(delta) {}

  std::size_t n_;
  Nonlinearity f_;
  Feedback delta_;
};

/// State vectors (x_k, x_{k-1}, ..., x_{k-n}) for k = 0..steps; the first is `initial`.
std::vector<std::vector<double>> orbit(const DiscreteSystemSpec& spec, std::span<const double> initial,
                                       std::size_t steps);

/// One step of the state map.
void advance(const DiscreteSystemSpec& spec, std::vector<double>& state);

/// Sign-change count of the entries skipping |x| <= zeta, parity-adjusted
/// by delta. Throws UndefinedOnOrigin when no entry carries a sign.
LyapunovValue v_vector(std::span<const double> v, Feedback delta, double zeta = 0.0);

/// Finite set of initial state vectors stored row-major.
struct SeedGrid {
  std::size_t dim = 0;
  std::vector<double> points;

  std::size_t size() const noexcept { return dim ? points.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }

  /// Cell-centred lattice on [lo, hi]^dim with counts[j] points on axis j;
  /// symmetric ranges with even counts avoid exact zeros.
  static SeedGrid lattice(const std::vector<std::size_t>& counts, double lo, double hi);
};

struct DiscreteScanOptions {
  long steps = 1000;
  std::size_t window = 50;
  std::optional<int> n_star;
  std::optional<int> n0;
  double origin_radius = 1e-6;
  double zeta = 0.0;
  double periodic_tol = 1e-9;
  long max_period = 64;
  unsigned threads = 0;
};

/// Transient cutoff 4n + 2.
inline long regularization_time(std::size_t n) noexcept { return 4 * static_cast<long>(n) + 2; }

/// Iterates every seed and checks V step by step with exact integer
/// comparisons; levels after the transient feed the level graph.
MorseReport<long> discrete_scan(const DiscreteSystemSpec& spec, const SeedGrid& seeds,
                                const DiscreteScanOptions& options);

/// Roots of the monic polynomial z^d + c[d-1] z^{d-1} + ... + c[0] by
/// Durand-Kerner iteration.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

struct DiscreteSpectrum {
  double a = 0.0;  // D1 f(0, 0)
  double b = 0.0;  // D2 f(0, 0)
  std::vector<std::complex<double>> roots;
  int m_star = 0;  // roots with |z| > 1
  bool nonhyperbolic = false;
  int n_star = 0;
};

/// Multipliers of z^{n+1} - a z^n - b at the origin and the derived N*.
DiscreteSpectrum discrete_spectrum(const DiscreteSystemSpec& spec, double tol = 1e-9);

}  // namespace dlmorse
