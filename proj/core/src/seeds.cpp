#include "dlmorse/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dlmorse/error.hpp"

namespace dlmorse {

Segment fourier_seed(const CyclicSystemSpec& system, double r, const SeedSpec& spec, std::size_t index,
                     std::size_t nodes) {
  if (spec.modes < 1) fail(ErrorCode::InvalidArgument, "seed family needs at least one mode");
  if (!(spec.amplitude_fraction > 0 && spec.amplitude_fraction < 1)) {
    fail(ErrorCode::InvalidArgument, "amplitude fraction must lie in (0, 1)");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(spec.rng_seed), static_cast<std::uint32_t>(spec.rng_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Number of active modes varies per seed so initial oscillation counts spread out.
  const int active = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.modes));
  const double c0 = 0.5 * unit(rng);
  std::vector<double> a(active), b(active);
  for (int k = 0; k < active; ++k) {
    a[k] = unit(rng) / (k + 1);
    b[k] = unit(rng) / (k + 1);
  }
  const std::size_t N = system.n_components();
  std::vector<double> disc(N);
  for (auto& d : disc) d = unit(rng);

  const double w = std::numbers::pi / r;
  std::vector<double> v(nodes), dv(nodes);
  const double h = r / static_cast<double>(nodes - 1);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double s = j + 1 == nodes ? 0.0 : -r + static_cast<double>(j) * h;
    double x = c0, dx = 0.0;
    for (int k = 0; k < active; ++k) {
      const double wk = w * (k + 1);
      x += a[k] * std::cos(wk * s) + b[k] * std::sin(wk * s);
      dx += wk * (-a[k] * std::sin(wk * s) + b[k] * std::cos(wk * s));
    }
    v[j] = x;
    dv[j] = dx;
  }

  double sup = 0.0, slope = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    sup = std::max(sup, std::abs(v[j]));
    slope = std::max(slope, std::abs(dv[j]));
  }
  for (double d : disc) sup = std::max(sup, std::abs(d));
  double scale = spec.amplitude_fraction * system.dissipativity_bound() / sup;
  if (slope > 0) scale = std::min(scale, system.lipschitz_bound() / slope);
  for (auto& x : v) x *= scale;
  for (auto& x : dv) x *= scale;
  for (auto& x : disc) x *= scale;
  return Segment::make(std::move(v), std::move(dv), std::move(disc), r, N);
}

std::vector<Segment> make_seeds(const CyclicSystemSpec& system, double r, const SeedSpec& spec,
                                std::size_t nodes) {
  std::vector<Segment> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(fourier_seed(system, r, spec, i, nodes));
  return out;
}

}  // namespace dlmorse
