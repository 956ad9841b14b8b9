#pragma once

#include <cstdint>
#include <vector>

#include "dlmorse/cyclic_system.hpp"
#include "dlmorse/segment.hpp"

namespace dlmorse {

/// Reproducible family of initial segments: truncated random Fourier series
/// on [-r, 0] scaled into the phase space.
struct SeedSpec {
  std::size_t count = 100;
  std::uint64_t rng_seed = 1;
  int modes = 6;
  /// Target sup-norm as a fraction of the dissipativity bound M.
  double amplitude_fraction = 0.8;
};

/// The i-th seed depends only on (rng_seed, i). Sup-norm <= fraction * M and
/// max slope <= L0 for the given system.
Segment fourier_seed(const CyclicSystemSpec& system, double r, const SeedSpec& spec, std::size_t index,
                     std::size_t nodes = kDefaultGridNodes);

std::vector<Segment> make_seeds(const CyclicSystemSpec& system, double r, const SeedSpec& spec,
                                std::size_t nodes = kDefaultGridNodes);

}  // namespace dlmorse
