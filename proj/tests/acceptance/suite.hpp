#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dlmorse::acceptance {

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  /// Criteria to run; empty runs all twelve.
  std::vector<int> only;
  std::uint64_t rng_seed = 20240917;
};

/// Runs the criteria in order. When `out` is set, one line per criterion is
/// written as soon as it finishes.
std::vector<Result> run(const Options& options = {}, std::ostream* out = nullptr);

std::string format(const Result& r);

}  // namespace dlmorse::acceptance
