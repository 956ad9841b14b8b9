#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlmorse/cyclic_system.hpp"
#include "dlmorse/difference.hpp"
#include "dlmorse/morse.hpp"
#include "dlmorse/threshold_delay.hpp"

namespace dlmorse {

struct SystemConfig {
  /// "cyclic" or "discrete".
  std::string kind = "cyclic";
  /// f^0..f^N for the cyclic system; exactly one map for the discrete one.
  std::vector<NonlinearityPreset> components;
  int delta = -1;
  double dissipativity_bound = 1.0;  // cyclic only
  std::size_t delay_steps = 1;       // discrete only

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

struct KernelConfig {
  /// "plateau-ramp" (r, alpha0, alpha2, eps, slope) or "constant" (r, alpha0).
  std::string name = "plateau-ramp";
  std::map<std::string, double> params;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct IntegratorConfig {
  double dt = 1.0 / 400.0;
  double horizon = 500.0;
  double sample_dt = 0.5;
  std::size_t grid_nodes = kDefaultGridNodes;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

/// Initial segment for single-trajectory commands: "seed" (a member of the
/// scan's seed family), "constant" (value) or "sine"
/// (offset + amplitude sin(frequency s)).
struct InitialConfig {
  std::string kind = "seed";
  std::size_t index = 0;
  double value = 0.0;
  double offset = 0.0;
  double amplitude = 1.0;
  double frequency = 1.0;
  std::vector<double> discrete;  // for "constant"/"sine"; "seed" draws its own

  friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct ScanConfig {
  std::size_t seeds = 100;
  std::uint64_t rng_seed = 1;
  int modes = 6;
  double amplitude_fraction = 0.8;
  std::size_t window = 40;
  std::optional<int> n0;
  /// Continuous scans: 2r(N + 2) when unset.
  std::optional<double> transient;
  double origin_radius = 1e-3;
  double periodic_tol = 1e-3;
  double min_period = 1.0;
  double max_period = 20.0;
  // Discrete scans.
  std::vector<std::size_t> grid_counts;
  double grid_lo = -2.0;
  double grid_hi = 2.0;
  long steps = 1000;
  double zeta = 0.0;

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct OutputConfig {
  std::string directory = "out";
  /// Any of "json", "csv".
  std::vector<std::string> formats{"json"};

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ExperimentConfig {
  SystemConfig system;
  KernelConfig kernel;
  IntegratorConfig integrator;
  InitialConfig initial;
  ScanConfig scan;
  OutputConfig outputs;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Missing keys take the defaults above; unknown keys and wrong types throw
/// ErrorCode::Config.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json emit_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

CyclicSystemSpec build_cyclic_system(const ExperimentConfig& config);
DiscreteSystemSpec build_discrete_system(const ExperimentConfig& config);
DelayKernel build_kernel(const KernelConfig& config);
Segment build_initial_segment(const ExperimentConfig& config, const CyclicSystemSpec& system,
                              const DelayKernel& kernel);
SeedSpec build_seed_spec(const ScanConfig& scan);
EnsembleOptions build_ensemble_options(const ExperimentConfig& config);
SeedGrid build_seed_grid(const ExperimentConfig& config);
DiscreteScanOptions build_discrete_options(const ExperimentConfig& config);

}  // namespace dlmorse
