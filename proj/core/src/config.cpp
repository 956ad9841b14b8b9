#include "dlmorse/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "dlmorse/error.hpp"

namespace dlmorse {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(ErrorCode::Config, where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(ErrorCode::Config, "unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, where + "." + key + ": " + e.what());
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v, where);
  out = v;
}

NonlinearityPreset parse_preset(const json& j) {
  only_keys(j, "system.components[]", {"family", "params"});
  NonlinearityPreset p;
  read(j, "family", p.family, "component");
  read(j, "params", p.params, "component");
  return p;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  only_keys(j, "config", {"system", "kernel", "integrator", "initial", "scan", "outputs"});
  ExperimentConfig c;
  if (j.contains("system")) {
    const auto& s = j.at("system");
    only_keys(s, "system", {"kind", "components", "delta", "dissipativity_bound", "delay_steps"});
    read(s, "kind", c.system.kind, "system");
    if (s.contains("components")) {
      if (!s.at("components").is_array()) fail(ErrorCode::Config, "system.components must be an array");
      for (const auto& e : s.at("components")) c.system.components.push_back(parse_preset(e));
    }
    read(s, "delta", c.system.delta, "system");
    read(s, "dissipativity_bound", c.system.dissipativity_bound, "system");
    read(s, "delay_steps", c.system.delay_steps, "system");
  }
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    only_keys(k, "kernel", {"name", "params"});
    read(k, "name", c.kernel.name, "kernel");
    read(k, "params", c.kernel.params, "kernel");
  }
  if (j.contains("integrator")) {
    const auto& i = j.at("integrator");
    only_keys(i, "integrator", {"dt", "horizon", "sample_dt", "grid_nodes"});
    read(i, "dt", c.integrator.dt, "integrator");
    read(i, "horizon", c.integrator.horizon, "integrator");
    read(i, "sample_dt", c.integrator.sample_dt, "integrator");
    read(i, "grid_nodes", c.integrator.grid_nodes, "integrator");
  }
  if (j.contains("initial")) {
    const auto& i = j.at("initial");
    only_keys(i, "initial", {"kind", "index", "value", "offset", "amplitude", "frequency", "discrete"});
    read(i, "kind", c.initial.kind, "initial");
    read(i, "index", c.initial.index, "initial");
    read(i, "value", c.initial.value, "initial");
    read(i, "offset", c.initial.offset, "initial");
    read(i, "amplitude", c.initial.amplitude, "initial");
    read(i, "frequency", c.initial.frequency, "initial");
    read(i, "discrete", c.initial.discrete, "initial");
  }
  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    only_keys(s, "scan", {"seeds", "rng_seed", "modes", "amplitude_fraction", "window", "n0", "transient", "origin_radius",
                          "periodic_tol", "min_period", "max_period", "grid_counts", "grid_lo", "grid_hi", "steps",
                          "zeta"});
    read(s, "seeds", c.scan.seeds, "scan");
    read(s, "rng_seed", c.scan.rng_seed, "scan");
    read(s, "modes", c.scan.modes, "scan");
    read(s, "amplitude_fraction", c.scan.amplitude_fraction, "scan");
    read(s, "window", c.scan.window, "scan");
    read(s, "n0", c.scan.n0, "scan");
    read(s, "transient", c.scan.transient, "scan");
    read(s, "origin_radius", c.scan.origin_radius, "scan");
    read(s, "periodic_tol", c.scan.periodic_tol, "scan");
    read(s, "min_period", c.scan.min_period, "scan");
    read(s, "max_period", c.scan.max_period, "scan");
    read(s, "grid_counts", c.scan.grid_counts, "scan");
    read(s, "grid_lo", c.scan.grid_lo, "scan");
    read(s, "grid_hi", c.scan.grid_hi, "scan");
    read(s, "steps", c.scan.steps, "scan");
    read(s, "zeta", c.scan.zeta, "scan");
  }
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    only_keys(o, "outputs", {"directory", "formats"});
    read(o, "directory", c.outputs.directory, "outputs");
    read(o, "formats", c.outputs.formats, "outputs");
  }
  if (c.system.kind != "cyclic" && c.system.kind != "discrete") {
    fail(ErrorCode::Config, "system.kind must be 'cyclic' or 'discrete'");
  }
  if (c.system.delta != 1 && c.system.delta != -1) fail(ErrorCode::Config, "system.delta must be +1 or -1");
  return c;
}

json emit_config(const ExperimentConfig& c) {
  json comps = json::array();
  for (const auto& p : c.system.components) comps.push_back({{"family", p.family}, {"params", p.params}});
  json scan = {{"seeds", c.scan.seeds},
               {"rng_seed", c.scan.rng_seed},
               {"modes", c.scan.modes},
               {"amplitude_fraction", c.scan.amplitude_fraction},
               {"window", c.scan.window},
               {"n0", c.scan.n0 ? json(*c.scan.n0) : json(nullptr)},
               {"transient", c.scan.transient ? json(*c.scan.transient) : json(nullptr)},
               {"origin_radius", c.scan.origin_radius},
               {"periodic_tol", c.scan.periodic_tol},
               {"min_period", c.scan.min_period},
               {"max_period", c.scan.max_period},
               {"grid_counts", c.scan.grid_counts},
               {"grid_lo", c.scan.grid_lo},
               {"grid_hi", c.scan.grid_hi},
               {"steps", c.scan.steps},
               {"zeta", c.scan.zeta}};
  return {{"system",
           {{"kind", c.system.kind},
            {"components", comps},
            {"delta", c.system.delta},
            {"dissipativity_bound", c.system.dissipativity_bound},
            {"delay_steps", c.system.delay_steps}}},
          {"kernel", {{"name", c.kernel.name}, {"params", c.kernel.params}}},
          {"integrator",
           {{"dt", c.integrator.dt},
            {"horizon", c.integrator.horizon},
            {"sample_dt", c.integrator.sample_dt},
            {"grid_nodes", c.integrator.grid_nodes}}},
          {"initial",
           {{"kind", c.initial.kind},
            {"index", c.initial.index},
            {"value", c.initial.value},
            {"offset", c.initial.offset},
            {"amplitude", c.initial.amplitude},
            {"frequency", c.initial.frequency},
            {"discrete", c.initial.discrete}}},
          {"scan", scan},
          {"outputs", {{"directory", c.outputs.directory}, {"formats", c.outputs.formats}}}};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, "malformed JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

CyclicSystemSpec build_cyclic_system(const ExperimentConfig& c) {
  if (c.system.kind != "cyclic") fail(ErrorCode::Config, "config describes a discrete system");
  if (c.system.components.empty()) fail(ErrorCode::Config, "system.components is empty");
  std::vector<Nonlinearity> fs;
  for (const auto& p : c.system.components) fs.push_back(Nonlinearity::from_preset(p));
  return CyclicSystemSpec::make(std::move(fs), feedback_from_int(c.system.delta), c.system.dissipativity_bound);
}

DiscreteSystemSpec build_discrete_system(const ExperimentConfig& c) {
  if (c.system.kind != "discrete") fail(ErrorCode::Config, "config describes a cyclic system");
  if (c.system.components.size() != 1) fail(ErrorCode::Config, "a discrete system has exactly one map");
  return DiscreteSystemSpec::make(c.system.delay_steps, Nonlinearity::from_preset(c.system.components[0]),
                                  feedback_from_int(c.system.delta));
}

DelayKernel build_kernel(const KernelConfig& k) {
  auto param = [&](const char* key) {
    auto it = k.params.find(key);
    if (it == k.params.end()) fail(ErrorCode::Config, "kernel '" + k.name + "' needs parameter '" + key + "'");
    return it->second;
  };
  if (k.name == "plateau-ramp") {
    return DelayKernel::plateau_ramp(param("r"), param("alpha0"), param("alpha2"), param("eps"), param("slope"));
  }
  if (k.name == "constant") return DelayKernel::constant(param("r"), param("alpha0"));
  fail(ErrorCode::Config, "unknown kernel '" + k.name + "'");
}

Segment build_initial_segment(const ExperimentConfig& c, const CyclicSystemSpec& system, const DelayKernel& kernel) {
  const double r = kernel.r();
  const std::size_t nodes = c.integrator.grid_nodes;
  const auto& init = c.initial;
  std::vector<double> disc = init.discrete;
  if (init.kind != "seed" && disc.size() != system.n_components()) {
    fail(ErrorCode::Config, "initial.discrete needs one value per discrete coordinate");
  }
  if (init.kind == "seed") return fourier_seed(system, r, build_seed_spec(c.scan), init.index, nodes);
  if (init.kind == "constant") {
    const double v = init.value;
    return sample_segment([v](double) { return v; }, [](double) { return 0.0; }, r, disc, nodes);
  }
  if (init.kind == "sine") {
    const double o = init.offset, a = init.amplitude, w = init.frequency;
    return sample_segment([=](double s) { return o + a * std::sin(w * s); },
                          [=](double s) { return a * w * std::cos(w * s); }, r, disc, nodes);
  }
  fail(ErrorCode::Config, "unknown initial kind '" + init.kind + "'");
}

SeedSpec build_seed_spec(const ScanConfig& s) { return {s.seeds, s.rng_seed, s.modes, s.amplitude_fraction}; }

EnsembleOptions build_ensemble_options(const ExperimentConfig& c) {
  EnsembleOptions o;
  o.horizon = c.integrator.horizon;
  o.dt = c.integrator.dt;
  o.sample_dt = c.integrator.sample_dt;
  o.nodes = c.integrator.grid_nodes;
  o.window = c.scan.window;
  o.n0 = c.scan.n0;
  o.transient = c.scan.transient;
  o.origin_radius = c.scan.origin_radius;
  o.periodic_tol = c.scan.periodic_tol;
  o.min_period = c.scan.min_period;
  o.max_period = c.scan.max_period;
  return o;
}

SeedGrid build_seed_grid(const ExperimentConfig& c) {
  std::vector<std::size_t> counts = c.scan.grid_counts;
  if (counts.empty()) counts.assign(c.system.delay_steps + 1, 4);
  if (counts.size() != c.system.delay_steps + 1) {
    fail(ErrorCode::Config, "scan.grid_counts needs one entry per state coordinate (n + 1)");
  }
  return SeedGrid::lattice(counts, c.scan.grid_lo, c.scan.grid_hi);
}

DiscreteScanOptions build_discrete_options(const ExperimentConfig& c) {
  DiscreteScanOptions o;
  o.steps = c.scan.steps;
  o.window = c.scan.window;
  o.n0 = c.scan.n0;
  o.origin_radius = c.scan.origin_radius;
  o.zeta = c.scan.zeta;
  return o;
}

}  // namespace dlmorse
