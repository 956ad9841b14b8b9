#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlmorse/config.hpp"
#include "dlmorse/error.hpp"
#include "dlmorse/io.hpp"
#include "dlmorse/spectrum.hpp"
#include "suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dlmorse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;
constexpr int kExitModuleBase = 10;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return kExitConfig;
    case ErrorCode::Io: return kExitIo;
    default: return kExitModuleBase + static_cast<int>(code);
  }
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  ExperimentConfig config;

  void load() {
    config = load_config(config_path);
    if (!out_dir.empty()) config.outputs.directory = out_dir;
  }

  bool wants(const std::string& format) const {
    for (const auto& f : config.outputs.formats)
      if (f == format) return true;
    return false;
  }

  fs::path output(const std::string& name) const {
    fs::path dir(config.outputs.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
    return dir / name;
  }

  /// Prints the record and, when JSON output is enabled, writes it to `name`.
  void emit(json record, const std::string& name, const std::string& command) const {
    record["command"] = command;
    record["generated_at"] = timestamp();
    if (wants("json")) {
      const auto path = output(name);
      std::ofstream f(path);
      if (!f) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
      f << record.dump(2) << '\n';
    }
    if (!quiet) std::cout << record.dump(2) << '\n';
  }
};

json morse_summary(const json& full) {
  json s = full;
  s.erase("trajectories");
  return s;
}

int cmd_simulate(Context& ctx, std::optional<double> horizon) {
  ctx.load();
  const auto sys = build_cyclic_system(ctx.config);
  const auto kernel = build_kernel(ctx.config.kernel);
  const auto init = build_initial_segment(ctx.config, sys, kernel);
  const double T = horizon.value_or(ctx.config.integrator.horizon);
  const auto traj = integrate(sys, kernel, init, T, ctx.config.integrator.dt);
  const auto checks = trajectory_checks(traj);
  json rec = {{"system", describe(sys)}, {"kernel", describe(kernel)}, {"horizon", T},
              {"dt", ctx.config.integrator.dt}, {"checks", to_json(checks)}};
  const auto end = segment_at(traj, traj.end_time(), ctx.config.integrator.grid_nodes);
  rec["final_sup_norm"] = end.sup_norm();
  if (!end.near_origin()) {
    try {
      rec["final_lyapunov"] = to_json(lyapunov_value(end, kernel, sys.delta()));
    } catch (const Error& e) {
      rec["final_lyapunov"] = std::string(to_string(e.code()));
    }
  }
  if (ctx.wants("csv")) {
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(ctx.config.integrator.sample_dt / traj.record_dt + 0.5));
    const auto path = ctx.output("trajectory.csv");
    write_trajectory(traj, path.string(), stride);
    rec["trajectory_csv"] = path.string();
  }
  ctx.emit(rec, "simulate.json", "simulate");
  return checks.clean() ? kExitOk : kExitViolation;
}

int cmd_tau(Context& ctx) {
  ctx.load();
  const auto sys = build_cyclic_system(ctx.config);
  const auto kernel = build_kernel(ctx.config.kernel);
  const auto init = build_initial_segment(ctx.config, sys, kernel);
  const double tau = solve_threshold_delay(init, kernel);
  const double lo = 1.0 / kernel.alpha2(), hi = kernel.r();
  const bool ok = tau >= lo - 1e-12 && tau <= hi + 1e-12;
  json rec = {{"tau", tau}, {"lower_bound", lo}, {"upper_bound", hi}, {"within_bounds", ok},
              {"kernel", describe(kernel)}};
  if (kernel.alpha0()) rec["tau0"] = kernel.tau0();
  ctx.emit(rec, "tau.json", "tau");
  return ok ? kExitOk : kExitViolation;
}

int cmd_lyapunov(Context& ctx, std::optional<double> at) {
  ctx.load();
  const auto sys = build_cyclic_system(ctx.config);
  const auto kernel = build_kernel(ctx.config.kernel);
  Segment seg = build_initial_segment(ctx.config, sys, kernel);
  if (at && *at > 0) seg = segment_at(integrate(sys, kernel, seg, *at, ctx.config.integrator.dt), *at,
                                      ctx.config.integrator.grid_nodes);
  json rec = to_json(lyapunov_value(seg, kernel, sys.delta()));
  rec["t"] = at.value_or(0.0);
  rec["verdict"] = to_json(regularity_at_delay(seg, kernel, sys.delta()));
  ctx.emit(rec, "lyapunov.json", "lyapunov");
  return kExitOk;
}

int cmd_spectrum(Context& ctx) {
  ctx.load();
  json rec;
  if (ctx.config.system.kind == "discrete") {
    rec = to_json(discrete_spectrum(build_discrete_system(ctx.config)));
  } else {
    rec = to_json(spectrum_report(build_cyclic_system(ctx.config), build_kernel(ctx.config.kernel)));
  }
  ctx.emit(rec, "spectrum.json", "spectrum");
  return kExitOk;
}

int cmd_morse_scan(Context& ctx, std::optional<std::size_t> seeds, std::optional<double> horizon) {
  ctx.load();
  if (seeds) ctx.config.scan.seeds = *seeds;
  if (horizon) ctx.config.integrator.horizon = *horizon;
  const auto sys = build_cyclic_system(ctx.config);
  const auto kernel = build_kernel(ctx.config.kernel);
  const auto report =
      run_ensemble(sys, kernel, build_seed_spec(ctx.config.scan), build_ensemble_options(ctx.config));
  json full = to_json(report);
  full["system"] = describe(sys);
  full["kernel"] = describe(kernel);
  const bool quiet = ctx.quiet;
  ctx.quiet = true;
  ctx.emit(full, "morse_report.json", "morse-scan");
  ctx.quiet = quiet;
  if (!quiet) std::cout << morse_summary(full).dump(2) << '\n';
  return report.required_violations() == 0 ? kExitOk : kExitViolation;
}

int cmd_difference_scan(Context& ctx, std::optional<long> steps) {
  ctx.load();
  if (steps) ctx.config.scan.steps = *steps;
  const auto spec = build_discrete_system(ctx.config);
  auto opts = build_discrete_options(ctx.config);
  const auto spectrum = discrete_spectrum(spec);
  if (!opts.n_star) opts.n_star = spectrum.n_star;
  const auto report = discrete_scan(spec, build_seed_grid(ctx.config), opts);
  json full = to_json(report);
  full["spectrum"] = to_json(spectrum);
  const bool quiet = ctx.quiet;
  ctx.quiet = true;
  ctx.emit(full, "difference_report.json", "difference-scan");
  ctx.quiet = quiet;
  if (!quiet) std::cout << morse_summary(full).dump(2) << '\n';
  return report.required_violations() == 0 ? kExitOk : kExitViolation;
}

int cmd_verify(const std::vector<int>& only, std::uint64_t rng_seed) {
  acceptance::Options opts;
  opts.only = only;
  opts.rng_seed = rng_seed;
  const auto results = acceptance::run(opts, &std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::cout << (passed == results.size() ? "ALL PASSED " : "FAILED ") << passed << '/' << results.size() << '\n';
  return passed == results.size() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Lyapunov functions and Morse decompositions for delay equations"};
  app.require_subcommand(1);
  Context ctx;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", ctx.config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", ctx.out_dir, "Output directory (overrides outputs.directory)");
    sub->add_flag("-q,--quiet", ctx.quiet, "Do not print the report");
  };

  std::optional<double> horizon, at;
  std::optional<std::size_t> seeds;
  std::optional<long> steps;
  std::vector<int> only;
  std::uint64_t rng_seed = acceptance::Options{}.rng_seed;

  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory and run its checks");
  add_common(simulate);
  simulate->add_option("--horizon", horizon, "Integration horizon");
  auto* tau = app.add_subcommand("tau", "Threshold delay of the initial segment");
  add_common(tau);
  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov value and regularity of a segment");
  add_common(lyap);
  lyap->add_option("--at", at, "Evaluate x_t at this time instead of the initial segment");
  auto* spectrum = app.add_subcommand("spectrum", "Unstable spectrum of the linearization and N*");
  add_common(spectrum);
  auto* morse = app.add_subcommand("morse-scan", "Ensemble scan of the cyclic system");
  add_common(morse);
  morse->add_option("--seeds", seeds, "Number of seeds");
  morse->add_option("--horizon", horizon, "Integration horizon");
  auto* diff = app.add_subcommand("difference-scan", "Seed-grid scan of the delay difference equation");
  add_common(diff);
  diff->add_option("--steps", steps, "Iterations per seed");
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("criteria", only, "Criterion ids (default: all)");
  verify->add_option("--rng-seed", rng_seed, "Seed for the randomized criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(ctx, horizon);
    if (tau->parsed()) return cmd_tau(ctx);
    if (lyap->parsed()) return cmd_lyapunov(ctx, at);
    if (spectrum->parsed()) return cmd_spectrum(ctx);
    if (morse->parsed()) return cmd_morse_scan(ctx, seeds, horizon);
    if (diff->parsed()) return cmd_difference_scan(ctx, steps);
    if (verify->parsed()) return cmd_verify(only, rng_seed);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModuleBase;
  }
  return kExitUsage;
}
