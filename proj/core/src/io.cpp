#include "dlmorse/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "dlmorse/error.hpp"

namespace dlmorse {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

json opt(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json complex_list(const std::vector<cplx>& zs) {
  json a = json::array();
  for (const auto& z : zs) a.push_back({z.real(), z.imag()});
  return a;
}

template <class T>
json morse_json(const MorseReport<T>& r) {
  json trajs = json::array();
  for (const auto& t : r.trajectories) {
    json runs = json::array();
    for (const auto& run : t.runs) runs.push_back({{"start", run.start}, {"end", run.end}, {"level", opt(run.level)}, {"count", run.count}});
    json rec = {{"seed", t.seed},
                {"initial_level", opt(t.initial_level)},
                {"earliest_level", opt(t.earliest_level)},
                {"omega_level", opt(t.omega_level)},
                {"min_level", opt(t.min_level)},
                {"max_level", opt(t.max_level)},
                {"period", opt(t.period)},
                {"tail_sup_norm", t.tail_sup_norm},
                {"near_origin_tail", t.near_origin_tail},
                {"excluded", t.excluded},
                {"perturbed", t.perturbed},
                {"levels", runs}};
    if (!t.error.empty()) rec["error"] = t.error;
    trajs.push_back(std::move(rec));
  }
  json edges = json::array();
  for (const auto& e : r.level_graph) edges.push_back({{"from", e.from}, {"to", e.to}, {"count", e.count}});
  json viol = json::array();
  for (const auto& v : r.violations) {
    viol.push_back({{"kind", to_string(v.kind)}, {"seed", v.seed}, {"time", v.time}, {"from", v.from}, {"to", v.to},
                    {"required", v.required}});
  }
  return {{"n_star", r.n_star},
          {"n0", r.n0},
          {"resolved", r.resolved},
          {"unresolved", r.unresolved},
          {"excluded", r.excluded},
          {"failed", r.failed},
          {"level_graph", edges},
          {"level_graph_is_dag", r.level_graph_is_dag},
          {"splus_bucket", r.splus_bucket},
          {"required_violations", r.required_violations()},
          {"violations", viol},
          {"trajectories", trajs}};
}

}  // namespace

json segment_header(const Segment& seg) {
  return {{"r", seg.r()},
          {"n_components", seg.n_components()},
          {"nodes", seg.size()},
          {"discrete", std::vector<double>(seg.discrete().begin(), seg.discrete().end())}};
}

void write_segment(const Segment& seg, const std::string& path) {
  auto out = open_out(path);
  out << "time,value,slope\n";
  for (std::size_t k = 0; k < seg.size(); ++k) {
    out << seg.time(k) << ',' << seg.values()[k] << ',' << seg.slopes()[k] << '\n';
  }
  auto hdr = open_out(path + ".json");
  hdr << segment_header(seg).dump(2) << '\n';
}

Segment read_segment(const std::string& path) {
  std::ifstream hdr_in(path + ".json");
  if (!hdr_in) fail(ErrorCode::Io, "cannot open '" + path + ".json'");
  json hdr;
  try {
    hdr_in >> hdr;
  } catch (const json::exception& e) {
    fail(ErrorCode::Io, std::string("malformed segment header: ") + e.what());
  }
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "time,value,slope") fail(ErrorCode::Io, "unexpected segment CSV header");
  std::vector<double> v, d;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      fail(ErrorCode::Io, "malformed segment row '" + line + "'");
    }
    v.push_back(std::stod(b));
    d.push_back(std::stod(c));
  }
  auto disc = hdr.at("discrete").get<std::vector<double>>();
  const auto n = hdr.at("n_components").get<std::size_t>();
  return Segment::make(std::move(v), std::move(d), std::move(disc), hdr.at("r").get<double>(), n);
}

json describe(const CyclicSystemSpec& system) {
  json comps = json::array();
  for (const auto& f : system.components()) {
    if (f.preset()) {
      comps.push_back({{"family", f.preset()->family}, {"params", f.preset()->params}});
    } else {
      comps.push_back({{"family", "custom"}});
    }
  }
  return {{"n_components", system.n_components()},
          {"components", comps},
          {"delta", to_int(system.delta())},
          {"dissipativity_bound", system.dissipativity_bound()},
          {"lipschitz_bound", system.lipschitz_bound()}};
}

json describe(const DelayKernel& kernel) {
  const auto& d = kernel.description();
  return {{"name", d.name.empty() ? "custom" : d.name},
          {"params", d.params},
          {"alpha1", kernel.alpha1()},
          {"alpha2", kernel.alpha2()},
          {"alpha0", opt(kernel.alpha0())}};
}

void write_trajectory(const Trajectory& traj, const std::string& path, std::size_t stride) {
  if (stride == 0) fail(ErrorCode::InvalidArgument, "stride must be positive");
  auto out = open_out(path);
  out << 't';
  for (std::size_t c = 0; c < traj.width; ++c) out << ",x" << c;
  out << ",eta,V\n";
  for (std::size_t i = 0; i < traj.size(); i += stride) {
    out << traj.times[i];
    for (double x : traj.state(i)) out << ',' << x;
    out << ',' << traj.eta[i] << ',';
    const Segment seg = segment_at(traj, traj.times[i], traj.initial.size());
    if (!seg.near_origin()) {
      try {
        out << lyapunov_value(seg, traj.kernel, traj.system.delta()).value;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Indeterminate && e.code() != ErrorCode::UndefinedOnOrigin) throw;
      }
    }
    out << '\n';
  }
  json side = {{"system", describe(traj.system)},
               {"kernel", describe(traj.kernel)},
               {"dt", traj.dt},
               {"record_dt", traj.record_dt},
               {"stride", stride},
               {"horizon", traj.end_time()},
               {"initial", segment_header(traj.initial)}};
  auto s = open_out(path + ".json");
  s << side.dump(2) << '\n';
}

json to_json(const LyapunovValue& v) {
  return {{"sc", v.sc}, {"V", v.value}, {"parity_branch", to_string(v.branch)}, {"a", v.a}};
}

json to_json(const RegularityVerdict& v) {
  json failed = json::array();
  for (const auto& s : v.failed_sets) failed.push_back(s.name());
  return {{"in_R", v.in_R}, {"failed_sets", failed}, {"margin", v.margin}};
}

json to_json(const TrajectoryCheckReport& r) {
  return {{"eta_violations", r.eta_violations},
          {"bound_exits", r.bound_exits},
          {"slope_violations", r.slope_violations},
          {"entry_time", opt(r.entry_time)},
          {"clean", r.clean()}};
}

json to_json(const SpectrumReport& r) {
  return {{"mu", r.lin.mu},
          {"gamma", r.lin.gamma},
          {"tau0", r.lin.tau0},
          {"delta", to_int(r.delta)},
          {"m_star", r.m_star},
          {"nonhyperbolic", r.nonhyperbolic},
          {"n_star", r.n_star},
          {"modulus_bound", r.modulus_bound},
          {"contour",
           {{"sigma_lo", r.contour.sigma_lo},
            {"sigma_hi", r.contour.sigma_hi},
            {"omega", r.contour.omega},
            {"tol_hyp", r.contour.tol_hyp},
            {"samples", r.contour.samples},
            {"strip_samples", r.contour.strip_samples},
            {"perturbations", r.contour.perturbations}}},
          {"located_roots", complex_list(r.located_roots)}};
}

json to_json(const DiscreteSpectrum& s) {
  return {{"a", s.a},
          {"b", s.b},
          {"m_star", s.m_star},
          {"nonhyperbolic", s.nonhyperbolic},
          {"n_star", s.n_star},
          {"roots", complex_list(s.roots)}};
}

json to_json(const MorseReport<double>& r) { return morse_json(r); }
json to_json(const MorseReport<long>& r) { return morse_json(r); }

}  // namespace dlmorse
