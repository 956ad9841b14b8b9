#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "dlmorse/difference.hpp"
#include "dlmorse/integrator.hpp"
#include "dlmorse/lyapunov.hpp"
#include "dlmorse/morse.hpp"
#include "dlmorse/segment.hpp"
#include "dlmorse/spectrum.hpp"

namespace dlmorse {

/// Header: r, N, node count and discrete values.
nlohmann::json segment_header(const Segment& seg);

/// Columns time,value,slope at `path`, header at `path`.json.
void write_segment(const Segment& seg, const std::string& path);
Segment read_segment(const std::string& path);

/// Columns t,x0..xN,eta,V every `stride` records; V is empty where undefined.
/// Writes a JSON sidecar at `path`.json describing system, kernel and step.
void write_trajectory(const Trajectory& traj, const std::string& path, std::size_t stride = 1);

nlohmann::json to_json(const LyapunovValue& v);
nlohmann::json to_json(const RegularityVerdict& v);
nlohmann::json to_json(const TrajectoryCheckReport& r);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const DiscreteSpectrum& s);
nlohmann::json to_json(const MorseReport<double>& r);
nlohmann::json to_json(const MorseReport<long>& r);
nlohmann::json describe(const CyclicSystemSpec& system);
nlohmann::json describe(const DelayKernel& kernel);

}  // namespace dlmorse
