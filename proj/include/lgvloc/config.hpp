#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lgvloc/geometry.hpp"
#include "lgvloc/kinematics.hpp"
#include "lgvloc/particle_filter.hpp"
#include "lgvloc/sim.hpp"

namespace lgvloc {

/// One experiment, fully specified: geometry, map, trajectory, sensor
/// noise, filter settings, and the seed. Everything an estimator run needs
/// comes from here, so a config plus a seed reproduces a run byte for byte.
struct RunConfig {
  uint64_t seed = 0;
  std::string output_dir = "out";
  VehicleGeometry vehicle;
  ReflectorMap map;
  sim::TrajectorySpec trajectory;
  sim::NoiseModel noise;
  sim::Timing timing;
  pf::PfConfig pf;
  double lasernav_gate = 0.5;

  std::string config_hash;  // filled at load time, covers every field above
};

/// Parses and validates a config JSON document. Relative map paths resolve
/// against base_dir. Error messages name the offending field with its full
/// dotted path (e.g. "vehicle.h"). Throws ConfigError.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir);

RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON dump of the effective config (defaults filled, map
/// inlined, keys sorted); input to the config hash.
std::string canonical_config(const RunConfig& config);

}  // namespace lgvloc
