#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lgvloc/config.hpp"
#include "lgvloc/evaluation.hpp"
#include "lgvloc/io.hpp"

namespace lgvloc::pipeline {

// In-memory experiment stages. The CLI wraps these with file IO; the test
// suites call them directly.

std::vector<sim::TimedPose> make_truth(const RunConfig& config);

std::vector<sim::SensorFrame> make_sensors(const RunConfig& config,
                                           const std::vector<sim::TimedPose>& truth);

/// Runs the particle filter over a sensor stream. Initialization follows
/// pf.init: uniform over the map, or seeded around the trajectory start.
/// The filter seed is derived from the run seed, independent of the
/// simulator's stream.
std::vector<io::PfTrajectoryRow> estimate_pf(const RunConfig& config,
                                             const std::vector<sim::SensorFrame>& frames);

/// Laser-only baseline: one registration fix per scan, previous fix as the
/// association prior. Scans with fewer than two matches produce no row.
std::vector<io::LaserTrajectoryRow> estimate_laser(const RunConfig& config,
                                                   const std::vector<sim::SensorFrame>& frames);

/// Pure dead reckoning of the odometry stream, for drift ablation.
std::vector<sim::TimedPose> estimate_deadreckon(const RunConfig& config,
                                                const std::vector<sim::SensorFrame>& frames);

std::vector<sim::TimedPose> poses_of(const std::vector<io::PfTrajectoryRow>& rows);
std::vector<sim::TimedPose> poses_of(const std::vector<io::LaserTrajectoryRow>& rows);

struct RunOutcome {
  eval::ErrorStats laser;
  eval::ErrorStats pf;
  std::vector<sim::TimedPose> truth;
  std::vector<io::LaserTrajectoryRow> laser_rows;
  std::vector<io::PfTrajectoryRow> pf_rows;
};

/// simulate + both estimators + per-run stats, with the config's seed
/// replaced by seed_override.
RunOutcome run_once(RunConfig config, uint64_t seed_override);

// CLI-facing commands; every file they emit starts with the config-hash /
// seed comment header.

void cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

void cmd_estimate(const RunConfig& config, const std::filesystem::path& sensors_path,
                  const std::string& estimator, const std::filesystem::path& out_dir);

/// Evaluates trajectory files against a truth file; writes report.csv,
/// report.json and errors.csv, prints a short summary to stdout.
void cmd_evaluate(const RunConfig& config, const std::filesystem::path& truth_path,
                  const std::filesystem::path& laser_path, const std::filesystem::path& pf_path,
                  const std::filesystem::path& out_dir);

/// Full multi-run experiment: for runs i = 0..n_runs-1 simulates with seed
/// base_seed + i, runs both estimators (plus dead reckoning on request),
/// and writes the combined report.
void cmd_run_all(const RunConfig& config, const std::filesystem::path& out_dir, int n_runs,
                 bool with_deadreckon);

}  // namespace lgvloc::pipeline
