#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lgvloc/evaluation.hpp"
#include "lgvloc/sim.hpp"

namespace lgvloc::io {

/// Provenance stamp written as a leading '#' comment line of every output
/// file. Readers skip '#' lines.
struct FileMeta {
  std::string config_hash;
  uint64_t seed = 0;
};

struct LaserTrajectoryRow {
  double t = 0.0;
  Pose2D pose;
  int n_matched = 0;
  double residual_rms = 0.0;
};

struct PfTrajectoryRow {
  double t = 0.0;
  Pose2D pose;
  int n_matched = 0;
  bool degenerate = false;
};

// Ground truth: CSV t,x,y,theta.
void write_truth_csv(std::ostream& os, const std::vector<sim::TimedPose>& truth,
                     const FileMeta& meta);
std::vector<sim::TimedPose> read_truth_csv(std::istream& is);

// Sensor stream: JSON-Lines, one frame per line,
//   {"t": <s>, "odo": {"wl": ..., "wr": ..., "gyro": ...}}
//   {"t": <s>, "lrf": [{"range": ..., "bearing": ...}, ...]}
void write_sensor_jsonl(std::ostream& os, const std::vector<sim::SensorFrame>& frames,
                        const FileMeta& meta);
/// Throws DataError naming the line number on a malformed line.
std::vector<sim::SensorFrame> read_sensor_jsonl(std::istream& is);

// Estimated trajectories. The first four columns are always t,x,y,theta so
// any trajectory file can be read back as timed poses for evaluation.
void write_laser_trajectory_csv(std::ostream& os, const std::vector<LaserTrajectoryRow>& rows,
                                const FileMeta& meta);
void write_pf_trajectory_csv(std::ostream& os, const std::vector<PfTrajectoryRow>& rows,
                             const FileMeta& meta);
void write_pose_trajectory_csv(std::ostream& os, const std::vector<sim::TimedPose>& rows,
                               const FileMeta& meta);
std::vector<sim::TimedPose> read_trajectory_csv(std::istream& is);

// Report in both CSV (per-run rows + average row + improvement row) and
// JSON shapes.
void write_report_csv(std::ostream& os, const eval::RunReport& report, const FileMeta& meta);
void write_report_json(std::ostream& os, const eval::RunReport& report, const FileMeta& meta);

// Plot-ready per-scan error series: t,laser_err_mm,pf_err_mm, inner-joined
// on matching timestamps.
void write_error_series_csv(std::ostream& os, const std::vector<sim::TimedPose>& laser,
                            const std::vector<sim::TimedPose>& pf,
                            const std::vector<sim::TimedPose>& truth, const FileMeta& meta);

// File wrappers; open failures raise IoError.
void save_text(const std::filesystem::path& path, const std::string& content);
std::string load_text(const std::filesystem::path& path);

/// FNV-1a hash of a canonical config dump, as a 16-digit hex string.
std::string fnv1a_hex(const std::string& text);

}  // namespace lgvloc::io
