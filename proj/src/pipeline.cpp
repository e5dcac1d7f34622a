#include "lgvloc/pipeline.hpp"

#include <cstdio>
#include <sstream>

#include "lgvloc/errors.hpp"
#include "lgvloc/laser_nav.hpp"
#include "lgvloc/particle_filter.hpp"
#include "lgvloc/random.hpp"

namespace lgvloc::pipeline {

namespace fs = std::filesystem;

// Seed streams: 0 feeds the simulator, 1 the particle filter.
static constexpr uint64_t kSimStream = 0;
static constexpr uint64_t kPfStream = 1;

std::vector<sim::TimedPose> make_truth(const RunConfig& config) {
  return sim::generate_truth(config.trajectory, config.vehicle, config.timing.truth_tick);
}

std::vector<sim::SensorFrame> make_sensors(const RunConfig& config,
                                           const std::vector<sim::TimedPose>& truth) {
  return sim::simulate_sensors(truth, config.map, config.vehicle, config.noise, config.timing,
                               derive_seed(config.seed, kSimStream));
}

std::vector<io::PfTrajectoryRow> estimate_pf(const RunConfig& config,
                                             const std::vector<sim::SensorFrame>& frames) {
  pf::Filter filter(config.map, config.vehicle, config.pf, derive_seed(config.seed, kPfStream));
  if (!config.pf.init_uniform) {
    filter.reset_at(config.trajectory.initial_pose, derive_seed(config.seed, kPfStream));
  }
  std::vector<io::PfTrajectoryRow> rows;
  for (const sim::SensorFrame& frame : frames) {
    if (auto est = filter.step(frame)) {
      rows.push_back({est->t, est->pose, est->n_matched, est->degenerate});
    }
  }
  return rows;
}

std::vector<io::LaserTrajectoryRow> estimate_laser(const RunConfig& config,
                                                   const std::vector<sim::SensorFrame>& frames) {
  lasernav::Tracker tracker(config.map, config.vehicle, config.lasernav_gate,
                            config.trajectory.initial_pose);
  std::vector<io::LaserTrajectoryRow> rows;
  for (const sim::SensorFrame& frame : frames) {
    if (frame.is_odometry()) {
      continue;
    }
    if (auto fix = tracker.process_scan(frame.scan(), frame.t)) {
      rows.push_back({frame.t, fix->pose, fix->n_matched, fix->residual_rms});
    }
  }
  return rows;
}

std::vector<sim::TimedPose> estimate_deadreckon(const RunConfig& config,
                                                const std::vector<sim::SensorFrame>& frames) {
  std::vector<sim::TimedPose> rows;
  Pose2D pose = config.trajectory.initial_pose;
  pose.theta = normalize_angle(pose.theta);
  rows.push_back({0.0, pose});
  double last_t = 0.0;
  for (const sim::SensorFrame& frame : frames) {
    if (!frame.is_odometry()) {
      continue;
    }
    const sim::Odometry& odo = frame.odometry();
    const double dt = frame.t - last_t;
    if (dt <= 0.0) {
      continue;
    }
    const BodyTwist enc = encoders_to_twist(odo.w_l, odo.w_r, config.vehicle);
    double w = odo.gyro_w;
    if (config.pf.angular_source == pf::AngularSource::kEncoders) {
      w = enc.w;
    } else if (config.pf.angular_source == pf::AngularSource::kAverage) {
      w = 0.5 * (odo.gyro_w + enc.w);
    }
    pose = integrate_pose(pose, {enc.v, w}, dt);
    rows.push_back({frame.t, pose});
    last_t = frame.t;
  }
  return rows;
}

std::vector<sim::TimedPose> poses_of(const std::vector<io::PfTrajectoryRow>& rows) {
  std::vector<sim::TimedPose> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({r.t, r.pose});
  }
  return out;
}

std::vector<sim::TimedPose> poses_of(const std::vector<io::LaserTrajectoryRow>& rows) {
  std::vector<sim::TimedPose> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({r.t, r.pose});
  }
  return out;
}

RunOutcome run_once(RunConfig config, uint64_t seed_override) {
  config.seed = seed_override;
  RunOutcome out;
  out.truth = make_truth(config);
  const auto frames = make_sensors(config, out.truth);
  out.laser_rows = estimate_laser(config, frames);
  out.pf_rows = estimate_pf(config, frames);
  out.laser = eval::summarize(eval::position_errors_mm(poses_of(out.laser_rows), out.truth));
  out.pf = eval::summarize(eval::position_errors_mm(poses_of(out.pf_rows), out.truth));
  return out;
}

namespace {

io::FileMeta meta_of(const RunConfig& config) { return {config.config_hash, config.seed}; }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory: " + dir.string());
  }
}

template <typename WriteFn>
void save_with(const fs::path& path, WriteFn&& write) {
  std::ostringstream ss;
  write(ss);
  io::save_text(path, ss.str());
}

}  // namespace

void cmd_simulate(const RunConfig& config, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const auto truth = make_truth(config);
  const auto frames = make_sensors(config, truth);
  const io::FileMeta meta = meta_of(config);
  save_with(out_dir / "truth.csv",
            [&](std::ostream& os) { io::write_truth_csv(os, truth, meta); });
  save_with(out_dir / "sensors.jsonl",
            [&](std::ostream& os) { io::write_sensor_jsonl(os, frames, meta); });
}

void cmd_estimate(const RunConfig& config, const fs::path& sensors_path,
                  const std::string& estimator, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::istringstream is(io::load_text(sensors_path));
  const auto frames = io::read_sensor_jsonl(is);
  const io::FileMeta meta = meta_of(config);
  if (estimator == "pf") {
    const auto rows = estimate_pf(config, frames);
    save_with(out_dir / "pf.csv",
              [&](std::ostream& os) { io::write_pf_trajectory_csv(os, rows, meta); });
  } else if (estimator == "lasernav") {
    const auto rows = estimate_laser(config, frames);
    save_with(out_dir / "lasernav.csv",
              [&](std::ostream& os) { io::write_laser_trajectory_csv(os, rows, meta); });
  } else if (estimator == "deadreckon") {
    const auto rows = estimate_deadreckon(config, frames);
    save_with(out_dir / "deadreckon.csv",
              [&](std::ostream& os) { io::write_pose_trajectory_csv(os, rows, meta); });
  } else {
    throw ConfigError("config: unknown estimator '" + estimator +
                      "' (expected pf, lasernav or deadreckon)");
  }
}

void cmd_evaluate(const RunConfig& config, const fs::path& truth_path, const fs::path& laser_path,
                  const fs::path& pf_path, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::istringstream truth_is(io::load_text(truth_path));
  const auto truth = io::read_truth_csv(truth_is);
  std::istringstream laser_is(io::load_text(laser_path));
  const auto laser = io::read_trajectory_csv(laser_is);
  std::istringstream pf_is(io::load_text(pf_path));
  const auto pf_traj = io::read_trajectory_csv(pf_is);

  const auto laser_stats = eval::summarize(eval::position_errors_mm(laser, truth));
  const auto pf_stats = eval::summarize(eval::position_errors_mm(pf_traj, truth));
  const eval::RunReport report = eval::make_report({{laser_stats, pf_stats}});
  const io::FileMeta meta = meta_of(config);
  save_with(out_dir / "report.csv",
            [&](std::ostream& os) { io::write_report_csv(os, report, meta); });
  save_with(out_dir / "report.json",
            [&](std::ostream& os) { io::write_report_json(os, report, meta); });
  save_with(out_dir / "errors.csv",
            [&](std::ostream& os) { io::write_error_series_csv(os, laser, pf_traj, truth, meta); });
  std::printf("laser rmse %.4f mm (var %.4f), pf rmse %.4f mm (var %.4f), improvement %.2f%%\n",
              laser_stats.rmse_mm, laser_stats.variance_mm2, pf_stats.rmse_mm,
              pf_stats.variance_mm2, report.improvement);
}

void cmd_run_all(const RunConfig& config, const fs::path& out_dir, int n_runs,
                 bool with_deadreckon) {
  ensure_dir(out_dir);
  std::vector<std::pair<eval::ErrorStats, eval::ErrorStats>> stats;
  for (int run = 0; run < n_runs; ++run) {
    RunConfig run_config = config;
    run_config.seed = config.seed + static_cast<uint64_t>(run);
    const fs::path run_dir = out_dir / ("run" + std::to_string(run + 1));
    ensure_dir(run_dir);
    const io::FileMeta meta = meta_of(run_config);

    const auto truth = make_truth(run_config);
    const auto frames = make_sensors(run_config, truth);
    const auto laser_rows = estimate_laser(run_config, frames);
    const auto pf_rows = estimate_pf(run_config, frames);

    save_with(run_dir / "truth.csv",
              [&](std::ostream& os) { io::write_truth_csv(os, truth, meta); });
    save_with(run_dir / "sensors.jsonl",
              [&](std::ostream& os) { io::write_sensor_jsonl(os, frames, meta); });
    save_with(run_dir / "lasernav.csv",
              [&](std::ostream& os) { io::write_laser_trajectory_csv(os, laser_rows, meta); });
    save_with(run_dir / "pf.csv",
              [&](std::ostream& os) { io::write_pf_trajectory_csv(os, pf_rows, meta); });
    if (with_deadreckon) {
      const auto dr_rows = estimate_deadreckon(run_config, frames);
      save_with(run_dir / "deadreckon.csv",
                [&](std::ostream& os) { io::write_pose_trajectory_csv(os, dr_rows, meta); });
    }
    save_with(run_dir / "errors.csv", [&](std::ostream& os) {
      io::write_error_series_csv(os, poses_of(laser_rows), poses_of(pf_rows), truth, meta);
    });

    const auto laser_stats =
        eval::summarize(eval::position_errors_mm(poses_of(laser_rows), truth));
    const auto pf_stats = eval::summarize(eval::position_errors_mm(poses_of(pf_rows), truth));
    stats.emplace_back(laser_stats, pf_stats);
    std::printf("run %d: laser rmse %.4f mm, pf rmse %.4f mm\n", run + 1, laser_stats.rmse_mm,
                pf_stats.rmse_mm);
  }

  const eval::RunReport report = eval::make_report(stats);
  const io::FileMeta meta = meta_of(config);
  save_with(out_dir / "report.csv",
            [&](std::ostream& os) { io::write_report_csv(os, report, meta); });
  save_with(out_dir / "report.json",
            [&](std::ostream& os) { io::write_report_json(os, report, meta); });
  std::printf("average: laser rmse %.4f mm, pf rmse %.4f mm, improvement %.2f%%\n",
              report.laser_avg.rmse_mm, report.pf_avg.rmse_mm, report.improvement);
}

}  // namespace lgvloc::pipeline
