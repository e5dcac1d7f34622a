#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "lgvloc/geometry.hpp"
#include "lgvloc/kinematics.hpp"

namespace lgvloc::sim {

/// Sensor error model. All stddevs are per sample unless noted.
struct NoiseModel {
  double encoder_rate_stddev = 0.0;  // rad/s, per wheel
  double gyro_rate_stddev = 0.0;     // rad/s
  double gyro_bias = 0.0;            // rad/s, constant for the whole run
  double lrf_range_stddev = 0.0;     // meters, per detection
  double lrf_bearing_stddev = 0.0;   // radians, per detection
  // Header-rotation smear: one common bearing offset per scan, drawn with
  // stddev bearing_smear_gain * |true turn rate|. Rotating faster smears
  // the whole scan more.
  double bearing_smear_gain = 0.05;  // radians per rad/s
  double detection_prob = 1.0;       // per in-range reflector, per scan
  double clutter_rate = 0.0;         // expected false detections per scan
  double max_lrf_range = 30.0;       // meters

  void validate() const;
};

struct Odometry {
  double w_l = 0.0;     // left wheel rate, rad/s
  double w_r = 0.0;     // right wheel rate, rad/s
  double gyro_w = 0.0;  // gyro turn rate, rad/s
};

struct LrfScan {
  std::vector<ReflectorDetection> detections;
};

/// One timestamped observation. Odometry arrives every odometry_period,
/// scans every lrf_period; when both fall on the same instant the odometry
/// frame precedes the scan.
struct SensorFrame {
  double t = 0.0;  // seconds of simulation clock
  std::variant<Odometry, LrfScan> payload;

  bool is_odometry() const { return std::holds_alternative<Odometry>(payload); }
  const Odometry& odometry() const { return std::get<Odometry>(payload); }
  const LrfScan& scan() const { return std::get<LrfScan>(payload); }
};

struct TrajectorySegment {
  double duration = 0.0;  // seconds, > 0
  double v_d = 0.0;       // drive-wheel speed, m/s
  double delta = 0.0;     // steering angle, radians
};

struct TrajectorySpec {
  Pose2D initial_pose;
  std::vector<TrajectorySegment> segments;
};

struct Timing {
  double odometry_period = 0.1;  // seconds
  double lrf_period = 0.45;      // seconds
  double truth_tick = 0.025;     // ground-truth sample spacing, seconds

  void validate() const;
};

struct TimedPose {
  double t = 0.0;
  Pose2D pose;
};

/// Ground-truth rotation-center poses sampled every tick. Uses the exact
/// constant-twist arc solution, not the first-order step the filter
/// predicts with, so integration error is part of what the estimators must
/// absorb. The tick must divide every segment duration (1e-9 tolerance).
std::vector<TimedPose> generate_truth(const TrajectorySpec& spec, const VehicleGeometry& geom,
                                      double tick);

/// Exact constant-twist advance used by generate_truth.
Pose2D advance_arc(const Pose2D& p, const BodyTwist& twist, double dt);

/// True twist over one truth interval, recovered from the poses alone.
/// Exact for constant-twist arcs.
BodyTwist twist_between(const TimedPose& a, const TimedPose& b);

/// Generates the timestamped sensor stream for a truth trajectory. Output
/// is fully determined by (inputs, seed); the draw order is documented in
/// the implementation and is part of the reproducibility contract.
std::vector<SensorFrame> simulate_sensors(const std::vector<TimedPose>& truth,
                                          const ReflectorMap& map, const VehicleGeometry& geom,
                                          const NoiseModel& noise, const Timing& timing,
                                          uint64_t seed);

}  // namespace lgvloc::sim
