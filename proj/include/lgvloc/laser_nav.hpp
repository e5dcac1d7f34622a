#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lgvloc/geometry.hpp"
#include "lgvloc/kinematics.hpp"
#include "lgvloc/sim.hpp"

namespace lgvloc::lasernav {

/// One-to-one pairing of anonymous detections with map reflectors.
struct Association {
  std::vector<std::pair<int, int>> pairs;  // (detection index, reflector id)
  std::vector<int> unmatched_detections;   // detection indices with no in-gate reflector
};

/// Pose fix solved from one scan, already converted to the rotation-center
/// frame.
struct LaserFix {
  Pose2D pose;
  int n_matched = 0;
  double residual_rms = 0.0;  // meters, post-fit
};

/// Globally greedy nearest-neighbor association with gating: detections are
/// projected through the prior pose, candidate pairs sorted by world
/// distance, and claimed in ascending order. Each detection and each
/// reflector appears in at most one pair.
Association associate(const std::vector<ReflectorDetection>& detections,
                      const Pose2D& prior_sensor_pose, const ReflectorMap& map, double gate);

/// Closed-form least-squares 2D rigid registration of the matched
/// detections onto their reflectors (centroid alignment plus the optimal
/// proper rotation from the cross-covariance), then conversion from the
/// sensor frame to the rotation center. Returns nullopt when fewer than two
/// detections matched, which tells the consumer to skip this correction.
std::optional<LaserFix> solve_fix(const std::vector<ReflectorDetection>& detections,
                                  const Association& assoc, const ReflectorMap& map,
                                  const VehicleGeometry& geom, const Pose2D& prior);

/// Scan-to-scan laser-only tracker with no odometry in between: the
/// association prior for each scan is the previous fix extrapolated by the
/// fix-to-fix velocity (the vehicle turns ~14 deg between scans at the
/// nominal drive command, which would throw un-extrapolated projections a
/// meter and a half off at typical reflector ranges).
class Tracker {
 public:
  Tracker(ReflectorMap map, const VehicleGeometry& geom, double gate,
          const Pose2D& initial_center_pose);

  std::optional<LaserFix> process_scan(const sim::LrfScan& scan, double t);

  Pose2D prior_sensor_pose(double t) const;

 private:
  ReflectorMap map_;
  VehicleGeometry geom_;
  double gate_;
  Pose2D last_sensor_;  // last fix (sensor frame), or the initial prior
  double last_t_ = 0.0;
  bool have_rate_ = false;
  Vec2 velocity_;           // world frame, m/s, from the last two fixes
  double heading_rate_ = 0.0;  // rad/s
  int misses_ = 0;             // consecutive scans without an accepted fix
};

}  // namespace lgvloc::lasernav
