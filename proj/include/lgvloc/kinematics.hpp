#pragma once

#include "lgvloc/geometry.hpp"

namespace lgvloc {

/// Fixed geometry of the axle-drive vehicle. All lengths in meters.
struct VehicleGeometry {
  double h = 1.3;      // rotation center to drive-wheel lever arm
  double l = 0.8;      // auxiliary wheel track width
  double r_l = 0.125;  // left auxiliary wheel radius
  double r_r = 0.125;  // right auxiliary wheel radius
  double d = 1.2;      // LRF mount offset ahead of the rotation center

  // Alternate encoder conventions, selectable from configuration.
  bool eq2_literal = false;  // wheel speed with a diameter-like factor 2
  bool eq3_literal = false;  // arctangent form of the turn rate

  /// Throws std::invalid_argument if any length is out of range.
  void validate() const;
};

/// Linear and angular speed of the target rotation center.
struct BodyTwist {
  double v = 0.0;  // m/s
  double w = 0.0;  // rad/s
};

struct DriveCommand {
  double v_d = 0.0;    // drive-wheel linear speed, m/s
  double delta = 0.0;  // steering angle, radians, |delta| < pi/2
};

/// Drive-unit relation: v = v_d cos(delta), |w| = v_d / h with the sign of
/// delta (left steer turns counterclockwise). Rejects |delta| >= pi/2.
BodyTwist drive_to_twist(const DriveCommand& cmd, const VehicleGeometry& geom);

/// Body twist from the two auxiliary-wheel encoder rates:
/// v = (v_r + v_l) / 2, w = (v_r - v_l) / l.
BodyTwist encoders_to_twist(double w_l, double w_r, const VehicleGeometry& geom);

/// First-order pose update with the heading increment applied before the
/// translation direction is sampled:
///   x' = x + v dt cos(theta + w dt), y' = y + v dt sin(theta + w dt),
///   theta' = theta + w dt (normalized).
/// This is the prediction model the particle filter uses. Rejects dt <= 0.
Pose2D integrate_pose(const Pose2D& p, const BodyTwist& twist, double dt);

/// Converts a pose measured at the LRF mount into the target rotation
/// center frame. The sensor sits distance d ahead of the center along the
/// heading, so the center is at sensor - d * (cos theta, sin theta).
Pose2D sensor_to_rotation_center(const Pose2D& sensor_pose, double d);

/// Inverse of sensor_to_rotation_center.
Pose2D rotation_center_to_sensor(const Pose2D& center_pose, double d);

}  // namespace lgvloc
