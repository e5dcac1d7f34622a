#include "lgvloc/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace lgvloc {

void VehicleGeometry::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("vehicle: h must be > 0");
  if (!(l > 0.0)) throw std::invalid_argument("vehicle: l must be > 0");
  if (!(r_l > 0.0)) throw std::invalid_argument("vehicle: r_l must be > 0");
  if (!(r_r > 0.0)) throw std::invalid_argument("vehicle: r_r must be > 0");
  if (!(d >= 0.0)) throw std::invalid_argument("vehicle: d must be >= 0");
}

BodyTwist drive_to_twist(const DriveCommand& cmd, const VehicleGeometry& geom) {
  if (!(std::abs(cmd.delta) < kPi / 2.0)) {
    throw std::invalid_argument("drive_to_twist: |delta| must be < pi/2");
  }
  const double v = cmd.v_d * std::cos(cmd.delta);
  double w = 0.0;
  if (cmd.delta > 0.0) {
    w = cmd.v_d / geom.h;
  } else if (cmd.delta < 0.0) {
    w = -cmd.v_d / geom.h;
  }
  return {v, w};
}

BodyTwist encoders_to_twist(double w_l, double w_r, const VehicleGeometry& geom) {
  const double rim = geom.eq2_literal ? 2.0 : 1.0;
  const double v_l = w_l * rim * geom.r_l;
  const double v_r = w_r * rim * geom.r_r;
  const double v = 0.5 * (v_r + v_l);
  const double ratio = (v_r - v_l) / geom.l;
  const double w = geom.eq3_literal ? std::atan(ratio) : ratio;
  return {v, w};
}

Pose2D integrate_pose(const Pose2D& p, const BodyTwist& twist, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integrate_pose: dt must be > 0");
  }
  const double v_t = twist.v * dt;
  const double w_t = twist.w * dt;
  const double heading = p.theta + w_t;
  return {p.x + v_t * std::cos(heading), p.y + v_t * std::sin(heading), normalize_angle(heading)};
}

Pose2D sensor_to_rotation_center(const Pose2D& sensor_pose, double d) {
  return {sensor_pose.x - d * std::cos(sensor_pose.theta),
          sensor_pose.y - d * std::sin(sensor_pose.theta), sensor_pose.theta};
}

Pose2D rotation_center_to_sensor(const Pose2D& center_pose, double d) {
  return {center_pose.x + d * std::cos(center_pose.theta),
          center_pose.y + d * std::sin(center_pose.theta), center_pose.theta};
}

}  // namespace lgvloc
