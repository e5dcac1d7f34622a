#include "lgvloc/geometry.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace lgvloc {

double normalize_angle(double a) {
  if (!std::isfinite(a)) {
    throw std::invalid_argument("normalize_angle: angle must be finite");
  }
  double r = std::remainder(a, kTwoPi);  // exact, lands in [-pi, pi]
  if (r <= -kPi) {
    r += kTwoPi;
  }
  return r;
}

Vec2 transform_detection_to_world(const Pose2D& pose, const ReflectorDetection& det) {
  const double a = pose.theta + det.bearing;
  return {pose.x + det.range * std::cos(a), pose.y + det.range * std::sin(a)};
}

const Reflector* ReflectorMap::find(int id) const {
  for (const Reflector& r : reflectors) {
    if (r.id == id) {
      return &r;
    }
  }
  return nullptr;
}

void ReflectorMap::validate() const {
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw std::invalid_argument("map: bounds must span a non-degenerate rectangle");
  }
  if (reflectors.empty()) {
    throw std::invalid_argument("map: at least one reflector is required");
  }
  std::set<int> seen;
  for (const Reflector& r : reflectors) {
    if (r.id < 0) {
      throw std::invalid_argument("map: reflector id " + std::to_string(r.id) + " is negative");
    }
    if (!seen.insert(r.id).second) {
      throw std::invalid_argument("map: duplicate reflector id " + std::to_string(r.id));
    }
    if (!bounds.contains(r.position)) {
      throw std::invalid_argument("map: reflector " + std::to_string(r.id) + " lies outside the bounds");
    }
  }
}

}  // namespace lgvloc
