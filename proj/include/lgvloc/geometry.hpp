#pragma once

#include <cmath>
#include <vector>

namespace lgvloc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into (-pi, pi]. Throws std::invalid_argument on non-finite input.
double normalize_angle(double a);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Planar pose in the world frame. The frame is right-handed, theta is
/// measured counterclockwise from +x and kept in (-pi, pi] by every
/// operation that writes it.
struct Pose2D {
  double x = 0.0;      // meters
  double y = 0.0;      // meters
  double theta = 0.0;  // radians, (-pi, pi]
};

/// One reflector return: range/bearing relative to the LRF origin, sensor
/// frame. Detections are anonymous; association to the map happens later.
struct ReflectorDetection {
  double range = 0.0;    // meters, >= 0
  double bearing = 0.0;  // radians, (-pi, pi]
};

struct Reflector {
  int id = 0;
  Vec2 position;  // world frame, meters
};

struct Bounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

/// Surveyed reflector positions plus the rectangle of the working
/// environment. Immutable after construction; share freely.
struct ReflectorMap {
  Bounds bounds;
  std::vector<Reflector> reflectors;

  const Reflector* find(int id) const;
  /// Checks: non-degenerate bounds, >= 1 reflector, unique non-negative ids,
  /// every reflector inside or on the bounds. Throws std::invalid_argument.
  void validate() const;
};

/// Projects a detection into world coordinates from the sensor pose it was
/// taken at: (x + r cos(theta + b), y + r sin(theta + b)).
Vec2 transform_detection_to_world(const Pose2D& pose, const ReflectorDetection& det);

}  // namespace lgvloc
