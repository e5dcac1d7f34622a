#include "lgvloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lgvloc/random.hpp"

namespace lgvloc::sim {

void NoiseModel::validate() const {
  if (encoder_rate_stddev < 0.0) throw std::invalid_argument("noise: encoder_rate_stddev must be >= 0");
  if (gyro_rate_stddev < 0.0) throw std::invalid_argument("noise: gyro_rate_stddev must be >= 0");
  if (lrf_range_stddev < 0.0) throw std::invalid_argument("noise: lrf_range_stddev must be >= 0");
  if (lrf_bearing_stddev < 0.0) throw std::invalid_argument("noise: lrf_bearing_stddev must be >= 0");
  if (bearing_smear_gain < 0.0) throw std::invalid_argument("noise: bearing_smear_gain must be >= 0");
  if (detection_prob < 0.0 || detection_prob > 1.0) {
    throw std::invalid_argument("noise: detection_prob must be in [0, 1]");
  }
  if (clutter_rate < 0.0) throw std::invalid_argument("noise: clutter_rate must be >= 0");
  if (!(max_lrf_range > 0.0)) throw std::invalid_argument("noise: max_lrf_range must be > 0");
}

void Timing::validate() const {
  if (!(truth_tick > 0.0)) throw std::invalid_argument("timing: truth_tick must be > 0");
  if (!(odometry_period > 0.0)) throw std::invalid_argument("timing: odometry_period must be > 0");
  if (!(lrf_period > 0.0)) throw std::invalid_argument("timing: lrf_period must be > 0");
  auto on_grid = [this](double period) {
    const long n = std::lround(period / truth_tick);
    return n >= 1 && std::abs(static_cast<double>(n) * truth_tick - period) <= 1e-9;
  };
  if (!on_grid(odometry_period)) {
    throw std::invalid_argument("timing: odometry_period must be a multiple of truth_tick");
  }
  if (!on_grid(lrf_period)) {
    throw std::invalid_argument("timing: lrf_period must be a multiple of truth_tick");
  }
}

Pose2D advance_arc(const Pose2D& p, const BodyTwist& twist, double dt) {
  const double w_t = twist.w * dt;
  if (std::abs(twist.w) < 1e-12) {
    return {p.x + twist.v * dt * std::cos(p.theta), p.y + twist.v * dt * std::sin(p.theta),
            normalize_angle(p.theta + w_t)};
  }
  const double radius = twist.v / twist.w;
  return {p.x + radius * (std::sin(p.theta + w_t) - std::sin(p.theta)),
          p.y - radius * (std::cos(p.theta + w_t) - std::cos(p.theta)),
          normalize_angle(p.theta + w_t)};
}

BodyTwist twist_between(const TimedPose& a, const TimedPose& b) {
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) {
    throw std::invalid_argument("twist_between: samples must be strictly time-ordered");
  }
  const double dtheta = normalize_angle(b.pose.theta - a.pose.theta);
  const double w = dtheta / dt;
  const Vec2 chord{b.pose.x - a.pose.x, b.pose.y - a.pose.y};
  double v = norm(chord) / dt;
  if (std::abs(dtheta) > 1e-12) {
    const double half = 0.5 * dtheta;
    v *= half / std::sin(half);  // arc length from chord length
  }
  const double mid = a.pose.theta + 0.5 * dtheta;
  if (chord.x * std::cos(mid) + chord.y * std::sin(mid) < 0.0) {
    v = -v;  // reversing
  }
  return {v, w};
}

std::vector<TimedPose> generate_truth(const TrajectorySpec& spec, const VehicleGeometry& geom,
                                      double tick) {
  if (!(tick > 0.0)) {
    throw std::invalid_argument("generate_truth: tick must be > 0");
  }
  std::vector<long> steps;
  steps.reserve(spec.segments.size());
  long total = 0;
  for (const TrajectorySegment& seg : spec.segments) {
    if (!(seg.duration > 0.0)) {
      throw std::invalid_argument("generate_truth: segment durations must be > 0");
    }
    const long n = std::lround(seg.duration / tick);
    if (n < 1 || std::abs(static_cast<double>(n) * tick - seg.duration) > 1e-9) {
      throw std::invalid_argument("generate_truth: tick must divide every segment duration");
    }
    steps.push_back(n);
    total += n;
  }

  std::vector<TimedPose> out;
  out.reserve(static_cast<size_t>(total) + 1);
  Pose2D pose = spec.initial_pose;
  pose.theta = normalize_angle(pose.theta);
  out.push_back({0.0, pose});
  long index = 0;
  for (size_t s = 0; s < spec.segments.size(); ++s) {
    const BodyTwist twist = drive_to_twist({spec.segments[s].v_d, spec.segments[s].delta}, geom);
    for (long k = 0; k < steps[s]; ++k) {
      pose = advance_arc(pose, twist, tick);
      ++index;
      out.push_back({static_cast<double>(index) * tick, pose});
    }
  }
  return out;
}

namespace {

// Wheel rates that encoders_to_twist maps back onto the given twist,
// honoring whichever encoder conventions the geometry selects.
Odometry wheel_rates_for(const BodyTwist& twist, const VehicleGeometry& geom) {
  const double diff = geom.eq3_literal ? geom.l * std::tan(twist.w) : geom.l * twist.w;
  const double v_r = twist.v + 0.5 * diff;
  const double v_l = twist.v - 0.5 * diff;
  const double rim = geom.eq2_literal ? 2.0 : 1.0;
  return {v_l / (rim * geom.r_l), v_r / (rim * geom.r_r), 0.0};
}

}  // namespace

std::vector<SensorFrame> simulate_sensors(const std::vector<TimedPose>& truth,
                                          const ReflectorMap& map, const VehicleGeometry& geom,
                                          const NoiseModel& noise, const Timing& timing,
                                          uint64_t seed) {
  if (truth.empty()) {
    throw std::invalid_argument("simulate_sensors: truth must be non-empty");
  }
  noise.validate();
  timing.validate();
  for (size_t i = 1; i < truth.size(); ++i) {
    if (!(truth[i].t > truth[i - 1].t)) {
      throw std::invalid_argument("simulate_sensors: truth must be strictly time-ordered");
    }
  }

  std::vector<SensorFrame> frames;
  if (truth.size() < 2) {
    return frames;  // no elapsed time, nothing to report
  }
  const double tick = truth[1].t - truth[0].t;
  const double t_end = truth.back().t;

  const auto grid_index = [&](double t) -> size_t {
    const long i = std::lround(t / tick);
    if (i < 1 || static_cast<size_t>(i) >= truth.size() ||
        std::abs(static_cast<double>(i) * tick - t) > 1e-9) {
      throw std::invalid_argument("simulate_sensors: sensor period does not align with the truth grid");
    }
    return static_cast<size_t>(i);
  };

  // One seeded stream; the draw order below is contractual.
  // Per odometry frame: left wheel noise, right wheel noise, gyro noise.
  // Per scan: common smear offset, then per in-range reflector in map order
  // (presence, then range noise and bearing noise if present), then the
  // clutter count and two position draws per clutter point.
  Rng rng(seed);

  long k_odo = 1;
  long k_lrf = 1;
  while (true) {
    const double t_odo = static_cast<double>(k_odo) * timing.odometry_period;
    const double t_lrf = static_cast<double>(k_lrf) * timing.lrf_period;
    const bool odo_due = t_odo <= t_end + 1e-9;
    const bool lrf_due = t_lrf <= t_end + 1e-9;
    if (!odo_due && !lrf_due) {
      break;
    }

    if (odo_due && (!lrf_due || t_odo <= t_lrf + 1e-9)) {
      const size_t i = grid_index(t_odo);
      const BodyTwist twist = twist_between(truth[i - 1], truth[i]);
      Odometry odo = wheel_rates_for(twist, geom);
      odo.w_l += rng.normal(0.0, noise.encoder_rate_stddev);
      odo.w_r += rng.normal(0.0, noise.encoder_rate_stddev);
      odo.gyro_w = twist.w + noise.gyro_bias + rng.normal(0.0, noise.gyro_rate_stddev);
      frames.push_back({truth[i].t, odo});
      ++k_odo;
    } else {
      const size_t i = grid_index(t_lrf);
      const Pose2D sensor = rotation_center_to_sensor(truth[i].pose, geom.d);
      const BodyTwist twist = twist_between(truth[i - 1], truth[i]);
      const double smear = rng.normal(0.0, noise.bearing_smear_gain * std::abs(twist.w));

      LrfScan scan;
      for (const Reflector& r : map.reflectors) {
        const double dx = r.position.x - sensor.x;
        const double dy = r.position.y - sensor.y;
        const double range = std::hypot(dx, dy);
        if (range > noise.max_lrf_range) {
          continue;  // out of range, consumes no draws
        }
        if (!rng.bernoulli(noise.detection_prob)) {
          continue;
        }
        const double bearing = normalize_angle(std::atan2(dy, dx) - sensor.theta);
        const double r_meas = std::max(0.0, range + rng.normal(0.0, noise.lrf_range_stddev));
        const double b_meas =
            normalize_angle(bearing + smear + rng.normal(0.0, noise.lrf_bearing_stddev));
        scan.detections.push_back({r_meas, b_meas});
      }
      const int n_clutter = rng.poisson(noise.clutter_rate);
      for (int c = 0; c < n_clutter; ++c) {
        const double cx = rng.uniform(map.bounds.x_min, map.bounds.x_max);
        const double cy = rng.uniform(map.bounds.y_min, map.bounds.y_max);
        const double dx = cx - sensor.x;
        const double dy = cy - sensor.y;
        scan.detections.push_back(
            {std::hypot(dx, dy), normalize_angle(std::atan2(dy, dx) - sensor.theta)});
      }
      frames.push_back({truth[i].t, std::move(scan)});
      ++k_lrf;
    }
  }
  return frames;
}

}  // namespace lgvloc::sim
