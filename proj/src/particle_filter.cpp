#include "lgvloc/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lgvloc/errors.hpp"
#include "lgvloc/laser_nav.hpp"

namespace lgvloc::pf {

void PfConfig::validate() const {
  if (m <= 0) throw std::invalid_argument("pf: m must be > 0");
  if (exploit_fraction < 0.0 || exploit_fraction > 1.0) {
    throw std::invalid_argument("pf: exploit_fraction must be in [0, 1]");
  }
  if (!(elite_quantile > 0.0) || elite_quantile > 1.0) {
    throw std::invalid_argument("pf: elite_quantile must be in (0, 1]");
  }
  if (floor_quantile < 0.0 || floor_quantile > 1.0) {
    throw std::invalid_argument("pf: floor_quantile must be in [0, 1]");
  }
  if (redistribution_range < 0.0) throw std::invalid_argument("pf: redistribution_range must be >= 0");
  if (heading_jitter < 0.0) throw std::invalid_argument("pf: heading_jitter must be >= 0");
  if (!(gate > 0.0)) throw std::invalid_argument("pf: gate must be > 0");
  if (!(distance_scale > 0.0)) throw std::invalid_argument("pf: distance_scale must be > 0");
  if (motion_noise.v_stddev < 0.0 || motion_noise.w_stddev < 0.0) {
    throw std::invalid_argument("pf: motion noise stddevs must be >= 0");
  }
  if (init_pos_spread < 0.0 || init_heading_spread < 0.0) {
    throw std::invalid_argument("pf: init spreads must be >= 0");
  }
}

ParticleSet initialize(const ReflectorMap& map, const PfConfig& config, uint64_t seed) {
  config.validate();
  if (!(map.bounds.width() > 0.0) || !(map.bounds.height() > 0.0)) {
    throw std::invalid_argument("initialize: map bounds are degenerate");
  }
  ParticleSet set;
  set.rng = Rng(seed);
  set.particles.reserve(config.m);
  const double w0 = 1.0 / static_cast<double>(config.m);
  for (int i = 0; i < config.m; ++i) {
    const double x = set.rng.uniform(map.bounds.x_min, map.bounds.x_max);
    const double y = set.rng.uniform(map.bounds.y_min, map.bounds.y_max);
    const double theta = normalize_angle(set.rng.uniform(-kPi, kPi));
    set.particles.push_back({{x, y, theta}, w0});
  }
  return set;
}

ParticleSet initialize_at(const Pose2D& pose, double pos_spread, double heading_spread,
                          const PfConfig& config, uint64_t seed) {
  config.validate();
  ParticleSet set;
  set.rng = Rng(seed);
  set.particles.reserve(config.m);
  const double w0 = 1.0 / static_cast<double>(config.m);
  for (int i = 0; i < config.m; ++i) {
    const double x = pose.x + set.rng.uniform(-pos_spread, pos_spread);
    const double y = pose.y + set.rng.uniform(-pos_spread, pos_spread);
    const double theta = normalize_angle(pose.theta + set.rng.uniform(-heading_spread, heading_spread));
    set.particles.push_back({{x, y, theta}, w0});
  }
  return set;
}

namespace {

double angular_rate(const sim::Odometry& odo, const BodyTwist& encoder_twist,
                    AngularSource source) {
  switch (source) {
    case AngularSource::kGyro:
      return odo.gyro_w;
    case AngularSource::kEncoders:
      return encoder_twist.w;
    case AngularSource::kAverage:
      return 0.5 * (odo.gyro_w + encoder_twist.w);
  }
  return odo.gyro_w;
}

}  // namespace

void predict(ParticleSet& set, const sim::Odometry& odo, const VehicleGeometry& geom, double dt,
             const PfConfig& config) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("predict: dt must be > 0");
  }
  const BodyTwist enc = encoders_to_twist(odo.w_l, odo.w_r, geom);
  const double w = angular_rate(odo, enc, config.angular_source);
  for (Particle& p : set.particles) {
    const double v_i = enc.v + set.rng.normal(0.0, config.motion_noise.v_stddev);
    const double w_i = w + set.rng.normal(0.0, config.motion_noise.w_stddev);
    p.pose = integrate_pose(p.pose, {v_i, w_i}, dt);
  }
}

MatchScore score_pose(const Pose2D& center_pose, const std::vector<ReflectorDetection>& detections,
                      const ReflectorMap& map, const PfConfig& config, double sensor_offset) {
  const Pose2D sensor = rotation_center_to_sensor(center_pose, sensor_offset);
  const lasernav::Association assoc = lasernav::associate(detections, sensor, map, config.gate);
  double sq_sum = 0.0;
  for (const auto& [det, id] : assoc.pairs) {
    const Vec2 projected = transform_detection_to_world(sensor, detections[det]);
    const Vec2 diff = projected - map.find(id)->position;
    sq_sum += dot(diff, diff);
  }
  sq_sum += static_cast<double>(assoc.unmatched_detections.size()) * config.gate * config.gate;
  const double s = config.distance_scale;
  return {sq_sum / (s * s), static_cast<int>(assoc.pairs.size())};
}

double match_likelihood(double cost) {
  return std::exp(-0.5 * cost) / std::sqrt(kTwoPi);
}

WeighResult weigh(ParticleSet& set, const sim::LrfScan& scan, const ReflectorMap& map,
                  const PfConfig& config, double sensor_offset) {
  WeighResult result;
  if (scan.detections.empty()) {
    result.empty_scan = true;
    return result;
  }
  double sum = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (Particle& p : set.particles) {
    const MatchScore score = score_pose(p.pose, scan.detections, map, config, sensor_offset);
    p.weight = match_likelihood(score.cost);
    sum += p.weight;
    if (score.cost < best_cost) {
      best_cost = score.cost;
      result.best_n_matched = score.n_matched;
    }
  }
  if (!(sum > 0.0)) {
    // Correction carries no usable signal; leave the set where prediction
    // put it and surface the flag.
    result.degenerate = true;
    const double w0 = 1.0 / static_cast<double>(set.particles.size());
    for (Particle& p : set.particles) {
      p.weight = w0;
    }
    return result;
  }
  for (Particle& p : set.particles) {
    p.weight /= sum;
  }
  return result;
}

Pose2D estimate(const ParticleSet& set, bool eq11_literal) {
  double sum_w = 0.0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_sin = 0.0;
  double sum_cos = 0.0;
  double sum_theta = 0.0;
  for (const Particle& p : set.particles) {
    sum_w += p.weight;
    sum_x += p.weight * p.pose.x;
    sum_y += p.weight * p.pose.y;
    sum_sin += p.weight * std::sin(p.pose.theta);
    sum_cos += p.weight * std::cos(p.pose.theta);
    sum_theta += p.weight * p.pose.theta;
  }
  if (!(sum_w > 0.0)) {
    throw std::invalid_argument("estimate: needs at least one particle with positive weight");
  }
  const double theta =
      eq11_literal ? sum_theta / sum_w : std::atan2(sum_sin, sum_cos);
  return {sum_x / sum_w, sum_y / sum_w, normalize_angle(theta)};
}

void redistribute(ParticleSet& set, const ReflectorMap& map, const PfConfig& config) {
  const int m = static_cast<int>(set.particles.size());
  if (m == 0) {
    throw std::invalid_argument("redistribute: empty particle set");
  }
  const int n_exploit = static_cast<int>(
      std::ceil(config.exploit_fraction * static_cast<double>(m)));

  // Elite = top elite_quantile by weight, ties broken by index.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (set.particles[a].weight != set.particles[b].weight) {
      return set.particles[a].weight > set.particles[b].weight;
    }
    return a < b;
  });
  const int n_elite = std::min(
      m, std::max(1, static_cast<int>(std::ceil(config.elite_quantile * static_cast<double>(m)))));
  double elite_sum = 0.0;
  for (int e = 0; e < n_elite; ++e) {
    elite_sum += set.particles[order[e]].weight;
  }

  std::vector<Particle> next;
  next.reserve(m);
  const double w0 = 1.0 / static_cast<double>(m);
  for (int i = 0; i < n_exploit; ++i) {
    const double u = set.rng.uniform01() * elite_sum;
    int pick = order[0];
    double acc = 0.0;
    for (int e = 0; e < n_elite; ++e) {
      acc += set.particles[order[e]].weight;
      if (u < acc) {
        pick = order[e];
        break;
      }
    }
    const Pose2D& anchor = set.particles[pick].pose;
    const double dx = set.rng.uniform(-config.redistribution_range, config.redistribution_range);
    const double dy = set.rng.uniform(-config.redistribution_range, config.redistribution_range);
    const double dtheta = set.rng.uniform(-config.heading_jitter, config.heading_jitter);
    next.push_back({{anchor.x + dx, anchor.y + dy, normalize_angle(anchor.theta + dtheta)}, w0});
  }
  for (int i = n_exploit; i < m; ++i) {
    const double x = set.rng.uniform(map.bounds.x_min, map.bounds.x_max);
    const double y = set.rng.uniform(map.bounds.y_min, map.bounds.y_max);
    const double theta = normalize_angle(set.rng.uniform(-kPi, kPi));
    next.push_back({{x, y, theta}, w0});
  }
  set.particles = std::move(next);
}

Filter::Filter(ReflectorMap map, const VehicleGeometry& geom, const PfConfig& config,
               uint64_t seed)
    : map_(std::move(map)), geom_(geom), config_(config) {
  set_ = initialize(map_, config_, seed);
}

void Filter::reset_at(const Pose2D& pose, uint64_t seed) {
  set_ = initialize_at(pose, config_.init_pos_spread, config_.init_heading_spread, config_, seed);
  last_t_ = 0.0;
  motion_t_ = 0.0;
  have_twist_ = false;
  last_twist_ = {};
}

std::optional<ScanEstimate> Filter::step(const sim::SensorFrame& frame) {
  if (frame.t < last_t_ - 1e-12) {
    throw DataError("filter: sensor frames out of time order at t=" + std::to_string(frame.t));
  }
  if (frame.is_odometry()) {
    const sim::Odometry& odo = frame.odometry();
    const double dt = frame.t - motion_t_;
    if (dt > 0.0) {
      predict(set_, odo, geom_, dt, config_);
      motion_t_ = frame.t;
    }
    const BodyTwist enc = encoders_to_twist(odo.w_l, odo.w_r, geom_);
    last_twist_ = {enc.v, angular_rate(odo, enc, config_.angular_source)};
    have_twist_ = true;
    last_t_ = frame.t;
    return std::nullopt;
  }

  // Scan: align the set to the scan timestamp first (deterministic advance
  // with the last commanded twist, no rng draws).
  const double dt = frame.t - motion_t_;
  if (dt > 0.0) {
    if (have_twist_) {
      for (Particle& p : set_.particles) {
        p.pose = integrate_pose(p.pose, last_twist_, dt);
      }
    }
    motion_t_ = frame.t;
  }
  const WeighResult wr = weigh(set_, frame.scan(), map_, config_, geom_.d);
  const Pose2D pose = estimate(set_, config_.eq11_literal);
  if (!wr.degenerate && !wr.empty_scan) {
    redistribute(set_, map_, config_);
  }
  last_t_ = frame.t;
  return ScanEstimate{frame.t, pose, wr.best_n_matched, wr.degenerate};
}

}  // namespace lgvloc::pf
