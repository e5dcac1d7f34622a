#include "lgvloc/laser_nav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lgvloc::lasernav {

Association associate(const std::vector<ReflectorDetection>& detections,
                      const Pose2D& prior_sensor_pose, const ReflectorMap& map, double gate) {
  if (!(gate > 0.0)) {
    throw std::invalid_argument("associate: gate must be > 0");
  }

  struct Candidate {
    double dist;
    int det;
    int refl;  // index into map.reflectors
  };
  std::vector<Candidate> candidates;
  std::vector<Vec2> projected(detections.size());
  for (size_t i = 0; i < detections.size(); ++i) {
    projected[i] = transform_detection_to_world(prior_sensor_pose, detections[i]);
  }
  for (size_t i = 0; i < detections.size(); ++i) {
    for (size_t j = 0; j < map.reflectors.size(); ++j) {
      const double dist = norm(projected[i] - map.reflectors[j].position);
      if (dist <= gate) {
        candidates.push_back({dist, static_cast<int>(i), static_cast<int>(j)});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.det != b.det) return a.det < b.det;
    return a.refl < b.refl;
  });

  Association out;
  std::vector<bool> det_taken(detections.size(), false);
  std::vector<bool> refl_taken(map.reflectors.size(), false);
  for (const Candidate& c : candidates) {
    if (det_taken[c.det] || refl_taken[c.refl]) {
      continue;
    }
    det_taken[c.det] = true;
    refl_taken[c.refl] = true;
    out.pairs.emplace_back(c.det, map.reflectors[c.refl].id);
  }
  for (size_t i = 0; i < detections.size(); ++i) {
    if (!det_taken[i]) {
      out.unmatched_detections.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::optional<LaserFix> solve_fix(const std::vector<ReflectorDetection>& detections,
                                  const Association& assoc, const ReflectorMap& map,
                                  const VehicleGeometry& geom, const Pose2D& prior) {
  const size_t n = assoc.pairs.size();
  if (n < 2) {
    return std::nullopt;
  }

  std::vector<Vec2> local(n);   // detection points in the sensor frame
  std::vector<Vec2> target(n);  // matched reflector positions
  Vec2 local_centroid;
  Vec2 target_centroid;
  for (size_t k = 0; k < n; ++k) {
    const auto [det, id] = assoc.pairs[k];
    const ReflectorDetection& obs = detections.at(det);
    const Reflector* refl = map.find(id);
    if (refl == nullptr) {
      throw std::invalid_argument("solve_fix: association references an unknown reflector id");
    }
    local[k] = {obs.range * std::cos(obs.bearing), obs.range * std::sin(obs.bearing)};
    target[k] = refl->position;
    local_centroid = local_centroid + local[k];
    target_centroid = target_centroid + target[k];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  local_centroid = inv_n * local_centroid;
  target_centroid = inv_n * target_centroid;

  double a = 0.0;  // sum of dot(local', target')
  double b = 0.0;  // sum of cross(local', target')
  for (size_t k = 0; k < n; ++k) {
    const Vec2 p = local[k] - local_centroid;
    const Vec2 q = target[k] - target_centroid;
    a += dot(p, q);
    b += cross(p, q);
  }
  // atan2(b, a) is the optimal proper rotation; reflections never arise.
  // Coincident detections leave the rotation unconstrained, fall back to
  // the prior heading.
  const double theta = (a == 0.0 && b == 0.0) ? prior.theta : std::atan2(b, a);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Vec2 t{target_centroid.x - (c * local_centroid.x - s * local_centroid.y),
               target_centroid.y - (s * local_centroid.x + c * local_centroid.y)};

  double sq_sum = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const Vec2 mapped{c * local[k].x - s * local[k].y + t.x,
                      s * local[k].x + c * local[k].y + t.y};
    const Vec2 r = mapped - target[k];
    sq_sum += dot(r, r);
  }

  LaserFix fix;
  const Pose2D sensor_pose{t.x, t.y, normalize_angle(theta)};
  fix.pose = sensor_to_rotation_center(sensor_pose, geom.d);
  fix.n_matched = static_cast<int>(n);
  fix.residual_rms = std::sqrt(sq_sum * inv_n);
  return fix;
}

Tracker::Tracker(ReflectorMap map, const VehicleGeometry& geom, double gate,
                 const Pose2D& initial_center_pose)
    : map_(std::move(map)),
      geom_(geom),
      gate_(gate),
      last_sensor_(rotation_center_to_sensor(initial_center_pose, geom.d)) {}

Pose2D Tracker::prior_sensor_pose(double t) const {
  if (!have_rate_) {
    return last_sensor_;
  }
  const double dt = t - last_t_;
  return {last_sensor_.x + velocity_.x * dt, last_sensor_.y + velocity_.y * dt,
          normalize_angle(last_sensor_.theta + heading_rate_ * dt)};
}

namespace {

// Same objective the association gate implies: squared match distances plus
// a barely-in-gate cost per unmatched detection.
double assignment_cost(const std::vector<ReflectorDetection>& detections, const Pose2D& sensor,
                       const Association& assoc, const ReflectorMap& map, double gate) {
  double cost = 0.0;
  for (const auto& [det, id] : assoc.pairs) {
    const Vec2 p = transform_detection_to_world(sensor, detections[det]);
    const Vec2 diff = p - map.find(id)->position;
    cost += dot(diff, diff);
  }
  cost += static_cast<double>(assoc.unmatched_detections.size()) * gate * gate;
  return cost;
}

struct ScoredFix {
  std::optional<LaserFix> fix;
  double cost = 0.0;
};

// Associate from the prior, solve, re-associate once at the solution.
ScoredFix solve_refined(const std::vector<ReflectorDetection>& detections, const Pose2D& prior,
                        const ReflectorMap& map, const VehicleGeometry& geom, double assoc_gate,
                        double cost_gate) {
  const Association first = associate(detections, prior, map, assoc_gate);
  auto fix = solve_fix(detections, first, map, geom, prior);
  if (!fix) {
    return {};
  }
  const Pose2D at_fix = rotation_center_to_sensor(fix->pose, geom.d);
  const Association second = associate(detections, at_fix, map, cost_gate);
  if (auto refined = solve_fix(detections, second, map, geom, at_fix)) {
    const Pose2D sensor = rotation_center_to_sensor(refined->pose, geom.d);
    return {refined, assignment_cost(detections, sensor, second, map, cost_gate)};
  }
  const Pose2D sensor = rotation_center_to_sensor(fix->pose, geom.d);
  return {fix, assignment_cost(detections, sensor, first, map, cost_gate)};
}

}  // namespace

std::optional<LaserFix> Tracker::process_scan(const sim::LrfScan& scan, double t) {
  const Pose2D prior = prior_sensor_pose(t);

  // The prior heading is the weak spot (it lags a full scan period while
  // turning), so candidate headings fan out around the prior. Selection is
  // prior-regularized: with two or three collinear detections a shifted
  // assignment can fit with near-zero residual, so raw cost alone cannot
  // discriminate and the fix nearest the extrapolated prior must win ties.
  std::optional<LaserFix> fix;
  double best_score = std::numeric_limits<double>::infinity();
  const Pose2D prior_center = sensor_to_rotation_center(prior, geom_.d);
  const auto prior_score = [&](const LaserFix& f) {
    const double dx = f.pose.x - prior_center.x;
    const double dy = f.pose.y - prior_center.y;
    const double dth = normalize_angle(f.pose.theta - prior_center.theta);
    return 0.05 * (dx * dx + dy * dy) + 0.5 * dth * dth;
  };
  // Until the first fix pair establishes a rate, the prior heading can be
  // stale by several scan periods, so the acquisition fan sweeps wider.
  const int fan_steps = have_rate_ ? 5 : 12;
  for (int k = -fan_steps; k <= fan_steps; ++k) {
    Pose2D candidate = prior;
    candidate.theta = normalize_angle(prior.theta + 0.06 * k);
    const ScoredFix scored =
        solve_refined(scan.detections, candidate, map_, geom_, gate_, gate_);
    if (!scored.fix) {
      continue;
    }
    const double score = scored.cost + prior_score(*scored.fix);
    if (score < best_score) {
      fix = scored.fix;
      best_score = score;
    }
  }
  if (!fix) {
    // Sparse scan: widen the association gate around the plain prior.
    for (const double gate : {2.0 * gate_, 4.0 * gate_}) {
      const ScoredFix scored =
          solve_refined(scan.detections, prior, map_, geom_, gate, gate_);
      if (scored.fix) {
        fix = scored.fix;
        break;
      }
    }
  }

  // Innovation gate, applied in the rotation-center frame where offset
  // amplification is visible: a fix that jumps implausibly far from the
  // extrapolated prior is a mis-association, not motion. The bound widens
  // with every coasted scan so the tracker can still re-acquire.
  if (fix && have_rate_) {
    const int widen = std::min(misses_, 2);
    const double bound = gate_ * static_cast<double>(1 + widen);
    if (std::hypot(fix->pose.x - prior_center.x, fix->pose.y - prior_center.y) > bound ||
        std::abs(normalize_angle(fix->pose.theta - prior.theta)) > 0.45 * (1 + widen)) {
      fix.reset();
    }
  }

  if (fix) {
    const Pose2D sensor = rotation_center_to_sensor(fix->pose, geom_.d);
    const double dt = t - last_t_;
    if (dt > 0.0) {
      // Rates are smoothed across fixes; raw fix-to-fix differencing would
      // double the per-fix noise straight into the next prior.
      const Vec2 v_raw{(sensor.x - last_sensor_.x) / dt, (sensor.y - last_sensor_.y) / dt};
      const double w_raw = normalize_angle(sensor.theta - last_sensor_.theta) / dt;
      if (!have_rate_) {
        velocity_ = v_raw;
        heading_rate_ = w_raw;
        have_rate_ = true;
      } else {
        constexpr double kRateBlend = 0.25;
        velocity_ = {(1.0 - kRateBlend) * velocity_.x + kRateBlend * v_raw.x,
                     (1.0 - kRateBlend) * velocity_.y + kRateBlend * v_raw.y};
        heading_rate_ += kRateBlend * (w_raw - heading_rate_);
      }
    }
    last_sensor_ = sensor;
    last_t_ = t;
    misses_ = 0;
  } else {
    ++misses_;
  }
  return fix;
}

}  // namespace lgvloc::lasernav
