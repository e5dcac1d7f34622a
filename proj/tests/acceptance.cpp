// Acceptance suite: end-to-end checks of the experiment pipeline. Each
// criterion prints one [PASS]/[FAIL] line; the exit code is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lgvloc/config.hpp"
#include "lgvloc/evaluation.hpp"
#include "lgvloc/io.hpp"
#include "lgvloc/laser_nav.hpp"
#include "lgvloc/particle_filter.hpp"
#include "lgvloc/pipeline.hpp"
#include "lgvloc/random.hpp"

using namespace lgvloc;

namespace {

RunConfig reference_config() {
  return load_run_config(LGVLOC_SOURCE_DIR "/configs/reference.json");
}

// Irregular ring of 20 reflectors around the central work area; used by the
// sweeps that need uniform visibility in every direction.
ReflectorMap ring_map() {
  ReflectorMap map;
  map.bounds = {0, 0, 25, 20};
  const double xs[20] = {7.8,  10.345, 12.254, 14.065, 16.67,  17.2, 17.2,  17.2,  17.2,  17.2,
                         16.677, 14.549, 13.179, 11.044, 9.163, 7.8,  7.8,   7.8,   7.8,   7.8};
  const double ys[20] = {4.035, 4.0,   4.0,    4.0,    4.0,   5.548, 7.571, 8.852, 11.996, 13.68,
                         16.0, 16.0,   16.0,   16.0,   16.0,  14.448, 12.789, 10.453, 7.728, 6.018};
  for (int i = 0; i < 20; ++i) {
    map.reflectors.push_back({i, {xs[i], ys[i]}});
  }
  return map;
}

struct Slope {
  double value = 0.0;
  double stderr_ = 0.0;
};

Slope fit_slope(const std::vector<std::pair<double, double>>& points) {
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x / n;
    my += y / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double b = sxy / sxx;
  const double a = my - b * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (a + b * x);
    ss_res += r * r;
  }
  return {b, std::sqrt(ss_res / (n - 2.0) / sxx)};
}

// ---------------------------------------------------------------- criterion 1

bool ordering_reproduction(std::string& detail) {
  const RunConfig cfg = reference_config();
  double laser_sum = 0.0, pf_sum = 0.0;
  double laser_min = 1e9, laser_max = 0.0;
  bool pf_strictly_lower = true;
  double slowest = 0.0;
  for (int run = 0; run < 8; ++run) {
    const auto start = std::chrono::steady_clock::now();
    const auto out = pipeline::run_once(cfg, cfg.seed + run);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    slowest = std::max(slowest, secs);
    laser_sum += out.laser.rmse_mm;
    pf_sum += out.pf.rmse_mm;
    laser_min = std::min(laser_min, out.laser.rmse_mm);
    laser_max = std::max(laser_max, out.laser.rmse_mm);
    if (!(out.pf.rmse_mm < out.laser.rmse_mm)) {
      pf_strictly_lower = false;
    }
  }
  const double improvement = eval::improvement_pct(laser_sum / 8.0, pf_sum / 8.0);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "laser avg %.1f mm (range %.1f..%.1f), pf avg %.1f mm, improvement %.1f%%, "
                "slowest run %.1f s",
                laser_sum / 8.0, laser_min, laser_max, pf_sum / 8.0, improvement, slowest);
  detail = buf;
  return laser_min >= 40.0 && laser_max <= 80.0 && pf_strictly_lower && improvement >= 50.0 &&
         slowest <= 60.0;
}

// ---------------------------------------------------------------- criterion 2

RunConfig d_sweep_config(double d) {
  RunConfig cfg = reference_config();
  cfg.vehicle.d = d;
  cfg.map = ring_map();
  cfg.trajectory.initial_pose = {12.5, 9.35, 0.0};
  cfg.trajectory.segments = {{22.675, 0.72, kPi / 3.0}};  // two laps
  cfg.noise = sim::NoiseModel{};
  cfg.noise.lrf_range_stddev = 0.001;
  cfg.noise.bearing_smear_gain = 0.005;  // the only heading-error source
  cfg.noise.detection_prob = 1.0;
  cfg.noise.max_lrf_range = 15.0;
  cfg.pf.init_uniform = false;
  cfg.pf.init_pos_spread = 0.05;
  cfg.pf.init_heading_spread = 0.002;
  return cfg;
}

bool error_amplification(std::string& detail) {
  // Direct form: a heading error injected before the offset conversion
  // displaces the converted position by ~d per radian.
  const double eps = 1e-3;
  for (double d : {0.5, 1.2, 2.0}) {
    const Pose2D fix{10.0, 5.0, 0.9};
    const Pose2D clean = sensor_to_rotation_center(fix, d);
    const Pose2D off = sensor_to_rotation_center({fix.x, fix.y, fix.theta + eps}, d);
    const double gain = std::hypot(off.x - clean.x, off.y - clean.y) / eps;
    if (gain < 0.9 * d || gain > 1.1 * d) {
      detail = "direct conversion gain out of band";
      return false;
    }
  }

  // Statistical form: per-run RMSE regressed against d. The per-scan common
  // bearing offset has a known stddev, so the baseline slope is predictable;
  // the filter keeps its heading on the gyro and shows no comparable term.
  const double body_w = 0.72 / 1.3;
  const double sigma_beta_mrad = 0.005 * body_w * 1000.0;
  std::vector<std::pair<double, double>> laser_pts;
  std::vector<std::pair<double, double>> pf_pts;
  for (double d : {0.5, 1.2, 2.0}) {
    const RunConfig cfg = d_sweep_config(d);
    for (uint64_t seed = 301; seed < 306; ++seed) {
      const auto out = pipeline::run_once(cfg, seed);
      laser_pts.push_back({d, out.laser.rmse_mm});
      pf_pts.push_back({d, out.pf.rmse_mm});
    }
  }
  const Slope laser = fit_slope(laser_pts);
  const Slope pf = fit_slope(pf_pts);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "baseline slope %.2f mm/m (expect ~%.2f, se %.2f), pf slope %.2f mm/m (se %.2f)",
                laser.value, sigma_beta_mrad, laser.stderr_, pf.value, pf.stderr_);
  detail = buf;
  const bool baseline_linear =
      laser.value > 3.0 * laser.stderr_ && laser.value >= 0.8 * sigma_beta_mrad &&
      laser.value <= 1.2 * sigma_beta_mrad;
  const bool pf_flat = std::abs(pf.value) <= 3.0 * pf.stderr_;
  return baseline_linear && pf_flat;
}

// ---------------------------------------------------------------- criterion 3

RunConfig convergence_config() {
  RunConfig cfg = reference_config();
  cfg.map.bounds = {0, 0, 6, 6};
  // an irregular ring (no rotational symmetry, otherwise global
  // localization has several equally good modes to fall into)
  const double angles[8] = {0.3, 1.15, 1.9, 2.75, 3.6, 4.4, 5.1, 5.9};
  const double radii[8] = {0.42, 0.35, 0.45, 0.38, 0.47, 0.33, 0.44, 0.40};
  cfg.map.reflectors.clear();
  for (int i = 0; i < 8; ++i) {
    cfg.map.reflectors.push_back(
        {i, {3.0 + 6.0 * radii[i] * std::cos(angles[i]), 3.0 + 6.0 * radii[i] * std::sin(angles[i])}});
  }
  cfg.trajectory.initial_pose = {3, 3, 0};
  cfg.trajectory.segments = {{4.725, 0.0, 0.0}};  // stationary, 10 scans
  cfg.noise = sim::NoiseModel{};
  cfg.noise.detection_prob = 1.0;
  cfg.noise.max_lrf_range = 30.0;
  cfg.pf = pf::PfConfig{};  // type defaults, global initialization
  cfg.pf.gate = 1.0;        // partial matches must stay in reach of the climb
  return cfg;
}

bool global_convergence(std::string& detail) {
  const RunConfig base = convergence_config();
  int converged = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    RunConfig cfg = base;
    cfg.seed = seed;
    const auto truth = pipeline::make_truth(cfg);
    const auto frames = pipeline::make_sensors(cfg, truth);
    const auto rows = pipeline::estimate_pf(cfg, frames);
    if (rows.size() < 10) {
      continue;
    }
    const auto& tenth = rows[9];
    const double err = std::hypot(tenth.pose.x - cfg.trajectory.initial_pose.x,
                                  tenth.pose.y - cfg.trajectory.initial_pose.y);
    if (err <= 0.25) {
      ++converged;
    }
  }
  detail = std::to_string(converged) + "/100 seeds within 0.25 m after 10 corrections";
  return converged >= 95;
}

// ---------------------------------------------------------------- criterion 4

// Independent scalar re-implementation of the weighting path, kept free of
// the production code: projection by plain trigonometry, globally greedy
// gated assignment, standard-normal scoring, then normalization.
std::vector<double> oracle_weights(const std::vector<pf::Particle>& particles,
                                   const std::vector<ReflectorDetection>& detections,
                                   const ReflectorMap& map, double gate, double scale,
                                   double offset) {
  std::vector<double> raw(particles.size(), 0.0);
  for (size_t p = 0; p < particles.size(); ++p) {
    const Pose2D& pose = particles[p].pose;
    const double sx = pose.x + offset * std::cos(pose.theta);
    const double sy = pose.y + offset * std::sin(pose.theta);
    struct Cand {
      double dist;
      int det;
      int refl;
    };
    std::vector<Cand> cands;
    for (size_t i = 0; i < detections.size(); ++i) {
      const double px = sx + detections[i].range * std::cos(pose.theta + detections[i].bearing);
      const double py = sy + detections[i].range * std::sin(pose.theta + detections[i].bearing);
      for (size_t j = 0; j < map.reflectors.size(); ++j) {
        const double dist = std::hypot(px - map.reflectors[j].position.x,
                                       py - map.reflectors[j].position.y);
        if (dist <= gate) {
          cands.push_back({dist, static_cast<int>(i), static_cast<int>(j)});
        }
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.det != b.det) return a.det < b.det;
      return a.refl < b.refl;
    });
    std::vector<bool> det_used(detections.size(), false);
    std::vector<bool> refl_used(map.reflectors.size(), false);
    double sum_sq = 0.0;
    size_t matched = 0;
    for (const Cand& c : cands) {
      if (det_used[c.det] || refl_used[c.refl]) continue;
      det_used[c.det] = true;
      refl_used[c.refl] = true;
      sum_sq += c.dist * c.dist;
      ++matched;
    }
    sum_sq += static_cast<double>(detections.size() - matched) * gate * gate;
    raw[p] = std::exp(-0.5 * sum_sq / (scale * scale)) / std::sqrt(kTwoPi);
  }
  double sum = 0.0;
  for (double w : raw) sum += w;
  if (!(sum > 0.0)) {
    std::fill(raw.begin(), raw.end(), 1.0 / static_cast<double>(raw.size()));
    return raw;
  }
  for (double& w : raw) w /= sum;
  return raw;
}

bool oracle_equivalence(std::string& detail) {
  Rng rng(2024);
  double worst_estimate = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    pf::ParticleSet set;
    const int n = 1 + static_cast<int>(rng.uniform(0, 40));
    for (int i = 0; i < n; ++i) {
      set.particles.push_back({{rng.uniform(-30, 30), rng.uniform(-30, 30),
                                normalize_angle(rng.uniform(-kPi, kPi))},
                               rng.uniform(0.001, 2.0)});
    }
    const Pose2D est = pf::estimate(set);
    // brute-force weighted sums, the naive loop the contract names
    double sw = 0, sx = 0, sy = 0, ss = 0, sc = 0;
    for (const auto& p : set.particles) {
      sw += p.weight;
      sx += p.weight * p.pose.x;
      sy += p.weight * p.pose.y;
      ss += p.weight * std::sin(p.pose.theta);
      sc += p.weight * std::cos(p.pose.theta);
    }
    worst_estimate = std::max(worst_estimate, std::abs(est.x - sx / sw) / (1.0 + std::abs(est.x)));
    worst_estimate = std::max(worst_estimate, std::abs(est.y - sy / sw) / (1.0 + std::abs(est.y)));
    worst_estimate = std::max(
        worst_estimate, std::abs(normalize_angle(est.theta - std::atan2(ss, sc))));
  }

  ReflectorMap map;
  map.bounds = {-20, -20, 20, 20};
  for (int i = 0; i < 8; ++i) {
    map.reflectors.push_back({i, {rng.uniform(-18, 18), rng.uniform(-18, 18)}});
  }
  double worst_weight = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    pf::PfConfig cfg;
    cfg.m = 24;
    cfg.gate = rng.uniform(0.3, 2.0);
    cfg.distance_scale = rng.uniform(0.1, 1.5);
    pf::ParticleSet set;
    for (int i = 0; i < cfg.m; ++i) {
      set.particles.push_back({{rng.uniform(-15, 15), rng.uniform(-15, 15),
                                normalize_angle(rng.uniform(-kPi, kPi))},
                               1.0 / cfg.m});
    }
    sim::LrfScan scan;
    const int dets = 1 + static_cast<int>(rng.uniform(0, 6));
    for (int i = 0; i < dets; ++i) {
      scan.detections.push_back(
          {rng.uniform(0.5, 20.0), normalize_angle(rng.uniform(-kPi, kPi))});
    }
    const double offset = rng.uniform(0.0, 2.0);
    const auto expected =
        oracle_weights(set.particles, scan.detections, map, cfg.gate, cfg.distance_scale, offset);
    pf::weigh(set, scan, map, cfg, offset);
    for (size_t i = 0; i < set.particles.size(); ++i) {
      worst_weight = std::max(worst_weight, std::abs(set.particles[i].weight - expected[i]));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "estimate max dev %.2e, weight max dev %.2e", worst_estimate,
                worst_weight);
  detail = buf;
  return worst_estimate < 1e-12 && worst_weight < 1e-12;
}

// ---------------------------------------------------------------- criterion 5

bool invariant_suite(std::string& detail) {
  std::vector<std::string> failures;

  // particle count and weight normalization through a real run
  {
    RunConfig cfg = reference_config();
    cfg.trajectory.segments = {{11.25, 0.72, kPi / 3.0}};
    const auto truth = pipeline::make_truth(cfg);
    const auto frames = pipeline::make_sensors(cfg, truth);
    pf::Filter filter(cfg.map, cfg.vehicle, cfg.pf, 9);
    filter.reset_at(cfg.trajectory.initial_pose, 9);
    for (const auto& frame : frames) {
      filter.step(frame);
      if (static_cast<int>(filter.set().particles.size()) != cfg.pf.m) {
        failures.push_back("particle count");
        break;
      }
      double sum = 0.0;
      bool nonneg = true;
      for (const auto& p : filter.set().particles) {
        sum += p.weight;
        nonneg = nonneg && p.weight >= 0.0;
      }
      if (std::abs(sum - 1.0) > 1e-9 || !nonneg) {
        failures.push_back("weight normalization");
        break;
      }
    }
  }

  // angle normalization
  {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
      const double a = rng.uniform(-50, 50);
      const double n = normalize_angle(a);
      if (!(n > -kPi && n <= kPi) || std::abs(normalize_angle(n - a)) > 1e-9) {
        failures.push_back("angle normalization");
        break;
      }
    }
  }

  // estimate invariant under uniform weight scaling
  {
    Rng rng(6);
    pf::ParticleSet set;
    for (int i = 0; i < 50; ++i) {
      set.particles.push_back({{rng.uniform(-5, 5), rng.uniform(-5, 5),
                                normalize_angle(rng.uniform(-kPi, kPi))},
                               rng.uniform(0.01, 1.0)});
    }
    const Pose2D a = pf::estimate(set);
    for (auto& p : set.particles) p.weight *= 123.5;
    const Pose2D b = pf::estimate(set);
    if (std::abs(a.x - b.x) > 1e-12 || std::abs(a.y - b.y) > 1e-12 ||
        std::abs(normalize_angle(a.theta - b.theta)) > 1e-12) {
      failures.push_back("weight-scaling invariance");
    }
  }

  // determinism: the full pipeline twice, byte for byte
  {
    RunConfig cfg = reference_config();
    cfg.trajectory.segments = {{11.25, 0.72, kPi / 3.0}};
    const auto render = [&]() {
      const auto truth = pipeline::make_truth(cfg);
      const auto frames = pipeline::make_sensors(cfg, truth);
      const auto laser = pipeline::estimate_laser(cfg, frames);
      const auto pf_rows = pipeline::estimate_pf(cfg, frames);
      std::ostringstream os;
      io::write_truth_csv(os, truth, {cfg.config_hash, cfg.seed});
      io::write_sensor_jsonl(os, frames, {cfg.config_hash, cfg.seed});
      io::write_laser_trajectory_csv(os, laser, {cfg.config_hash, cfg.seed});
      io::write_pf_trajectory_csv(os, pf_rows, {cfg.config_hash, cfg.seed});
      return os.str();
    };
    if (render() != render()) {
      failures.push_back("bit-identical reruns");
    }
  }

  // first-order integrator: commensurate lap closes, half-arc error halves
  {
    const BodyTwist twist{0.36, 0.36 / 0.65};
    const double period = kTwoPi / twist.w;
    Pose2D lap{0, 0, 0};
    for (int i = 0; i < 1000; ++i) lap = integrate_pose(lap, twist, period / 1000);
    const auto half_err = [&](int steps) {
      Pose2D p{0, 0, 0};
      for (int i = 0; i < steps / 2; ++i) p = integrate_pose(p, twist, period / steps);
      const Pose2D exact = sim::advance_arc({0, 0, 0}, twist, period / 2.0);
      return std::hypot(p.x - exact.x, p.y - exact.y);
    };
    const double ratio = half_err(1000) / half_err(2000);
    if (std::hypot(lap.x, lap.y) > 1e-9 || ratio < 1.9 || ratio > 2.1) {
      failures.push_back("integrator convergence");
    }
  }

  // rmse^2 = variance + mean^2
  {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> errors;
      const int n = 2 + static_cast<int>(rng.uniform(0, 60));
      for (int i = 0; i < n; ++i) errors.push_back(rng.uniform(0, 150));
      const auto stats = eval::summarize(errors);
      double mean = 0.0;
      for (double e : errors) mean += e / n;
      const double lhs = stats.rmse_mm * stats.rmse_mm;
      const double rhs = stats.variance_mm2 + mean * mean;
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, rhs)) {
        failures.push_back("rmse identity");
        break;
      }
    }
  }

  // registration exactness on noiseless scenes
  {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      ReflectorMap map;
      map.bounds = {-40, -40, 40, 40};
      const int n = 3 + static_cast<int>(rng.uniform(0, 6));
      lasernav::Association assoc;
      const Pose2D sensor{rng.uniform(-10, 10), rng.uniform(-10, 10),
                          normalize_angle(rng.uniform(-kPi, kPi))};
      std::vector<ReflectorDetection> dets;
      for (int i = 0; i < n; ++i) {
        const Vec2 q{rng.uniform(-35, 35), rng.uniform(-35, 35)};
        map.reflectors.push_back({i, q});
        const double dx = q.x - sensor.x;
        const double dy = q.y - sensor.y;
        dets.push_back({std::hypot(dx, dy), normalize_angle(std::atan2(dy, dx) - sensor.theta)});
        assoc.pairs.emplace_back(i, i);
      }
      VehicleGeometry geom;
      geom.d = 0.0;
      const auto fix = lasernav::solve_fix(dets, assoc, map, geom, {0, 0, 0});
      if (!fix || std::abs(fix->pose.x - sensor.x) > 1e-7 ||
          std::abs(fix->pose.y - sensor.y) > 1e-7 ||
          std::abs(normalize_angle(fix->pose.theta - sensor.theta)) > 1e-7) {
        failures.push_back("registration exactness");
        break;
      }
    }
  }

  if (failures.empty()) {
    detail = "count, normalization, scaling, determinism, integrator, rmse identity, registration";
    return true;
  }
  detail = "failed: ";
  for (const auto& f : failures) detail += f + "; ";
  return false;
}

// ---------------------------------------------------------------- criterion 6

std::vector<double> fixture_errors(double rmse, double variance) {
  const double mean = std::sqrt(rmse * rmse - variance);
  const double spread = std::sqrt(variance);
  return {mean - spread, mean + spread};
}

bool report_fidelity(std::string& detail) {
  // Published per-run values the report format is checked against.
  const double laser_rmse[8] = {56.6685, 52.3040, 56.5035, 54.1946,
                                56.8387, 61.3273, 56.3223, 61.0237};
  const double laser_var[8] = {434.2556, 441.1461, 417.0178, 413.6437,
                               621.2341, 471.1634, 516.4131, 466.3542};
  const double pf_rmse[8] = {20.2012, 13.5170, 19.7110, 20.1831,
                             17.1157, 24.3113, 25.2221, 23.2112};
  const double pf_var[8] = {81.7710, 151.4454, 71.7040, 206.4672,
                            75.8677, 78.4011, 165.5830, 109.8011};
  std::vector<std::pair<eval::ErrorStats, eval::ErrorStats>> runs;
  for (int i = 0; i < 8; ++i) {
    runs.push_back({eval::summarize(fixture_errors(laser_rmse[i], laser_var[i])),
                    eval::summarize(fixture_errors(pf_rmse[i], pf_var[i]))});
  }
  const eval::RunReport report = eval::make_report(runs);
  bool rows_ok = true;
  for (int i = 0; i < 8; ++i) {
    rows_ok = rows_ok && std::abs(report.rows[i].laser.rmse_mm - laser_rmse[i]) < 5e-5 &&
              std::abs(report.rows[i].laser.variance_mm2 - laser_var[i]) < 5e-5 &&
              std::abs(report.rows[i].pf.rmse_mm - pf_rmse[i]) < 5e-5 &&
              std::abs(report.rows[i].pf.variance_mm2 - pf_var[i]) < 5e-5;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "row1 %.4f/%.4f vs %.4f/%.4f, improvement %.4f%%",
                report.rows[0].laser.rmse_mm, report.rows[0].laser.variance_mm2,
                report.rows[0].pf.rmse_mm, report.rows[0].pf.variance_mm2, report.improvement);
  detail = buf;
  return rows_ok && std::abs(report.improvement - 64.09) <= 0.01;
}

// ---------------------------------------------------------------- criterion 7

RunConfig clutter_config() {
  // Clutter stress runs on the ring so the clean baseline is tight; the
  // widened gate (both estimators) is what lets high-reflectance ghosts
  // into the association, which is the failure mode under test.
  RunConfig cfg = reference_config();
  cfg.map = ring_map();
  cfg.trajectory.initial_pose = {12.5, 9.35, 0.0};
  cfg.trajectory.segments = {{22.675, 0.72, kPi / 3.0}};  // two laps
  cfg.noise = sim::NoiseModel{};
  cfg.noise.lrf_range_stddev = 0.008;
  cfg.noise.lrf_bearing_stddev = 0.004;
  cfg.noise.bearing_smear_gain = 0.0;
  cfg.noise.detection_prob = 0.85;
  cfg.noise.max_lrf_range = 15.0;
  cfg.lasernav_gate = 1.5;
  cfg.pf.gate = 1.5;
  return cfg;
}

bool clutter_robustness(std::string& detail) {
  const RunConfig base = clutter_config();
  double laser_ratio_sum = 0.0;
  double pf_ratio_sum = 0.0;
  const int seeds = 3;
  for (int i = 0; i < seeds; ++i) {
    const uint64_t seed = base.seed + 40 + i;
    RunConfig clean = base;
    const auto clean_out = pipeline::run_once(clean, seed);
    RunConfig cluttered = base;
    cluttered.noise.clutter_rate = 2.0;
    const auto clutter_out = pipeline::run_once(cluttered, seed);
    laser_ratio_sum += clutter_out.laser.rmse_mm / clean_out.laser.rmse_mm;
    pf_ratio_sum += clutter_out.pf.rmse_mm / clean_out.pf.rmse_mm;
  }
  const double laser_ratio = laser_ratio_sum / seeds;
  const double pf_ratio = pf_ratio_sum / seeds;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "laser degrades %.2fx, pf degrades %.2fx", laser_ratio,
                pf_ratio);
  detail = buf;
  return laser_ratio > 2.0 && pf_ratio < 2.0;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"ordering reproduction (baseline in band, filter ahead on every run)", ordering_reproduction},
      {"offset error amplification hits the baseline only", error_amplification},
      {"global convergence within ten corrections", global_convergence},
      {"estimate and weighting match independent oracles", oracle_equivalence},
      {"invariant suite", invariant_suite},
      {"report fidelity on fixture error lists", report_fidelity},
      {"clutter robustness ordering", clutter_robustness},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string note;
    bool ok = false;
    try {
      ok = criteria[i].run(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    if (!ok) {
      ++failures;
    }
    std::printf("[%s] criterion %zu: %s%s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                note.empty() ? "" : " — ", note.c_str());
    std::fflush(stdout);
  }
  return failures;
}
