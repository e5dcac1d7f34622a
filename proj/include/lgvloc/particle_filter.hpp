#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lgvloc/geometry.hpp"
#include "lgvloc/kinematics.hpp"
#include "lgvloc/random.hpp"
#include "lgvloc/sim.hpp"

namespace lgvloc::pf {

/// A pose hypothesis for the target rotation center. Particles live in the
/// rotation-center frame, not the sensor frame, which is what removes the
/// sensor-offset error amplification from the estimate.
struct Particle {
  Pose2D pose;
  double weight = 0.0;
};

enum class AngularSource { kGyro, kEncoders, kAverage };

struct MotionNoise {
  double v_stddev = 0.02;  // m/s
  double w_stddev = 0.02;  // rad/s
};

struct PfConfig {
  int m = 150;                         // particle count, constant across all steps
  double exploit_fraction = 0.95;      // share of particles regenerated near the elite
  double elite_quantile = 0.25;        // top fraction by weight eligible as anchors
  double redistribution_range = 0.25;  // +/- meters of positional jitter around anchors
  double heading_jitter = 0.175;       // +/- radians around anchor headings
  double floor_quantile = 0.15;        // accepted for config compatibility; redistribution
                                       // always renews the full set (see redistribute)
  AngularSource angular_source = AngularSource::kGyro;
  double gate = 0.5;            // association gate, meters
  double distance_scale = 0.1;  // meters; divisor applied to match distances before scoring
  bool eq11_literal = false;    // arithmetic instead of circular heading mean
  MotionNoise motion_noise;

  // Startup placement. "uniform" spreads particles over the whole map
  // (global localization); "pose" seeds them around a known start pose.
  bool init_uniform = true;
  double init_pos_spread = 0.25;      // +/- meters around the start pose
  double init_heading_spread = 0.02;  // +/- radians

  void validate() const;
};

struct ParticleSet {
  std::vector<Particle> particles;
  Rng rng;
};

/// M particles uniform over bounds x (-pi, pi], weights 1/M. Deterministic
/// given the seed; per particle the draws are x, y, theta.
ParticleSet initialize(const ReflectorMap& map, const PfConfig& config, uint64_t seed);

/// M particles uniform over a +/- spread box around a known start pose.
ParticleSet initialize_at(const Pose2D& pose, double pos_spread, double heading_spread,
                          const PfConfig& config, uint64_t seed);

/// Moves every particle by the odometry-derived twist perturbed with
/// independent Gaussian noise (draws ordered by particle index: v then w).
/// v comes from the encoders; w from the configured angular source.
/// Weights are untouched.
void predict(ParticleSet& set, const sim::Odometry& odo, const VehicleGeometry& geom, double dt,
             const PfConfig& config);

/// Match cost of one rotation-center hypothesis against a scan: detections
/// are projected from the hypothesis' sensor pose, associated per-particle
/// with gated greedy nearest-neighbor (lasernav::associate), and scored as
///   cost = (sum of squared match distances + gate^2 per unmatched
///           detection) / distance_scale^2.
/// An unmatched detection costs exactly what a barely-in-gate match would,
/// so the cost stays continuous at the gate boundary.
struct MatchScore {
  double cost = 0.0;
  int n_matched = 0;
};
MatchScore score_pose(const Pose2D& center_pose, const std::vector<ReflectorDetection>& detections,
                      const ReflectorMap& map, const PfConfig& config, double sensor_offset);

/// Standard-normal density of the accumulated match cost.
double match_likelihood(double cost);

struct WeighResult {
  bool degenerate = false;  // every particle scored zero; weights reset uniform
  bool empty_scan = false;  // scan had no detections; weights untouched
  int best_n_matched = 0;   // match count of the lowest-cost particle
};

/// Reweights the set against one scan and normalizes to sum 1. Never moves
/// a particle. If every raw weight underflows to zero the correction is
/// skipped: weights become uniform and the degenerate flag is set.
WeighResult weigh(ParticleSet& set, const sim::LrfScan& scan, const ReflectorMap& map,
                  const PfConfig& config, double sensor_offset);

/// Weight-normalized mean pose. x and y are plain weighted means; the
/// heading is the weighted circular mean atan2(sum w sin, sum w cos) unless
/// eq11_literal asks for the arithmetic form. Rejects all-zero weights.
Pose2D estimate(const ParticleSet& set, bool eq11_literal = false);

/// Replaces the set with exactly M fresh particles:
/// ceil(exploit_fraction * M) are drawn by picking an anchor among the top
/// elite_quantile particles (probability proportional to weight) and
/// jittering it within +/- redistribution_range in x/y and
/// +/- heading_jitter in heading; the remainder is uniform over the map
/// bounds to keep an escape route from local minima. Weights reset to 1/M.
/// RNG draws are sequential in particle order (anchor, dx, dy, dtheta per
/// exploit particle; x, y, theta per uniform one).
void redistribute(ParticleSet& set, const ReflectorMap& map, const PfConfig& config);

struct ScanEstimate {
  double t = 0.0;
  Pose2D pose;
  int n_matched = 0;
  bool degenerate = false;
};

/// Frame-driven filter: odometry frames predict, scans correct.
/// Scans additionally advance the set to the scan timestamp with the last
/// odometry twist (no noise, no draws) before weighing, so the 450 ms scan
/// clock and the 100 ms odometry clock stay aligned. An estimate is emitted
/// only on scans, after weighing and before redistribution; degenerate or
/// empty scans skip redistribution.
class Filter {
 public:
  Filter(ReflectorMap map, const VehicleGeometry& geom, const PfConfig& config, uint64_t seed);

  /// Re-seeds the particles around a known start pose.
  void reset_at(const Pose2D& pose, uint64_t seed);

  /// Consumes one frame; frames must arrive in nondecreasing time order
  /// (throws DataError otherwise).
  std::optional<ScanEstimate> step(const sim::SensorFrame& frame);

  const ParticleSet& set() const { return set_; }

 private:
  ReflectorMap map_;
  VehicleGeometry geom_;
  PfConfig config_;
  ParticleSet set_;
  double last_t_ = 0.0;
  double motion_t_ = 0.0;  // timestamp the particles were last advanced to
  bool have_twist_ = false;
  BodyTwist last_twist_;
};

}  // namespace lgvloc::pf
