#include "lgvloc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lgvloc/errors.hpp"

namespace lgvloc::eval {

std::vector<double> position_errors_mm(const std::vector<sim::TimedPose>& est,
                                       const std::vector<sim::TimedPose>& truth) {
  if (truth.size() < 1) {
    throw std::invalid_argument("position_errors: truth must be non-empty");
  }
  for (size_t i = 1; i < truth.size(); ++i) {
    if (!(truth[i].t > truth[i - 1].t)) {
      throw std::invalid_argument("position_errors: truth must be strictly time-ordered");
    }
  }
  std::vector<double> errors;
  errors.reserve(est.size());
  const double t0 = truth.front().t;
  const double t1 = truth.back().t;
  for (const sim::TimedPose& e : est) {
    if (e.t < t0 - 1e-9 || e.t > t1 + 1e-9) {
      throw DataError("evaluate: estimate timestamp " + std::to_string(e.t) +
                      " outside the truth span");
    }
    // Segment containing e.t; clamp handles the exact-endpoint cases.
    auto it = std::upper_bound(truth.begin(), truth.end(), e.t,
                               [](double t, const sim::TimedPose& p) { return t < p.t; });
    size_t hi = static_cast<size_t>(it - truth.begin());
    hi = std::min(std::max<size_t>(hi, 1), truth.size() - 1);
    const sim::TimedPose& a = truth[hi - 1];
    const sim::TimedPose& b = truth[hi];
    const double alpha = (e.t - a.t) / (b.t - a.t);
    const double tx = a.pose.x + alpha * (b.pose.x - a.pose.x);
    const double ty = a.pose.y + alpha * (b.pose.y - a.pose.y);
    errors.push_back(1000.0 * std::hypot(e.pose.x - tx, e.pose.y - ty));
  }
  return errors;
}

ErrorStats summarize(const std::vector<double>& errors_mm) {
  if (errors_mm.empty()) {
    throw std::invalid_argument("summarize: empty error list");
  }
  const double n = static_cast<double>(errors_mm.size());
  double sum = 0.0;
  double sq_sum = 0.0;
  for (double e : errors_mm) {
    sum += e;
    sq_sum += e * e;
  }
  const double mean = sum / n;
  double var = 0.0;
  for (double e : errors_mm) {
    var += (e - mean) * (e - mean);
  }
  return {std::sqrt(sq_sum / n), var / n};
}

double improvement_pct(double baseline_rmse, double method_rmse) {
  if (!(baseline_rmse > 0.0)) {
    throw std::invalid_argument("improvement: baseline rmse must be > 0");
  }
  return 100.0 * (baseline_rmse - method_rmse) / baseline_rmse;
}

RunReport make_report(const std::vector<std::pair<ErrorStats, ErrorStats>>& runs) {
  if (runs.empty()) {
    throw std::invalid_argument("make_report: needs at least one run");
  }
  RunReport report;
  const double n = static_cast<double>(runs.size());
  for (size_t i = 0; i < runs.size(); ++i) {
    report.rows.push_back({static_cast<int>(i) + 1, runs[i].first, runs[i].second});
    report.laser_avg.rmse_mm += runs[i].first.rmse_mm / n;
    report.laser_avg.variance_mm2 += runs[i].first.variance_mm2 / n;
    report.pf_avg.rmse_mm += runs[i].second.rmse_mm / n;
    report.pf_avg.variance_mm2 += runs[i].second.variance_mm2 / n;
  }
  report.improvement = improvement_pct(report.laser_avg.rmse_mm, report.pf_avg.rmse_mm);
  return report;
}

}  // namespace lgvloc::eval
