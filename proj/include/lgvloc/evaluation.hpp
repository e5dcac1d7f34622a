#pragma once

#include <vector>

#include "lgvloc/sim.hpp"

namespace lgvloc::eval {

/// Positional error of each estimate against the truth linearly
/// interpolated to the estimate timestamp, in millimeters. Heading is
/// excluded. Estimate timestamps outside the truth span are a DataError.
std::vector<double> position_errors_mm(const std::vector<sim::TimedPose>& est,
                                       const std::vector<sim::TimedPose>& truth);

struct ErrorStats {
  double rmse_mm = 0.0;
  double variance_mm2 = 0.0;  // population variance (divisor n)
};

/// RMSE and population variance of an error list. Rejects empty input.
ErrorStats summarize(const std::vector<double>& errors_mm);

/// 100 * (baseline - method) / baseline. Rejects baseline <= 0.
double improvement_pct(double baseline_rmse, double method_rmse);

struct RunReport {
  struct Row {
    int run = 0;
    ErrorStats laser;
    ErrorStats pf;
  };
  std::vector<Row> rows;
  ErrorStats laser_avg;  // mean of per-run rmse and variance
  ErrorStats pf_avg;
  double improvement = 0.0;  // percent, from the averaged rmse
};

RunReport make_report(const std::vector<std::pair<ErrorStats, ErrorStats>>& runs);

}  // namespace lgvloc::eval
