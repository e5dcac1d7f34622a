#include "lgvloc/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lgvloc/errors.hpp"

namespace lgvloc::io {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_meta(std::ostream& os, const FileMeta& meta) {
  os << "# config_hash=" << meta.config_hash << " seed=" << meta.seed << "\n";
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& s, size_t line_no) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw DataError("csv: malformed numeric field at line " + std::to_string(line_no));
  }
}

std::vector<sim::TimedPose> read_timed_poses(std::istream& is, size_t min_fields) {
  std::vector<sim::TimedPose> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (skippable(line) || line.rfind("t,", 0) == 0) {
      continue;  // comments and the header row
    }
    const auto fields = split_csv(line);
    if (fields.size() < min_fields) {
      throw DataError("csv: expected at least " + std::to_string(min_fields) +
                      " fields at line " + std::to_string(line_no));
    }
    sim::TimedPose p;
    p.t = parse_double(fields[0], line_no);
    p.pose.x = parse_double(fields[1], line_no);
    p.pose.y = parse_double(fields[2], line_no);
    p.pose.theta = parse_double(fields[3], line_no);
    out.push_back(p);
  }
  return out;
}

}  // namespace

void write_truth_csv(std::ostream& os, const std::vector<sim::TimedPose>& truth,
                     const FileMeta& meta) {
  write_meta(os, meta);
  os << "t,x,y,theta\n";
  for (const sim::TimedPose& p : truth) {
    os << fmt(p.t) << ',' << fmt(p.pose.x) << ',' << fmt(p.pose.y) << ',' << fmt(p.pose.theta)
       << '\n';
  }
}

std::vector<sim::TimedPose> read_truth_csv(std::istream& is) { return read_timed_poses(is, 4); }

void write_sensor_jsonl(std::ostream& os, const std::vector<sim::SensorFrame>& frames,
                        const FileMeta& meta) {
  write_meta(os, meta);
  for (const sim::SensorFrame& frame : frames) {
    ordered_json j;
    j["t"] = frame.t;
    if (frame.is_odometry()) {
      const sim::Odometry& odo = frame.odometry();
      j["odo"] = {{"wl", odo.w_l}, {"wr", odo.w_r}, {"gyro", odo.gyro_w}};
    } else {
      ordered_json dets = ordered_json::array();
      for (const ReflectorDetection& det : frame.scan().detections) {
        dets.push_back({{"range", det.range}, {"bearing", det.bearing}});
      }
      j["lrf"] = std::move(dets);
    }
    os << j.dump() << '\n';
  }
}

std::vector<sim::SensorFrame> read_sensor_jsonl(std::istream& is) {
  std::vector<sim::SensorFrame> frames;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (skippable(line)) {
      continue;
    }
    const auto fail = [line_no](const std::string& why) -> DataError {
      return DataError("sensors: " + why + " at line " + std::to_string(line_no));
    };
    const ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw fail("malformed JSON");
    }
    if (!j.contains("t") || !j["t"].is_number()) {
      throw fail("missing numeric 't'");
    }
    sim::SensorFrame frame;
    frame.t = j["t"].get<double>();
    if (j.contains("odo")) {
      const auto& o = j["odo"];
      if (!o.is_object() || !o.contains("wl") || !o.contains("wr") || !o.contains("gyro")) {
        throw fail("odometry needs wl, wr, gyro");
      }
      frame.payload = sim::Odometry{o["wl"].get<double>(), o["wr"].get<double>(),
                                    o["gyro"].get<double>()};
    } else if (j.contains("lrf")) {
      const auto& arr = j["lrf"];
      if (!arr.is_array()) {
        throw fail("'lrf' must be an array");
      }
      sim::LrfScan scan;
      for (const auto& d : arr) {
        if (!d.is_object() || !d.contains("range") || !d.contains("bearing")) {
          throw fail("detection needs range and bearing");
        }
        scan.detections.push_back({d["range"].get<double>(), d["bearing"].get<double>()});
      }
      frame.payload = std::move(scan);
    } else {
      throw fail("frame needs 'odo' or 'lrf'");
    }
    if (!frames.empty() && frame.t < frames.back().t - 1e-12) {
      throw fail("timestamps must be nondecreasing");
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

void write_laser_trajectory_csv(std::ostream& os, const std::vector<LaserTrajectoryRow>& rows,
                                const FileMeta& meta) {
  write_meta(os, meta);
  os << "t,x,y,theta,n_matched,residual_rms\n";
  for (const LaserTrajectoryRow& r : rows) {
    os << fmt(r.t) << ',' << fmt(r.pose.x) << ',' << fmt(r.pose.y) << ',' << fmt(r.pose.theta)
       << ',' << r.n_matched << ',' << fmt(r.residual_rms) << '\n';
  }
}

void write_pf_trajectory_csv(std::ostream& os, const std::vector<PfTrajectoryRow>& rows,
                             const FileMeta& meta) {
  write_meta(os, meta);
  os << "t,x,y,theta,n_matched,degenerate_flag\n";
  for (const PfTrajectoryRow& r : rows) {
    os << fmt(r.t) << ',' << fmt(r.pose.x) << ',' << fmt(r.pose.y) << ',' << fmt(r.pose.theta)
       << ',' << r.n_matched << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

void write_pose_trajectory_csv(std::ostream& os, const std::vector<sim::TimedPose>& rows,
                               const FileMeta& meta) {
  write_meta(os, meta);
  os << "t,x,y,theta\n";
  for (const sim::TimedPose& p : rows) {
    os << fmt(p.t) << ',' << fmt(p.pose.x) << ',' << fmt(p.pose.y) << ',' << fmt(p.pose.theta)
       << '\n';
  }
}

std::vector<sim::TimedPose> read_trajectory_csv(std::istream& is) {
  return read_timed_poses(is, 4);
}

void write_report_csv(std::ostream& os, const eval::RunReport& report, const FileMeta& meta) {
  write_meta(os, meta);
  os << "run,laser_rmse,laser_var,pf_rmse,pf_var\n";
  for (const auto& row : report.rows) {
    os << row.run << ',' << fmt(row.laser.rmse_mm) << ',' << fmt(row.laser.variance_mm2) << ','
       << fmt(row.pf.rmse_mm) << ',' << fmt(row.pf.variance_mm2) << '\n';
  }
  os << "average," << fmt(report.laser_avg.rmse_mm) << ',' << fmt(report.laser_avg.variance_mm2)
     << ',' << fmt(report.pf_avg.rmse_mm) << ',' << fmt(report.pf_avg.variance_mm2) << '\n';
  os << "improvement_pct," << fmt(report.improvement) << ",,,\n";
}

void write_report_json(std::ostream& os, const eval::RunReport& report, const FileMeta& meta) {
  ordered_json j;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"run", row.run},
                    {"laser_rmse", row.laser.rmse_mm},
                    {"laser_var", row.laser.variance_mm2},
                    {"pf_rmse", row.pf.rmse_mm},
                    {"pf_var", row.pf.variance_mm2}});
  }
  j["runs"] = std::move(rows);
  j["average"] = {{"laser_rmse", report.laser_avg.rmse_mm},
                  {"laser_var", report.laser_avg.variance_mm2},
                  {"pf_rmse", report.pf_avg.rmse_mm},
                  {"pf_var", report.pf_avg.variance_mm2}};
  j["improvement_pct"] = report.improvement;
  os << j.dump(2) << '\n';
}

void write_error_series_csv(std::ostream& os, const std::vector<sim::TimedPose>& laser,
                            const std::vector<sim::TimedPose>& pf,
                            const std::vector<sim::TimedPose>& truth, const FileMeta& meta) {
  const std::vector<double> laser_err = eval::position_errors_mm(laser, truth);
  const std::vector<double> pf_err = eval::position_errors_mm(pf, truth);
  std::map<int64_t, std::pair<double, double>> joined;  // keyed by microseconds
  const auto key = [](double t) { return static_cast<int64_t>(std::llround(t * 1e6)); };
  for (size_t i = 0; i < laser.size(); ++i) {
    joined[key(laser[i].t)].first = laser_err[i];
    joined[key(laser[i].t)].second = std::nan("");
  }
  for (size_t i = 0; i < pf.size(); ++i) {
    auto it = joined.find(key(pf[i].t));
    if (it != joined.end()) {
      it->second.second = pf_err[i];
    }
  }
  write_meta(os, meta);
  os << "t,laser_err_mm,pf_err_mm\n";
  for (const auto& [k, errs] : joined) {
    if (std::isnan(errs.second)) {
      continue;  // keep only instants where both estimators reported
    }
    os << fmt(static_cast<double>(k) * 1e-6) << ',' << fmt(errs.first) << ',' << fmt(errs.second)
       << '\n';
  }
}

void save_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("cannot open for writing: " + path.string());
  }
  os << content;
  if (!os) {
    throw IoError("write failed: " + path.string());
  }
}

std::string load_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace lgvloc::io
