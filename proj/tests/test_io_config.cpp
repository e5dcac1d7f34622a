#include <doctest.h>

#include <sstream>
#include <string>

#include "lgvloc/config.hpp"
#include "lgvloc/errors.hpp"
#include "lgvloc/io.hpp"
#include "lgvloc/pipeline.hpp"

using namespace lgvloc;

namespace {

std::string minimal_config_json() {
  return R"({
    "seed": 7,
    "vehicle": {"h": 1.3, "l": 0.8, "r_l": 0.125, "r_r": 0.125, "d": 1.2},
    "map": {"bounds": [0, 0, 10, 10],
            "reflectors": [{"id": 0, "x": 1, "y": 1}, {"id": 1, "x": 9, "y": 9}]},
    "trajectory": {"initial_pose": [5, 5, 0],
                   "segments": [{"duration": 2.0, "v_d": 0.0, "delta": 0.0}]}
  })";
}

}  // namespace

TEST_CASE("config parses with defaults filled") {
  const RunConfig cfg = parse_run_config(minimal_config_json(), ".");
  CHECK(cfg.seed == 7);
  CHECK(cfg.vehicle.h == doctest::Approx(1.3));
  CHECK(cfg.pf.m == 150);
  CHECK(cfg.pf.exploit_fraction == doctest::Approx(0.95));
  CHECK(cfg.pf.elite_quantile == doctest::Approx(0.25));
  CHECK(cfg.pf.redistribution_range == doctest::Approx(0.25));
  CHECK(cfg.pf.heading_jitter == doctest::Approx(0.175));
  CHECK(cfg.pf.floor_quantile == doctest::Approx(0.15));
  CHECK(cfg.pf.angular_source == pf::AngularSource::kGyro);
  CHECK(cfg.timing.odometry_period == doctest::Approx(0.1));
  CHECK(cfg.timing.lrf_period == doctest::Approx(0.45));
  CHECK(cfg.lasernav_gate == doctest::Approx(0.5));
  CHECK(!cfg.config_hash.empty());
}

TEST_CASE("config errors name the offending field") {
  std::string no_h = R"({
    "seed": 1,
    "vehicle": {"l": 0.8, "r_l": 0.125, "r_r": 0.125, "d": 1.2},
    "map": {"bounds": [0, 0, 10, 10], "reflectors": [{"id": 0, "x": 1, "y": 1}]},
    "trajectory": {"initial_pose": [5, 5, 0],
                   "segments": [{"duration": 1.0, "v_d": 0.0, "delta": 0.0}]}
  })";
  try {
    parse_run_config(no_h, ".");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("vehicle.h") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_run_config("not json at all", "."), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"seed": 1})", "."), ConfigError);
}

TEST_CASE("config hash is stable and seed-sensitive") {
  const RunConfig a = parse_run_config(minimal_config_json(), ".");
  const RunConfig b = parse_run_config(minimal_config_json(), ".");
  CHECK(a.config_hash == b.config_hash);

  std::string other = minimal_config_json();
  other.replace(other.find("\"seed\": 7"), 9, "\"seed\": 8");
  const RunConfig c = parse_run_config(other, ".");
  CHECK(a.config_hash != c.config_hash);
}

TEST_CASE("truth csv round trip") {
  std::vector<sim::TimedPose> truth = {{0.0, {1.25, -3.5, 0.7}}, {0.1, {1.3, -3.4, 0.72}}};
  std::ostringstream os;
  io::write_truth_csv(os, truth, {"abcd", 9});
  const std::string text = os.str();
  CHECK(text.rfind("# config_hash=abcd seed=9", 0) == 0);

  std::istringstream is(text);
  const auto back = io::read_truth_csv(is);
  REQUIRE(back.size() == 2);
  CHECK(back[1].t == doctest::Approx(0.1));
  CHECK(back[1].pose.x == doctest::Approx(1.3));
  CHECK(back[1].pose.theta == doctest::Approx(0.72));
}

TEST_CASE("sensor jsonl round trip") {
  std::vector<sim::SensorFrame> frames;
  frames.push_back({0.1, sim::Odometry{1.5, 1.6, 0.02}});
  sim::LrfScan scan;
  scan.detections = {{5.0, 0.25}, {7.5, -1.0}};
  frames.push_back({0.45, {scan}});

  std::ostringstream os;
  io::write_sensor_jsonl(os, frames, {"beef", 3});
  std::istringstream is(os.str());
  const auto back = io::read_sensor_jsonl(is);
  REQUIRE(back.size() == 2);
  CHECK(back[0].is_odometry());
  CHECK(back[0].odometry().w_r == doctest::Approx(1.6));
  REQUIRE_FALSE(back[1].is_odometry());
  REQUIRE(back[1].scan().detections.size() == 2);
  CHECK(back[1].scan().detections[1].bearing == doctest::Approx(-1.0));
}

TEST_CASE("malformed jsonl reports the line number") {
  const std::string text = "# header\n"
                           R"({"t": 0.1, "odo": {"wl": 1, "wr": 1, "gyro": 0}})" "\n"
                           "{broken\n";
  std::istringstream is(text);
  try {
    io::read_sensor_jsonl(is);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("jsonl rejects out-of-order frames") {
  const std::string text = R"({"t": 0.2, "odo": {"wl": 1, "wr": 1, "gyro": 0}})" "\n"
                           R"({"t": 0.1, "odo": {"wl": 1, "wr": 1, "gyro": 0}})" "\n";
  std::istringstream is(text);
  CHECK_THROWS_AS(io::read_sensor_jsonl(is), DataError);
}

TEST_CASE("trajectory csv readers skip comments and headers") {
  const std::string text = "# config_hash=x seed=1\n"
                           "t,x,y,theta,n_matched,residual_rms\n"
                           "0.45,1.5,2.5,0.1,3,0.02\n";
  std::istringstream is(text);
  const auto rows = io::read_trajectory_csv(is);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].t == doctest::Approx(0.45));
  CHECK(rows[0].pose.y == doctest::Approx(2.5));
}

TEST_CASE("report csv shape") {
  eval::RunReport report = eval::make_report({{{60.0, 400.0}, {24.0, 90.0}}});
  std::ostringstream os;
  io::write_report_csv(os, report, {"c0ffee", 5});
  const std::string text = os.str();
  CHECK(text.find("run,laser_rmse,laser_var,pf_rmse,pf_var\n") != std::string::npos);
  CHECK(text.find("\naverage,") != std::string::npos);
  CHECK(text.find("\nimprovement_pct,") != std::string::npos);
}

TEST_CASE("empty sensor log yields an empty trajectory") {
  const std::string text = "# config_hash=x seed=1\n";
  std::istringstream is(text);
  const auto frames = io::read_sensor_jsonl(is);
  CHECK(frames.empty());

  const RunConfig cfg = parse_run_config(minimal_config_json(), ".");
  const auto rows = pipeline::estimate_pf(cfg, frames);
  CHECK(rows.empty());
}
