#include "lgvloc/config.hpp"

#include <json.hpp>

#include "lgvloc/errors.hpp"
#include "lgvloc/io.hpp"

namespace lgvloc {

namespace {

using nlohmann::json;

[[noreturn]] void missing(const std::string& path) {
  throw ConfigError("config: missing required field '" + path + "'");
}

[[noreturn]] void bad_type(const std::string& path, const char* expected) {
  throw ConfigError("config: field '" + path + "' must be " + expected);
}

const json& require_obj(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) missing(path);
  const json& v = j.at(key);
  if (!v.is_object()) bad_type(path, "an object");
  return v;
}

double require_num(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) missing(path);
  const json& v = j.at(key);
  if (!v.is_number()) bad_type(path, "a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) bad_type(path, "a number");
  return v.get<double>();
}

bool bool_or(const json& j, const char* key, bool fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) bad_type(path, "a boolean");
  return v.get<bool>();
}

ReflectorMap parse_map(const json& j) {
  ReflectorMap map;
  if (!j.contains("bounds")) missing("map.bounds");
  const json& b = j.at("bounds");
  if (!b.is_array() || b.size() != 4) bad_type("map.bounds", "an array [xmin, ymin, xmax, ymax]");
  map.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  if (!j.contains("reflectors")) missing("map.reflectors");
  const json& refl = j.at("reflectors");
  if (!refl.is_array()) bad_type("map.reflectors", "an array");
  for (const json& r : refl) {
    Reflector out;
    if (!r.contains("id")) missing("map.reflectors[].id");
    out.id = r.at("id").get<int>();
    out.position.x = require_num(r, "x", "map.reflectors[].x");
    out.position.y = require_num(r, "y", "map.reflectors[].y");
    map.reflectors.push_back(out);
  }
  try {
    map.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return map;
}

pf::AngularSource parse_angular_source(const json& j, const std::string& path) {
  if (!j.is_string()) bad_type(path, "one of \"gyro\", \"encoders\", \"average\"");
  const std::string s = j.get<std::string>();
  if (s == "gyro") return pf::AngularSource::kGyro;
  if (s == "encoders") return pf::AngularSource::kEncoders;
  if (s == "average") return pf::AngularSource::kAverage;
  bad_type(path, "one of \"gyro\", \"encoders\", \"average\"");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  const json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("config: document is not a JSON object");
  }

  RunConfig cfg;
  if (!j.contains("seed")) missing("seed");
  if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
    bad_type("seed", "an integer");
  }
  cfg.seed = j.at("seed").get<uint64_t>();
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) bad_type("output_dir", "a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }

  const json& veh = require_obj(j, "vehicle", "vehicle");
  cfg.vehicle.h = require_num(veh, "h", "vehicle.h");
  cfg.vehicle.l = require_num(veh, "l", "vehicle.l");
  cfg.vehicle.r_l = require_num(veh, "r_l", "vehicle.r_l");
  cfg.vehicle.r_r = require_num(veh, "r_r", "vehicle.r_r");
  cfg.vehicle.d = require_num(veh, "d", "vehicle.d");
  cfg.vehicle.eq2_literal = bool_or(veh, "eq2_literal", false, "vehicle.eq2_literal");
  cfg.vehicle.eq3_literal = bool_or(veh, "eq3_literal", false, "vehicle.eq3_literal");

  if (!j.contains("map")) missing("map");
  if (j.at("map").is_string()) {
    const std::filesystem::path map_path = base_dir / j.at("map").get<std::string>();
    const json map_json = json::parse(io::load_text(map_path), nullptr, false);
    if (map_json.is_discarded()) {
      throw ConfigError("config: map file is not valid JSON: " + map_path.string());
    }
    cfg.map = parse_map(map_json);
  } else if (j.at("map").is_object()) {
    cfg.map = parse_map(j.at("map"));
  } else {
    bad_type("map", "an object or a file path");
  }

  const json& traj = require_obj(j, "trajectory", "trajectory");
  if (!traj.contains("initial_pose")) missing("trajectory.initial_pose");
  const json& init = traj.at("initial_pose");
  if (!init.is_array() || init.size() != 3) {
    bad_type("trajectory.initial_pose", "an array [x, y, theta]");
  }
  cfg.trajectory.initial_pose = {init[0].get<double>(), init[1].get<double>(),
                                 init[2].get<double>()};
  if (!traj.contains("segments")) missing("trajectory.segments");
  const json& segs = traj.at("segments");
  if (!segs.is_array() || segs.empty()) bad_type("trajectory.segments", "a non-empty array");
  for (const json& s : segs) {
    sim::TrajectorySegment seg;
    seg.duration = require_num(s, "duration", "trajectory.segments[].duration");
    seg.v_d = require_num(s, "v_d", "trajectory.segments[].v_d");
    seg.delta = require_num(s, "delta", "trajectory.segments[].delta");
    cfg.trajectory.segments.push_back(seg);
  }

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    if (!n.is_object()) bad_type("noise", "an object");
    cfg.noise.encoder_rate_stddev =
        num_or(n, "encoder_rate_stddev", 0.0, "noise.encoder_rate_stddev");
    cfg.noise.gyro_rate_stddev = num_or(n, "gyro_rate_stddev", 0.0, "noise.gyro_rate_stddev");
    cfg.noise.gyro_bias = num_or(n, "gyro_bias", 0.0, "noise.gyro_bias");
    cfg.noise.lrf_range_stddev = num_or(n, "lrf_range_stddev", 0.0, "noise.lrf_range_stddev");
    cfg.noise.lrf_bearing_stddev =
        num_or(n, "lrf_bearing_stddev", 0.0, "noise.lrf_bearing_stddev");
    cfg.noise.bearing_smear_gain =
        num_or(n, "bearing_smear_gain", 0.05, "noise.bearing_smear_gain");
    cfg.noise.detection_prob = num_or(n, "detection_prob", 1.0, "noise.detection_prob");
    cfg.noise.clutter_rate = num_or(n, "clutter_rate", 0.0, "noise.clutter_rate");
    cfg.noise.max_lrf_range = num_or(n, "max_lrf_range", 30.0, "noise.max_lrf_range");
  }

  if (j.contains("timing")) {
    const json& t = j.at("timing");
    if (!t.is_object()) bad_type("timing", "an object");
    cfg.timing.odometry_period = num_or(t, "odometry_period", 0.1, "timing.odometry_period");
    cfg.timing.lrf_period = num_or(t, "lrf_period", 0.45, "timing.lrf_period");
    cfg.timing.truth_tick = num_or(t, "truth_tick", 0.025, "timing.truth_tick");
  }

  if (j.contains("pf")) {
    const json& p = j.at("pf");
    if (!p.is_object()) bad_type("pf", "an object");
    cfg.pf.m = static_cast<int>(num_or(p, "m", 150, "pf.m"));
    cfg.pf.exploit_fraction = num_or(p, "exploit_fraction", 0.95, "pf.exploit_fraction");
    cfg.pf.elite_quantile = num_or(p, "elite_quantile", 0.25, "pf.elite_quantile");
    cfg.pf.redistribution_range =
        num_or(p, "redistribution_range", 0.25, "pf.redistribution_range");
    cfg.pf.heading_jitter = num_or(p, "heading_jitter", 0.175, "pf.heading_jitter");
    cfg.pf.floor_quantile = num_or(p, "floor_quantile", 0.15, "pf.floor_quantile");
    if (p.contains("angular_source")) {
      cfg.pf.angular_source = parse_angular_source(p.at("angular_source"), "pf.angular_source");
    }
    cfg.pf.gate = num_or(p, "gate", 0.5, "pf.gate");
    cfg.pf.distance_scale = num_or(p, "distance_scale", 0.1, "pf.distance_scale");
    cfg.pf.eq11_literal = bool_or(p, "eq11_literal", false, "pf.eq11_literal");
    if (p.contains("motion_noise")) {
      const json& mn = p.at("motion_noise");
      if (!mn.is_object()) bad_type("pf.motion_noise", "an object");
      cfg.pf.motion_noise.v_stddev = num_or(mn, "v_stddev", 0.02, "pf.motion_noise.v_stddev");
      cfg.pf.motion_noise.w_stddev = num_or(mn, "w_stddev", 0.02, "pf.motion_noise.w_stddev");
    }
    if (p.contains("init")) {
      const json& pi = p.at("init");
      if (!pi.is_object()) bad_type("pf.init", "an object");
      if (pi.contains("mode")) {
        if (!pi.at("mode").is_string()) bad_type("pf.init.mode", "\"uniform\" or \"pose\"");
        const std::string mode = pi.at("mode").get<std::string>();
        if (mode == "uniform") {
          cfg.pf.init_uniform = true;
        } else if (mode == "pose") {
          cfg.pf.init_uniform = false;
        } else {
          bad_type("pf.init.mode", "\"uniform\" or \"pose\"");
        }
      }
      cfg.pf.init_pos_spread = num_or(pi, "pos_spread", 0.25, "pf.init.pos_spread");
      cfg.pf.init_heading_spread = num_or(pi, "heading_spread", 0.02, "pf.init.heading_spread");
    }
  }

  if (j.contains("lasernav")) {
    const json& ln = j.at("lasernav");
    if (!ln.is_object()) bad_type("lasernav", "an object");
    cfg.lasernav_gate = num_or(ln, "gate", 0.5, "lasernav.gate");
  }

  try {
    cfg.vehicle.validate();
    cfg.noise.validate();
    cfg.timing.validate();
    cfg.pf.validate();
    if (!(cfg.lasernav_gate > 0.0)) {
      throw std::invalid_argument("lasernav: gate must be > 0");
    }
    for (const sim::TrajectorySegment& seg : cfg.trajectory.segments) {
      if (!(seg.duration > 0.0)) {
        throw std::invalid_argument("trajectory: segment durations must be > 0");
      }
      if (!(std::abs(seg.delta) < kPi / 2.0)) {
        throw std::invalid_argument("trajectory: |delta| must be < pi/2");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  cfg.config_hash = io::fnv1a_hex(canonical_config(cfg));
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(io::load_text(path), path.parent_path());
}

std::string canonical_config(const RunConfig& c) {
  json j;  // plain json sorts keys, which is exactly what a canonical dump needs
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["vehicle"] = {{"h", c.vehicle.h},       {"l", c.vehicle.l},
                  {"r_l", c.vehicle.r_l},   {"r_r", c.vehicle.r_r},
                  {"d", c.vehicle.d},       {"eq2_literal", c.vehicle.eq2_literal},
                  {"eq3_literal", c.vehicle.eq3_literal}};
  json reflectors = json::array();
  for (const Reflector& r : c.map.reflectors) {
    reflectors.push_back({{"id", r.id}, {"x", r.position.x}, {"y", r.position.y}});
  }
  j["map"] = {{"bounds", {c.map.bounds.x_min, c.map.bounds.y_min, c.map.bounds.x_max,
                          c.map.bounds.y_max}},
              {"reflectors", reflectors}};
  json segments = json::array();
  for (const sim::TrajectorySegment& s : c.trajectory.segments) {
    segments.push_back({{"duration", s.duration}, {"v_d", s.v_d}, {"delta", s.delta}});
  }
  j["trajectory"] = {{"initial_pose", {c.trajectory.initial_pose.x, c.trajectory.initial_pose.y,
                                       c.trajectory.initial_pose.theta}},
                     {"segments", segments}};
  j["noise"] = {{"encoder_rate_stddev", c.noise.encoder_rate_stddev},
                {"gyro_rate_stddev", c.noise.gyro_rate_stddev},
                {"gyro_bias", c.noise.gyro_bias},
                {"lrf_range_stddev", c.noise.lrf_range_stddev},
                {"lrf_bearing_stddev", c.noise.lrf_bearing_stddev},
                {"bearing_smear_gain", c.noise.bearing_smear_gain},
                {"detection_prob", c.noise.detection_prob},
                {"clutter_rate", c.noise.clutter_rate},
                {"max_lrf_range", c.noise.max_lrf_range}};
  j["timing"] = {{"odometry_period", c.timing.odometry_period},
                 {"lrf_period", c.timing.lrf_period},
                 {"truth_tick", c.timing.truth_tick}};
  const char* source = c.pf.angular_source == pf::AngularSource::kGyro        ? "gyro"
                       : c.pf.angular_source == pf::AngularSource::kEncoders ? "encoders"
                                                                              : "average";
  j["pf"] = {{"m", c.pf.m},
             {"exploit_fraction", c.pf.exploit_fraction},
             {"elite_quantile", c.pf.elite_quantile},
             {"redistribution_range", c.pf.redistribution_range},
             {"heading_jitter", c.pf.heading_jitter},
             {"floor_quantile", c.pf.floor_quantile},
             {"angular_source", source},
             {"gate", c.pf.gate},
             {"distance_scale", c.pf.distance_scale},
             {"eq11_literal", c.pf.eq11_literal},
             {"motion_noise",
              {{"v_stddev", c.pf.motion_noise.v_stddev}, {"w_stddev", c.pf.motion_noise.w_stddev}}},
             {"init",
              {{"mode", c.pf.init_uniform ? "uniform" : "pose"},
               {"pos_spread", c.pf.init_pos_spread},
               {"heading_spread", c.pf.init_heading_spread}}}};
  j["lasernav"] = {{"gate", c.lasernav_gate}};
  return j.dump();
}

}  // namespace lgvloc
