#include "boresight/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "boresight/errors.hpp"

namespace boresight {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

Vec3 normalized_or_throw(const Vec3& v, const char* what) {
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-3) {
    throw Error(ErrorCode::ConfigInvalid,
                std::string(what) + " must be a unit vector");
  }
  return v / norm;
}

}  // namespace

ControlLayout ScenarioConfig::layout() const {
  ControlLayout out;
  out.boresight_body = normalized_or_throw(boresight_body, "boresight axis");
  out.target_inertial = normalized_or_throw(target, "target direction");
  out.zones = zones;
  out.apf = apf;
  out.governor = governor;
  out.gains = controller;
  return out;
}

void ScenarioConfig::validate() const {
  plant.validate();
  apf.validate();
  controller.validate();
  governor.validate();
  for (const ForbiddenZone& zone : zones) {
    zone.validate();
  }

  if (zones.empty()) {
    throw Error(ErrorCode::ConfigInvalid,
                "at least one forbidden zone is required (the combined field "
                "has no attraction without one)");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::ConfigInvalid, "dt must be positive");
  if (!(t_final >= dt)) throw Error(ErrorCode::ConfigInvalid, "t_final must cover at least one step");
  if (output_decimation < 1) throw Error(ErrorCode::ConfigInvalid, "output decimation must be >= 1");
  if (!(terminal_window > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "terminal window must be positive");
  }
  if (runs < 1) throw Error(ErrorCode::ConfigInvalid, "campaign needs at least one run");

  const Vec3 b_body = normalized_or_throw(boresight_body, "boresight axis");
  const Vec3 r_i = normalized_or_throw(target, "target direction");
  Attitude att = initial_attitude;
  att.renormalize();
  const Vec3 b_i = att.to_inertial(b_body);

  for (std::size_t n = 0; n < zones.size(); ++n) {
    const ForbiddenZone& zone = zones[n];
    const double limit = zone.boundary();
    if (!(b_i.dot(zone.axis_inertial) < limit)) {
      throw Error(ErrorCode::ConfigInvalid,
                  "initial boresight direction lies inside forbidden zone " +
                      std::to_string(n + 1));
    }
    if (!(r_i.dot(zone.axis_inertial) < limit)) {
      throw Error(ErrorCode::ConfigInvalid,
                  "target direction lies inside forbidden zone " + std::to_string(n + 1));
    }
    if (!(zone.indicator.lower > r_i.dot(zone.axis_inertial))) {
      throw Error(ErrorCode::ConfigInvalid,
                  "zone " + std::to_string(n + 1) +
                      " indicator would not release near the target");
    }
    // Antipodal target/axis geometry puts the attraction antipode in the
    // repulsion field, where the field has a stationary point.
    if (r_i.dot(-zone.axis_inertial) > std::cos(0.5 * kDegToRad)) {
      std::cerr << "warning: target within 0.5 deg of the antipode of zone "
                << n + 1 << " axis; the field may have a nearby stationary point\n";
    }
  }

  const double x_e0 = 1.0 - b_i.dot(r_i);
  if (!(x_e0 < governor.initial_value)) {
    throw Error(ErrorCode::ConfigInvalid,
                "initial pointing error must start inside the envelope");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(std::abs(initial_rate[i]) < apf.rate_limit)) {
      throw Error(ErrorCode::ConfigInvalid, "initial rate outside the rate limit");
    }
  }
  if (!controller.adaptation_margin_satisfied()) {
    std::cerr << "warning: damping/filter gains below the 1/adaptation margin "
                 "used by the convergence analysis\n";
  }
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.governor = GovernorParams::defaults_for(cfg.apf.rate_limit);

  const auto zone = [](double x, double y, double z) {
    return ForbiddenZone::from_degrees(Vec3(x, y, z), 20.0);
  };

  if (name == "two-cone") {
    cfg.zones = {zone(0.5715, 0.8165, 0.0816), zone(-0.3369, 0.8422, -0.4211)};
    cfg.target = Vec3(-0.8617, 0.4975, -0.0995).normalized();
    cfg.initial_attitude = Attitude::identity();
  } else if (name == "three-cone") {
    cfg.zones = {zone(0.6529, 0.7255, 0.2176), zone(-0.4402, 0.8805, 0.1761),
                 zone(0.0741, 0.7412, -0.6671)};
    cfg.target = Vec3(-0.8617, 0.4975, -0.0995).normalized();
    cfg.initial_attitude = Attitude::identity();
  } else if (name == "monte-carlo") {
    cfg.zones = {zone(0.6529, 0.7255, 0.2176), zone(-0.4402, 0.8805, 0.1761),
                 zone(0.0741, 0.7412, -0.6671), zone(-0.6529, -0.7255, -0.2176),
                 zone(0.4402, -0.8805, -0.1761)};
    cfg.initial_attitude = Attitude::from_xyzw(0.0, 0.6428, 0.0, 0.7660);
    // campaign runs resample the target; this is the phi = 0 point
    cfg.target = Vec3(std::cos(70.0 * kDegToRad), 0.0, std::sin(70.0 * kDegToRad));
  } else {
    throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "'");
  }
  return cfg;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

Vec3 sample_target(std::uint64_t& state, double latitude_deg) {
  const double lat = latitude_deg * kDegToRad;
  const double phi = 2.0 * kPi * uniform_unit(state);
  return Vec3(std::cos(lat) * std::cos(phi), std::cos(lat) * std::sin(phi),
              std::sin(lat));
}

std::uint64_t run_stream(std::uint64_t master_seed, int run_index) {
  // the hash output (not the advanced counter) seeds the stream, so distinct
  // runs draw from well-separated points of the generator's orbit
  std::uint64_t state =
      master_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(run_index + 1);
  return splitmix64(state);
}

// ---------------------------------------------------------------------------
// config file format
// ---------------------------------------------------------------------------

namespace {

struct ZoneSpec {
  Vec3 axis = Vec3::UnitZ();
  double min_angle_deg = 20.0;
  double acting_margin_deg = 10.0;
  double indicator_on_margin_deg = 10.0;
  double indicator_full_margin_deg = 5.0;
  double indicator_steepness_scale = 2.0;
};

std::vector<std::string> split_tokens(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream stream(value);
  std::string tok;
  while (stream >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const double parsed = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line) + ": expected a number, got '" + value + "'");
  }
}

Vec3 parse_vec3(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.size() != 3) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line) + ": expected three numbers");
  }
  return Vec3(parse_double(toks[0], line), parse_double(toks[1], line),
              parse_double(toks[2], line));
}

Vec4 parse_vec4(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.size() != 4) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line) + ": expected four numbers");
  }
  return Vec4(parse_double(toks[0], line), parse_double(toks[1], line),
              parse_double(toks[2], line), parse_double(toks[3], line));
}

SwitchSpec parse_switch(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.size() != 3) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line) +
                    ": expected 'lower upper steepness'");
  }
  return SwitchSpec{parse_double(toks[0], line), parse_double(toks[1], line),
                    parse_double(toks[2], line)};
}

bool parse_bool(const std::string& value, int line) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw Error(ErrorCode::ConfigInvalid,
              "line " + std::to_string(line) + ": expected on/off, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  }

  ScenarioConfig cfg;
  cfg.zones.clear();
  std::vector<ZoneSpec> zone_specs;
  std::string section;
  bool rate_indicator_set = false;
  bool envelope_indicator_set = false;

  std::string raw;
  int line = 0;
  while (std::getline(file, raw)) {
    ++line;
    std::string text = raw;
    const auto comment = text.find('#');
    if (comment != std::string::npos) text.erase(comment);
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') {
        throw Error(ErrorCode::ConfigInvalid,
                    "line " + std::to_string(line) + ": malformed section header");
      }
      section = trim(text.substr(1, text.size() - 2));
      if (section == "zone") zone_specs.emplace_back();
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigInvalid,
                  "line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto fail_key = [&]() -> Error {
      return Error(ErrorCode::ConfigInvalid, "line " + std::to_string(line) +
                                                 ": unknown key '" + key +
                                                 "' in section [" + section + "]");
    };

    if (section.empty()) {
      if (key == "name") cfg.name = value;
      else throw fail_key();
    } else if (section == "plant") {
      if (key == "inertia") cfg.plant.inertia_diag = parse_vec3(value, line);
      else if (key == "torque_limit") cfg.plant.torque_limit = parse_double(value, line);
      else if (key == "disturbance_rate") cfg.plant.disturbance_rate = parse_double(value, line);
      else if (key == "disturbance") cfg.plant.disturbance_enabled = parse_bool(value, line);
      else throw fail_key();
    } else if (section == "potential") {
      if (key == "attraction") cfg.apf.attraction = parse_double(value, line);
      else if (key == "repulsion") cfg.apf.repulsion = parse_double(value, line);
      else if (key == "rate_barrier") cfg.apf.rate_barrier = parse_double(value, line);
      else if (key == "rate_limit") cfg.apf.rate_limit = parse_double(value, line);
      else if (key == "rate_limit_deg") cfg.apf.rate_limit = parse_double(value, line) * kDegToRad;
      else throw fail_key();
    } else if (section == "controller") {
      if (key == "damping") cfg.controller.damping = parse_double(value, line);
      else if (key == "adaptation") cfg.controller.adaptation = parse_double(value, line);
      else if (key == "filter") cfg.controller.filter = parse_double(value, line);
      else if (key == "filter_adaptation") cfg.controller.filter_adaptation = parse_double(value, line);
      else if (key == "dsc_time_constant") cfg.controller.dsc_time_constant = parse_double(value, line);
      else if (key == "rate_epsilon") cfg.controller.rate_epsilon = parse_double(value, line);
      else if (key == "inertia_guess") cfg.controller.inertia_guess = parse_vec3(value, line);
      else if (key == "ppc") cfg.controller.ppc_enabled = parse_bool(value, line);
      else throw fail_key();
    } else if (section == "envelope") {
      if (key == "decay_rate") cfg.governor.decay_rate = parse_double(value, line);
      else if (key == "terminal_value") cfg.governor.terminal_value = parse_double(value, line);
      else if (key == "initial_value") cfg.governor.initial_value = parse_double(value, line);
      else if (key == "blf_gain") cfg.governor.blf_gain = parse_double(value, line);
      else if (key == "softmax_sharpness") cfg.governor.softmax_sharpness = parse_double(value, line);
      else if (key == "freeze_floor") cfg.governor.freeze_floor = parse_double(value, line);
      else if (key == "rate_indicator") { cfg.governor.rate_indicator = parse_switch(value, line); rate_indicator_set = true; }
      else if (key == "error_indicator") cfg.governor.error_indicator = parse_switch(value, line);
      else if (key == "envelope_indicator") { cfg.governor.envelope_indicator = parse_switch(value, line); envelope_indicator_set = true; }
      else throw fail_key();
    } else if (section == "zone") {
      if (zone_specs.empty()) {
        throw Error(ErrorCode::ConfigInvalid,
                    "line " + std::to_string(line) + ": zone key outside a [zone] section");
      }
      ZoneSpec& spec = zone_specs.back();
      if (key == "axis") spec.axis = parse_vec3(value, line);
      else if (key == "min_angle_deg") spec.min_angle_deg = parse_double(value, line);
      else if (key == "acting_margin_deg") spec.acting_margin_deg = parse_double(value, line);
      else if (key == "indicator_on_margin_deg") spec.indicator_on_margin_deg = parse_double(value, line);
      else if (key == "indicator_full_margin_deg") spec.indicator_full_margin_deg = parse_double(value, line);
      else if (key == "indicator_steepness_scale") spec.indicator_steepness_scale = parse_double(value, line);
      else throw fail_key();
    } else if (section == "run") {
      if (key == "target") cfg.target = parse_vec3(value, line);
      else if (key == "boresight") cfg.boresight_body = parse_vec3(value, line);
      else if (key == "initial_quaternion") {
        const Vec4 q = parse_vec4(value, line);
        cfg.initial_attitude = Attitude::from_xyzw(q[0], q[1], q[2], q[3]);
      } else if (key == "initial_rate") cfg.initial_rate = parse_vec3(value, line);
      else if (key == "initial_rate_deg") cfg.initial_rate = parse_vec3(value, line) * kDegToRad;
      else if (key == "t_final") cfg.t_final = parse_double(value, line);
      else if (key == "dt") cfg.dt = parse_double(value, line);
      else if (key == "output_decimation") cfg.output_decimation = static_cast<int>(parse_double(value, line));
      else if (key == "terminal_window") cfg.terminal_window = parse_double(value, line);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(value, line));
      else if (key == "runs") cfg.runs = static_cast<int>(parse_double(value, line));
      else throw fail_key();
    } else {
      throw Error(ErrorCode::ConfigInvalid,
                  "line " + std::to_string(line) + ": unknown section [" + section + "]");
    }
  }

  for (const ZoneSpec& spec : zone_specs) {
    cfg.zones.push_back(ForbiddenZone::from_degrees(
        spec.axis, spec.min_angle_deg, spec.acting_margin_deg,
        spec.indicator_on_margin_deg, spec.indicator_full_margin_deg,
        spec.indicator_steepness_scale));
  }

  // Indicator segment points track the rate limit / terminal value unless
  // given explicitly.
  if (!rate_indicator_set) {
    cfg.governor.rate_indicator =
        GovernorParams::defaults_for(cfg.apf.rate_limit).rate_indicator;
  }
  if (!envelope_indicator_set) {
    cfg.governor.envelope_indicator =
        SwitchSpec::with_scale(cfg.governor.terminal_value + 1e-3,
                               cfg.governor.terminal_value + 2e-3);
  }

  if (std::abs(cfg.target.norm() - 1.0) > 1e-12) cfg.target.normalize();
  if (std::abs(cfg.boresight_body.norm() - 1.0) > 1e-12) cfg.boresight_body.normalize();
  return cfg;
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot write config file '" + path + "'");
  }
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const auto vec = [&](const Vec3& v) {
    return num(v.x()) + " " + num(v.y()) + " " + num(v.z());
  };
  const auto sw = [&](const SwitchSpec& s) {
    return num(s.lower) + " " + num(s.upper) + " " + num(s.steepness);
  };

  file << "name = " << cfg.name << "\n\n";
  file << "[plant]\n";
  file << "inertia = " << vec(cfg.plant.inertia_diag) << "\n";
  file << "torque_limit = " << num(cfg.plant.torque_limit) << "\n";
  file << "disturbance_rate = " << num(cfg.plant.disturbance_rate) << "\n";
  file << "disturbance = " << (cfg.plant.disturbance_enabled ? "on" : "off") << "\n\n";

  file << "[potential]\n";
  file << "attraction = " << num(cfg.apf.attraction) << "\n";
  file << "repulsion = " << num(cfg.apf.repulsion) << "\n";
  file << "rate_barrier = " << num(cfg.apf.rate_barrier) << "\n";
  file << "rate_limit = " << num(cfg.apf.rate_limit) << "\n\n";

  file << "[controller]\n";
  file << "damping = " << num(cfg.controller.damping) << "\n";
  file << "adaptation = " << num(cfg.controller.adaptation) << "\n";
  file << "filter = " << num(cfg.controller.filter) << "\n";
  file << "filter_adaptation = " << num(cfg.controller.filter_adaptation) << "\n";
  file << "dsc_time_constant = " << num(cfg.controller.dsc_time_constant) << "\n";
  file << "rate_epsilon = " << num(cfg.controller.rate_epsilon) << "\n";
  file << "inertia_guess = " << vec(cfg.controller.inertia_guess) << "\n";
  file << "ppc = " << (cfg.controller.ppc_enabled ? "on" : "off") << "\n\n";

  file << "[envelope]\n";
  file << "decay_rate = " << num(cfg.governor.decay_rate) << "\n";
  file << "terminal_value = " << num(cfg.governor.terminal_value) << "\n";
  file << "initial_value = " << num(cfg.governor.initial_value) << "\n";
  file << "blf_gain = " << num(cfg.governor.blf_gain) << "\n";
  file << "softmax_sharpness = " << num(cfg.governor.softmax_sharpness) << "\n";
  file << "freeze_floor = " << num(cfg.governor.freeze_floor) << "\n";
  file << "rate_indicator = " << sw(cfg.governor.rate_indicator) << "\n";
  file << "error_indicator = " << sw(cfg.governor.error_indicator) << "\n";
  file << "envelope_indicator = " << sw(cfg.governor.envelope_indicator) << "\n\n";

  for (const ForbiddenZone& zone : cfg.zones) {
    file << "[zone]\n";
    file << "axis = " << vec(zone.axis_inertial) << "\n";
    file << "min_angle_deg = " << num(zone.min_angle / kDegToRad) << "\n";
    file << "acting_margin_deg = " << num(zone.acting_margin / kDegToRad) << "\n";
    const double on_deg = std::acos(zone.indicator.lower) / kDegToRad - zone.min_angle / kDegToRad;
    const double full_deg = std::acos(zone.indicator.upper) / kDegToRad - zone.min_angle / kDegToRad;
    file << "indicator_on_margin_deg = " << num(on_deg) << "\n";
    file << "indicator_full_margin_deg = " << num(full_deg) << "\n";
    file << "indicator_steepness_scale = "
         << num(zone.indicator.steepness * (zone.indicator.upper - zone.indicator.lower)) << "\n\n";
  }

  file << "[run]\n";
  file << "target = " << vec(cfg.target) << "\n";
  file << "boresight = " << vec(cfg.boresight_body) << "\n";
  const auto& q = cfg.initial_attitude.q;
  file << "initial_quaternion = " << num(q.x()) << " " << num(q.y()) << " "
       << num(q.z()) << " " << num(q.w()) << "\n";
  file << "initial_rate = " << vec(cfg.initial_rate) << "\n";
  file << "t_final = " << num(cfg.t_final) << "\n";
  file << "dt = " << num(cfg.dt) << "\n";
  file << "output_decimation = " << cfg.output_decimation << "\n";
  file << "terminal_window = " << num(cfg.terminal_window) << "\n";
  file << "seed = " << cfg.seed << "\n";
  file << "runs = " << cfg.runs << "\n";
  if (!file) {
    throw Error(ErrorCode::IoError, "failed writing config file '" + path + "'");
  }
}

}  // namespace boresight
