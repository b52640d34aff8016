#include "marinesim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace marinesim {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw std::invalid_argument(std::string("config: ") + key + " must be a number");
  return j[key].get<double>();
}

void parse_environment(const json& j, Environment& env) {
  expect_keys(j, "environment",
              {"gravity_mps2", "water_density_kgpm3", "air_density_kgpm3",
               "kinematic_viscosity_m2ps", "current_mps", "wind_mps", "waves"});
  env.gravity = get_num(j, "gravity_mps2", env.gravity);
  env.water_density = get_num(j, "water_density_kgpm3", env.water_density);
  env.air_density = get_num(j, "air_density_kgpm3", env.air_density);
  env.kinematic_viscosity = get_num(j, "kinematic_viscosity_m2ps", env.kinematic_viscosity);
  env.lumped_current = get_num(j, "current_mps", env.lumped_current);
  env.wind = get_num(j, "wind_mps", env.wind);
  if (j.contains("waves")) {
    for (const auto& w : j["waves"]) {
      expect_keys(w, "wave", {"amplitude_m", "period_s", "direction", "phase_rad"});
      env.add_wave(get_num(w, "amplitude_m", 0.0), get_num(w, "period_s", 1.0),
                   get_num(w, "direction", 1.0), get_num(w, "phase_rad", 0.0));
    }
  }
}

void parse_buoy(const json& j, BuoyParams& p, double rho_w) {
  expect_keys(j, "buoy",
              {"length_m", "height_m", "mass_kg", "added_mass_surge_kg",
               "added_mass_heave_kg", "added_inertia_pitch_kgm2",
               "potential_damping_surge_nspm", "potential_damping_heave_nspm",
               "potential_damping_pitch_nms", "pitch_skin_friction_nms",
               "pitch_restoring_nm", "pitch_inertia_kgm2", "skin_friction_scale"});
  p.length = get_num(j, "length_m", p.length);
  p.height = get_num(j, "height_m", p.height);
  p.mass = get_num(j, "mass_kg", p.mass);
  // Re-derive the quarter-immersion geometry before applying overrides.
  p.volume = 4.0 * p.mass / rho_w;
  p.width = p.volume / (p.length * p.height);
  p.added_mass_surge = get_num(j, "added_mass_surge_kg", 0.05 * p.mass);
  p.added_mass_heave = get_num(j, "added_mass_heave_kg", p.mass);
  p.added_inertia_pitch = get_num(j, "added_inertia_pitch_kgm2", p.added_inertia_pitch);
  p.potential_damping_surge = get_num(j, "potential_damping_surge_nspm", p.potential_damping_surge);
  p.potential_damping_heave = get_num(j, "potential_damping_heave_nspm", p.potential_damping_heave);
  p.potential_damping_pitch = get_num(j, "potential_damping_pitch_nms", p.potential_damping_pitch);
  p.pitch_skin_friction = get_num(j, "pitch_skin_friction_nms", p.pitch_skin_friction);
  p.pitch_restoring = get_num(j, "pitch_restoring_nm", p.pitch_restoring);
  p.pitch_inertia = get_num(j, "pitch_inertia_kgm2",
                            p.mass * (p.length * p.length + p.height * p.height) / 12.0);
  p.skin_friction_scale = get_num(j, "skin_friction_scale", p.skin_friction_scale);
}

void parse_uav(const json& j, UavParams& p) {
  expect_keys(j, "uav",
              {"mass_kg", "inertia_kgm2", "drag_coefficient", "frontal_area_m2",
               "vertical_drag_nspm", "rotational_drag_nms", "motor_time_constant_s",
               "thrust_limit_n", "torque_limit_nm", "pitch_limit_rad",
               "rotor_disk_area_m2"});
  p.mass = get_num(j, "mass_kg", p.mass);
  p.inertia = get_num(j, "inertia_kgm2", p.inertia);
  p.drag_coefficient = get_num(j, "drag_coefficient", p.drag_coefficient);
  p.frontal_area = get_num(j, "frontal_area_m2", p.frontal_area);
  p.vertical_drag = get_num(j, "vertical_drag_nspm", p.vertical_drag);
  p.rotational_drag = get_num(j, "rotational_drag_nms", p.rotational_drag);
  p.motor_time_constant = get_num(j, "motor_time_constant_s", p.motor_time_constant);
  p.thrust_limit = get_num(j, "thrust_limit_n", p.thrust_limit);
  p.torque_limit = get_num(j, "torque_limit_nm", p.torque_limit);
  p.pitch_limit = get_num(j, "pitch_limit_rad", p.pitch_limit);
  p.rotor_disk_area = get_num(j, "rotor_disk_area_m2", p.rotor_disk_area);
}

Eigen::Vector3d parse_vec3(const json& j, const char* key, const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 3) {
    throw std::invalid_argument(std::string("config: ") + key + " must be a 3-array");
  }
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

Eigen::Vector2d parse_vec2(const json& j, const char* key, const Eigen::Vector2d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 2) {
    throw std::invalid_argument(std::string("config: ") + key + " must be a 2-array");
  }
  return {a[0].get<double>(), a[1].get<double>()};
}

void parse_control(const json& j, ControllerParams& p) {
  expect_keys(j, "control",
              {"rate_hz", "eps_th1_mps", "eps_th2_mps", "standby_radius_factor",
               "reposition_rate_radps", "vref_cutoff_hz", "rref_cutoff_hz",
               "blend_time_constant_s", "ref_diff_cutoff_hz", "integral_limit",
               "v_integral_limit", "cbnc_integral_limit", "svcs_gains", "cbnc_gains"});
  p.rate_hz = get_num(j, "rate_hz", p.rate_hz);
  p.eps_th1 = get_num(j, "eps_th1_mps", p.eps_th1);
  p.eps_th2 = get_num(j, "eps_th2_mps", p.eps_th2);
  p.standby_radius_factor = get_num(j, "standby_radius_factor", p.standby_radius_factor);
  p.reposition_rate = get_num(j, "reposition_rate_radps", p.reposition_rate);
  p.vref_cutoff_hz = get_num(j, "vref_cutoff_hz", p.vref_cutoff_hz);
  p.rref_cutoff_hz = get_num(j, "rref_cutoff_hz", p.rref_cutoff_hz);
  p.blend_time_constant = get_num(j, "blend_time_constant_s", p.blend_time_constant);
  p.ref_diff_cutoff_hz = get_num(j, "ref_diff_cutoff_hz", p.ref_diff_cutoff_hz);
  p.integral_limit = get_num(j, "integral_limit", p.integral_limit);
  p.v_integral_limit = get_num(j, "v_integral_limit", p.v_integral_limit);
  p.cbnc_integral_limit = get_num(j, "cbnc_integral_limit", p.cbnc_integral_limit);
  if (j.contains("svcs_gains")) {
    const auto& g = j["svcs_gains"];
    expect_keys(g, "svcs_gains", {"k1", "k2", "gamma", "k_pv", "k_iv"});
    p.svcs.k1 = parse_vec3(g, "k1", p.svcs.k1);
    p.svcs.k2 = parse_vec3(g, "k2", p.svcs.k2);
    p.svcs.gamma = parse_vec3(g, "gamma", p.svcs.gamma);
    p.svcs.k_pv = get_num(g, "k_pv", p.svcs.k_pv);
    p.svcs.k_iv = get_num(g, "k_iv", p.svcs.k_iv);
  }
  if (j.contains("cbnc_gains")) {
    const auto& g = j["cbnc_gains"];
    expect_keys(g, "cbnc_gains", {"kp", "ki", "kd"});
    p.cbnc.kp = parse_vec2(g, "kp", p.cbnc.kp);
    p.cbnc.ki = parse_vec2(g, "ki", p.cbnc.ki);
    p.cbnc.kd = parse_vec2(g, "kd", p.cbnc.kd);
  }
}

void parse_noise(const json& j, NoiseSpec& n) {
  expect_keys(j, "noise",
              {"enabled", "seed", "cutoff_hz", "position_mav_m", "pitch_mav_deg",
               "elevation_mav_deg", "range_mav_m", "velocity_mav_mps",
               "pitch_rate_mav_degps", "elevation_rate_mav_degps", "accel_mav_mps2",
               "elevation_accel_mav_degps2"});
  if (j.contains("enabled")) n.enabled = j["enabled"].get<bool>();
  if (j.contains("seed")) n.seed = j["seed"].get<uint64_t>();
  n.cutoff_hz = get_num(j, "cutoff_hz", n.cutoff_hz);
  n.position_m = get_num(j, "position_mav_m", n.position_m);
  n.pitch_rad = get_num(j, "pitch_mav_deg", n.pitch_rad / kDegToRad) * kDegToRad;
  n.elevation_rad = get_num(j, "elevation_mav_deg", n.elevation_rad / kDegToRad) * kDegToRad;
  n.range_m = get_num(j, "range_mav_m", n.range_m);
  n.velocity_mps = get_num(j, "velocity_mav_mps", n.velocity_mps);
  n.pitch_rate_radps = get_num(j, "pitch_rate_mav_degps", n.pitch_rate_radps / kDegToRad) * kDegToRad;
  n.elevation_rate_radps =
      get_num(j, "elevation_rate_mav_degps", n.elevation_rate_radps / kDegToRad) * kDegToRad;
  n.accel_mps2 = get_num(j, "accel_mav_mps2", n.accel_mps2);
  n.elevation_accel_radps2 =
      get_num(j, "elevation_accel_mav_degps2", n.elevation_accel_radps2 / kDegToRad) * kDegToRad;
}

void parse_setpoint(const json& j, Setpoint& sp) {
  expect_keys(j, "setpoint", {"altitude_m", "velocity_schedule"});
  sp.altitude = get_num(j, "altitude_m", sp.altitude);
  if (j.contains("velocity_schedule")) {
    sp.schedule.nodes.clear();
    for (const auto& n : j["velocity_schedule"]) {
      expect_keys(n, "velocity_schedule node", {"t_s", "v_mps"});
      sp.schedule.nodes.push_back({get_num(n, "t_s", 0.0), get_num(n, "v_mps", 0.0)});
    }
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (schema_version != 1) throw std::invalid_argument("config: unsupported schema_version");
  if (dt <= 0.0) throw std::invalid_argument("config: dt_s must be positive");
  if (duration <= 0.0) throw std::invalid_argument("config: duration_s must be positive");
  if (log_decimation < 1) throw std::invalid_argument("config: log_decimation must be >= 1");
  environment.validate();
  buoy.validate(environment.water_density);
  uav.validate();
  cable.validate();
  control.validate();
  setpoint.schedule.validate();
  const double ctrl_div = 1.0 / (control.rate_hz * dt);
  if (std::abs(ctrl_div - std::round(ctrl_div)) > 1e-9 || ctrl_div < 1.0 - 1e-9) {
    throw std::invalid_argument("config: controller rate must divide the step rate");
  }
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  expect_keys(j, "scenario",
              {"schema_version", "name", "duration_s", "dt_s", "log_decimation",
               "seed", "on_constraint_violation", "buoy_pitch", "controller",
               "environment", "buoy", "uav", "cable", "margins", "control",
               "setpoint", "noise", "output"});
  ScenarioConfig cfg;
  if (j.contains("schema_version")) cfg.schema_version = j["schema_version"].get<int>();
  if (j.contains("name")) cfg.name = j["name"].get<std::string>();
  cfg.duration = get_num(j, "duration_s", cfg.duration);
  cfg.dt = get_num(j, "dt_s", cfg.dt);
  if (j.contains("log_decimation")) cfg.log_decimation = j["log_decimation"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("on_constraint_violation")) {
    const auto s = j["on_constraint_violation"].get<std::string>();
    if (s == "warn") cfg.violation_policy = ViolationPolicy::Warn;
    else if (s == "halt") cfg.violation_policy = ViolationPolicy::Halt;
    else throw std::invalid_argument("config: on_constraint_violation must be warn|halt");
  }
  if (j.contains("buoy_pitch")) {
    const auto s = j["buoy_pitch"].get<std::string>();
    if (s == "kinematic") cfg.pitch_mode = PitchMode::Kinematic;
    else if (s == "dynamic") cfg.pitch_mode = PitchMode::Dynamic;
    else throw std::invalid_argument("config: buoy_pitch must be kinematic|dynamic");
  }
  if (j.contains("controller")) {
    const auto s = j["controller"].get<std::string>();
    if (s == "svcs") cfg.controller = ControllerType::Svcs;
    else if (s == "cbnc") cfg.controller = ControllerType::Cbnc;
    else throw std::invalid_argument("config: controller must be svcs|cbnc");
  }
  if (j.contains("environment")) parse_environment(j["environment"], cfg.environment);
  cfg.buoy = BuoyParams::standard(cfg.environment.water_density);
  if (j.contains("buoy")) parse_buoy(j["buoy"], cfg.buoy, cfg.environment.water_density);
  if (j.contains("uav")) parse_uav(j["uav"], cfg.uav);
  if (j.contains("cable")) {
    expect_keys(j["cable"], "cable", {"length_m", "epsilon_alpha_rad"});
    cfg.cable.length = get_num(j["cable"], "length_m", cfg.cable.length);
    cfg.cable.epsilon_alpha = get_num(j["cable"], "epsilon_alpha_rad", cfg.cable.epsilon_alpha);
  }
  if (j.contains("margins")) {
    expect_keys(j["margins"], "margins", {"tension_n", "immersion_fraction", "mass_fraction"});
    cfg.margins.tension = get_num(j["margins"], "tension_n", cfg.margins.tension);
    cfg.margins.immersion = get_num(j["margins"], "immersion_fraction", cfg.margins.immersion);
    cfg.margins.mass_fraction = get_num(j["margins"], "mass_fraction", cfg.margins.mass_fraction);
  }
  if (j.contains("control")) parse_control(j["control"], cfg.control);
  if (j.contains("setpoint")) parse_setpoint(j["setpoint"], cfg.setpoint);
  if (j.contains("noise")) parse_noise(j["noise"], cfg.noise);
  if (j.contains("output")) {
    expect_keys(j["output"], "output", {"csv_path"});
    if (j["output"].contains("csv_path")) cfg.csv_path = j["output"]["csv_path"].get<std::string>();
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
  json j;
  j["schema_version"] = schema_version;
  j["name"] = name;
  j["duration_s"] = duration;
  j["dt_s"] = dt;
  j["log_decimation"] = log_decimation;
  j["seed"] = seed;
  j["on_constraint_violation"] = violation_policy == ViolationPolicy::Warn ? "warn" : "halt";
  j["buoy_pitch"] = pitch_mode == PitchMode::Kinematic ? "kinematic" : "dynamic";
  j["controller"] = controller == ControllerType::Svcs ? "svcs" : "cbnc";

  json je;
  je["gravity_mps2"] = environment.gravity;
  je["water_density_kgpm3"] = environment.water_density;
  je["air_density_kgpm3"] = environment.air_density;
  je["kinematic_viscosity_m2ps"] = environment.kinematic_viscosity;
  je["current_mps"] = environment.lumped_current;
  je["wind_mps"] = environment.wind;
  je["waves"] = json::array();
  for (const auto& w : environment.waves) {
    je["waves"].push_back({{"amplitude_m", w.amplitude},
                           {"period_s", w.period},
                           {"direction", w.direction},
                           {"phase_rad", w.phase}});
  }
  j["environment"] = je;

  j["buoy"] = {{"length_m", buoy.length},
               {"height_m", buoy.height},
               {"mass_kg", buoy.mass},
               {"potential_damping_heave_nspm", buoy.potential_damping_heave},
               {"pitch_skin_friction_nms", buoy.pitch_skin_friction},
               {"pitch_restoring_nm", buoy.pitch_restoring},
               {"skin_friction_scale", buoy.skin_friction_scale}};
  j["uav"] = {{"mass_kg", uav.mass},
              {"inertia_kgm2", uav.inertia},
              {"drag_coefficient", uav.drag_coefficient},
              {"frontal_area_m2", uav.frontal_area},
              {"vertical_drag_nspm", uav.vertical_drag},
              {"motor_time_constant_s", uav.motor_time_constant},
              {"thrust_limit_n", uav.thrust_limit},
              {"torque_limit_nm", uav.torque_limit},
              {"pitch_limit_rad", uav.pitch_limit},
              {"rotor_disk_area_m2", uav.rotor_disk_area}};
  j["cable"] = {{"length_m", cable.length}, {"epsilon_alpha_rad", cable.epsilon_alpha}};
  j["margins"] = {{"tension_n", margins.tension},
                  {"immersion_fraction", margins.immersion},
                  {"mass_fraction", margins.mass_fraction}};

  json jc;
  jc["rate_hz"] = control.rate_hz;
  jc["eps_th1_mps"] = control.eps_th1;
  jc["eps_th2_mps"] = control.eps_th2;
  jc["standby_radius_factor"] = control.standby_radius_factor;
  jc["reposition_rate_radps"] = control.reposition_rate;
  jc["vref_cutoff_hz"] = control.vref_cutoff_hz;
  jc["rref_cutoff_hz"] = control.rref_cutoff_hz;
  jc["blend_time_constant_s"] = control.blend_time_constant;
  jc["ref_diff_cutoff_hz"] = control.ref_diff_cutoff_hz;
  jc["integral_limit"] = control.integral_limit;
  jc["v_integral_limit"] = control.v_integral_limit;
  jc["cbnc_integral_limit"] = control.cbnc_integral_limit;
  jc["svcs_gains"] = {{"k1", {control.svcs.k1[0], control.svcs.k1[1], control.svcs.k1[2]}},
                      {"k2", {control.svcs.k2[0], control.svcs.k2[1], control.svcs.k2[2]}},
                      {"gamma", {control.svcs.gamma[0], control.svcs.gamma[1], control.svcs.gamma[2]}},
                      {"k_pv", control.svcs.k_pv},
                      {"k_iv", control.svcs.k_iv}};
  jc["cbnc_gains"] = {{"kp", {control.cbnc.kp[0], control.cbnc.kp[1]}},
                      {"ki", {control.cbnc.ki[0], control.cbnc.ki[1]}},
                      {"kd", {control.cbnc.kd[0], control.cbnc.kd[1]}}};
  j["control"] = jc;

  json js;
  js["altitude_m"] = setpoint.altitude;
  js["velocity_schedule"] = json::array();
  for (const auto& n : setpoint.schedule.nodes) {
    js["velocity_schedule"].push_back({{"t_s", n.t}, {"v_mps", n.v}});
  }
  j["setpoint"] = js;

  j["noise"] = {{"enabled", noise.enabled},
                {"seed", noise.seed},
                {"cutoff_hz", noise.cutoff_hz},
                {"position_mav_m", noise.position_m},
                {"pitch_mav_deg", noise.pitch_rad / kDegToRad},
                {"elevation_mav_deg", noise.elevation_rad / kDegToRad},
                {"range_mav_m", noise.range_m},
                {"velocity_mav_mps", noise.velocity_mps},
                {"pitch_rate_mav_degps", noise.pitch_rate_radps / kDegToRad},
                {"elevation_rate_mav_degps", noise.elevation_rate_radps / kDegToRad},
                {"accel_mav_mps2", noise.accel_mps2},
                {"elevation_accel_mav_degps2", noise.elevation_accel_radps2 / kDegToRad}};

  if (!csv_path.empty()) j["output"] = {{"csv_path", csv_path}};
  return j.dump(2);
}

ScenarioConfig ScenarioConfig::preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.environment.lumped_current = -0.5;
  cfg.environment.wind = -3.0;
  cfg.setpoint.altitude = 5.0;

  if (name == "c1" || name == "c2") {
    cfg.duration = 100.0;
    cfg.setpoint.schedule.nodes = {{0.0, 0.0},  {2.0, 0.0},  {22.0, 5.0},
                                   {44.0, 5.0}, {64.0, 0.0}, {68.0, 0.0},
                                   {84.0, -4.0}, {100.0, -4.0}};
    if (name == "c2") {
      cfg.environment.add_wave(0.135, 3.0, 1.0, std::numbers::pi);
      cfg.environment.add_wave(0.75, 5.7, 1.0, 0.0);
    }
  } else if (name == "c3") {
    cfg.duration = 40.0;
    cfg.setpoint.schedule.nodes = {{0.0, 0.0}, {40.0, 10.0}};  // ramp 0.25 m/s^2
    cfg.environment.add_wave(0.135, 3.0, -1.0, 0.0);
  } else if (name == "c4") {
    cfg.duration = 60.0;
    cfg.setpoint.schedule.nodes = {{0.0, 0.0}, {60.0, 15.0}};  // ramp 0.25 m/s^2
    cfg.environment.add_wave(1.65, 7.0, -1.0, 0.0);
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (expected c1..c4)");
  }
  cfg.validate();
  return cfg;
}

}  // namespace marinesim
