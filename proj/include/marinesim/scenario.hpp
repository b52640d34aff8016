#ifndef MARINESIM_SCENARIO_HPP
#define MARINESIM_SCENARIO_HPP

#include <cstdint>
#include <string>

#include "marinesim/controller.hpp"
#include "marinesim/coupled.hpp"
#include "marinesim/noise.hpp"

namespace marinesim {

enum class ControllerType { Svcs = 0, Cbnc = 1 };
enum class ViolationPolicy { Warn = 0, Halt = 1 };

// Full description of one simulation run. Serialized as strict JSON: unknown
// keys are rejected, units are part of the key names, and the schema carries
// a version stamp.
struct ScenarioConfig {
  int schema_version = 1;
  std::string name = "custom";
  double duration = 10.0;       // [s]
  double dt = 1e-3;             // [s]
  int log_decimation = 10;
  uint64_t seed = 42;
  ViolationPolicy violation_policy = ViolationPolicy::Warn;
  PitchMode pitch_mode = PitchMode::Kinematic;
  ControllerType controller = ControllerType::Svcs;

  Environment environment;
  BuoyParams buoy = BuoyParams::standard(1000.0);
  UavParams uav;
  CableParams cable;
  SafetyMargins margins;
  ControllerParams control;
  Setpoint setpoint;
  NoiseSpec noise;

  std::string csv_path;

  void validate() const;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
  std::string to_json_text() const;

  // Built-in studies: "c1" (wind and current), "c2" (moderate two-component
  // following seas), "c3" (short head seas), "c4" (long high head seas).
  static ScenarioConfig preset(const std::string& name);
};

}  // namespace marinesim

#endif
