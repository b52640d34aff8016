#ifndef MARINESIM_SIMULATION_HPP
#define MARINESIM_SIMULATION_HPP

#include <memory>
#include <optional>
#include <string>

#include "marinesim/controller.hpp"
#include "marinesim/coupled.hpp"
#include "marinesim/noise.hpp"
#include "marinesim/scenario.hpp"
#include "marinesim/trace.hpp"

namespace marinesim {

struct MetricsReport {
  double duration = 0.0;             // [s]
  double mean_abs_v_error = 0.0;     // [m/s], against the shaped reference
  double mean_abs_z_error = 0.0;     // [m]
  double energy = 0.0;               // [J], momentum-theory power integral
  double max_tension = 0.0;          // [N]
  double min_vol_ratio = 1.0;        // [-]
  int decouple_events = 0;
  int couple_events = 0;
  bool any_hanging_risk = false;
  bool any_airborne = false;
  double first_airborne_time = -1.0;     // [s], -1 when never
  double first_airborne_speed = 0.0;     // buoy |V| at the first contact loss
  double noise_calibration_error = 0.0;  // worst relative mav deviation
};

enum class SimStatus { Ok = 0, ConstraintHalt = 2, NumericFailure = 3 };

// Momentum-theory induced power of an ideal actuator disk.
double induced_power(double thrust, double air_density, double disk_area);

// Owns one deterministic scenario run: fixed-step RK4 over the hybrid
// dynamics, zero-order-hold controller at its own rate, sensor corruption,
// trace logging and metric accumulation. Instances are independent; a single
// instance is strictly sequential.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);

  // Advances one controller period (control update + plant substeps).
  SimStatus step_period();
  // Runs to the configured duration (or an abort condition).
  SimStatus run();

  double time() const { return t_; }
  const Trace& trace() const { return trace_; }
  MetricsReport metrics() const;
  const ScenarioConfig& config() const { return cfg_; }
  const std::string& abort_reason() const { return abort_reason_; }

  // Current truth states (for tests and tooling).
  BuoyState buoy() const;
  UavState uav() const;
  Coupling coupling() const { return coupling_; }
  double tension() const { return tension_; }

 private:
  void initialize();
  void control_update();
  void integrate_dt();
  void refresh_dynamics_cache();
  void handle_transition();
  void log_and_accumulate();
  Feedback truth_feedback() const;
  [[noreturn]] void abort_numeric(const std::string& what);

  ScenarioConfig cfg_;
  std::unique_ptr<Controller> controller_;
  std::unique_ptr<SensorModel> sensors_;

  Coupling coupling_ = Coupling::Decoupled;
  CoupledState coupled_;
  BuoyState buoy_;
  UavState uav_;
  ControlCommand realized_;
  ControlCommand command_;

  double t_ = 0.0;
  long step_count_ = 0;
  int steps_per_control_ = 4;

  // Dynamics cache at the current state (used for feedback, transition tests
  // and logging).
  Vector5d qdd_ = Vector5d::Zero();
  Eigen::Vector3d buoy_acc_ = Eigen::Vector3d::Zero();
  Eigen::Vector3d uav_acc_ = Eigen::Vector3d::Zero();
  double tension_ = 0.0;
  double vol_ratio_ = 0.0;
  double zeta_ = 0.0;

  Trace trace_;
  std::string abort_reason_;

  // Metric accumulators.
  double sum_abs_v_err_ = 0.0;
  double sum_abs_z_err_ = 0.0;
  double energy_ = 0.0;
  long metric_samples_ = 0;
  MetricsReport partial_;
  Feedback last_fb_;
};

}  // namespace marinesim

#endif
