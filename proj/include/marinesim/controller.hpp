#ifndef MARINESIM_CONTROLLER_HPP
#define MARINESIM_CONTROLLER_HPP

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "marinesim/coupled.hpp"
#include "marinesim/filters.hpp"
#include "marinesim/uav.hpp"

namespace marinesim {

enum class Mode { Free = 0, ReadyToPull = 1, Repositioning = 2, Pulling = 3 };
enum class Configuration { Front = 0, Rear = 1 };

const char* to_string(Mode m);
const char* to_string(Configuration c);

// Feedback bundle as the controller sees it (possibly noise corrupted).
// Buoy-side entries are derived from the vehicle pose and the cable
// measurements, mirroring how the stack would estimate them from GPS/INS and
// a stereo ranging of the buoy.
struct Feedback {
  double x_u = 0.0, z_u = 0.0, theta_u = 0.0;
  double vx_u = 0.0, vz_u = 0.0, theta_u_rate = 0.0;
  double ax_u = 0.0, az_u = 0.0;
  double r = 0.0, rdot = 0.0, rddot = 0.0;
  double alpha = 0.0, alphadot = 0.0, alphaddot = 0.0;
  // Derived buoy states.
  double x_b = 0.0, z_b = 0.0;
  double v = 0.0;  // buoy surge velocity V = xdot_b
  double vz_b = 0.0;
  double ax_b = 0.0, az_b = 0.0;
};

// Derives the buoy-side entries from vehicle pose and cable channels.
void derive_buoy_feedback(Feedback& fb);

// Velocity setpoint schedule; piecewise linear between nodes, held outside.
struct VelocitySchedule {
  struct Node {
    double t = 0.0;
    double v = 0.0;
  };
  std::vector<Node> nodes;

  double at(double t) const;
  void validate() const;
};

struct Setpoint {
  double altitude = 5.0;  // zbar_u0 [m]
  VelocitySchedule schedule;
};

struct SvcsGains {
  Eigen::Vector3d k1{16.9, 4.6, 7.5};
  Eigen::Vector3d k2{2.6, 2.4, 2.5};
  Eigen::Vector3d gamma{0.5, 0.3, 0.3};
  double k_pv = 25.0;
  double k_iv = 12.0;

  // PID map of the two-step design: kp = 1 + k1 k2, kd = k1 + k2, ki = gamma k1.
  Eigen::Vector3d kp() const { return Eigen::Vector3d::Ones() + k1.cwiseProduct(k2); }
  Eigen::Vector3d kd() const { return k1 + k2; }
  Eigen::Vector3d ki() const { return gamma.cwiseProduct(k1); }
};

struct CbncGains {
  Eigen::Vector2d kp{7.0, 3.0};
  Eigen::Vector2d ki{1.2, 1.0};
  Eigen::Vector2d kd{5.0, 2.0};
};

struct ControllerParams {
  SvcsGains svcs;
  CbncGains cbnc;
  double rate_hz = 250.0;
  double eps_th1 = 0.2;          // first velocity threshold [m/s]
  double eps_th2 = 0.6;          // second velocity threshold [m/s]
  double mode_exit_debounce = 0.3;  // dwell before leaving pulling [s]
  double standby_radius_factor = 0.98;
  double arc_radius_factor = 0.98;
  double reposition_rate = 0.75;  // arc rate [rad/s]
  double reposition_dwell = 4.0;  // repositioning lockout after an arc [s]
  double vref_cutoff_hz = 0.5;
  double rref_cutoff_hz = 1.5;
  double blend_time_constant = 0.5;   // [s]
  double ref_diff_cutoff_hz = 3.0;    // pitch-reference rate/accel shaping
  double integral_limit = 10.0;
  double v_integral_limit = 5.0;
  double cbnc_integral_limit = 30.0;

  void validate() const;
};

// Outputs beyond the actuator command, logged into the trace.
struct ControllerDebug {
  Mode mode = Mode::Free;
  Configuration configuration = Configuration::Front;
  double v_ref = 0.0;
  double r_ref = 0.0;
  double alpha_ref = 0.0;
  double zu_ref = 0.0;
  double theta_u_cmd = 0.0;
  double u_radial = 0.0;
  double u_tangential = 0.0;
  double tension_ff = 0.0;
  bool pulling_law_active = false;
  bool alpha_ref_saturated = false;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControlCommand update(const Feedback& fb, double t, double dt) = 0;
  virtual const ControllerDebug& debug() const = 0;
  virtual void initialize(const Feedback& fb) = 0;
};

// ---------------------------------------------------------------------------
// Pure pieces of the supervisory controller, unit-testable in isolation.
// ---------------------------------------------------------------------------

// Threshold ladder of the supervisory machine. The wide-threshold test runs
// before the narrow one inside each configuration so the repositioning branch
// is reachable.
Mode state_machine_step(double v, double v_ref, Configuration cfg, Mode mode,
                        double eps_th1, double eps_th2);

// Elevation-angle reference holding the vehicle at zbar_u for a given radial
// reference; rear configurations take the supplementary angle.
struct AlphaRef {
  double alpha = 0.0;
  double rate = 0.0;
  double accel = 0.0;
  bool saturated = false;
};
AlphaRef elevation_reference(double zbar_u, double z_b, double vz_b, double az_b,
                             double r, double rdot, double rddot, Configuration cfg);

// Drag-compensating tension estimate, D_b11,0 * Vbar / cos(alpha), with the
// zero-tension wetted area and the elevation angle kept off the singular band.
double tension_estimate(double v_ref, double alpha, double eps_alpha,
                        const BuoyParams& bp, const Environment& env);

// Radial/tangential position law. errors = X1 - X1_ref per channel (r, alpha),
// with integral states updated by the caller.
struct PositionLawInput {
  Eigen::Vector2d error;
  Eigen::Vector2d error_rate;
  Eigen::Vector2d error_integral;
  Eigen::Vector2d ref_accel;
  double r = 1.0;
  double alpha = 0.0;
  double alphadot = 0.0;
  double rdot = 0.0;
  double ax_b = 0.0;
  double az_b = 0.0;
  double tension_ff = 0.0;
};
Eigen::Vector2d outer_loop_position(const PositionLawInput& in, const SvcsGains& g,
                                    const UavParams& up, double gravity);

// Surge-velocity law (pulling mode).
struct SurgeLawInput {
  double e_v = 0.0;
  double e_v_integral = 0.0;
  double v_ref_rate = 0.0;
  double tension_ff = 0.0;
  double r = 1.0;
  double alpha = 0.0;
  double alphadot = 0.0;
  double rddot = 0.0;
  double az_b = 0.0;
};
double surge_velocity_law(const SurgeLawInput& in, const SvcsGains& g,
                          const UavParams& up, double gravity);

// Mode-gated blend from the position law to the velocity law.
double blend(double u_position, double u_velocity, double fade);

// Thrust magnitude and commanded pitch from the polar force components.
struct Decomposition {
  double thrust = 0.0;
  double theta_cmd_raw = 0.0;  // before the tanh bound
  double theta_cmd = 0.0;
};
Decomposition decompose(double u_radial, double u_tangential, double alpha,
                        double pitch_limit, double theta_prev);

// Inner pitch loop, third channel of the gain map.
double inner_loop_pitch(double e_theta, double e_theta_rate, double e_theta_integral,
                        double theta_cmd_accel, const SvcsGains& g, const UavParams& up);

// ---------------------------------------------------------------------------

// Supervisory surge velocity control system.
class SvcsController final : public Controller {
 public:
  SvcsController(const ControllerParams& params, const Setpoint& sp,
                 const BuoyParams& bp, const UavParams& up, const CableParams& cp,
                 const Environment& env);

  void initialize(const Feedback& fb) override;
  ControlCommand update(const Feedback& fb, double t, double dt) override;
  const ControllerDebug& debug() const override { return debug_; }

 private:
  double standby_alpha(const Feedback& fb) const;

  ControllerParams prm_;
  Setpoint setpoint_;
  BuoyParams buoy_;
  UavParams uav_;
  CableParams cable_;
  Environment env_;

  Mode mode_ = Mode::Free;
  Configuration config_ = Configuration::Front;

  SecondOrderTracker v_ref_filter_;
  FourthOrderTracker r_ref_filter_;
  Eigen::Vector2d pos_integral_ = Eigen::Vector2d::Zero();
  double pitch_integral_ = 0.0;
  double v_integral_ = 0.0;
  double fade_ = 0.0;
  FirstOrderLowPass tension_ff_lp_{0.3};
  SecondOrderTracker pitch_ref_track_;
  double theta_cmd_prev_ = 0.0;
  double thrust_cmd_prev_ = 0.0;

  bool reposition_active_ = false;
  double reposition_alpha_ = 0.0;
  double reposition_target_ = 0.0;
  double reposition_rate_state_ = 0.0;
  double reposition_cooldown_ = 0.0;
  double pulling_exit_timer_ = 0.0;
  bool pulling_valid_prev_ = false;
  bool last_coupled_hat_ = false;

  ControllerDebug debug_;
};

// Cartesian PID baseline: independent velocity (x) and elevation (z) loops
// mapped to thrust magnitude and pitch, no supervisory machine.
class CbncController final : public Controller {
 public:
  CbncController(const ControllerParams& params, const Setpoint& sp,
                 const UavParams& up, const Environment& env);

  void initialize(const Feedback& fb) override;
  ControlCommand update(const Feedback& fb, double t, double dt) override;
  const ControllerDebug& debug() const override { return debug_; }

 private:
  ControllerParams prm_;
  Setpoint setpoint_;
  UavParams uav_;
  Environment env_;

  SecondOrderTracker v_ref_filter_;
  Eigen::Vector2d integral_ = Eigen::Vector2d::Zero();
  double pitch_integral_ = 0.0;
  SecondOrderTracker pitch_ref_track_;
  double theta_cmd_prev_ = 0.0;

  ControllerDebug debug_;
};

}  // namespace marinesim

#endif
