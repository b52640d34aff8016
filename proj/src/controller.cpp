#include "marinesim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace marinesim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Free: return "free";
    case Mode::ReadyToPull: return "ready";
    case Mode::Repositioning: return "reposition";
    case Mode::Pulling: return "pulling";
  }
  return "?";
}

const char* to_string(Configuration c) {
  return c == Configuration::Front ? "front" : "rear";
}

void derive_buoy_feedback(Feedback& fb) {
  const double c = std::cos(fb.alpha);
  const double s = std::sin(fb.alpha);
  fb.x_b = fb.x_u - fb.r * c;
  fb.z_b = fb.z_u - fb.r * s;
  fb.v = fb.vx_u - (fb.rdot * c - fb.r * s * fb.alphadot);
  fb.vz_b = fb.vz_u - (fb.rdot * s + fb.r * c * fb.alphadot);
  const double radial = fb.rddot - fb.r * fb.alphadot * fb.alphadot;
  const double tangential = fb.r * fb.alphaddot + 2.0 * fb.rdot * fb.alphadot;
  fb.ax_b = fb.ax_u - (radial * c - tangential * s);
  fb.az_b = fb.az_u - (radial * s + tangential * c);
}

double VelocitySchedule::at(double t) const {
  if (nodes.empty()) return 0.0;
  if (t <= nodes.front().t) return nodes.front().v;
  if (t >= nodes.back().t) return nodes.back().v;
  for (size_t i = 1; i < nodes.size(); ++i) {
    if (t <= nodes[i].t) {
      const auto& a = nodes[i - 1];
      const auto& b = nodes[i];
      const double f = (t - a.t) / (b.t - a.t);
      return a.v + f * (b.v - a.v);
    }
  }
  return nodes.back().v;
}

void VelocitySchedule::validate() const {
  for (size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].t <= nodes[i - 1].t) {
      throw std::invalid_argument("velocity schedule times must be strictly increasing");
    }
  }
}

void ControllerParams::validate() const {
  if (rate_hz <= 0.0) throw std::invalid_argument("controller: non-positive rate");
  if (eps_th1 <= 0.0 || eps_th2 <= eps_th1) {
    throw std::invalid_argument("controller: thresholds must satisfy 0 < eps_th1 < eps_th2");
  }
  if (standby_radius_factor <= 0.0 || standby_radius_factor >= 1.0) {
    throw std::invalid_argument("controller: standby radius factor must lie in (0, 1)");
  }
  if (reposition_rate <= 0.0) throw std::invalid_argument("controller: non-positive arc rate");
  if ((svcs.k1.array() <= 0.0).any() || (svcs.k2.array() <= 0.0).any() ||
      (svcs.gamma.array() <= 0.0).any() || svcs.k_pv <= 0.0 || svcs.k_iv <= 0.0) {
    throw std::invalid_argument("controller: gains must be positive");
  }
}

Mode state_machine_step(double v, double v_ref, Configuration cfg, Mode mode,
                        double eps_th1, double eps_th2) {
  if (cfg == Configuration::Front) {
    if (v < v_ref - eps_th1) return Mode::Pulling;
    if (v > v_ref + eps_th2) return Mode::Repositioning;
    if (v > v_ref + eps_th1) return Mode::ReadyToPull;
  } else {
    if (v > v_ref + eps_th1) return Mode::Pulling;
    if (v < v_ref - eps_th2) return Mode::Repositioning;
    if (v < v_ref - eps_th1) return Mode::ReadyToPull;
  }
  return mode;
}

AlphaRef elevation_reference(double zbar_u, double z_b, double vz_b, double az_b,
                             double r, double rdot, double rddot, Configuration cfg) {
  AlphaRef out;
  const double rr = std::max(r, 1e-6);
  const double u = zbar_u - z_b;
  double s = u / rr;
  if (s > 1.0 || s < -1.0) {
    out.saturated = true;
    s = std::clamp(s, -1.0, 1.0);
  }
  const double c = std::sqrt(std::max(1.0 - s * s, 2.5e-3));  // keeps rates finite
  const double ud = -vz_b;
  const double udd = -az_b;
  const double sd = ud / rr - u * rdot / (rr * rr);
  const double sdd = udd / rr - 2.0 * ud * rdot / (rr * rr) - u * rddot / (rr * rr) +
                     2.0 * u * rdot * rdot / (rr * rr * rr);
  out.alpha = std::asin(s);
  out.rate = sd / c;
  out.accel = sdd / c + s * sd * sd / (c * c * c);
  if (cfg == Configuration::Rear) {
    out.alpha = kPi - out.alpha;
    out.rate = -out.rate;
    out.accel = -out.accel;
  }
  return out;
}

double tension_estimate(double v_ref, double alpha, double eps_alpha,
                        const BuoyParams& bp, const Environment& env) {
  const double cs = skin_friction_coeff(v_ref, bp, env.kinematic_viscosity);
  const double area0 = wetted_area(0.0, bp);  // zero-tension reference area
  const double d110 = bp.skin_friction_scale * cs * area0 * 0.5 *
                      env.water_density * std::abs(v_ref);
  double c = std::cos(alpha);
  const double floor = std::cos(kHalfPi - eps_alpha);
  if (std::abs(c) < floor) c = (c < 0.0 ? -floor : floor);
  return std::max(0.0, d110 * v_ref / c);
}

Eigen::Vector2d outer_loop_position(const PositionLawInput& in, const SvcsGains& g,
                                    const UavParams& up, double gravity) {
  const Eigen::Vector3d kp = g.kp();
  const Eigen::Vector3d kd = g.kd();
  const Eigen::Vector3d ki = g.ki();
  const double ca = std::cos(in.alpha);
  const double sa = std::sin(in.alpha);
  const double r = std::max(in.r, 1e-3);

  const double h_r = r * in.alphadot * in.alphadot - in.ax_b * ca - in.az_b * sa -
                     gravity * sa;
  const double h_a = (-2.0 * in.rdot * in.alphadot + in.ax_b * sa - in.az_b * ca -
                      gravity * ca) / r;

  Eigen::Vector2d u;
  u[0] = up.mass * (-kp[0] * in.error[0] - kd[0] * in.error_rate[0] -
                    ki[0] * in.error_integral[0] + in.ref_accel[0] - h_r) +
         in.tension_ff;
  u[1] = up.mass * r * (-kp[1] * in.error[1] - kd[1] * in.error_rate[1] -
                        ki[1] * in.error_integral[1] + in.ref_accel[1] - h_a);
  return u;
}

double surge_velocity_law(const SurgeLawInput& in, const SvcsGains& g,
                          const UavParams& up, double gravity) {
  const double ca = std::cos(in.alpha);
  const double sa = std::sin(in.alpha);
  const double h_v = (in.r * in.alphadot * in.alphadot - in.rddot - in.az_b * sa -
                      gravity * sa) / ca;
  return in.tension_ff + up.mass * ca * (-h_v + in.v_ref_rate - g.k_pv * in.e_v -
                                         g.k_iv * in.e_v_integral);
}

double blend(double u_position, double u_velocity, double fade) {
  return (1.0 - fade) * u_position + fade * u_velocity;
}

Decomposition decompose(double u_radial, double u_tangential, double alpha,
                        double pitch_limit, double theta_prev) {
  Decomposition out;
  out.thrust = std::hypot(u_radial, u_tangential);
  if (out.thrust < 1e-9) {
    out.theta_cmd_raw = theta_prev;  // direction undefined, hold the last value
  } else {
    out.theta_cmd_raw = kHalfPi - alpha - std::atan2(u_tangential, u_radial);
  }
  out.theta_cmd = pitch_limit * std::tanh(out.theta_cmd_raw / pitch_limit);
  return out;
}

double inner_loop_pitch(double e_theta, double e_theta_rate, double e_theta_integral,
                        double theta_cmd_accel, const SvcsGains& g, const UavParams& up) {
  const double kp = g.kp()[2];
  const double kd = g.kd()[2];
  const double ki = g.ki()[2];
  return up.inertia * (-kp * e_theta - kd * e_theta_rate - ki * e_theta_integral +
                       theta_cmd_accel);
}

// ---------------------------------------------------------------------------
// SvcsController
// ---------------------------------------------------------------------------

SvcsController::SvcsController(const ControllerParams& params, const Setpoint& sp,
                               const BuoyParams& bp, const UavParams& up,
                               const CableParams& cp, const Environment& env)
    : prm_(params),
      setpoint_(sp),
      buoy_(bp),
      uav_(up),
      cable_(cp),
      env_(env),
      v_ref_filter_(params.vref_cutoff_hz),
      r_ref_filter_(params.rref_cutoff_hz),
      pitch_ref_track_(params.ref_diff_cutoff_hz) {
  prm_.validate();
  setpoint_.schedule.validate();
}

double SvcsController::standby_alpha(const Feedback& fb) const {
  const double r_sb = prm_.standby_radius_factor * cable_.length;
  const double s = std::clamp((setpoint_.altitude - fb.z_b) / r_sb, -1.0, 1.0);
  return std::asin(s);
}

void SvcsController::initialize(const Feedback& fb) {
  mode_ = Mode::Free;
  config_ = fb.alpha <= kHalfPi ? Configuration::Front : Configuration::Rear;
  v_ref_filter_.reset(setpoint_.schedule.at(0.0));
  r_ref_filter_.reset(fb.r);
  pos_integral_.setZero();
  pitch_integral_ = 0.0;
  v_integral_ = 0.0;
  fade_ = 0.0;
  pitch_ref_track_.reset(fb.theta_u);
  theta_cmd_prev_ = fb.theta_u;
  thrust_cmd_prev_ = uav_.mass * env_.gravity;
  reposition_active_ = false;
}

ControlCommand SvcsController::update(const Feedback& fb, double t, double dt) {
  // Reference velocity shaping; the supervisory ladder always sees the
  // smoothed command.
  v_ref_filter_.step(setpoint_.schedule.at(t), dt);
  const double v_ref = v_ref_filter_.value();

  // Supervisory machine. A repositioning arc runs to completion before the
  // ladder resumes; completing the arc flips the configuration and starts a
  // short lockout so the ladder cannot bounce straight back.
  if (reposition_active_) {
    const double dist = reposition_target_ - reposition_alpha_;
    const double dir = dist >= 0.0 ? 1.0 : -1.0;
    // Trapezoid-like profile: cruise at the arc rate, land exponentially.
    reposition_rate_state_ = dir * std::min(prm_.reposition_rate, 4.0 * std::abs(dist));
    reposition_alpha_ += reposition_rate_state_ * dt;
    const bool done = std::abs(dist) < 0.02;
    if (done) {
      reposition_alpha_ = reposition_target_;
      config_ = config_ == Configuration::Front ? Configuration::Rear
                                                : Configuration::Front;
      reposition_active_ = false;
      reposition_cooldown_ = prm_.reposition_dwell;
      mode_ = Mode::ReadyToPull;
    } else {
      mode_ = Mode::Repositioning;
    }
  } else {
    // Off the arc the stationed side is whatever the geometry says; a small
    // hysteresis band keeps the flag quiet around the vertical.
    if (fb.alpha > kHalfPi + 0.05) config_ = Configuration::Rear;
    else if (fb.alpha < kHalfPi - 0.05) config_ = Configuration::Front;

    reposition_cooldown_ = std::max(0.0, reposition_cooldown_ - dt);
    Mode next = state_machine_step(fb.v, v_ref, config_, mode_, prm_.eps_th1, prm_.eps_th2);
    if (next == Mode::Repositioning && reposition_cooldown_ > 0.0) {
      next = mode_ == Mode::Repositioning ? Mode::ReadyToPull : mode_;
    }
    // Noise brushing the first threshold must not dump an established pull;
    // the exit condition has to persist for a short dwell.
    if (mode_ == Mode::Pulling && next == Mode::ReadyToPull) {
      pulling_exit_timer_ += dt;
      if (pulling_exit_timer_ < prm_.mode_exit_debounce) next = Mode::Pulling;
    } else {
      pulling_exit_timer_ = 0.0;
    }
    mode_ = next;
    if (mode_ == Mode::Repositioning) {
      const double a0 = standby_alpha(fb);
      reposition_active_ = true;
      reposition_alpha_ = fb.alpha;
      reposition_target_ = config_ == Configuration::Front ? kPi - a0 : a0;
    }
  }

  // Coupling detection from the vertical force balance of the vehicle plus a
  // cable-extension check.
  const double sa_det = std::max(std::sin(fb.alpha), std::sin(cable_.epsilon_alpha));
  const double tension_detect =
      (thrust_cmd_prev_ * std::cos(fb.theta_u) - uav_.mass * env_.gravity -
       uav_.mass * fb.az_u) / sa_det;
  const bool coupled_hat = fb.r >= 0.985 * cable_.length && tension_detect > 0.0;
  last_coupled_hat_ = coupled_hat;

  // Radial reference: full cable length while pulling, just-slack standby
  // otherwise, with extra clearance while swinging an arc. Until the cable
  // has engaged, the pulling reference aims slightly past the circle so the
  // radial loop actually crosses it instead of converging from below.
  double r_target = prm_.standby_radius_factor * cable_.length;
  if (mode_ == Mode::Pulling) r_target = (coupled_hat ? 1.0 : 1.01) * cable_.length;
  if (reposition_active_) r_target = prm_.arc_radius_factor * cable_.length;
  r_ref_filter_.step(r_target, dt);
  const double r_ref = r_ref_filter_.value();

  // Elevation-angle reference holding the commanded altitude.
  AlphaRef aref;
  if (reposition_active_) {
    aref.alpha = reposition_alpha_;
    aref.rate = reposition_rate_state_;
    aref.accel = 0.0;
  } else {
    aref = elevation_reference(setpoint_.altitude, fb.z_b, fb.vz_b, fb.az_b, r_ref,
                               r_ref_filter_.rate(), r_ref_filter_.accel(), config_);
  }

  // Drag-compensating tension estimate, applied as feedforward only when the
  // cable is believed taut.
  const double t_hat_c = tension_estimate(v_ref, fb.alpha, cable_.epsilon_alpha, buoy_, env_);
  // The steady drag estimate only applies once the cable has actually loaded
  // up; a short lag matches the feedforward to the physical tension build.
  const double tension_ff = tension_ff_lp_.step(coupled_hat ? t_hat_c : 0.0, dt);

  // Position law on (r, alpha).
  PositionLawInput pin;
  pin.error << fb.r - r_ref, wrap_angle(fb.alpha - aref.alpha);
  pin.error_rate << fb.rdot - r_ref_filter_.rate(), fb.alphadot - aref.rate;
  const Eigen::Vector2d k1_inv(1.0 / prm_.svcs.k1[0], 1.0 / prm_.svcs.k1[1]);
  pos_integral_ += dt * (pin.error + k1_inv.cwiseProduct(pin.error_rate));
  pos_integral_ = pos_integral_.cwiseMax(-prm_.integral_limit).cwiseMin(prm_.integral_limit);
  pin.error_integral = pos_integral_;
  pin.ref_accel << r_ref_filter_.accel(), aref.accel;
  pin.r = fb.r;
  pin.alpha = fb.alpha;
  pin.alphadot = fb.alphadot;
  pin.rdot = fb.rdot;
  pin.ax_b = fb.ax_b;
  pin.az_b = fb.az_b;
  pin.tension_ff = tension_ff;
  const Eigen::Vector2d u_pos = outer_loop_position(pin, prm_.svcs, uav_, env_.gravity);

  // Surge-velocity law while pulling and outside the singular band; the
  // reference is forwarded only when the machine is ready to pull.
  const bool v_ref_forwarded = mode_ == Mode::Pulling || mode_ == Mode::ReadyToPull;
  const double v_ref_eff = v_ref_forwarded ? v_ref : fb.v;
  const double v_ref_rate_eff = v_ref_forwarded ? v_ref_filter_.rate() : 0.0;
  // The velocity law only has authority through a taut cable; until contact
  // the radial position law stretches the cable to full length.
  const bool pulling_valid = mode_ == Mode::Pulling && coupled_hat &&
                             std::abs(fb.alpha - kHalfPi) > cable_.epsilon_alpha;
  const double e_v = fb.v - v_ref_eff;
  double u_vel = 0.0;
  if (pulling_valid) {
    if (!pulling_valid_prev_) v_integral_ = 0.0;  // fresh pulling episode
    v_integral_ = std::clamp(v_integral_ + dt * e_v, -prm_.v_integral_limit,
                             prm_.v_integral_limit);
    SurgeLawInput sin_;
    sin_.e_v = e_v;
    sin_.e_v_integral = v_integral_;
    sin_.v_ref_rate = v_ref_rate_eff;
    sin_.tension_ff = t_hat_c;
    sin_.r = fb.r;
    sin_.alpha = fb.alpha;
    sin_.alphadot = fb.alphadot;
    sin_.rddot = fb.rddot;
    sin_.az_b = fb.az_b;
    u_vel = surge_velocity_law(sin_, prm_.svcs, uav_, env_.gravity);
    fade_ += dt / prm_.blend_time_constant * (1.0 - fade_);
  } else {
    fade_ = 0.0;  // snap back to the position law
  }
  pulling_valid_prev_ = pulling_valid;

  const double u_r = blend(u_pos[0], u_vel, fade_);
  const double u_a = u_pos[1];

  const Decomposition dec = decompose(u_r, u_a, fb.alpha, uav_.pitch_limit, theta_cmd_prev_);
  theta_cmd_prev_ = dec.theta_cmd_raw;

  // Inner pitch loop; the commanded pitch is tracked by a critically damped
  // reference model whose states provide bounded rate/acceleration
  // feedforward even with noisy force components.
  pitch_ref_track_.step(dec.theta_cmd, dt);
  const double e_th = wrap_angle(fb.theta_u - dec.theta_cmd);
  const double e_th_rate = fb.theta_u_rate - pitch_ref_track_.rate();
  pitch_integral_ += dt * (e_th + e_th_rate / prm_.svcs.k1[2]);
  pitch_integral_ = std::clamp(pitch_integral_, -prm_.integral_limit, prm_.integral_limit);
  const double u2 = inner_loop_pitch(e_th, e_th_rate, pitch_integral_,
                                     pitch_ref_track_.accel(), prm_.svcs, uav_);

  ControlCommand cmd{dec.thrust, u2};
  thrust_cmd_prev_ = saturate(cmd, uav_).thrust;

  debug_.mode = mode_;
  debug_.configuration = config_;
  debug_.v_ref = v_ref;
  debug_.r_ref = r_ref;
  debug_.alpha_ref = aref.alpha;
  debug_.zu_ref = setpoint_.altitude;
  debug_.theta_u_cmd = dec.theta_cmd;
  debug_.u_radial = u_r;
  debug_.u_tangential = u_a;
  debug_.tension_ff = tension_ff;
  debug_.pulling_law_active = pulling_valid;
  debug_.alpha_ref_saturated = aref.saturated;
  return cmd;
}

// ---------------------------------------------------------------------------
// CbncController
// ---------------------------------------------------------------------------

CbncController::CbncController(const ControllerParams& params, const Setpoint& sp,
                               const UavParams& up, const Environment& env)
    : prm_(params),
      setpoint_(sp),
      uav_(up),
      env_(env),
      v_ref_filter_(params.vref_cutoff_hz),
      pitch_ref_track_(params.ref_diff_cutoff_hz) {
  setpoint_.schedule.validate();
}

void CbncController::initialize(const Feedback& fb) {
  v_ref_filter_.reset(setpoint_.schedule.at(0.0));
  integral_.setZero();
  pitch_integral_ = 0.0;
  pitch_ref_track_.reset(fb.theta_u);
  theta_cmd_prev_ = fb.theta_u;
  debug_ = ControllerDebug{};
}

ControlCommand CbncController::update(const Feedback& fb, double t, double dt) {
  v_ref_filter_.step(setpoint_.schedule.at(t), dt);
  const double v_ref = v_ref_filter_.value();

  // Independent PID loops: surge velocity of the towed hull against the
  // commanded profile, vehicle elevation against the commanded altitude.
  const double e_v = v_ref - fb.v;
  const double e_v_rate = v_ref_filter_.rate() - fb.ax_b;
  const double e_z = setpoint_.altitude - fb.z_u;
  const double e_z_rate = -fb.vz_u;
  integral_[0] = std::clamp(integral_[0] + dt * e_v, -prm_.cbnc_integral_limit,
                            prm_.cbnc_integral_limit);
  integral_[1] = std::clamp(integral_[1] + dt * e_z, -prm_.cbnc_integral_limit,
                            prm_.cbnc_integral_limit);

  const double fx = prm_.cbnc.kp[0] * e_v + prm_.cbnc.ki[0] * integral_[0] +
                    prm_.cbnc.kd[0] * e_v_rate;
  const double fz = prm_.cbnc.kp[1] * e_z + prm_.cbnc.ki[1] * integral_[1] +
                    prm_.cbnc.kd[1] * e_z_rate;

  const double fz_total = fz + uav_.mass * env_.gravity;
  const double thrust = std::hypot(fx, fz_total);
  double theta_raw = theta_cmd_prev_;
  if (thrust > 1e-9) theta_raw = std::atan2(fx, fz_total);
  theta_cmd_prev_ = theta_raw;
  const double theta_cmd = uav_.pitch_limit * std::tanh(theta_raw / uav_.pitch_limit);

  // Shared inner pitch loop (third channel of the supervisory gain map).
  pitch_ref_track_.step(theta_cmd, dt);
  const double e_th = wrap_angle(fb.theta_u - theta_cmd);
  const double e_th_rate = fb.theta_u_rate - pitch_ref_track_.rate();
  pitch_integral_ += dt * (e_th + e_th_rate / prm_.svcs.k1[2]);
  pitch_integral_ = std::clamp(pitch_integral_, -prm_.integral_limit, prm_.integral_limit);
  const double u2 = inner_loop_pitch(e_th, e_th_rate, pitch_integral_,
                                     pitch_ref_track_.accel(), prm_.svcs, uav_);

  debug_.mode = Mode::Free;
  debug_.configuration = Configuration::Front;
  debug_.v_ref = v_ref;
  debug_.r_ref = 0.0;
  debug_.alpha_ref = 0.0;
  debug_.zu_ref = setpoint_.altitude;
  debug_.theta_u_cmd = theta_cmd;
  debug_.u_radial = 0.0;
  debug_.u_tangential = 0.0;
  debug_.tension_ff = 0.0;
  debug_.pulling_law_active = false;
  return {thrust, u2};
}

}  // namespace marinesim
