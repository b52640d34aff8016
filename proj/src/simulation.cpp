#include "marinesim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace marinesim {

namespace {

struct SimAbort {
  SimStatus status;
  std::string reason;
};

bool all_finite(const double* v, int n) {
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace

double induced_power(double thrust, double air_density, double disk_area) {
  return std::pow(std::max(thrust, 0.0), 1.5) / std::sqrt(2.0 * air_density * disk_area);
}

Simulation::Simulation(const ScenarioConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  initialize();
}

void Simulation::initialize() {
  steps_per_control_ = static_cast<int>(std::llround(1.0 / (cfg_.control.rate_hz * cfg_.dt)));

  const Environment& env = cfg_.environment;
  const double rest_volume = cfg_.buoy.mass / env.water_density;
  const double rest_delta_h =
      (rest_volume - 0.5 * cfg_.buoy.volume) / (cfg_.buoy.length * cfg_.buoy.width);

  // Buoy starts on station at its unloaded draft, moving with the local
  // zero-time water velocity.
  buoy_ = BuoyState{};
  buoy_.x = 0.0;
  buoy_.z = env.elevation(0.0, 0.0) - rest_delta_h;
  const Eigen::Vector2d vw = env.water_velocity(0.0, std::min(buoy_.z, 0.0), 0.0);
  buoy_.vx = vw.x();
  buoy_.vz = vw.y();
  buoy_.pitch = env.buoy_pitch(0.0, 0.0);
  buoy_.pitch_rate = env.buoy_pitch_rate(0.0, buoy_.vx, 0.0);

  // Vehicle hovers at the front standby station.
  const double r_sb = cfg_.control.standby_radius_factor * cfg_.cable.length;
  const double s0 = std::clamp((cfg_.setpoint.altitude - buoy_.z) / r_sb, -1.0, 1.0);
  const double alpha0 = std::asin(s0);
  uav_ = UavState{};
  uav_.x = buoy_.x + r_sb * std::cos(alpha0);
  uav_.z = buoy_.z + r_sb * std::sin(alpha0);

  realized_ = ControlCommand{cfg_.uav.mass * env.gravity, 0.0};
  command_ = realized_;
  coupling_ = Coupling::Decoupled;
  t_ = 0.0;
  step_count_ = 0;

  // The per-run seed perturbs the noise streams so reruns with a different
  // scenario seed draw different realizations while staying reproducible.
  NoiseSpec noise = cfg_.noise;
  noise.seed ^= 0x9e3779b97f4a7c15ULL * (cfg_.seed + 1);
  sensors_ = std::make_unique<SensorModel>(noise, cfg_.dt * steps_per_control_);
  partial_.noise_calibration_error = cfg_.noise.enabled ? sensors_->verify_calibration(60.0) : 0.0;

  if (cfg_.controller == ControllerType::Svcs) {
    controller_ = std::make_unique<SvcsController>(cfg_.control, cfg_.setpoint, cfg_.buoy,
                                                   cfg_.uav, cfg_.cable, env);
  } else {
    controller_ = std::make_unique<CbncController>(cfg_.control, cfg_.setpoint, cfg_.uav, env);
  }

  refresh_dynamics_cache();
  controller_->initialize(sensors_->measure(truth_feedback()));
  control_update();
  log_and_accumulate();
}

BuoyState Simulation::buoy() const {
  return coupling_ == Coupling::Coupled ? buoy_from_coupled(coupled_) : buoy_;
}

UavState Simulation::uav() const {
  return coupling_ == Coupling::Coupled ? uav_from_coupled(coupled_, cfg_.cable.length)
                                        : uav_;
}

Feedback Simulation::truth_feedback() const {
  const BuoyState b = buoy();
  const UavState u = uav();
  Feedback fb;
  fb.x_u = u.x;
  fb.z_u = u.z;
  fb.theta_u = u.pitch;
  fb.vx_u = u.vx;
  fb.vz_u = u.vz;
  fb.theta_u_rate = u.pitch_rate;
  fb.ax_u = uav_acc_.x();
  fb.az_u = uav_acc_.y();

  if (coupling_ == Coupling::Coupled) {
    fb.r = cfg_.cable.length;
    fb.alpha = coupled_.alpha();
    fb.rdot = 0.0;
    fb.alphadot = coupled_.qd[2];
    fb.rddot = 0.0;
    fb.alphaddot = qdd_[2];
  } else {
    const PolarKinematics p = to_polar(b, u);
    fb.r = p.r;
    fb.alpha = p.alpha;
    fb.rdot = p.rdot;
    fb.alphadot = p.alphadot;
    const Eigen::Vector2d da(uav_acc_.x() - buoy_acc_.x(), uav_acc_.y() - buoy_acc_.y());
    const Eigen::Vector2d e(std::cos(p.alpha), std::sin(p.alpha));
    const Eigen::Vector2d tangent(-e.y(), e.x());
    fb.rddot = e.dot(da) + p.r * p.alphadot * p.alphadot;
    fb.alphaddot = (tangent.dot(da) - 2.0 * p.rdot * p.alphadot) / p.r;
  }

  fb.x_b = b.x;
  fb.z_b = b.z;
  fb.v = b.vx;
  fb.vz_b = b.vz;
  fb.ax_b = buoy_acc_.x();
  fb.az_b = buoy_acc_.y();
  return fb;
}

void Simulation::control_update() {
  last_fb_ = sensors_->measure(truth_feedback());
  command_ = controller_->update(last_fb_, t_, cfg_.dt * steps_per_control_);
}

void Simulation::refresh_dynamics_cache() {
  const Environment& env = cfg_.environment;
  const BuoyState b = buoy();
  zeta_ = env.elevation(b.x, t_);
  const double delta_h = zeta_ - b.z;
  vol_ratio_ = immersed_volume(delta_h, cfg_.buoy) / cfg_.buoy.volume;

  if (coupling_ == Coupling::Coupled) {
    const CoupledAccel res = coupled_accel(coupled_, env, realized_, cfg_.buoy, cfg_.uav,
                                           cfg_.cable, t_, cfg_.pitch_mode);
    qdd_ = res.qdd;
    tension_ = cable_tension(coupled_, realized_, qdd_, env, cfg_.buoy, cfg_.uav,
                             cfg_.cable, t_);
    const Eigen::Vector2d ua = uav_accel_from_coupled(coupled_, qdd_, cfg_.cable.length);
    uav_acc_ << ua.x(), ua.y(), qdd_[3];
    buoy_acc_ << qdd_[0], qdd_[1], qdd_[4];
  } else {
    tension_ = 0.0;
    buoy_acc_ = buoy_accel_decoupled(buoy_, env, 0.0, 0.0, cfg_.buoy, t_);
    uav_acc_ = uav_accel_decoupled(uav_, env, 0.0, 0.0, realized_, cfg_.uav);
  }
}

void Simulation::integrate_dt() {
  const Environment& env = cfg_.environment;
  const double dt = cfg_.dt;
  const ControlCommand target = saturate(command_, cfg_.uav);
  const double tau = cfg_.uav.motor_time_constant;
  const bool kinematic = cfg_.pitch_mode == PitchMode::Kinematic;

  if (coupling_ == Coupling::Coupled) {
    using Vec12 = Eigen::Matrix<double, 12, 1>;
    auto deriv = [&](double tt, const Vec12& y) {
      CoupledState st;
      st.q = y.head<5>();
      st.qd = y.segment<5>(5);
      if (kinematic) {
        st.q[4] = env.buoy_pitch(st.q[0], tt);
        st.qd[4] = env.buoy_pitch_rate(st.q[0], st.qd[0], tt);
      }
      const ControlCommand u{y[10], y[11]};
      const CoupledAccel res =
          coupled_accel(st, env, u, cfg_.buoy, cfg_.uav, cfg_.cable, tt, cfg_.pitch_mode);
      Vec12 dy;
      dy.head<5>() = st.qd;
      dy.segment<5>(5) = res.qdd;
      dy[10] = (target.thrust - y[10]) / tau;
      dy[11] = (target.torque - y[11]) / tau;
      return dy;
    };
    Vec12 y;
    y.head<5>() = coupled_.q;
    y.segment<5>(5) = coupled_.qd;
    y[10] = realized_.thrust;
    y[11] = realized_.torque;

    const Vec12 k1 = deriv(t_, y);
    const Vec12 k2 = deriv(t_ + 0.5 * dt, y + 0.5 * dt * k1);
    const Vec12 k3 = deriv(t_ + 0.5 * dt, y + 0.5 * dt * k2);
    const Vec12 k4 = deriv(t_ + dt, y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!all_finite(y.data(), 12)) abort_numeric("non-finite coupled state");
    coupled_.q = y.head<5>();
    coupled_.qd = y.segment<5>(5);
    if (kinematic) {
      coupled_.q[4] = env.buoy_pitch(coupled_.q[0], t_ + dt);
      coupled_.qd[4] = env.buoy_pitch_rate(coupled_.q[0], coupled_.qd[0], t_ + dt);
    }
    realized_ = ControlCommand{y[10], y[11]};
  } else {
    using Vec14 = Eigen::Matrix<double, 14, 1>;
    auto deriv = [&](double tt, const Vec14& y) {
      BuoyState b{y[0], y[1], y[2], y[6], y[7], y[8]};
      if (kinematic) {
        b.pitch = env.buoy_pitch(b.x, tt);
        b.pitch_rate = env.buoy_pitch_rate(b.x, b.vx, tt);
      }
      const UavState u{y[3], y[4], y[5], y[9], y[10], y[11]};
      const ControlCommand cu{y[12], y[13]};
      const Eigen::Vector3d ab = buoy_accel_decoupled(b, env, 0.0, 0.0, cfg_.buoy, tt);
      const Eigen::Vector3d au = uav_accel_decoupled(u, env, 0.0, 0.0, cu, cfg_.uav);
      Vec14 dy;
      dy << y[6], y[7], y[8], y[9], y[10], y[11], ab.x(), ab.y(), ab.z(), au.x(),
          au.y(), au.z(), (target.thrust - y[12]) / tau, (target.torque - y[13]) / tau;
      if (kinematic) dy[2] = b.pitch_rate;
      return dy;
    };
    Vec14 y;
    y << buoy_.x, buoy_.z, buoy_.pitch, uav_.x, uav_.z, uav_.pitch, buoy_.vx, buoy_.vz,
        buoy_.pitch_rate, uav_.vx, uav_.vz, uav_.pitch_rate, realized_.thrust,
        realized_.torque;

    const Vec14 k1 = deriv(t_, y);
    const Vec14 k2 = deriv(t_ + 0.5 * dt, y + 0.5 * dt * k1);
    const Vec14 k3 = deriv(t_ + 0.5 * dt, y + 0.5 * dt * k2);
    const Vec14 k4 = deriv(t_ + dt, y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!all_finite(y.data(), 14)) abort_numeric("non-finite decoupled state");
    buoy_ = BuoyState{y[0], y[1], y[2], y[6], y[7], y[8]};
    uav_ = UavState{y[3], y[4], y[5], y[9], y[10], y[11]};
    if (kinematic) {
      buoy_.pitch = env.buoy_pitch(buoy_.x, t_ + dt);
      buoy_.pitch_rate = env.buoy_pitch_rate(buoy_.x, buoy_.vx, t_ + dt);
    }
    realized_ = ControlCommand{y[12], y[13]};
  }
}

void Simulation::handle_transition() {
  if (coupling_ == Coupling::Coupled) {
    PolarKinematics p;
    p.r = cfg_.cable.length;
    if (detect_transition(Coupling::Coupled, p, tension_, cfg_.cable) ==
        Coupling::Decoupled) {
      buoy_ = buoy_from_coupled(coupled_);
      uav_ = uav_from_coupled(coupled_, cfg_.cable.length);
      coupling_ = Coupling::Decoupled;
      tension_ = 0.0;
      ++partial_.decouple_events;
      refresh_dynamics_cache();
    }
    return;
  }

  const PolarKinematics p = to_polar(buoy_, uav_);
  if (detect_transition(Coupling::Decoupled, p, 0.0, cfg_.cable) == Coupling::Coupled) {
    const double delta_h = cfg_.environment.elevation(buoy_.x, t_) - buoy_.z;
    const BuoyMatrices hm =
        hydrodynamic_matrices(buoy_, cfg_.environment, delta_h, cfg_.buoy, t_);
    apply_coupling_impulse(buoy_, uav_, hm.M.topLeftCorner<2, 2>(), cfg_.uav.mass);
    // Snap the vehicle back onto the cable circle (overshoot is at most one
    // step of radial travel).
    const double scale = cfg_.cable.length / p.r;
    uav_.x = buoy_.x + (uav_.x - buoy_.x) * scale;
    uav_.z = buoy_.z + (uav_.z - buoy_.z) * scale;
    coupled_ = coupled_from_bodies(buoy_, uav_);
    coupling_ = Coupling::Coupled;
    ++partial_.couple_events;
    refresh_dynamics_cache();
    // The impulse can exhaust the tension immediately (grazing contact); let
    // the next step's detection sort that out rather than oscillating here.
  }
}

void Simulation::log_and_accumulate() {
  const BuoyState b = buoy();
  const UavState u = uav();
  const auto& dbg = controller_->debug();

  const ConstraintReport rep =
      check_constraints(tension_, coupling_ == Coupling::Coupled
                                      ? coupled_.alpha()
                                      : to_polar(b, u).alpha,
                        vol_ratio_ * cfg_.buoy.volume, realized_.thrust, u.pitch,
                        cfg_.buoy, cfg_.margins, cfg_.environment);

  partial_.any_hanging_risk |= rep.hanging_risk;
  partial_.any_airborne |= rep.airborne;
  partial_.max_tension = std::max(partial_.max_tension, tension_);
  partial_.min_vol_ratio = std::min(partial_.min_vol_ratio, vol_ratio_);
  if (rep.airborne && partial_.first_airborne_time < 0.0) {
    partial_.first_airborne_time = t_;
    partial_.first_airborne_speed = std::abs(b.vx);
  }

  sum_abs_v_err_ += std::abs(b.vx - dbg.v_ref);
  sum_abs_z_err_ += std::abs(u.z - dbg.zu_ref);
  ++metric_samples_;
  energy_ += cfg_.dt * induced_power(realized_.thrust, cfg_.environment.air_density,
                                     cfg_.uav.rotor_disk_area);

  if (step_count_ % cfg_.log_decimation != 0) return;

  TraceRow row;
  row.t = t_;
  row.mode = dbg.mode;
  row.configuration = dbg.configuration;
  row.coupled = coupling_ == Coupling::Coupled ? 1 : 0;
  row.x_b = b.x;
  row.z_b = b.z;
  row.theta_b = b.pitch;
  row.vx_b = b.vx;
  row.vz_b = b.vz;
  row.w_b = b.pitch_rate;
  row.x_u = u.x;
  row.z_u = u.z;
  row.theta_u = u.pitch;
  row.vx_u = u.vx;
  row.vz_u = u.vz;
  row.w_u = u.pitch_rate;
  if (coupling_ == Coupling::Coupled) {
    row.r = cfg_.cable.length;
    row.alpha = coupled_.alpha();
    row.rdot = 0.0;
    row.alphadot = coupled_.qd[2];
  } else {
    const PolarKinematics p = to_polar(b, u);
    row.r = p.r;
    row.alpha = p.alpha;
    row.rdot = p.rdot;
    row.alphadot = p.alphadot;
  }
  row.tension = tension_;
  row.vol_ratio = vol_ratio_;
  row.zeta = zeta_;
  row.u1_cmd = command_.thrust;
  row.u1 = realized_.thrust;
  row.u2_cmd = command_.torque;
  row.u2 = realized_.torque;
  row.v_ref = dbg.v_ref;
  row.r_ref = dbg.r_ref;
  row.alpha_ref = dbg.alpha_ref;
  row.zu_ref = dbg.zu_ref;
  row.hanging_risk = rep.hanging_risk ? 1 : 0;
  row.airborne = rep.airborne ? 1 : 0;
  row.thrust_gate = rep.thrust_gate ? 1 : 0;
  row.fb_v = last_fb_.v;
  row.fb_z_u = last_fb_.z_u;
  row.fb_r = last_fb_.r;
  row.fb_alpha = last_fb_.alpha;
  row.fb_theta_u = last_fb_.theta_u;
  trace_.push(row);
}

void Simulation::abort_numeric(const std::string& what) {
  std::ostringstream msg;
  msg << what << " at t=" << t_;
  if (!cfg_.csv_path.empty()) {
    try {
      trace_.write_csv(cfg_.csv_path + ".aborted");
      msg << " (partial trace dumped to " << cfg_.csv_path << ".aborted)";
    } catch (const std::exception&) {
    }
  }
  throw SimAbort{SimStatus::NumericFailure, msg.str()};
}

SimStatus Simulation::step_period() {
  try {
    for (int i = 0; i < steps_per_control_; ++i) {
      integrate_dt();
      ++step_count_;
      t_ = step_count_ * cfg_.dt;
      refresh_dynamics_cache();
      handle_transition();
      log_and_accumulate();
      if (cfg_.violation_policy == ViolationPolicy::Halt &&
          (partial_.any_hanging_risk || partial_.any_airborne)) {
        abort_reason_ = "constraint violation with halt policy";
        return SimStatus::ConstraintHalt;
      }
    }
    control_update();
  } catch (const SimAbort& a) {
    abort_reason_ = a.reason;
    return a.status;
  } catch (const std::exception& e) {
    abort_reason_ = e.what();
    if (!cfg_.csv_path.empty()) {
      try {
        trace_.write_csv(cfg_.csv_path + ".aborted");
      } catch (const std::exception&) {
      }
    }
    return SimStatus::NumericFailure;
  }
  return SimStatus::Ok;
}

SimStatus Simulation::run() {
  const long total_steps = static_cast<long>(std::llround(cfg_.duration / cfg_.dt));
  while (step_count_ < total_steps) {
    const SimStatus st = step_period();
    if (st != SimStatus::Ok) return st;
  }
  if (!cfg_.csv_path.empty()) trace_.write_csv(cfg_.csv_path);
  return SimStatus::Ok;
}

MetricsReport Simulation::metrics() const {
  MetricsReport m = partial_;
  m.duration = t_;
  const long n = std::max<long>(metric_samples_, 1);
  m.mean_abs_v_error = sum_abs_v_err_ / n;
  m.mean_abs_z_error = sum_abs_z_err_ / n;
  m.energy = energy_;
  return m;
}

}  // namespace marinesim
