#include "marinesim/coupled.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace marinesim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

void CableParams::validate() const {
  if (length <= 0.0) throw std::invalid_argument("cable: non-positive length");
  if (epsilon_alpha <= 0.0 || epsilon_alpha >= kHalfPi) {
    throw std::invalid_argument("cable: epsilon_alpha must lie in (0, pi/2)");
  }
  if (slack_tolerance < 0.0) throw std::invalid_argument("cable: negative slack tolerance");
}

PolarKinematics to_polar(const BuoyState& b, const UavState& u) {
  const double dx = u.x - b.x;
  const double dz = u.z - b.z;
  const double r = std::hypot(dx, dz);
  if (r < 1e-12) throw std::domain_error("to_polar: coincident UAV and buoy");
  PolarKinematics p;
  p.r = r;
  p.alpha = std::atan2(dz, dx);
  const double dvx = u.vx - b.vx;
  const double dvz = u.vz - b.vz;
  const double c = dx / r;
  const double s = dz / r;
  p.rdot = c * dvx + s * dvz;
  p.alphadot = (-s * dvx + c * dvz) / r;
  return p;
}

UavState uav_from_coupled(const CoupledState& s, double l) {
  const double c = std::cos(s.alpha());
  const double sn = std::sin(s.alpha());
  UavState u;
  u.x = s.x_b() + l * c;
  u.z = s.z_b() + l * sn;
  u.pitch = s.theta_u();
  u.vx = s.qd[0] - l * sn * s.qd[2];
  u.vz = s.qd[1] + l * c * s.qd[2];
  u.pitch_rate = s.qd[3];
  return u;
}

BuoyState buoy_from_coupled(const CoupledState& s) {
  BuoyState b;
  b.x = s.x_b();
  b.z = s.z_b();
  b.pitch = s.theta_b();
  b.vx = s.qd[0];
  b.vz = s.qd[1];
  b.pitch_rate = s.qd[4];
  return b;
}

CoupledState coupled_from_bodies(const BuoyState& b, const UavState& u) {
  const PolarKinematics p = to_polar(b, u);
  CoupledState s;
  s.q << b.x, b.z, p.alpha, u.pitch, b.pitch;
  s.qd << b.vx, b.vz, p.alphadot, u.pitch_rate, b.pitch_rate;
  return s;
}

CoupledAccel coupled_accel(const CoupledState& s, const Environment& env,
                           const ControlCommand& u, const BuoyParams& bp,
                           const UavParams& up, const CableParams& cp,
                           double t, PitchMode pitch_mode) {
  const double l = cp.length;
  const double alpha = s.alpha();
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const double ctu = std::cos(s.theta_u());
  const double stu = std::sin(s.theta_u());
  const double adot = s.qd[2];

  CoupledAccel out;
  out.zeta = env.elevation(s.x_b(), t);
  out.delta_h = out.zeta - s.z_b();

  const BuoyState b = buoy_from_coupled(s);
  out.buoy = hydrodynamic_matrices(b, env, out.delta_h, bp, t);
  const Eigen::Matrix3d& mb = out.buoy.M;
  const Eigen::Matrix3d& db = out.buoy.D;

  // Relative velocity against the ambient water; out of the water the damping
  // matrix is null so the value is irrelevant.
  const double rel_surge = s.qd[0] - out.buoy.water_vel.x();
  const double rel_heave = s.qd[1] - out.buoy.water_vel.y();

  Eigen::Matrix3d m3 = Eigen::Matrix3d::Zero();
  m3(0, 0) = mb(0, 0) + up.mass;
  m3(0, 1) = mb(0, 1);
  m3(1, 0) = mb(0, 1);
  m3(1, 1) = mb(1, 1) + up.mass;
  m3(0, 2) = -up.mass * l * sa;
  m3(2, 0) = m3(0, 2);
  m3(1, 2) = up.mass * l * ca;
  m3(2, 1) = m3(1, 2);
  m3(2, 2) = up.mass * l * l;

  const double buoyancy = env.water_density * env.gravity * out.buoy.immersed;

  Eigen::Vector3d rhs;
  rhs[0] = u.thrust * stu + up.mass * l * ca * adot * adot -
           db(0, 0) * rel_surge - db(0, 1) * rel_heave;
  rhs[1] = u.thrust * ctu + buoyancy + up.mass * l * sa * adot * adot -
           db(1, 0) * rel_surge - db(1, 1) * rel_heave -
           (bp.mass + up.mass) * env.gravity;
  rhs[2] = u.thrust * l * std::cos(alpha + s.theta_u()) -
           up.mass * env.gravity * l * ca;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m3);
  const double ev_min = es.eigenvalues()(0);
  const double ev_max = es.eigenvalues()(2);
  if (!(ev_min > 0.0) || !std::isfinite(ev_max) || ev_max / ev_min > 1e12) {
    std::ostringstream msg;
    msg << "coupled_accel: ill-conditioned inertia matrix (eigenvalues "
        << es.eigenvalues().transpose() << ") at t=" << t << " q=["
        << s.q.transpose() << "] qd=[" << s.qd.transpose() << "]";
    throw std::runtime_error(msg.str());
  }
  const Eigen::Vector3d acc =
      es.eigenvectors() *
      (es.eigenvectors().transpose() * rhs).cwiseQuotient(es.eigenvalues());

  out.qdd.head<3>() = acc;
  out.qdd[3] = u.torque / up.inertia;
  if (pitch_mode == PitchMode::Dynamic) {
    const double restoring = out.buoy.airborne ? 0.0 : bp.pitch_restoring * std::sin(s.theta_b());
    out.qdd[4] = (restoring - db(2, 2) * s.qd[4]) / mb(2, 2);
  } else {
    out.qdd[4] = 0.0;  // prescribed externally from the wave slope
  }
  return out;
}

double cable_tension(const CoupledState& s, const ControlCommand& u,
                     const Vector5d& qdd, const Environment& env,
                     const BuoyParams& bp, const UavParams& up,
                     const CableParams& cp, double t) {
  const double alpha = s.alpha();
  if (std::abs(alpha - kHalfPi) > cp.epsilon_alpha) {
    // Buoy-side expression: surge row of the free-buoy dynamics.
    const BuoyState b = buoy_from_coupled(s);
    const double delta_h = env.elevation(s.x_b(), t) - s.z_b();
    const BuoyMatrices hm = hydrodynamic_matrices(b, env, delta_h, bp, t);
    const double rel_surge = s.qd[0] - hm.water_vel.x();
    const double rel_heave = s.qd[1] - hm.water_vel.y();
    const double num = hm.M(0, 0) * qdd[0] + hm.M(0, 1) * qdd[1] +
                       hm.D(0, 0) * rel_surge + hm.D(0, 1) * rel_heave +
                       hm.C(0, 0) * s.qd[0] + hm.C(0, 1) * s.qd[1];
    return num / std::cos(alpha);
  }
  // UAV-side expression, regular near the vertical configuration.
  const Eigen::Vector2d uav_acc = uav_accel_from_coupled(s, qdd, cp.length);
  return (u.thrust * std::cos(s.theta_u()) - up.mass * env.gravity -
          up.mass * uav_acc.y()) / std::sin(alpha);
}

Eigen::Vector2d uav_accel_from_coupled(const CoupledState& s, const Vector5d& qdd, double l) {
  const double ca = std::cos(s.alpha());
  const double sa = std::sin(s.alpha());
  const double adot = s.qd[2];
  Eigen::Vector2d acc;
  acc.x() = qdd[0] - l * (sa * qdd[2] + ca * adot * adot);
  acc.y() = qdd[1] + l * (ca * qdd[2] - sa * adot * adot);
  return acc;
}

Coupling detect_transition(Coupling current, const PolarKinematics& polar,
                           double tension, const CableParams& cp) {
  if (current == Coupling::Coupled) {
    return tension <= 0.0 ? Coupling::Decoupled : Coupling::Coupled;
  }
  if (polar.r >= cp.length - cp.slack_tolerance && polar.rdot > 0.0) {
    return Coupling::Coupled;
  }
  return Coupling::Decoupled;
}

void apply_coupling_impulse(BuoyState& b, UavState& u, const Eigen::Matrix2d& mb_trans,
                            double uav_mass) {
  const double dx = u.x - b.x;
  const double dz = u.z - b.z;
  const double r = std::hypot(dx, dz);
  if (r < 1e-12) throw std::domain_error("apply_coupling_impulse: coincident bodies");
  const Eigen::Vector2d e(dx / r, dz / r);
  const Eigen::Vector2d vrel(u.vx - b.vx, u.vz - b.vz);
  const double rdot = e.dot(vrel);
  if (rdot <= 0.0) return;  // already closing, nothing to absorb

  // Project the hull inertia (added mass included) onto the cable line so the
  // exchange is strictly radial and the tangential rates survive the impact.
  const double buoy_eff_mass = e.dot(mb_trans * e);
  const double reduced = 1.0 / uav_mass + 1.0 / buoy_eff_mass;
  const double impulse = rdot / reduced;  // tensile impulse along the cable

  u.vx -= impulse / uav_mass * e.x();
  u.vz -= impulse / uav_mass * e.y();
  b.vx += impulse / buoy_eff_mass * e.x();
  b.vz += impulse / buoy_eff_mass * e.y();
}

ConstraintReport check_constraints(double tension, double alpha, double immersed_vol,
                                   double thrust, double theta_u, const BuoyParams& bp,
                                   const SafetyMargins& margins, const Environment& env) {
  ConstraintReport rep;
  const double sa = std::sin(alpha);
  if (sa > 0.0 && tension >= bp.mass * env.gravity / sa) rep.hanging_risk = true;
  rep.airborne = immersed_vol <= 0.0;
  const double gate_den = std::tan(alpha) * std::sin(theta_u);
  if (gate_den > 0.0) {
    const double limit = bp.mass * (1.0 - margins.mass_fraction) * env.gravity / gate_den;
    rep.thrust_gate = thrust >= limit;
  }
  return rep;
}

}  // namespace marinesim
