#include "marinesim/buoy.hpp"

#include <cmath>
#include <stdexcept>

namespace marinesim {

BuoyParams BuoyParams::standard(double water_density) {
  BuoyParams p;
  p.volume = 4.0 * p.mass / water_density;
  p.width = p.volume / (p.length * p.height);
  p.added_mass_surge = 0.05 * p.mass;
  p.added_mass_heave = p.mass;
  p.pitch_inertia = p.mass * (p.length * p.length + p.height * p.height) / 12.0;
  return p;
}

void BuoyParams::validate(double water_density) const {
  if (length <= 0.0 || height <= 0.0 || width <= 0.0 || volume <= 0.0) {
    throw std::invalid_argument("buoy: non-positive dimension");
  }
  if (mass <= 0.0 || mass >= water_density * volume) {
    throw std::invalid_argument("buoy: mass must lie in (0, rho_w * volume) to float");
  }
  if (pitch_inertia <= 0.0) throw std::invalid_argument("buoy: non-positive pitch inertia");
  if (skin_friction_scale < 0.0) throw std::invalid_argument("buoy: negative friction scale");
}

double immersed_volume(double delta_h, const BuoyParams& p) {
  if (delta_h > 0.5 * p.height) return p.volume;
  if (delta_h < -0.5 * p.height) return 0.0;
  return 0.5 * p.volume + p.length * p.width * delta_h;
}

double wetted_area(double delta_h, const BuoyParams& p) {
  if (delta_h > 0.5 * p.height) return 4.0 * p.length * p.height;
  if (delta_h < -0.5 * p.height) return 0.0;
  return p.length * p.height + 2.0 * p.length * (0.5 * p.height + delta_h);
}

double skin_friction_coeff(double v_rel, const BuoyParams& p, double kinematic_viscosity) {
  const double re = std::max(std::abs(v_rel) * p.length / kinematic_viscosity, 1e5);
  const double d = std::log10(re) - 2.0;
  return 0.075 / (d * d);
}

Eigen::Matrix2d body_to_inertial(double theta_cw) {
  const double c = std::cos(theta_cw);
  const double s = std::sin(theta_cw);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

BuoyMatrices hydrodynamic_matrices(const BuoyState& s, const Environment& env,
                                   double delta_h, const BuoyParams& p, double t) {
  BuoyMatrices out;
  out.airborne = delta_h < -0.5 * p.height;
  out.immersed = immersed_volume(delta_h, p);
  out.wetted = wetted_area(delta_h, p);

  if (out.airborne) {
    out.M.diagonal() << p.mass, p.mass, p.pitch_inertia;
    return out;
  }

  // Water velocity sampled at the hull, with the sampling depth clamped to
  // the mean surface.
  out.water_vel = env.water_velocity(s.x, std::min(s.z, 0.0), t);
  const double rel_surge = s.vx - out.water_vel.x();
  const double rel_heave = s.vz - out.water_vel.y();
  const double rel_speed = std::hypot(rel_surge, rel_heave);

  const double cs = skin_friction_coeff(rel_surge, p, env.kinematic_viscosity);
  const double ds = p.skin_friction_scale * cs * out.wetted * 0.5 *
                    env.water_density * rel_speed;

  Eigen::Vector3d m_body(p.mass + p.added_mass_surge, p.mass + p.added_mass_heave,
                         p.pitch_inertia + p.added_inertia_pitch);
  Eigen::Vector3d d_body(p.potential_damping_surge + ds,
                         p.potential_damping_heave + ds,
                         p.potential_damping_pitch +
                             p.skin_friction_scale * p.pitch_skin_friction);

  const Eigen::Matrix2d r = body_to_inertial(s.pitch);
  out.M.topLeftCorner<2, 2>() = r * m_body.head<2>().asDiagonal() * r.transpose();
  out.M(2, 2) = m_body.z();
  out.D.topLeftCorner<2, 2>() = r * d_body.head<2>().asDiagonal() * r.transpose();
  out.D(2, 2) = d_body.z();
  // C = 0.5 * Mdot. Mdot is proportional to the buoy pitch rate, which is
  // neglected throughout, so the Coriolis matrix stays zero.
  return out;
}

Eigen::Vector3d buoy_accel_decoupled(const BuoyState& s, const Environment& env,
                                     double tension, double alpha,
                                     const BuoyParams& p, double t) {
  if (tension < 0.0) throw std::invalid_argument("buoy_accel_decoupled: negative tension");
  const double delta_h = env.elevation(s.x, t) - s.z;
  const BuoyMatrices hm = hydrodynamic_matrices(s, env, delta_h, p, t);

  const double buoyancy = env.water_density * env.gravity * hm.immersed;
  const double restoring = hm.airborne ? 0.0 : p.pitch_restoring * std::sin(s.pitch);

  Eigen::Vector3d tau(tension * std::cos(alpha), buoyancy + tension * std::sin(alpha),
                      restoring);
  Eigen::Vector3d gravity(0.0, p.mass * env.gravity, 0.0);
  Eigen::Vector3d vel(s.vx, s.vz, s.pitch_rate);
  Eigen::Vector3d rel(s.vx - hm.water_vel.x(), s.vz - hm.water_vel.y(), s.pitch_rate);

  const Eigen::Vector3d rhs = tau - hm.C * vel - hm.D * rel - gravity;
  Eigen::LDLT<Eigen::Matrix3d> solver(hm.M);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("buoy_accel_decoupled: inertia matrix assembly failed");
  }
  return solver.solve(rhs);
}

}  // namespace marinesim
