#include "marinesim/uav.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marinesim {

void UavParams::validate() const {
  if (mass <= 0.0 || inertia <= 0.0) throw std::invalid_argument("uav: non-positive mass/inertia");
  if (motor_time_constant <= 0.0) throw std::invalid_argument("uav: non-positive motor time constant");
  if (thrust_limit <= 0.0 || torque_limit <= 0.0) throw std::invalid_argument("uav: non-positive actuator limit");
  if (pitch_limit <= 0.0 || pitch_limit >= 1.5707963267948966) {
    throw std::invalid_argument("uav: pitch limit must lie in (0, pi/2)");
  }
  if (rotor_disk_area <= 0.0) throw std::invalid_argument("uav: non-positive rotor disk area");
}

ControlCommand saturate(const ControlCommand& cmd, const UavParams& p) {
  ControlCommand out;
  out.thrust = std::clamp(cmd.thrust, 0.0, p.thrust_limit);
  out.torque = std::clamp(cmd.torque, -p.torque_limit, p.torque_limit);
  return out;
}

ControlCommand actuator_update(const ControlCommand& cmd, const ControlCommand& realized,
                               double dt, const UavParams& p) {
  if (dt <= 0.0) throw std::invalid_argument("actuator_update: dt <= 0");
  const ControlCommand target = saturate(cmd, p);
  const double a = dt / p.motor_time_constant;
  ControlCommand out;
  out.thrust = realized.thrust + a * (target.thrust - realized.thrust);
  out.torque = realized.torque + a * (target.torque - realized.torque);
  return out;
}

Eigen::Vector3d uav_accel_decoupled(const UavState& s, const Environment& env,
                                    double tension, double alpha,
                                    const ControlCommand& u, const UavParams& p) {
  if (tension < 0.0) throw std::invalid_argument("uav_accel_decoupled: negative tension");
  const double rel_x = s.vx - env.wind;
  const double d1 = p.drag_coefficient * p.frontal_area * 0.5 * env.air_density * std::abs(rel_x);
  Eigen::Vector3d acc;
  acc.x() = (u.thrust * std::sin(s.pitch) - tension * std::cos(alpha) - d1 * rel_x) / p.mass;
  acc.y() = (u.thrust * std::cos(s.pitch) - tension * std::sin(alpha) -
             p.vertical_drag * s.vz) / p.mass - env.gravity;
  acc.z() = (u.torque - p.rotational_drag * s.pitch_rate) / p.inertia;
  return acc;
}

}  // namespace marinesim
