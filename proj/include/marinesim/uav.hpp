#ifndef MARINESIM_UAV_HPP
#define MARINESIM_UAV_HPP

#include <Eigen/Dense>

#include "marinesim/environment.hpp"

namespace marinesim {

// Planar quadrotor. Pitch theta_u is clockwise positive, so positive pitch
// tips the thrust vector towards +x.
struct UavParams {
  double mass = 1.8;       // m_u [kg]
  double inertia = 0.03;   // J_u [kg m^2]

  // Quadratic horizontal drag D_u1 = C_u1 * A_cs1 * 0.5 * rho_a * |vx - wind|,
  // linear vertical drag D_u2, rotational drag D_u3. Applied to the free
  // (slack-cable) vehicle only; the coupled model neglects air friction
  // against the dominant water-side dissipation.
  double drag_coefficient = 1.0;   // C_u1 [-]
  double frontal_area = 0.05;      // A_cs1 [m^2]
  double vertical_drag = 0.1;      // D_u2 [N s/m]
  double rotational_drag = 0.0;    // D_u3 [N m s]

  double motor_time_constant = 0.05;  // tau_m [s]
  double thrust_limit = 160.0;        // [N]
  double torque_limit = 11.2;         // [N m]
  double pitch_limit = 0.7853981633974483;  // theta_u,m [rad]

  double rotor_disk_area = 0.5;  // [m^2], momentum-theory power model

  void validate() const;
};

struct UavState {
  double x = 0.0;
  double z = 0.0;
  double pitch = 0.0;  // theta_u [rad], clockwise positive
  double vx = 0.0;
  double vz = 0.0;
  double pitch_rate = 0.0;
};

// Total thrust and pitch torque.
struct ControlCommand {
  double thrust = 0.0;  // u1 [N]
  double torque = 0.0;  // u2 [N m]
};

ControlCommand saturate(const ControlCommand& cmd, const UavParams& p);

// First-order actuator lag towards the saturated command; one explicit step
// of d(realized)/dt = (sat(cmd) - realized) / tau_m.
ControlCommand actuator_update(const ControlCommand& cmd, const ControlCommand& realized,
                               double dt, const UavParams& p);

// Newton acceleration of the free vehicle under cable tension T along the
// elevation angle alpha. T = 0 when the cable is slack.
Eigen::Vector3d uav_accel_decoupled(const UavState& s, const Environment& env,
                                    double tension, double alpha,
                                    const ControlCommand& u, const UavParams& p);

}  // namespace marinesim

#endif
