#ifndef MARINESIM_COUPLED_HPP
#define MARINESIM_COUPLED_HPP

#include <Eigen/Dense>

#include "marinesim/buoy.hpp"
#include "marinesim/environment.hpp"
#include "marinesim/uav.hpp"

namespace marinesim {

using Vector5d = Eigen::Matrix<double, 5, 1>;

struct CableParams {
  double length = 7.0;           // l [m]
  double epsilon_alpha = 0.05;   // singular band half width around alpha = pi/2 [rad]
  double slack_tolerance = 1e-9; // numerical slop on r <= l [m]

  void validate() const;
};

// Safety margins bounding the admissible operating envelope.
struct SafetyMargins {
  double tension = 5.0;       // eps_T [N]
  double immersion = 0.05;    // eps_vol [-], fraction of the hull volume
  double mass_fraction = 0.1; // eps_m [-], thrust-gate margin
};

enum class Coupling { Decoupled = 0, Coupled = 1 };

// How the buoy pitch row evolves: prescribed from the wave slope (the hull
// tracks the surface tangent) or integrated from the restoring/damping row.
enum class PitchMode { Kinematic = 0, Dynamic = 1 };

// Generalized coordinates of the taut-cable system,
// q = [x_b, z_b, alpha, theta_u, theta_b].
struct CoupledState {
  Vector5d q = Vector5d::Zero();
  Vector5d qd = Vector5d::Zero();

  double x_b() const { return q[0]; }
  double z_b() const { return q[1]; }
  double alpha() const { return q[2]; }
  double theta_u() const { return q[3]; }
  double theta_b() const { return q[4]; }
};

struct PolarKinematics {
  double r = 0.0;
  double alpha = 0.0;
  double rdot = 0.0;
  double alphadot = 0.0;
};

// Cable-frame coordinates of the UAV relative to the buoy. Throws
// std::domain_error when the two bodies coincide.
PolarKinematics to_polar(const BuoyState& b, const UavState& u);

// Reconstruction of the UAV chart from generalized coordinates (r = l).
UavState uav_from_coupled(const CoupledState& s, double cable_length);
BuoyState buoy_from_coupled(const CoupledState& s);
CoupledState coupled_from_bodies(const BuoyState& b, const UavState& u);

struct CoupledAccel {
  Vector5d qdd = Vector5d::Zero();
  BuoyMatrices buoy;       // hydrodynamic matrices at the evaluated state
  double delta_h = 0.0;    // submergence used for the buoyant force
  double zeta = 0.0;       // free-surface elevation at the buoy
};

// Taut-cable dynamics. Assembles the 5x5 generalized inertia matrix and the
// damping/gravity/actuation right-hand side and solves for qdd. In kinematic
// pitch mode the theta_b row is prescribed (qdd[4] = 0, the caller overrides
// the pitch trajectory) while theta_b still parameterizes the hull matrices.
//
// Throws std::runtime_error when the inertia matrix is ill-conditioned; the
// message carries a dump of the offending state.
CoupledAccel coupled_accel(const CoupledState& s, const Environment& env,
                           const ControlCommand& u, const BuoyParams& bp,
                           const UavParams& up, const CableParams& cp,
                           double t, PitchMode pitch_mode);

// Cable tension of the taut system given consistent accelerations. Away from
// the vertical configuration the buoy surge/heave rows are used; inside the
// +-epsilon_alpha band the UAV heave row is used instead.
double cable_tension(const CoupledState& s, const ControlCommand& u,
                     const Vector5d& qdd, const Environment& env,
                     const BuoyParams& bp, const UavParams& up,
                     const CableParams& cp, double t);

// UAV Cartesian accelerations implied by the constrained motion.
Eigen::Vector2d uav_accel_from_coupled(const CoupledState& s, const Vector5d& qdd,
                                       double cable_length);

// Hybrid transition test. Coupled -> decoupled when the tension is exhausted;
// decoupled -> coupled when the cable reaches full extension while still
// paying out.
Coupling detect_transition(Coupling current, const PolarKinematics& polar,
                           double tension, const CableParams& cp);

// Inelastic impulse applied when the slack cable snaps taut: the radial
// relative velocity is zeroed while linear momentum projected on the cable
// line is conserved; tangential motion is untouched. Mb_trans is the 2x2
// translational block of the buoy inertia matrix (added mass included when
// waterborne).
void apply_coupling_impulse(BuoyState& b, UavState& u, const Eigen::Matrix2d& mb_trans,
                            double uav_mass);

struct ConstraintReport {
  bool hanging_risk = false;  // T >= m_b g / sin(alpha)
  bool airborne = false;      // immersed volume exhausted
  bool thrust_gate = false;   // u1 >= m_b (1 - eps_m) g / (tan(alpha) sin(theta_u))
};

ConstraintReport check_constraints(double tension, double alpha, double immersed_volume,
                                   double thrust, double theta_u, const BuoyParams& bp,
                                   const SafetyMargins& margins, const Environment& env);

}  // namespace marinesim

#endif
