#ifndef MARINESIM_ENVIRONMENT_HPP
#define MARINESIM_ENVIRONMENT_HPP

#include <vector>

#include <Eigen/Dense>

namespace marinesim {

// Deep-water dispersion relation, k = omega^2 / g. Throws std::domain_error
// for negative frequencies.
double dispersion(double omega, double gravity);

// One regular (Airy) wave component travelling along the x-axis.
// direction = +1 propagates towards +x, -1 towards -x.
struct WaveComponent {
  double amplitude = 0.0;   // [m]
  double period = 1.0;      // [s]
  double direction = 1.0;   // {-1, +1}
  double phase = 0.0;       // [rad], in (-pi, pi]
  double omega = 0.0;       // [rad/s], 2*pi/period
  double wavenumber = 0.0;  // [1/m], omega^2/g

  static WaveComponent make(double amplitude, double period, double direction,
                            double phase, double gravity);

  double arg(double x, double t) const {
    return direction * omega * t - wavenumber * x + phase;
  }
};

// Sea state and air medium. Pure and stateless after construction; a single
// instance can be shared read-only between scenario evaluations.
//
// Linear wave theory is only valid below the mean free surface, so all
// depth-decay factors are evaluated with z clamped to 0 for z > 0; bodies of
// interest ride near z ~ 0.
struct Environment {
  std::vector<WaveComponent> waves;
  double lumped_current = 0.0;           // U_l [m/s]
  double wind = 0.0;                     // u_wd [m/s], horizontal
  double gravity = 9.81;                 // [m/s^2]
  double water_density = 1000.0;         // [kg/m^3]
  double air_density = 1.22;             // [kg/m^3]
  double kinematic_viscosity = 1.78e-6;  // [m^2/s]

  void add_wave(double amplitude, double period, double direction, double phase);
  void validate() const;

  // Free-surface elevation zeta(x, t).
  double elevation(double x, double t) const;

  // Wave-induced particle velocity (vx, vz) at (x, z, t).
  Eigen::Vector2d particle_velocity(double x, double z, double t) const;

  // Mean Lagrangian transport velocity of the wave field at depth z.
  double stokes_drift(double z) const;

  // Total horizontal surface current, U_c = U_l + U_s(z).
  double surface_current(double z) const;

  // Horizontal/vertical water velocity seen by a floating body at (x, z, t):
  // (U_c + vx_wave, vz_wave).
  Eigen::Vector2d water_velocity(double x, double z, double t) const;

  // Wave-slope pitch angle of a surface-following body (clockwise positive),
  // and its time derivative for a body moving at xdot.
  double buoy_pitch(double x, double t) const;
  double buoy_pitch_rate(double x, double xdot, double t) const;
};

}  // namespace marinesim

#endif
