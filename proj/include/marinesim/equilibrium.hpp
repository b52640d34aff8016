#ifndef MARINESIM_EQUILIBRIUM_HPP
#define MARINESIM_EQUILIBRIUM_HPP

#include <vector>

#include "marinesim/buoy.hpp"
#include "marinesim/coupled.hpp"
#include "marinesim/environment.hpp"
#include "marinesim/uav.hpp"

namespace marinesim {

// Steady tow state of the coupled system under flat water (no waves) and a
// constant current. All quantities are mean values.
struct EquilibriumPoint {
  double velocity = 0.0;        // commanded surge velocity V [m/s]
  double alpha = 0.0;           // cable elevation angle [rad]
  double relative_velocity = 0.0;  // V - U_c [m/s]
  double theta_u = 0.0;         // UAV pitch [rad]
  double thrust = 0.0;          // u1 [N]
  double immersed_volume = 0.0; // [m^3]
  double tension = 0.0;         // [N]
  double surge_damping = 0.0;   // D_b,11 at the converged state [N s/m]
  double delta_h = 0.0;         // submergence matching the immersed volume [m]
  bool admissible = false;      // margins of SafetyMargins satisfied
  int iterations = 0;
};

// Closed-form steady state at (V, alpha). The ITTC surge damping depends on
// the wetted area, which depends on the equilibrium immersion, which depends
// on the damping; the loop is closed by damped fixed-point iteration. Throws
// std::domain_error for alpha = pi/2 with nonzero relative velocity (no
// steady solution exists there) and std::runtime_error on non-convergence.
EquilibriumPoint equilibrium_point(double velocity, double alpha, double current,
                                   const SafetyMargins& margins, const BuoyParams& bp,
                                   const UavParams& up, const Environment& env);

struct VelocityInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct VelocityBounds {
  VelocityInterval negative;  // rear configuration, supplementary elevation angle
  VelocityInterval positive;  // front configuration
  int iterations = 0;
};

// Admissible steady-velocity set S_V = S_n U S_p at a front elevation angle
// alpha (< pi/2): the inner endpoints exhaust the tension margin, the outer
// ones the immersion margin. Each endpoint is solved self-consistently in the
// velocity-dependent friction.
VelocityBounds velocity_bounds(double alpha, double current, const SafetyMargins& margins,
                               const BuoyParams& bp, const UavParams& up,
                               const Environment& env);

struct HeaveResponse {
  double natural_frequency = 0.0;  // omega_b [rad/s]
  double damping_ratio = 0.0;      // mu_b [-]
};

// Linearized heave oscillator of the waterborne hull about its mean draft.
HeaveResponse natural_frequency(const BuoyParams& bp, const Environment& env);

// Doppler-shifted wave frequency seen from a body moving at V.
double encounter_frequency(const WaveComponent& wave, double velocity, double gravity);

struct AmplificationPoint {
  double velocity = 0.0;
  double encounter = 0.0;      // omega_e of the first wave [rad/s]
  double amplification = 0.0;  // excess heave amplitude Delta_h_amp [m]
  double mean_immersion = 0.0; // mean immersed height at this speed [m]
  bool feasible = false;       // steady equilibrium exists at this speed
  bool flyover = false;        // amplification exceeds the mean immersion
};

// Sweeps the heave dynamic-amplification criterion over a velocity grid for
// one wave set. Stokes drift is excluded so that the immersion boundary is a
// function of V alone.
std::vector<AmplificationPoint> amplification_map(const std::vector<WaveComponent>& waves,
                                                  const std::vector<double>& velocities,
                                                  double alpha, const SafetyMargins& margins,
                                                  const BuoyParams& bp, const UavParams& up,
                                                  const Environment& env);

// First |V| at which the map flags fly-over, scanning outward from zero.
// Returns 0 when the map never flags within the grid.
double flyover_onset_speed(const std::vector<AmplificationPoint>& map);

}  // namespace marinesim

#endif
