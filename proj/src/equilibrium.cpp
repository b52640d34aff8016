#include "marinesim/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace marinesim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kMaxIterations = 100;

double surge_damping_at(double v_rel, double delta_h, const BuoyParams& bp,
                        const Environment& env) {
  const double cs = skin_friction_coeff(v_rel, bp, env.kinematic_viscosity);
  return bp.skin_friction_scale * cs * wetted_area(delta_h, bp) * 0.5 *
         env.water_density * std::abs(v_rel);
}

}  // namespace

EquilibriumPoint equilibrium_point(double velocity, double alpha, double current,
                                   const SafetyMargins& margins, const BuoyParams& bp,
                                   const UavParams& up, const Environment& env) {
  if (alpha <= 0.0 || alpha >= std::numbers::pi) {
    throw std::domain_error("equilibrium_point: alpha outside (0, pi)");
  }
  EquilibriumPoint ep;
  ep.velocity = velocity;
  ep.alpha = alpha;
  ep.relative_velocity = velocity - current;

  const double g = env.gravity;
  const double rho = env.water_density;
  const double vr = ep.relative_velocity;
  const double rest_volume = bp.mass / rho;

  if (std::abs(alpha - kHalfPi) < 1e-12) {
    if (std::abs(vr) > 1e-9) {
      throw std::domain_error(
          "equilibrium_point: vertical cable admits no steady state with nonzero "
          "relative velocity");
    }
    // Hover tow: thrust is a free parameter; hovering at the vehicle weight
    // leaves the buoy at its unloaded draft.
    ep.thrust = up.mass * g;
    ep.theta_u = 0.0;
    ep.immersed_volume = (bp.mass + up.mass) / rho - ep.thrust / (rho * g);
    ep.tension = ep.thrust - up.mass * g;
    ep.delta_h = (ep.immersed_volume - 0.5 * bp.volume) / (bp.length * bp.width);
    ep.surge_damping = surge_damping_at(vr, ep.delta_h, bp, env);
    ep.admissible = ep.tension > margins.tension &&
                    ep.immersed_volume > margins.immersion * bp.volume;
    return ep;
  }

  if (std::abs(vr) < 1e-9) {
    ep.thrust = up.mass * g;  // zero-drag limit of D V_r / sin(theta_u)
    ep.theta_u = 0.0;
    ep.tension = 0.0;
    ep.immersed_volume = rest_volume;
    ep.delta_h = (rest_volume - 0.5 * bp.volume) / (bp.length * bp.width);
    ep.surge_damping = 0.0;
    ep.admissible = false;  // tension margin cannot hold without drag
    return ep;
  }

  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const double ta = std::tan(alpha);

  // The friction line needs the wetted area at the equilibrium draft, which
  // itself depends on the drag; relax onto the joint fixed point.
  double delta_h = (rest_volume - 0.5 * bp.volume) / (bp.length * bp.width);
  double d11 = 0.0;
  double theta_u = 0.0;
  double thrust = 0.0;
  double vol = rest_volume;
  for (int i = 0; i < kMaxIterations; ++i) {
    ep.iterations = i + 1;
    d11 = surge_damping_at(vr, delta_h, bp, env);
    const double drag = d11 * vr;
    theta_u = std::atan(drag * ca / (up.mass * g * ca + drag * sa));
    thrust = std::abs(theta_u) > 1e-12 ? drag / std::sin(theta_u) : up.mass * g;
    vol = rest_volume - vr * d11 * ta / (rho * g);

    const double vol_c = std::clamp(vol, 0.0, bp.volume);
    const double target = (vol_c - 0.5 * bp.volume) / (bp.length * bp.width);
    const double step = target - delta_h;
    delta_h += 0.5 * step;
    if (std::abs(step) < 1e-13) break;
    if (i + 1 == kMaxIterations) {
      throw std::runtime_error("equilibrium_point: draft fixed point did not converge");
    }
  }

  ep.theta_u = theta_u;
  ep.thrust = thrust;
  ep.immersed_volume = vol;
  ep.tension = d11 * vr / ca;
  ep.surge_damping = d11;
  ep.delta_h = delta_h;
  ep.admissible = ep.tension > margins.tension &&
                  ep.immersed_volume > margins.immersion * bp.volume &&
                  ep.immersed_volume < bp.volume && ep.thrust > 0.0 &&
                  ep.thrust <= up.thrust_limit;
  return ep;
}

namespace {

// Solves one self-consistent endpoint of the admissible velocity set by
// damped fixed-point iteration on the relative velocity.
double solve_endpoint(double alpha, double seed, bool tension_limited,
                      const SafetyMargins& margins, const BuoyParams& bp,
                      const UavParams& up, const Environment& env, int& iterations) {
  const double ca = std::cos(alpha);
  const double eff_mass = bp.mass + up.mass -
                          margins.immersion * env.water_density * bp.volume;
  double v = seed;
  for (int i = 0; i < kMaxIterations; ++i) {
    ++iterations;
    const EquilibriumPoint ep =
        equilibrium_point(v, alpha, 0.0, margins, bp, up, env);
    const double d11 = std::max(ep.surge_damping, 1e-12);
    double next;
    if (tension_limited) {
      next = margins.tension * ca / d11;
    } else {
      next = eff_mass * env.gravity * std::tan(ep.theta_u) / d11;
    }
    const double step = next - v;
    v += 0.5 * step;
    if (std::abs(step) < 1e-6) return v;
  }
  std::ostringstream msg;
  msg << "velocity_bounds: endpoint iteration stalled (alpha=" << alpha
      << ", tension_limited=" << tension_limited << ", last v=" << v << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace

VelocityBounds velocity_bounds(double alpha, double current, const SafetyMargins& margins,
                               const BuoyParams& bp, const UavParams& up,
                               const Environment& env) {
  if (alpha <= 0.0 || alpha >= kHalfPi) {
    throw std::domain_error("velocity_bounds: front elevation angle required (0, pi/2)");
  }
  VelocityBounds out;
  const double rear = std::numbers::pi - alpha;

  if (margins.tension <= 0.0) {
    out.positive.lo = current;
    out.negative.hi = current;
  } else {
    out.positive.lo = solve_endpoint(alpha, 2.0, true, margins, bp, up, env,
                                     out.iterations) + current;
    out.negative.hi = solve_endpoint(rear, -2.0, true, margins, bp, up, env,
                                     out.iterations) + current;
  }
  out.positive.hi = solve_endpoint(alpha, 15.0, false, margins, bp, up, env,
                                   out.iterations) + current;
  out.negative.lo = solve_endpoint(rear, -15.0, false, margins, bp, up, env,
                                   out.iterations) + current;
  return out;
}

HeaveResponse natural_frequency(const BuoyParams& bp, const Environment& env) {
  const double a3 = bp.waterplane_area();
  if (a3 <= 0.0) throw std::domain_error("natural_frequency: non-positive waterplane area");
  const double stiffness = env.water_density * env.gravity * a3;
  const double m = bp.mass + bp.added_mass_heave;
  HeaveResponse r;
  r.natural_frequency = std::sqrt(stiffness / m);
  r.damping_ratio = bp.potential_damping_heave / (2.0 * std::sqrt(m * stiffness));
  return r;
}

double encounter_frequency(const WaveComponent& wave, double velocity, double gravity) {
  return wave.omega - wave.direction * wave.omega * wave.omega * velocity / gravity;
}

std::vector<AmplificationPoint> amplification_map(const std::vector<WaveComponent>& waves,
                                                  const std::vector<double>& velocities,
                                                  double alpha, const SafetyMargins& margins,
                                                  const BuoyParams& bp, const UavParams& up,
                                                  const Environment& env) {
  const HeaveResponse heave = natural_frequency(bp, env);
  std::vector<AmplificationPoint> map;
  map.reserve(velocities.size());
  for (double v : velocities) {
    AmplificationPoint pt;
    pt.velocity = v;
    double amp = 0.0;
    for (const auto& w : waves) {
      const double we = encounter_frequency(w, v, env.gravity);
      if (&w == &waves.front()) pt.encounter = we;
      const double ratio = std::abs(we) / heave.natural_frequency;
      const double a = 1.0 - ratio * ratio;
      const double b = 2.0 * heave.damping_ratio * ratio;
      amp += w.amplitude * (1.0 / std::sqrt(a * a + b * b) - 1.0);
    }
    pt.amplification = amp;

    // Mean immersion at this speed; Stokes drift is excluded so the boundary
    // depends on V alone.
    const double use_alpha = v >= 0.0 ? alpha : std::numbers::pi - alpha;
    try {
      const EquilibriumPoint ep =
          equilibrium_point(v, use_alpha, 0.0, margins, bp, up, env);
      pt.feasible = ep.immersed_volume > 0.0;
      pt.mean_immersion = std::max(ep.immersed_volume, 0.0) / bp.waterplane_area();
    } catch (const std::exception&) {
      pt.feasible = false;
      pt.mean_immersion = 0.0;
    }
    pt.flyover = pt.amplification > pt.mean_immersion;
    map.push_back(pt);
  }
  return map;
}

double flyover_onset_speed(const std::vector<AmplificationPoint>& map) {
  std::vector<const AmplificationPoint*> sorted;
  sorted.reserve(map.size());
  for (const auto& pt : map) sorted.push_back(&pt);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::abs(a->velocity) < std::abs(b->velocity);
  });
  for (const auto* pt : sorted) {
    if (pt->flyover) return std::abs(pt->velocity);
  }
  return 0.0;
}

}  // namespace marinesim
