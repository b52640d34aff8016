#include "marinesim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace marinesim {

double dispersion(double omega, double gravity) {
  if (omega < 0.0) {
    throw std::domain_error("dispersion: negative circular frequency");
  }
  return omega * omega / gravity;
}

WaveComponent WaveComponent::make(double amplitude, double period,
                                  double direction, double phase,
                                  double gravity) {
  if (amplitude < 0.0) throw std::invalid_argument("wave amplitude < 0");
  if (period <= 0.0) throw std::invalid_argument("wave period <= 0");
  if (direction != 1.0 && direction != -1.0) {
    throw std::invalid_argument("wave direction must be +1 or -1");
  }
  WaveComponent w;
  w.amplitude = amplitude;
  w.period = period;
  w.direction = direction;
  w.phase = phase;
  w.omega = 2.0 * std::numbers::pi / period;
  w.wavenumber = dispersion(w.omega, gravity);
  return w;
}

void Environment::add_wave(double amplitude, double period, double direction,
                           double phase) {
  waves.push_back(WaveComponent::make(amplitude, period, direction, phase, gravity));
}

void Environment::validate() const {
  if (gravity <= 0.0 || water_density <= 0.0 || air_density <= 0.0 ||
      kinematic_viscosity <= 0.0) {
    throw std::invalid_argument("environment: non-positive physical constant");
  }
  for (const auto& w : waves) {
    if (std::abs(w.wavenumber * gravity - w.omega * w.omega) > 1e-12 * std::max(1.0, w.omega * w.omega)) {
      throw std::invalid_argument("environment: wave violates dispersion relation");
    }
  }
}

double Environment::elevation(double x, double t) const {
  double zeta = 0.0;
  for (const auto& w : waves) {
    zeta += w.amplitude * std::sin(w.arg(x, t));
  }
  return zeta;
}

Eigen::Vector2d Environment::particle_velocity(double x, double z, double t) const {
  const double zc = std::min(z, 0.0);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (const auto& w : waves) {
    const double decay = std::exp(w.wavenumber * zc);
    const double a = w.arg(x, t);
    const double scale = w.direction * w.omega * w.amplitude * decay;
    v.x() += scale * std::sin(a);
    v.y() += scale * std::cos(a);
  }
  return v;
}

double Environment::stokes_drift(double z) const {
  const double zc = std::min(z, 0.0);
  double us = 0.0;
  for (const auto& w : waves) {
    us += w.direction * w.amplitude * w.amplitude * w.omega * w.wavenumber *
          std::exp(2.0 * w.wavenumber * zc);
  }
  return us;
}

double Environment::surface_current(double z) const {
  return lumped_current + stokes_drift(z);
}

Eigen::Vector2d Environment::water_velocity(double x, double z, double t) const {
  Eigen::Vector2d v = particle_velocity(x, z, t);
  v.x() += surface_current(z);
  return v;
}

double Environment::buoy_pitch(double x, double t) const {
  double slope = 0.0;
  for (const auto& w : waves) {
    slope += w.amplitude * w.wavenumber * std::cos(w.arg(x, t));
  }
  return std::atan(slope);
}

double Environment::buoy_pitch_rate(double x, double xdot, double t) const {
  double slope = 0.0;
  double slope_dot = 0.0;
  for (const auto& w : waves) {
    const double a = w.arg(x, t);
    slope += w.amplitude * w.wavenumber * std::cos(a);
    slope_dot -= w.amplitude * w.wavenumber * std::sin(a) *
                 (w.direction * w.omega - w.wavenumber * xdot);
  }
  return slope_dot / (1.0 + slope * slope);
}

}  // namespace marinesim
