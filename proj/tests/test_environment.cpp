#include <doctest.h>

#include <cmath>
#include <numbers>

#include "marinesim/environment.hpp"

using namespace marinesim;

namespace {

Environment flat_env() {
  Environment env;
  return env;
}

Environment single_wave(double a, double period, double d, double phase) {
  Environment env;
  env.add_wave(a, period, d, phase);
  return env;
}

}  // namespace

TEST_CASE("dispersion relation") {
  CHECK(dispersion(0.0, 9.81) == 0.0);
  CHECK(dispersion(1.0, 9.81) == doctest::Approx(0.1019367991845056).epsilon(1e-12));
  const double omega = 2.0 * std::numbers::pi / 5.7;
  CHECK(dispersion(omega, 9.81) == doctest::Approx(omega * omega / 9.81).epsilon(1e-14));
  CHECK(dispersion(omega, 9.81) == doctest::Approx(0.12385).epsilon(1e-4));
  CHECK_THROWS_AS(dispersion(-0.1, 9.81), std::domain_error);
}

TEST_CASE("stored components satisfy dispersion exactly") {
  Environment env;
  env.add_wave(0.75, 5.7, 1.0, 0.0);
  env.add_wave(0.135, 3.0, -1.0, std::numbers::pi);
  for (const auto& w : env.waves) {
    CHECK(std::abs(w.wavenumber * env.gravity - w.omega * w.omega) < 1e-12);
  }
  CHECK_NOTHROW(env.validate());
}

TEST_CASE("wave component validation") {
  Environment env;
  CHECK_THROWS_AS(env.add_wave(-0.1, 5.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(env.add_wave(0.1, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(env.add_wave(0.1, 5.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("elevation") {
  CHECK(flat_env().elevation(3.0, 7.0) == 0.0);

  auto env = single_wave(1.0, 6.0, 1.0, 0.0);
  CHECK(env.elevation(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));

  auto c2 = single_wave(0.75, 5.7, 1.0, 0.0);
  CHECK(c2.elevation(0.0, 5.7 / 4.0) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("particle velocity") {
  CHECK(flat_env().particle_velocity(1.0, -1.0, 2.0).norm() == 0.0);

  // Phase argument pi/2 at x = 0, t = T/4: horizontal peaks, vertical zero.
  auto env = single_wave(0.75, 5.7, 1.0, 0.0);
  const auto& w = env.waves[0];
  const auto v = env.particle_velocity(0.0, 0.0, 5.7 / 4.0);
  CHECK(v.x() == doctest::Approx(w.direction * w.omega * w.amplitude).epsilon(1e-12));
  CHECK(v.y() == doctest::Approx(0.0).epsilon(1e-12));

  // Exponential decay law at z = -1/k.
  const auto deep = env.particle_velocity(0.0, -1.0 / w.wavenumber, 5.7 / 4.0);
  CHECK(deep.x() == doctest::Approx(v.x() * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("elevation rate equals vertical particle velocity at the surface") {
  auto env = single_wave(0.6, 4.2, 1.0, 0.3);
  const double h = 1e-6;
  for (double t : {0.0, 0.7, 1.9, 3.3}) {
    for (double x : {-2.0, 0.0, 5.0}) {
      const double dzeta = (env.elevation(x, t + h) - env.elevation(x, t - h)) / (2.0 * h);
      const double vz = env.particle_velocity(x, 0.0, t).y();
      CHECK(vz == doctest::Approx(dzeta).epsilon(1e-6));
    }
  }
}

TEST_CASE("depth decay monotonicity") {
  auto env = single_wave(0.5, 5.0, 1.0, 0.4);
  for (double t : {0.3, 1.1}) {
    double prev = env.particle_velocity(1.0, -8.0, t).norm();
    for (double z : {-4.0, -2.0, -1.0, -0.25, 0.0}) {
      const double cur = env.particle_velocity(1.0, z, t).norm();
      CHECK(cur >= prev - 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("stokes drift") {
  CHECK(flat_env().stokes_drift(0.0) == 0.0);

  auto env = single_wave(0.75, 5.7, 1.0, 0.0);
  const auto& w = env.waves[0];
  const double expected = w.amplitude * w.amplitude * w.omega * w.wavenumber;
  CHECK(env.stokes_drift(0.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(env.stokes_drift(0.0) == doctest::Approx(0.0768).epsilon(2e-3));

  // Linearity over components.
  Environment both = env;
  both.add_wave(0.135, 3.0, -1.0, 0.2);
  Environment second = single_wave(0.135, 3.0, -1.0, 0.2);
  CHECK(both.stokes_drift(-0.3) ==
        doctest::Approx(env.stokes_drift(-0.3) + second.stokes_drift(-0.3)).epsilon(1e-14));

  // Drift sign follows the travel direction.
  CHECK(single_wave(0.4, 5.0, -1.0, 0.0).stokes_drift(0.0) < 0.0);
}

TEST_CASE("surface current") {
  Environment env;
  env.lumped_current = -0.5;
  CHECK(env.surface_current(0.0) == doctest::Approx(-0.5));

  auto wave = single_wave(0.75, 5.7, 1.0, 0.0);
  const double us = wave.stokes_drift(0.0);
  wave.lumped_current = -0.5;
  CHECK(wave.surface_current(0.0) == doctest::Approx(-0.5 + us).epsilon(1e-12));
}

TEST_CASE("surface-following pitch angle") {
  CHECK(flat_env().buoy_pitch(2.0, 3.0) == 0.0);

  // Phase argument pi/2: zero slope.
  auto env = single_wave(1.0, 6.0, 1.0, std::numbers::pi / 2.0);
  CHECK(env.buoy_pitch(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

  // C4-like wave at zero phase argument.
  auto c4 = single_wave(1.65, 7.0, 1.0, 0.0);
  const auto& w = c4.waves[0];
  CHECK(c4.buoy_pitch(0.0, 0.0) ==
        doctest::Approx(std::atan(1.65 * w.wavenumber)).epsilon(1e-12));
  CHECK(c4.buoy_pitch(0.0, 0.0) == doctest::Approx(0.13474).epsilon(1e-3));
}

TEST_CASE("pitch rate matches finite differences for a moving buoy") {
  auto env = single_wave(0.8, 4.0, -1.0, 0.5);
  const double xdot = 2.3;
  const double h = 1e-6;
  for (double t : {0.2, 1.5, 2.8}) {
    const double x = 1.0 + xdot * t;
    const double fd = (env.buoy_pitch(x + xdot * h, t + h) -
                       env.buoy_pitch(x - xdot * h, t - h)) / (2.0 * h);
    CHECK(env.buoy_pitch_rate(x, xdot, t) == doctest::Approx(fd).epsilon(1e-6));
  }
}
