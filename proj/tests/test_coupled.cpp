#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "marinesim/coupled.hpp"
#include "marinesim/equilibrium.hpp"
#include "test_util.hpp"

using namespace marinesim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Rig {
  Environment env;
  BuoyParams buoy = BuoyParams::standard(1000.0);
  UavParams uav;
  CableParams cable;
};

// The taut-cable model neglects air friction on the vehicle, so cross-model
// checks against the per-body Newton equations use a drag-free vehicle.
UavParams dragless(const UavParams& p) {
  UavParams out = p;
  out.drag_coefficient = 0.0;
  out.vertical_drag = 0.0;
  out.rotational_drag = 0.0;
  return out;
}

CoupledState random_taut_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoupledState s;
  s.q << 2.0 * u(rng), 0.05 * u(rng) + 0.05, 0.6 + 0.35 * u(rng), 0.3 * u(rng),
      0.1 * u(rng);
  s.qd << 3.0 * u(rng), 0.6 * u(rng), 0.5 * u(rng), 0.4 * u(rng), 0.1 * u(rng);
  return s;
}

}  // namespace

TEST_CASE("polar kinematics") {
  BuoyState b;
  UavState u;

  SUBCASE("45 degree geometry") {
    u.x = 7.0 / std::sqrt(2.0);
    u.z = 7.0 / std::sqrt(2.0);
    const auto p = to_polar(b, u);
    CHECK(p.r == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(p.alpha == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  }

  SUBCASE("directly above") {
    u.z = 5.0;
    CHECK(to_polar(b, u).alpha == doctest::Approx(kPi / 2.0));
  }

  SUBCASE("pure tangential motion") {
    u.x = 3.0;
    u.z = 4.0;
    // Velocity perpendicular to the radial direction, magnitude 2.
    u.vx = -2.0 * (4.0 / 5.0);
    u.vz = 2.0 * (3.0 / 5.0);
    const auto p = to_polar(b, u);
    CHECK(p.rdot == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.alphadot == doctest::Approx(2.0 / 5.0).epsilon(1e-12));
  }

  SUBCASE("coincident bodies are rejected") {
    CHECK_THROWS_AS(to_polar(b, u), std::domain_error);
  }
}

TEST_CASE("chart reconstruction round trip") {
  Rig rig;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const CoupledState s = random_taut_state(rng);
    const UavState u = uav_from_coupled(s, rig.cable.length);
    const BuoyState b = buoy_from_coupled(s);
    const auto p = to_polar(b, u);
    CHECK(p.r == doctest::Approx(rig.cable.length).epsilon(1e-12));
    CHECK(p.alpha == doctest::Approx(s.alpha()).epsilon(1e-12));
    CHECK(std::abs(p.rdot) < 1e-12);  // rigid chart has no radial rate
    CHECK(p.alphadot == doctest::Approx(s.qd[2]).epsilon(1e-12));
    const CoupledState back = coupled_from_bodies(b, u);
    CHECK((back.q - s.q).norm() < 1e-12);
    CHECK((back.qd - s.qd).norm() < 1e-12);
  }
}

TEST_CASE("static vertical-cable equilibrium") {
  Rig rig;
  CoupledState s;
  // Rest draft of the unloaded hull: immersed volume m_b / rho_w.
  s.q << 0.0, 0.0625, kPi / 2.0, 0.0, 0.0;
  const ControlCommand u{rig.uav.mass * rig.env.gravity, 0.0};
  const auto res = coupled_accel(s, rig.env, u, rig.buoy, rig.uav, rig.cable, 0.0,
                                 PitchMode::Dynamic);
  CHECK(res.qdd.norm() < 1e-10);

  const double t = cable_tension(s, u, res.qdd, rig.env, rig.buoy, rig.uav, rig.cable, 0.0);
  CHECK(t == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("coupled accelerations satisfy the per-body Newton equations") {
  // Lagrangian-vs-Newtonian oracle: reconstruct the vehicle acceleration from
  // the generalized solution, close the tension from the hull rows, and check
  // both vehicle force balances to 1e-6 N.
  Rig rig;
  rig.env.lumped_current = -0.5;
  rig.env.add_wave(0.3, 4.0, 1.0, 0.7);
  const UavParams uav = dragless(rig.uav);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uu(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const CoupledState s = random_taut_state(rng);
    const ControlCommand cmd{20.0 + 10.0 * uu(rng), 2.0 * uu(rng)};
    const double t = 1.0 + uu(rng);

    const auto res = coupled_accel(s, rig.env, cmd, rig.buoy, uav, rig.cable, t,
                                   PitchMode::Dynamic);
    const double tension =
        cable_tension(s, cmd, res.qdd, rig.env, rig.buoy, uav, rig.cable, t);
    const Eigen::Vector2d acc_u = uav_accel_from_coupled(s, res.qdd, rig.cable.length);

    const double ca = std::cos(s.alpha());
    const double sa = std::sin(s.alpha());
    const double fx = cmd.thrust * std::sin(s.theta_u()) - tension * ca;
    const double fz = cmd.thrust * std::cos(s.theta_u()) - tension * sa -
                      uav.mass * rig.env.gravity;
    CHECK(std::abs(uav.mass * acc_u.x() - fx) < 1e-6);
    CHECK(std::abs(uav.mass * acc_u.y() - fz) < 1e-6);

    // Hull rows with the same tension close the loop.
    const BuoyState b = buoy_from_coupled(s);
    const double delta_h = rig.env.elevation(s.x_b(), t) - s.z_b();
    const auto hm = hydrodynamic_matrices(b, rig.env, delta_h, rig.buoy, t);
    const double rel_x = s.qd[0] - hm.water_vel.x();
    const double rel_z = s.qd[1] - hm.water_vel.y();
    const double row1 = hm.M(0, 0) * res.qdd[0] + hm.M(0, 1) * res.qdd[1] +
                        hm.D(0, 0) * rel_x + hm.D(0, 1) * rel_z - tension * ca;
    const double row2 = hm.M(1, 0) * res.qdd[0] + hm.M(1, 1) * res.qdd[1] +
                        hm.D(1, 0) * rel_x + hm.D(1, 1) * rel_z +
                        rig.buoy.mass * rig.env.gravity -
                        rig.env.water_density * rig.env.gravity * hm.immersed -
                        tension * sa;
    CHECK(std::abs(row1) < 1e-6);
    CHECK(std::abs(row2) < 1e-6);
  }
}

TEST_CASE("tension branches agree near the switch band") {
  Rig rig;
  const UavParams uav = dragless(rig.uav);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uu(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    CoupledState s = random_taut_state(rng);
    // Park alpha in [pi/2 - 3 eps, pi/2 - eps] where both branches are usable.
    const double eps = rig.cable.epsilon_alpha;
    s.q[2] = kPi / 2.0 - eps * (1.0 + 2.0 * 0.5 * (uu(rng) + 1.0));
    const ControlCommand cmd{25.0 + 5.0 * uu(rng), 0.0};

    const auto res = coupled_accel(s, rig.env, cmd, rig.buoy, uav, rig.cable, 0.0,
                                   PitchMode::Dynamic);
    // Buoy-side branch is what cable_tension selects here.
    const double t1 =
        cable_tension(s, cmd, res.qdd, rig.env, rig.buoy, uav, rig.cable, 0.0);
    // Vehicle-side branch evaluated directly.
    const Eigen::Vector2d acc_u = uav_accel_from_coupled(s, res.qdd, rig.cable.length);
    const double t2 = (cmd.thrust * std::cos(s.theta_u()) -
                       uav.mass * rig.env.gravity - uav.mass * acc_u.y()) /
                      std::sin(s.alpha());
    if (std::abs(t1) > 1.0) {
      CHECK(std::abs(t1 - t2) / std::abs(t1) < 0.01);
    } else {
      CHECK(std::abs(t1 - t2) < 0.01);
    }
  }
}

TEST_CASE("transition detection") {
  CableParams cable;
  PolarKinematics p;
  p.r = cable.length;
  p.rdot = 0.0;

  CHECK(detect_transition(Coupling::Coupled, p, -1.0, cable) == Coupling::Decoupled);
  CHECK(detect_transition(Coupling::Coupled, p, 0.0, cable) == Coupling::Decoupled);
  CHECK(detect_transition(Coupling::Coupled, p, 12.0, cable) == Coupling::Coupled);

  p.r = 0.9 * cable.length;
  p.rdot = 2.0;
  CHECK(detect_transition(Coupling::Decoupled, p, 0.0, cable) == Coupling::Decoupled);
  p.r = cable.length;
  p.rdot = 0.5;
  CHECK(detect_transition(Coupling::Decoupled, p, 0.0, cable) == Coupling::Coupled);
  p.rdot = -0.5;
  CHECK(detect_transition(Coupling::Decoupled, p, 0.0, cable) == Coupling::Decoupled);
}

TEST_CASE("coupling impulse zeroes the radial rate and conserves cable-line momentum") {
  Rig rig;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uu(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    BuoyState b;
    b.x = uu(rng);
    b.z = 0.05 * uu(rng);
    b.vx = 2.0 * uu(rng);
    b.vz = 0.5 * uu(rng);
    b.pitch = 0.2 * uu(rng);
    UavState u;
    const double alpha = 0.4 + 0.8 * (uu(rng) + 1.0) * 0.5;
    u.x = b.x + rig.cable.length * std::cos(alpha);
    u.z = b.z + rig.cable.length * std::sin(alpha);
    u.vx = b.vx + 2.0 * uu(rng);
    u.vz = b.vz + 2.0 * uu(rng);

    const auto pre = to_polar(b, u);
    if (pre.rdot <= 0.0) continue;

    const auto hm = hydrodynamic_matrices(
        b, rig.env, rig.env.elevation(b.x, 0.0) - b.z, rig.buoy, 0.0);
    const Eigen::Matrix2d mb = hm.M.topLeftCorner<2, 2>();
    const Eigen::Vector2d e(std::cos(pre.alpha), std::sin(pre.alpha));
    const Eigen::Vector2d momentum_pre =
        mb * Eigen::Vector2d(b.vx, b.vz) + rig.uav.mass * Eigen::Vector2d(u.vx, u.vz);
    const double tangential_pre = pre.alphadot;

    apply_coupling_impulse(b, u, mb, rig.uav.mass);

    const auto post = to_polar(b, u);
    CHECK(std::abs(post.rdot) < 1e-10);
    CHECK(post.alphadot == doctest::Approx(tangential_pre).epsilon(1e-9));
    const Eigen::Vector2d momentum_post =
        mb * Eigen::Vector2d(b.vx, b.vz) + rig.uav.mass * Eigen::Vector2d(u.vx, u.vz);
    CHECK(e.dot(momentum_post - momentum_pre) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("constraint monitors") {
  Rig rig;
  SafetyMargins margins;

  SUBCASE("no tension, no hanging risk") {
    const auto rep = check_constraints(0.0, 1.2, 0.01, 20.0, 0.1, rig.buoy, margins, rig.env);
    CHECK_FALSE(rep.hanging_risk);
  }

  SUBCASE("vertical boundary value") {
    const double t = rig.buoy.mass * rig.env.gravity;  // 122.625 N
    CHECK(t == doctest::Approx(122.625));
    const auto rep = check_constraints(t, kPi / 2.0, 0.01, 20.0, 0.1, rig.buoy, margins, rig.env);
    CHECK(rep.hanging_risk);
  }

  SUBCASE("airborne flag") {
    const auto rep = check_constraints(0.0, 1.0, 0.0, 20.0, 0.1, rig.buoy, margins, rig.env);
    CHECK(rep.airborne);
  }

  SUBCASE("thrust gate") {
    const double alpha = kPi / 4.0;
    const double theta = 0.3;
    const double limit = rig.buoy.mass * 0.9 * rig.env.gravity /
                         (std::tan(alpha) * std::sin(theta));
    auto rep = check_constraints(10.0, alpha, 0.01, limit * 1.01, theta, rig.buoy,
                                 margins, rig.env);
    CHECK(rep.thrust_gate);
    rep = check_constraints(10.0, alpha, 0.01, limit * 0.99, theta, rig.buoy,
                            margins, rig.env);
    CHECK_FALSE(rep.thrust_gate);
  }
}

namespace {

// Frictionless, thrust-free, flat-water rig for conservation studies.
Rig conservative_rig() {
  Rig rig;
  rig.buoy.skin_friction_scale = 0.0;
  rig.buoy.potential_damping_surge = 0.0;
  rig.buoy.potential_damping_heave = 0.0;
  rig.buoy.potential_damping_pitch = 0.0;
  rig.uav = dragless(rig.uav);
  return rig;
}

double total_energy(const Rig& rig, const CoupledState& s) {
  const double l = rig.cable.length;
  const UavState u = uav_from_coupled(s, l);
  const BuoyState b = buoy_from_coupled(s);
  const auto hm = hydrodynamic_matrices(b, rig.env, -s.z_b(), rig.buoy, 0.0);
  const Eigen::Vector2d vb(b.vx, b.vz);
  const double kin = 0.5 * vb.dot(hm.M.topLeftCorner<2, 2>() * vb) +
                     0.5 * hm.M(2, 2) * b.pitch_rate * b.pitch_rate +
                     0.5 * rig.uav.mass * (u.vx * u.vx + u.vz * u.vz) +
                     0.5 * rig.uav.inertia * u.pitch_rate * u.pitch_rate;
  const double g = rig.env.gravity;
  double pot = rig.buoy.mass * g * b.z + rig.uav.mass * g * u.z;
  // Buoyancy potential for the partially immersed belt (flat water):
  // F_B(z) = rho g (V/2 - A_w z), so U_B(z) = -rho g (V/2 z - A_w z^2 / 2).
  const double aw = rig.buoy.length * rig.buoy.width;
  REQUIRE(std::abs(s.z_b()) < 0.5 * rig.buoy.height);
  pot -= rig.env.water_density * g *
         (0.5 * rig.buoy.volume * s.z_b() - 0.5 * aw * s.z_b() * s.z_b());
  return kin + pot;
}

double max_energy_drift(const Rig& rig, double dt, double duration) {
  CoupledState s;
  s.q << 0.0, 0.05, 1.2, 0.1, 0.0;
  s.qd << 0.0, 0.0, 0.8, 0.0, 0.0;

  auto deriv = [&](double t, const Eigen::VectorXd& y) {
    CoupledState st;
    st.q = y.head<5>();
    st.qd = y.tail<5>();
    const auto res = coupled_accel(st, rig.env, {0.0, 0.0}, rig.buoy, rig.uav,
                                   rig.cable, t, PitchMode::Dynamic);
    Eigen::VectorXd dy(10);
    dy.head<5>() = st.qd;
    dy.tail<5>() = res.qdd;
    return dy;
  };

  Eigen::VectorXd y(10);
  y.head<5>() = s.q;
  y.tail<5>() = s.qd;
  const double e0 = total_energy(rig, s);
  double worst = 0.0;
  const int steps = static_cast<int>(duration / dt);
  for (int i = 0; i < steps; ++i) {
    y = testutil::rk4_step(deriv, i * dt, y, dt);
    CoupledState st;
    st.q = y.head<5>();
    st.qd = y.tail<5>();
    worst = std::max(worst, std::abs(total_energy(rig, st) - e0));
  }
  return worst / std::abs(e0);
}

}  // namespace

TEST_CASE("frictionless coupled system conserves energy" * doctest::timeout(120)) {
  const Rig rig = conservative_rig();
  const double audit = max_energy_drift(rig, 1e-3, 10.0);
  CHECK(audit < 1e-3);

  // Fourth-order integrator: halving the step shrinks the audit ~16x; the
  // ratio is taken one octave up so both levels are truncation dominated.
  const double coarse = max_energy_drift(rig, 2e-3, 10.0);
  CHECK(coarse / audit > 8.0);
  CHECK(coarse / audit < 40.0);
}

TEST_CASE("stiff penalty cable reproduces the rigid model" * doctest::timeout(120)) {
  // Replace the algebraic constraint by a one-sided spring-damper and compare
  // trajectories from the same taut initial condition.
  Rig rig;
  rig.env.lumped_current = -0.5;
  const UavParams uav = dragless(rig.uav);
  const double l = rig.cable.length;
  const double k_cable = 1e5;
  const double c_cable = 2.0 * std::sqrt(k_cable * uav.mass);
  const ControlCommand cmd{30.0, 0.0};

  CoupledState rigid;
  rigid.q << 0.0, 0.0625, 0.7, 0.15, 0.0;
  rigid.qd << 1.0, 0.0, 0.0, 0.0, 0.0;

  auto rigid_deriv = [&](double t, const Eigen::VectorXd& y) {
    CoupledState st;
    st.q = y.head<5>();
    st.qd = y.tail<5>();
    const auto res =
        coupled_accel(st, rig.env, cmd, rig.buoy, uav, rig.cable, t, PitchMode::Dynamic);
    Eigen::VectorXd dy(10);
    dy.head<5>() = st.qd;
    dy.tail<5>() = res.qdd;
    return dy;
  };

  // Penalty state: [xb zb thb xu zu thu | rates].
  BuoyState b0 = buoy_from_coupled(rigid);
  UavState u0 = uav_from_coupled(rigid, l);
  auto penalty_deriv = [&](double t, const Eigen::VectorXd& y) {
    BuoyState b{y[0], y[1], y[2], y[6], y[7], y[8]};
    UavState u{y[3], y[4], y[5], y[9], y[10], y[11]};
    const auto p = to_polar(b, u);
    const double stretch = p.r - l;
    const double tension = std::max(0.0, k_cable * stretch + c_cable * p.rdot);
    const auto ab = buoy_accel_decoupled(b, rig.env, tension, p.alpha, rig.buoy, t);
    const auto au = uav_accel_decoupled(u, rig.env, tension, p.alpha, cmd, uav);
    Eigen::VectorXd dy(12);
    dy << y[6], y[7], y[8], y[9], y[10], y[11], ab[0], ab[1], ab[2], au[0], au[1], au[2];
    return dy;
  };

  const double dt = 1e-4;
  Eigen::VectorXd yr(10);
  yr.head<5>() = rigid.q;
  yr.tail<5>() = rigid.qd;
  Eigen::VectorXd yp(12);
  yp << b0.x, b0.z, b0.pitch, u0.x, u0.z, u0.pitch, b0.vx, b0.vz, b0.pitch_rate,
      u0.vx, u0.vz, u0.pitch_rate;

  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    yr = testutil::rk4_step(rigid_deriv, i * dt, yr, dt);
    yp = testutil::rk4_step(penalty_deriv, i * dt, yp, dt);
    const Eigen::Vector2d rigid_pos(yr[0], yr[1]);
    const Eigen::Vector2d penalty_pos(yp[0], yp[1]);
    worst = std::max(worst, (rigid_pos - penalty_pos).norm());
  }
  CHECK(worst < 0.01);
}

TEST_CASE("taut chart keeps the cable length invariant" * doctest::timeout(120)) {
  // 60 s of coupled integration; the reconstructed separation must track the
  // cable length to numerical precision.
  Rig rig = conservative_rig();
  rig.buoy.skin_friction_scale = 1.0;  // damped swing, representative use
  const ControlCommand cmd{20.0, 0.0};

  auto deriv = [&](double t, const Eigen::VectorXd& y) {
    CoupledState st;
    st.q = y.head<5>();
    st.qd = y.tail<5>();
    const auto res =
        coupled_accel(st, rig.env, cmd, rig.buoy, rig.uav, rig.cable, t,
                      PitchMode::Dynamic);
    Eigen::VectorXd dy(10);
    dy.head<5>() = st.qd;
    dy.tail<5>() = res.qdd;
    return dy;
  };

  CoupledState s;
  s.q << 0.0, 0.05, 1.0, 0.0, 0.0;
  s.qd << 0.5, 0.0, 0.1, 0.0, 0.0;
  Eigen::VectorXd y(10);
  y.head<5>() = s.q;
  y.tail<5>() = s.qd;
  double worst = 0.0;
  const double dt = 1e-3;
  for (int i = 0; i < 60000; ++i) {
    y = testutil::rk4_step(deriv, i * dt, y, dt);
    CoupledState st;
    st.q = y.head<5>();
    st.qd = y.tail<5>();
    const auto p = to_polar(buoy_from_coupled(st), uav_from_coupled(st, rig.cable.length));
    worst = std::max(worst, std::abs(p.r - rig.cable.length));
  }
  CHECK(worst < 1e-6);
}
