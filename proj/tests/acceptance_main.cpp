// Acceptance suite: one check per release criterion, each printed as a
// PASS/FAIL line with the measured values. The process exits with the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "marinesim/equilibrium.hpp"
#include "marinesim/marinesim.h"
#include "marinesim/scenario.hpp"
#include "marinesim/simulation.hpp"
#include "test_util.hpp"

using namespace marinesim;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %-28s %s\n", pass ? "PASS" : "FAIL", index, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Rig {
  Environment env;
  BuoyParams buoy = BuoyParams::standard(1000.0);
  UavParams uav;
  CableParams cable;
  SafetyMargins margins;
};

// ---------------------------------------------------------------------------

void criterion_1_velocity_bounds() {
  const auto t0 = std::chrono::steady_clock::now();
  // The study quotes S_V = (-19.0, -3.1) U (2.1, 18.0) m/s. The +-asymmetry
  // of the quoted endpoints equals an additive shift by the scenario current
  // (-0.5 m/s), so the bounds are evaluated with that current.
  double b[4] = {0, 0, 0, 0};
  const ms_status st =
      ms_analyze_velocity_bounds(nullptr, kPi / 4.0, -0.5, b);
  const double runtime = seconds_since(t0);

  const double target[4] = {-19.0, -3.1, 2.1, 18.0};
  char detail[256];
  bool pass = st == MS_OK && runtime < 1.0;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double err = std::abs(b[i] - target[i]);
    worst = std::max(worst, err);
    if (err > 0.5) pass = false;
  }
  std::snprintf(detail, sizeof(detail),
                "(%.2f, %.2f) U (%.2f, %.2f) vs (-19.0, -3.1) U (2.1, 18.0); "
                "worst |dV| = %.2f (tol 0.5); %.3f s",
                b[0], b[1], b[2], b[3], worst, runtime);
  report(1, "velocity-bound reproduction", pass, detail);
}

void criterion_2_natural_frequency() {
  double omega = 0.0, mu = 0.0;
  const bool ok = ms_analyze_natural_frequency(nullptr, &omega, &mu) == MS_OK;
  const double rel = std::abs(omega - 8.9) / 8.9;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "omega_b = %.4f rad/s vs 8.9 (%.2f%%, tol 1%%)",
                omega, 100.0 * rel);
  report(2, "heave natural frequency", ok && rel < 0.01, detail);
}

void criterion_3_flyover_dome() {
  const auto t0 = std::chrono::steady_clock::now();
  Rig rig;
  std::vector<double> grid;
  for (double v = 0.0; v <= 20.0 + 1e-9; v += 0.05) grid.push_back(v);

  const auto c3_wave = WaveComponent::make(0.135, 3.0, -1.0, 0.0, 9.81);
  const auto c4_wave = WaveComponent::make(1.65, 7.0, -1.0, 0.0, 9.81);
  const double map_c3 = flyover_onset_speed(amplification_map(
      {c3_wave}, grid, kPi / 4.0, rig.margins, rig.buoy, rig.uav, rig.env));
  const double map_c4 = flyover_onset_speed(amplification_map(
      {c4_wave}, grid, kPi / 4.0, rig.margins, rig.buoy, rig.uav, rig.env));

  double sim_speed[2] = {0.0, 0.0};
  double sim_runtime[2] = {0.0, 0.0};
  const char* presets[2] = {"c3", "c4"};
  for (int i = 0; i < 2; ++i) {
    const auto ts = std::chrono::steady_clock::now();
    Simulation sim(ScenarioConfig::preset(presets[i]));
    sim.run();
    sim_speed[i] = sim.metrics().first_airborne_speed;
    sim_runtime[i] = seconds_since(ts);
  }

  const bool map_c3_ok = map_c3 >= 0.8 * 5.0 && map_c3 <= 1.2 * 5.0;
  const bool map_c4_ok = map_c4 >= 0.8 * 11.0 && map_c4 <= 1.2 * 11.0;
  const bool sim_c3_ok =
      sim_speed[0] > 0.0 && std::abs(sim_speed[0] - map_c3) <= 0.2 * map_c3;
  const bool sim_c4_ok =
      sim_speed[1] > 0.0 && std::abs(sim_speed[1] - map_c4) <= 0.2 * map_c4;
  const bool runtime_ok = sim_runtime[0] < 120.0 && sim_runtime[1] < 120.0;

  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "map onsets c3 = %.2f (target 5 +-20%%: %s), c4 = %.2f (target 11 "
                "+-20%%: %s); sim first separation c3 = %.2f (vs map: %s), c4 = %.2f "
                "(vs map: %s); %.1f + %.1f s",
                map_c3, map_c3_ok ? "ok" : "OUT", map_c4, map_c4_ok ? "ok" : "OUT",
                sim_speed[0], sim_c3_ok ? "ok" : "OUT", sim_speed[1],
                sim_c4_ok ? "ok" : "OUT", sim_runtime[0], sim_runtime[1]);
  report(3, "fly-over dome",
         map_c3_ok && map_c4_ok && sim_c3_ok && sim_c4_ok && runtime_ok, detail);
  (void)t0;
}

struct RunSummary {
  MetricsReport metrics;
  bool ok = false;
  double runtime = 0.0;
};

RunSummary run_case(const char* preset, ControllerType controller) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = ScenarioConfig::preset(preset);
  cfg.controller = controller;
  Simulation sim(cfg);
  RunSummary out;
  out.ok = sim.run() == SimStatus::Ok;
  out.metrics = sim.metrics();
  out.runtime = seconds_since(t0);
  return out;
}

void criteria_4_and_9_tracking_and_safety() {
  const RunSummary c1s = run_case("c1", ControllerType::Svcs);
  const RunSummary c1c = run_case("c1", ControllerType::Cbnc);
  const RunSummary c2s = run_case("c2", ControllerType::Svcs);
  const RunSummary c2c = run_case("c2", ControllerType::Cbnc);

  bool pass = c1s.ok && c1c.ok && c2s.ok && c2c.ok;
  pass &= c1s.runtime < 300.0 && c2s.runtime < 300.0;

  char detail[512];
  auto cm = [](double v) { return 100.0 * v; };
  const bool env_ok = cm(c1s.metrics.mean_abs_v_error) <= 15.0 &&
                      cm(c2s.metrics.mean_abs_v_error) <= 15.0 &&
                      cm(c1s.metrics.mean_abs_z_error) <= 10.0 &&
                      cm(c2s.metrics.mean_abs_z_error) <= 10.0;
  const bool err_order = c1s.metrics.mean_abs_v_error < c1c.metrics.mean_abs_v_error &&
                         c2s.metrics.mean_abs_v_error < c2c.metrics.mean_abs_v_error &&
                         c1s.metrics.mean_abs_z_error < c1c.metrics.mean_abs_z_error &&
                         c2s.metrics.mean_abs_z_error < c2c.metrics.mean_abs_z_error;
  const bool energy_order = c1s.metrics.energy < c1c.metrics.energy &&
                            c2s.metrics.energy < c2c.metrics.energy;
  pass &= env_ok && err_order && energy_order;

  std::snprintf(detail, sizeof(detail),
                "svcs c1: %.1f cm/s, %.1f cm, %.1f kJ | cbnc c1: %.1f cm/s, %.1f cm, "
                "%.1f kJ | svcs c2: %.1f cm/s, %.1f cm, %.1f kJ | cbnc c2: %.1f cm/s, "
                "%.1f cm, %.1f kJ | envelope(<=15 cm/s, <=10 cm): %s, error order: %s, "
                "energy order: %s",
                cm(c1s.metrics.mean_abs_v_error), cm(c1s.metrics.mean_abs_z_error),
                c1s.metrics.energy / 1e3, cm(c1c.metrics.mean_abs_v_error),
                cm(c1c.metrics.mean_abs_z_error), c1c.metrics.energy / 1e3,
                cm(c2s.metrics.mean_abs_v_error), cm(c2s.metrics.mean_abs_z_error),
                c2s.metrics.energy / 1e3, cm(c2c.metrics.mean_abs_v_error),
                cm(c2c.metrics.mean_abs_z_error), c2c.metrics.energy / 1e3,
                env_ok ? "ok" : "OUT", err_order ? "ok" : "VIOLATED",
                energy_order ? "ok" : "VIOLATED");
  report(4, "tracking error and energy", pass, detail);

  const bool safety = !c1s.metrics.any_airborne && !c2s.metrics.any_airborne &&
                      !c1s.metrics.any_hanging_risk && !c2s.metrics.any_hanging_risk &&
                      c1s.metrics.min_vol_ratio > 0.0 && c2s.metrics.min_vol_ratio > 0.0;
  std::snprintf(detail, sizeof(detail),
                "svcs min immersion c1 = %.3f, c2 = %.3f of hull volume; hanging "
                "flags c1 = %d, c2 = %d",
                c1s.metrics.min_vol_ratio, c2s.metrics.min_vol_ratio,
                c1s.metrics.any_hanging_risk, c2s.metrics.any_hanging_risk);
  report(9, "constraint safety (svcs)", safety, detail);
}

void criterion_5_equilibrium_residuals() {
  const auto t0 = std::chrono::steady_clock::now();
  Rig rig;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uv(2.5, 13.0);
  std::uniform_real_distribution<double> ua(0.3, kPi / 2.0 - 0.12);

  int admissible = 0;
  int checked = 0;
  double worst = 0.0;
  while (admissible < 1000 && checked < 20000) {
    ++checked;
    const bool rear = (checked % 2) == 1;
    const double v = rear ? -uv(rng) : uv(rng);
    const double alpha = rear ? kPi - ua(rng) : ua(rng);
    const auto ep = equilibrium_point(v, alpha, 0.0, rig.margins, rig.buoy, rig.uav,
                                      rig.env);
    if (!ep.admissible) continue;
    ++admissible;
    CoupledState s;
    s.q << 0.0, -ep.delta_h, ep.alpha, ep.theta_u, 0.0;
    s.qd << ep.velocity, 0.0, 0.0, 0.0, 0.0;
    const auto res = coupled_accel(s, rig.env, {ep.thrust, 0.0}, rig.buoy, rig.uav,
                                   rig.cable, 0.0, PitchMode::Dynamic);
    worst = std::max(worst, res.qdd.norm());
  }
  const double runtime = seconds_since(t0);
  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "%d admissible points, worst ||qdd|| = %.2e (tol 1e-8); %.2f s (limit 10)",
                admissible, worst, runtime);
  report(5, "equilibrium residuals", admissible == 1000 && worst < 1e-8 && runtime < 10.0,
         detail);
}

void criterion_6_dual_route_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  Rig rig;
  rig.env.lumped_current = -0.5;
  UavParams uav = rig.uav;
  uav.drag_coefficient = 0.0;  // the taut model carries no air friction
  uav.vertical_drag = 0.0;

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_force = 0.0;
  for (int i = 0; i < 100; ++i) {
    CoupledState s;
    s.q << 2.0 * u(rng), 0.05 + 0.05 * u(rng), 0.6 + 0.35 * u(rng), 0.3 * u(rng),
        0.05 * u(rng);
    s.qd << 3.0 * u(rng), 0.6 * u(rng), 0.5 * u(rng), 0.4 * u(rng), 0.0;
    const ControlCommand cmd{25.0 + 10.0 * u(rng), u(rng)};
    const auto res =
        coupled_accel(s, rig.env, cmd, rig.buoy, uav, rig.cable, 0.0, PitchMode::Dynamic);
    const double tension =
        cable_tension(s, cmd, res.qdd, rig.env, rig.buoy, uav, rig.cable, 0.0);
    const Eigen::Vector2d acc = uav_accel_from_coupled(s, res.qdd, rig.cable.length);
    const double fx = cmd.thrust * std::sin(s.theta_u()) - tension * std::cos(s.alpha());
    const double fz = cmd.thrust * std::cos(s.theta_u()) - tension * std::sin(s.alpha()) -
                      uav.mass * rig.env.gravity;
    worst_force = std::max(worst_force, std::abs(uav.mass * acc.x() - fx));
    worst_force = std::max(worst_force, std::abs(uav.mass * acc.y() - fz));
  }

  // Penalty-cable cross check: stiff one-sided spring-damper vs the rigid
  // constraint from the same taut initial condition.
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
  auto penalty_deriv = [&](double t, const Eigen::VectorXd& y) {
    BuoyState b{y[0], y[1], y[2], y[6], y[7], y[8]};
    UavState uv{y[3], y[4], y[5], y[9], y[10], y[11]};
    const auto p = to_polar(b, uv);
    const double tension = std::max(0.0, k_cable * (p.r - l) + c_cable * p.rdot);
    const auto ab = buoy_accel_decoupled(b, rig.env, tension, p.alpha, rig.buoy, t);
    const auto au = uav_accel_decoupled(uv, rig.env, tension, p.alpha, cmd, uav);
    Eigen::VectorXd dy(12);
    dy << y[6], y[7], y[8], y[9], y[10], y[11], ab[0], ab[1], ab[2], au[0], au[1], au[2];
    return dy;
  };

  Eigen::VectorXd yr(10);
  yr.head<5>() = rigid.q;
  yr.tail<5>() = rigid.qd;
  const BuoyState b0 = buoy_from_coupled(rigid);
  const UavState u0 = uav_from_coupled(rigid, l);
  Eigen::VectorXd yp(12);
  yp << b0.x, b0.z, b0.pitch, u0.x, u0.z, u0.pitch, b0.vx, b0.vz, b0.pitch_rate, u0.vx,
      u0.vz, u0.pitch_rate;
  double worst_div = 0.0;
  const double dt = 1e-4;
  for (int i = 0; i < 10000; ++i) {
    yr = testutil::rk4_step(rigid_deriv, i * dt, yr, dt);
    yp = testutil::rk4_step(penalty_deriv, i * dt, yp, dt);
    worst_div = std::max(worst_div,
                         (Eigen::Vector2d(yr[0], yr[1]) - Eigen::Vector2d(yp[0], yp[1])).norm());
  }
  const double runtime = seconds_since(t0);
  char detail[224];
  std::snprintf(detail, sizeof(detail),
                "worst force mismatch = %.2e N (tol 1e-6); penalty divergence = %.2e m "
                "(tol 0.01); %.1f s (limit 60)",
                worst_force, worst_div, runtime);
  report(6, "dual-route dynamics oracles",
         worst_force < 1e-6 && worst_div < 0.01 && runtime < 60.0, detail);
}

void criterion_7_conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  Rig rig;
  rig.buoy.skin_friction_scale = 0.0;
  rig.buoy.potential_damping_surge = 0.0;
  rig.buoy.potential_damping_heave = 0.0;
  rig.buoy.potential_damping_pitch = 0.0;
  rig.uav.drag_coefficient = 0.0;
  rig.uav.vertical_drag = 0.0;

  auto total_energy = [&](const CoupledState& s) {
    const UavState u = uav_from_coupled(s, rig.cable.length);
    const BuoyState b = buoy_from_coupled(s);
    const auto hm = hydrodynamic_matrices(b, rig.env, -s.z_b(), rig.buoy, 0.0);
    const Eigen::Vector2d vb(b.vx, b.vz);
    double e = 0.5 * vb.dot(hm.M.topLeftCorner<2, 2>() * vb) +
               0.5 * hm.M(2, 2) * b.pitch_rate * b.pitch_rate +
               0.5 * rig.uav.mass * (u.vx * u.vx + u.vz * u.vz) +
               0.5 * rig.uav.inertia * u.pitch_rate * u.pitch_rate;
    e += rig.buoy.mass * 9.81 * b.z + rig.uav.mass * 9.81 * u.z;
    const double aw = rig.buoy.length * rig.buoy.width;
    e -= 1000.0 * 9.81 * (0.5 * rig.buoy.volume * s.z_b() - 0.5 * aw * s.z_b() * s.z_b());
    return e;
  };

  auto drift = [&](double dt) {
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
    const double e0 = total_energy(s);
    double worst = 0.0;
    const int steps = static_cast<int>(10.0 / dt);
    for (int i = 0; i < steps; ++i) {
      y = testutil::rk4_step(deriv, i * dt, y, dt);
      CoupledState st;
      st.q = y.head<5>();
      st.qd = y.tail<5>();
      worst = std::max(worst, std::abs(total_energy(st) - e0));
    }
    return worst / std::abs(e0);
  };

  const double audit = drift(1e-3);
  // Order measurement one octave up so both levels sit clear of roundoff.
  const double ratio = drift(2e-3) / audit;
  const double runtime = seconds_since(t0);
  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "relative drift = %.2e at dt = 1e-3 (tol 1e-3); halving dt improves "
                "%.1fx (expect ~16x); %.1f s (limit 30)",
                audit, ratio, runtime);
  report(7, "energy conservation and order",
         audit < 1e-3 && ratio > 8.0 && ratio < 40.0 && runtime < 30.0, detail);
}

void criterion_8_determinism() {
  auto cfg = ScenarioConfig::preset("c2");
  Simulation a(cfg);
  a.run();
  Simulation b(cfg);
  b.run();
  const std::string ca = a.trace().to_csv();
  const std::string cb = b.trace().to_csv();
  char detail[128];
  std::snprintf(detail, sizeof(detail), "two c2 runs, %zu bytes each, %s", ca.size(),
                ca == cb ? "byte-identical" : "DIFFER");
  report(8, "byte-identical reruns", ca == cb && !ca.empty(), detail);
}

}  // namespace

int main() {
  std::printf("marinesim acceptance suite\n");
  std::printf("---------------------------------------------------------------\n");
  criterion_1_velocity_bounds();
  criterion_2_natural_frequency();
  criterion_3_flyover_dome();
  criteria_4_and_9_tracking_and_safety();
  criterion_5_equilibrium_residuals();
  criterion_6_dual_route_oracles();
  criterion_7_conservation();
  criterion_8_determinism();
  std::printf("---------------------------------------------------------------\n");
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
