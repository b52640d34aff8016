// Command-line front end of the marinesim engine; talks to the shared
// library strictly through the C interface.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "marinesim/marinesim.h"

namespace {

int fail(const std::string& context) {
  std::cerr << "error: " << context << ": " << ms_last_error() << "\n";
  return 1;
}

std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Applies command-line overrides on top of the scenario JSON.
std::string apply_overrides(std::string json_text, const std::string& controller,
                            long seed, double dt, double duration,
                            const std::string& out_csv) {
  auto j = nlohmann::json::parse(json_text);
  if (!controller.empty()) j["controller"] = controller;
  if (seed >= 0) j["seed"] = seed;
  if (dt > 0.0) j["dt_s"] = dt;
  if (duration > 0.0) j["duration_s"] = duration;
  if (!out_csv.empty()) j["output"]["csv_path"] = out_csv;
  return j.dump();
}

int run_command(const std::string& scenario, const std::string& preset,
                const std::string& controller, long seed, double dt, double duration,
                const std::string& out_csv, const std::string& out_svg, bool quiet) {
  std::string json_text;
  if (!preset.empty()) {
    char* text = ms_preset_json_alloc(preset.c_str());
    if (!text) return fail("preset");
    json_text = text;
    ms_string_free(text);
  } else {
    json_text = load_file(scenario);
  }
  json_text = apply_overrides(json_text, controller, seed, dt, duration, out_csv);

  ms_sim* sim = ms_sim_create(json_text.c_str());
  if (!sim) return fail("create");

  const ms_status st = ms_sim_run(sim);
  if (st == MS_NUMERIC_FAILURE) {
    std::cerr << "numeric failure: " << ms_last_error() << "\n";
    ms_sim_destroy(sim);
    return 3;
  }
  if (st == MS_CONSTRAINT_HALT) {
    std::cerr << "constraint violation halted the run: " << ms_last_error() << "\n";
  }

  ms_metrics m{};
  ms_sim_metrics(sim, &m);
  if (!quiet) {
    std::printf("simulated %.2f s\n", m.duration_s);
    std::printf("mean |V - Vref|     : %.2f cm/s\n", 100.0 * m.mean_abs_v_error_mps);
    std::printf("mean |z_u - zref|   : %.2f cm\n", 100.0 * m.mean_abs_z_error_m);
    std::printf("consumed energy     : %.1f kJ\n", m.energy_j / 1000.0);
    std::printf("max cable tension   : %.1f N\n", m.max_tension_n);
    std::printf("min immersion       : %.3f of hull volume\n", m.min_immersion_fraction);
    std::printf("decouple/couple     : %ld / %ld events\n", m.decouple_events,
                m.couple_events);
    std::printf("hanging risk        : %s\n", m.any_hanging_risk ? "yes" : "no");
    if (m.any_airborne) {
      std::printf("first contact loss  : t = %.2f s at |V| = %.2f m/s\n",
                  m.first_airborne_time_s, m.first_airborne_speed_mps);
    } else {
      std::printf("first contact loss  : never\n");
    }
  }
  if (!out_svg.empty()) {
    if (ms_sim_write_trace_svg(sim, out_svg.c_str()) != MS_OK) {
      ms_sim_destroy(sim);
      return fail("svg");
    }
  }
  ms_sim_destroy(sim);
  return st == MS_CONSTRAINT_HALT ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marinesim: planar tethered vehicle-buoy towing simulator"};
  app.require_subcommand(1);

  // ---- run ----
  std::string scenario, preset, controller, out_csv, out_svg;
  long seed = -1;
  double dt = 0.0, duration = 0.0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "simulate a scenario");
  run->add_option("scenario", scenario, "scenario JSON file");
  run->add_option("--preset", preset, "built-in scenario (c1..c4)");
  run->add_option("--controller", controller, "svcs | cbnc")
      ->check(CLI::IsMember({"svcs", "cbnc", ""}));
  run->add_option("--seed", seed, "noise seed");
  run->add_option("--dt", dt, "integration step [s]");
  run->add_option("--duration", duration, "run length [s]");
  run->add_option("--out", out_csv, "trace CSV output path");
  run->add_option("--svg", out_svg, "trace SVG output path");
  run->add_flag("--quiet", quiet, "suppress the metrics summary");

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "closed-form studies");
  std::string an_config;
  analyze->add_option("--config", an_config, "scenario JSON supplying parameters");
  analyze->require_subcommand(1);

  auto* nat = analyze->add_subcommand("natural-frequency", "heave oscillator of the hull");

  double alpha_deg = 45.0, current = 0.0;
  auto* vb = analyze->add_subcommand("velocity-bounds", "admissible steady-velocity set");
  vb->add_option("--alpha-deg", alpha_deg, "front elevation angle [deg]");
  vb->add_option("--current", current, "surface current [m/s]");

  double eq_v = 5.0;
  auto* eq = analyze->add_subcommand("equilibrium", "steady tow state");
  eq->add_option("--v", eq_v, "surge velocity [m/s]");
  eq->add_option("--alpha-deg", alpha_deg, "elevation angle [deg]");
  eq->add_option("--current", current, "surface current [m/s]");

  std::string amp_csv = "amplification.csv", amp_svg;
  double v_min = -20.0, v_max = 20.0, v_step = 0.1;
  auto* amp = analyze->add_subcommand("amplification", "heave amplification fly-over map");
  amp->add_option("--alpha-deg", alpha_deg, "elevation angle [deg]");
  amp->add_option("--v-min", v_min);
  amp->add_option("--v-max", v_max);
  amp->add_option("--v-step", v_step);
  amp->add_option("--out", amp_csv, "CSV output path");
  amp->add_option("--svg", amp_svg, "SVG dome plot path");

  // ---- plot ----
  std::string plot_csv, plot_svg = "trace.svg";
  auto* plot = app.add_subcommand("plot", "render a trace CSV as SVG panels");
  plot->add_option("trace", plot_csv, "trace CSV file")->required();
  plot->add_option("--out", plot_svg, "SVG output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (scenario.empty() == preset.empty()) {
        std::cerr << "run: give exactly one of <scenario> or --preset\n";
        return 1;
      }
      return run_command(scenario, preset, controller, seed, dt, duration, out_csv,
                         out_svg, quiet);
    }

    const char* cfg_arg = nullptr;
    std::string cfg_text;
    if (!an_config.empty()) {
      cfg_text = load_file(an_config);
      cfg_arg = cfg_text.c_str();
    }

    if (nat->parsed()) {
      double omega = 0.0, mu = 0.0;
      if (ms_analyze_natural_frequency(cfg_arg, &omega, &mu) != MS_OK) {
        return fail("natural-frequency");
      }
      std::printf("heave natural frequency: %.4f rad/s\n", omega);
      std::printf("heave damping ratio    : %.5f\n", mu);
      return 0;
    }
    if (vb->parsed()) {
      double b[4] = {0, 0, 0, 0};
      const double alpha = alpha_deg * std::numbers::pi / 180.0;
      if (ms_analyze_velocity_bounds(cfg_arg, alpha, current, b) != MS_OK) {
        return fail("velocity-bounds");
      }
      std::printf("admissible steady velocities (alpha = %.1f deg, current = %.2f m/s):\n",
                  alpha_deg, current);
      std::printf("  (%.2f, %.2f) U (%.2f, %.2f) m/s\n", b[0], b[1], b[2], b[3]);
      return 0;
    }
    if (eq->parsed()) {
      double out[6];
      const double alpha = alpha_deg * std::numbers::pi / 180.0;
      if (ms_analyze_equilibrium(cfg_arg, eq_v, alpha, current, out) != MS_OK) {
        return fail("equilibrium");
      }
      std::printf("relative velocity : %.3f m/s\n", out[0]);
      std::printf("vehicle pitch     : %.4f rad\n", out[1]);
      std::printf("thrust            : %.2f N\n", out[2]);
      std::printf("immersed volume   : %.5f m^3\n", out[3]);
      std::printf("cable tension     : %.2f N\n", out[4]);
      std::printf("admissible        : %s\n", out[5] > 0.5 ? "yes" : "no");
      return 0;
    }
    if (amp->parsed()) {
      const double alpha = alpha_deg * std::numbers::pi / 180.0;
      double onsets[8] = {0};
      if (ms_analyze_amplification(cfg_arg, alpha, v_min, v_max, v_step, amp_csv.c_str(),
                                   amp_svg.empty() ? nullptr : amp_svg.c_str(), onsets,
                                   8) != MS_OK) {
        return fail("amplification");
      }
      std::printf("map written to %s\n", amp_csv.c_str());
      for (int i = 0; i < 8 && onsets[i] > 0.0; ++i) {
        std::printf("fly-over onset, wave set %d: |V| = %.2f m/s\n", i + 1, onsets[i]);
      }
      return 0;
    }
    if (plot->parsed()) {
      if (ms_plot_trace_csv(plot_csv.c_str(), plot_svg.c_str()) != MS_OK) {
        return fail("plot");
      }
      std::printf("panels written to %s\n", plot_svg.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
