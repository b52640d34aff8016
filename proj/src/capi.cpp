#include "marinesim/marinesim.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "marinesim/equilibrium.hpp"
#include "marinesim/scenario.hpp"
#include "marinesim/simulation.hpp"
#include "marinesim/svgplot.hpp"
#include "marinesim/trace.hpp"

using namespace marinesim;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
ms_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::logic_error& e) {
    set_error(e.what());
    return MS_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MS_ERROR;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ScenarioConfig config_or_default(const char* config_json) {
  if (config_json == nullptr || config_json[0] == '\0') {
    ScenarioConfig cfg;
    return cfg;
  }
  return ScenarioConfig::from_json_text(config_json);
}

std::vector<double> make_grid(double v_min, double v_max, double v_step) {
  if (v_step <= 0.0 || v_max < v_min) {
    throw std::invalid_argument("amplification: bad velocity grid");
  }
  std::vector<double> grid;
  for (double v = v_min; v <= v_max + 0.5 * v_step; v += v_step) grid.push_back(v);
  return grid;
}

}  // namespace

struct ms_sim {
  explicit ms_sim(const ScenarioConfig& cfg) : sim(cfg) {}
  Simulation sim;
};

extern "C" {

const char* ms_version(void) { return "1.0.0"; }

const char* ms_last_error(void) { return g_last_error.c_str(); }

char* ms_preset_json_alloc(const char* name) {
  if (!name) {
    set_error("preset name is null");
    return nullptr;
  }
  try {
    return dup_string(ScenarioConfig::preset(name).to_json_text());
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void ms_string_free(char* text) { std::free(text); }

ms_sim* ms_sim_create(const char* config_json) {
  if (!config_json) {
    set_error("config JSON is null");
    return nullptr;
  }
  try {
    return new ms_sim(ScenarioConfig::from_json_text(config_json));
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

ms_sim* ms_sim_create_preset(const char* name) {
  if (!name) {
    set_error("preset name is null");
    return nullptr;
  }
  try {
    return new ms_sim(ScenarioConfig::preset(name));
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void ms_sim_destroy(ms_sim* sim) { delete sim; }

ms_status ms_sim_run(ms_sim* sim) {
  if (!sim) {
    set_error("sim handle is null");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const SimStatus st = sim->sim.run();
    if (st == SimStatus::Ok) return MS_OK;
    set_error(sim->sim.abort_reason());
    return st == SimStatus::ConstraintHalt ? MS_CONSTRAINT_HALT : MS_NUMERIC_FAILURE;
  });
}

ms_status ms_sim_step(ms_sim* sim, long periods) {
  if (!sim || periods < 0) {
    set_error("bad step arguments");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    for (long i = 0; i < periods; ++i) {
      const SimStatus st = sim->sim.step_period();
      if (st != SimStatus::Ok) {
        set_error(sim->sim.abort_reason());
        return st == SimStatus::ConstraintHalt ? MS_CONSTRAINT_HALT : MS_NUMERIC_FAILURE;
      }
    }
    return MS_OK;
  });
}

double ms_sim_time(const ms_sim* sim) { return sim ? sim->sim.time() : -1.0; }

ms_status ms_sim_metrics(const ms_sim* sim, ms_metrics* out) {
  if (!sim || !out) {
    set_error("bad metrics arguments");
    return MS_INVALID_ARGUMENT;
  }
  const MetricsReport m = sim->sim.metrics();
  out->duration_s = m.duration;
  out->mean_abs_v_error_mps = m.mean_abs_v_error;
  out->mean_abs_z_error_m = m.mean_abs_z_error;
  out->energy_j = m.energy;
  out->max_tension_n = m.max_tension;
  out->min_immersion_fraction = m.min_vol_ratio;
  out->first_airborne_time_s = m.first_airborne_time;
  out->first_airborne_speed_mps = m.first_airborne_speed;
  out->decouple_events = m.decouple_events;
  out->couple_events = m.couple_events;
  out->any_hanging_risk = m.any_hanging_risk ? 1 : 0;
  out->any_airborne = m.any_airborne ? 1 : 0;
  out->noise_calibration_error = m.noise_calibration_error;
  return MS_OK;
}

long ms_trace_columns(void) {
  return static_cast<long>(Trace::column_names().size());
}

const char* ms_trace_column_name(long index) {
  const auto& names = Trace::column_names();
  if (index < 0 || index >= static_cast<long>(names.size())) return nullptr;
  return names[static_cast<size_t>(index)].c_str();
}

long ms_sim_trace_rows(const ms_sim* sim) {
  return sim ? static_cast<long>(sim->sim.trace().size()) : -1;
}

ms_status ms_sim_trace_row(const ms_sim* sim, long row, double* out, long len) {
  if (!sim || !out) {
    set_error("bad trace row arguments");
    return MS_INVALID_ARGUMENT;
  }
  const auto& rows = sim->sim.trace().rows();
  if (row < 0 || row >= static_cast<long>(rows.size()) || len < ms_trace_columns()) {
    set_error("trace row index or buffer length out of range");
    return MS_INVALID_ARGUMENT;
  }
  const TraceRow& r = rows[static_cast<size_t>(row)];
  double* o = out;
  *o++ = r.t;
  *o++ = static_cast<double>(static_cast<int>(r.mode));
  *o++ = static_cast<double>(static_cast<int>(r.configuration));
  *o++ = r.coupled;
  for (double v : {r.x_b, r.z_b, r.theta_b, r.vx_b, r.vz_b, r.w_b,
                   r.x_u, r.z_u, r.theta_u, r.vx_u, r.vz_u, r.w_u,
                   r.r, r.alpha, r.rdot, r.alphadot, r.tension, r.vol_ratio,
                   r.zeta, r.u1_cmd, r.u1, r.u2_cmd, r.u2, r.v_ref, r.r_ref,
                   r.alpha_ref, r.zu_ref, double(r.hanging_risk), double(r.airborne),
                   double(r.thrust_gate), r.fb_v, r.fb_z_u, r.fb_r, r.fb_alpha,
                   r.fb_theta_u}) {
    *o++ = v;
  }
  return MS_OK;
}

ms_status ms_sim_write_trace_csv(const ms_sim* sim, const char* path) {
  if (!sim || !path) {
    set_error("bad csv arguments");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    sim->sim.trace().write_csv(path);
    return MS_OK;
  });
}

ms_status ms_sim_write_trace_svg(const ms_sim* sim, const char* path) {
  if (!sim || !path) {
    set_error("bad svg arguments");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    write_trace_svg(sim->sim.trace(), path);
    return MS_OK;
  });
}

ms_status ms_analyze_natural_frequency(const char* config_json, double* omega_radps,
                                       double* damping_ratio) {
  if (!omega_radps || !damping_ratio) {
    set_error("bad output pointers");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const ScenarioConfig cfg = config_or_default(config_json);
    const HeaveResponse hr = natural_frequency(cfg.buoy, cfg.environment);
    *omega_radps = hr.natural_frequency;
    *damping_ratio = hr.damping_ratio;
    return MS_OK;
  });
}

ms_status ms_analyze_velocity_bounds(const char* config_json, double alpha_rad,
                                     double current_mps, double out_bounds[4]) {
  if (!out_bounds) {
    set_error("bad output pointer");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const ScenarioConfig cfg = config_or_default(config_json);
    const VelocityBounds b = velocity_bounds(alpha_rad, current_mps, cfg.margins,
                                             cfg.buoy, cfg.uav, cfg.environment);
    out_bounds[0] = b.negative.lo;
    out_bounds[1] = b.negative.hi;
    out_bounds[2] = b.positive.lo;
    out_bounds[3] = b.positive.hi;
    return MS_OK;
  });
}

ms_status ms_analyze_equilibrium(const char* config_json, double velocity_mps,
                                 double alpha_rad, double current_mps, double out[6]) {
  if (!out) {
    set_error("bad output pointer");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const ScenarioConfig cfg = config_or_default(config_json);
    const EquilibriumPoint ep = equilibrium_point(velocity_mps, alpha_rad, current_mps,
                                                  cfg.margins, cfg.buoy, cfg.uav,
                                                  cfg.environment);
    out[0] = ep.relative_velocity;
    out[1] = ep.theta_u;
    out[2] = ep.thrust;
    out[3] = ep.immersed_volume;
    out[4] = ep.tension;
    out[5] = ep.admissible ? 1.0 : 0.0;
    return MS_OK;
  });
}

ms_status ms_analyze_amplification(const char* config_json, double alpha_rad,
                                   double v_min, double v_max, double v_step,
                                   const char* csv_path, const char* svg_path_or_null,
                                   double* out_onsets, long n_onsets) {
  if (!csv_path) {
    set_error("csv path is null");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const ScenarioConfig cfg = config_or_default(config_json);
    std::vector<std::vector<WaveComponent>> sets;
    std::vector<std::string> labels;
    if (!cfg.environment.waves.empty()) {
      sets.push_back(cfg.environment.waves);
      labels.push_back(cfg.name + "_waves");
    } else {
      // Survey set: single fully developed components spanning short steep
      // to long high seas.
      const double amps[] = {0.135, 0.305, 0.6, 0.75, 1.65};
      const double periods[] = {3.0, 4.0, 5.0, 5.7, 8.0};
      for (int i = 0; i < 5; ++i) {
        sets.push_back({WaveComponent::make(amps[i], periods[i], -1.0, 0.0,
                                            cfg.environment.gravity)});
        char label[64];
        std::snprintf(label, sizeof(label), "A%.3gm_T%.3gs", amps[i], periods[i]);
        labels.push_back(label);
      }
    }

    const std::vector<double> grid = make_grid(v_min, v_max, v_step);
    Environment flat = cfg.environment;
    flat.waves.clear();
    flat.lumped_current = 0.0;  // drift excluded from the boundary

    std::vector<std::vector<AmplificationPoint>> curves;
    for (const auto& waves : sets) {
      curves.push_back(amplification_map(waves, grid, alpha_rad, cfg.margins, cfg.buoy,
                                         cfg.uav, flat));
    }

    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error(std::string("cannot open ") + csv_path);
    csv << "v_mps";
    for (const auto& label : labels) {
      csv << ",amp_" << label << "_m,flyover_" << label;
    }
    csv << ",mean_immersion_m\n";
    for (size_t i = 0; i < grid.size(); ++i) {
      csv << grid[i];
      for (const auto& c : curves) {
        csv << ',' << c[i].amplification << ',' << (c[i].flyover ? 1 : 0);
      }
      csv << ',' << curves.front()[i].mean_immersion << '\n';
    }

    if (svg_path_or_null && svg_path_or_null[0] != '\0') {
      write_amplification_svg(curves, labels, svg_path_or_null);
    }
    if (out_onsets) {
      for (long i = 0; i < n_onsets && i < static_cast<long>(curves.size()); ++i) {
        out_onsets[i] = flyover_onset_speed(curves[static_cast<size_t>(i)]);
      }
    }
    return MS_OK;
  });
}

ms_status ms_plot_trace_csv(const char* csv_path, const char* svg_path) {
  if (!csv_path || !svg_path) {
    set_error("bad plot arguments");
    return MS_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const Trace t = Trace::from_csv_file(csv_path);
    write_trace_svg(t, svg_path);
    return MS_OK;
  });
}

}  // extern "C"
