/* C interface of the marinesim engine.
 *
 * The engine simulates a planar quadrotor towing a floating buoy through a
 * cable and ships as a shared library. All state lives behind opaque
 * handles; every call returns a status code and the last failure message is
 * available per thread through ms_last_error(). Strings returned by
 * ms_*_alloc functions must be released with ms_string_free().
 */
#ifndef MARINESIM_MARINESIM_H
#define MARINESIM_MARINESIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MARINESIM_API __declspec(dllexport)
#else
#define MARINESIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ms_status {
  MS_OK = 0,
  MS_ERROR = 1,
  MS_CONSTRAINT_HALT = 2,
  MS_NUMERIC_FAILURE = 3,
  MS_INVALID_ARGUMENT = 4,
  MS_IO_ERROR = 5
} ms_status;

typedef struct ms_sim ms_sim;

typedef struct ms_metrics {
  double duration_s;
  double mean_abs_v_error_mps;
  double mean_abs_z_error_m;
  double energy_j;
  double max_tension_n;
  double min_immersion_fraction;
  double first_airborne_time_s;  /* < 0 when contact never lost */
  double first_airborne_speed_mps;
  long decouple_events;
  long couple_events;
  int any_hanging_risk;
  int any_airborne;
  double noise_calibration_error;
} ms_metrics;

MARINESIM_API const char* ms_version(void);

/* Message describing the most recent failure on this thread. */
MARINESIM_API const char* ms_last_error(void);

/* ------------------------------------------------------------------ */
/* Scenario configuration                                               */

/* JSON text of a built-in scenario ("c1".."c4"); caller frees. */
MARINESIM_API char* ms_preset_json_alloc(const char* name);

MARINESIM_API void ms_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Simulation lifecycle                                                 */

MARINESIM_API ms_sim* ms_sim_create(const char* config_json);
MARINESIM_API ms_sim* ms_sim_create_preset(const char* name);
MARINESIM_API void ms_sim_destroy(ms_sim* sim);

/* Runs to the configured duration. MS_OK, MS_CONSTRAINT_HALT or
 * MS_NUMERIC_FAILURE. */
MARINESIM_API ms_status ms_sim_run(ms_sim* sim);

/* Advances a number of controller periods. */
MARINESIM_API ms_status ms_sim_step(ms_sim* sim, long periods);

MARINESIM_API double ms_sim_time(const ms_sim* sim);
MARINESIM_API ms_status ms_sim_metrics(const ms_sim* sim, ms_metrics* out);

/* ------------------------------------------------------------------ */
/* Trace access                                                         */

MARINESIM_API long ms_trace_columns(void);
MARINESIM_API const char* ms_trace_column_name(long index);
MARINESIM_API long ms_sim_trace_rows(const ms_sim* sim);

/* Copies one row into out[0..len). Enumerated columns (mode,
 * configuration) are encoded numerically. Returns MS_INVALID_ARGUMENT when
 * len is smaller than ms_trace_columns(). */
MARINESIM_API ms_status ms_sim_trace_row(const ms_sim* sim, long row, double* out, long len);

MARINESIM_API ms_status ms_sim_write_trace_csv(const ms_sim* sim, const char* path);
MARINESIM_API ms_status ms_sim_write_trace_svg(const ms_sim* sim, const char* path);

/* ------------------------------------------------------------------ */
/* Standalone analysis                                                  */

/* Heave oscillator of the configured hull. config_json may be NULL for the
 * standard parameters. */
MARINESIM_API ms_status ms_analyze_natural_frequency(const char* config_json,
                                                     double* omega_radps,
                                                     double* damping_ratio);

/* Admissible steady-velocity set at a front elevation angle. out_bounds is
 * {negative.lo, negative.hi, positive.lo, positive.hi}. */
MARINESIM_API ms_status ms_analyze_velocity_bounds(const char* config_json,
                                                   double alpha_rad, double current_mps,
                                                   double out_bounds[4]);

/* Steady tow state at (velocity, alpha). out is {relative_velocity, theta_u,
 * thrust, immersed_volume, tension, admissible(0/1)}. */
MARINESIM_API ms_status ms_analyze_equilibrium(const char* config_json, double velocity_mps,
                                               double alpha_rad, double current_mps,
                                               double out[6]);

/* Sweeps the heave-amplification fly-over criterion for the configured wave
 * set (or, without a config, the standard survey set) and writes a CSV and
 * optionally an SVG. The first fly-over onset speed per wave set is written
 * to out_onsets (up to n_onsets entries; pass NULL to skip). */
MARINESIM_API ms_status ms_analyze_amplification(const char* config_json,
                                                 double alpha_rad, double v_min,
                                                 double v_max, double v_step,
                                                 const char* csv_path,
                                                 const char* svg_path_or_null,
                                                 double* out_onsets, long n_onsets);

/* ------------------------------------------------------------------ */
/* Plotting                                                             */

MARINESIM_API ms_status ms_plot_trace_csv(const char* csv_path, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif /* MARINESIM_MARINESIM_H */
