/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The plcemc Authors */

/*
 * C interface of the plcemc library.
 *
 * Objects are opaque handles created by *_create / *_load style functions and
 * released with the matching *_destroy, which accepts NULL. Every fallible call
 * returns a plcemc_status; on failure plcemc_last_error() describes the problem
 * for the calling thread until its next failing call.
 *
 * Array outputs follow a two-call pattern: pass a NULL buffer (or capacity 0)
 * to learn the required count, then call again with room for it.
 *
 * Units: Hz, seconds, volts, W/Hz or dBm/Hz for PSDs, dBuV for EMI levels.
 */

#ifndef PLCEMC_H
#define PLCEMC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PLCEMC_BUILDING_LIBRARY)
#define PLCEMC_API __declspec(dllexport)
#else
#define PLCEMC_API __declspec(dllimport)
#endif
#else
#define PLCEMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plcemc_status {
  PLCEMC_OK = 0,
  PLCEMC_E_INVALID_ARGUMENT = 1,
  PLCEMC_E_NOT_COVERED = 2,
  PLCEMC_E_UNDEFINED_SCALE = 3,
  PLCEMC_E_SINGULAR = 4,
  PLCEMC_E_IO = 5,
  PLCEMC_E_PARSE = 6,
  PLCEMC_E_UNKNOWN_NAME = 7,
  PLCEMC_E_NULL_POINTER = 8,
  PLCEMC_E_BUFFER_TOO_SMALL = 9,
  PLCEMC_E_OUT_OF_MEMORY = 10,
  PLCEMC_E_INTERNAL = 11
} plcemc_status;

typedef enum plcemc_detector { PLCEMC_PEAK = 0, PLCEMC_QUASI_PEAK = 1, PLCEMC_AVERAGE = 2 } plcemc_detector;

typedef struct plcemc_modulation plcemc_modulation;
typedef struct plcemc_waveform plcemc_waveform;
typedef struct plcemc_masks plcemc_masks;
typedef struct plcemc_readings plcemc_readings;
typedef struct plcemc_report plcemc_report;
typedef struct plcemc_scenario plcemc_scenario;

PLCEMC_API const char* plcemc_version(void);
PLCEMC_API const char* plcemc_status_string(plcemc_status status);
/* Message of the last failure on this thread; "" if none. */
PLCEMC_API const char* plcemc_last_error(void);

/* "PK", "QP", "AV"; NULL for an unknown value. */
PLCEMC_API const char* plcemc_detector_name(plcemc_detector d);
PLCEMC_API plcemc_status plcemc_detector_parse(const char* name, plcemc_detector* out);

/* ------------------------------------------------------------------------ */
/* Modulation: filter-bank geometry, rectangular-frequency prototype pulse and
 * raised-cosine window. K, N, L, mu, alpha in samples; ts is the complex
 * baseband sampling period. */

typedef struct plcemc_geometry {
  size_t K;
  size_t N;
  size_t L;
  size_t mu;
  size_t alpha;
  double ts;
} plcemc_geometry;

/* All K sub-channels active. */
PLCEMC_API plcemc_status plcemc_modulation_create(const plcemc_geometry* g, plcemc_modulation** out);
/* K = N and Ts from the named band plan; the plan's carriers active. */
PLCEMC_API plcemc_status plcemc_modulation_from_plan(const char* plan, size_t L, size_t mu, size_t alpha,
                                                     plcemc_modulation** out);
PLCEMC_API void plcemc_modulation_destroy(plcemc_modulation* m);

PLCEMC_API plcemc_status plcemc_modulation_geometry(const plcemc_modulation* m, plcemc_geometry* out);
PLCEMC_API plcemc_status plcemc_modulation_set_active(plcemc_modulation* m, const size_t* idx, size_t n);
PLCEMC_API plcemc_status plcemc_modulation_active(const plcemc_modulation* m, size_t* idx, size_t cap, size_t* n);
/* Switches off carriers meeting any notch in the file plus `guard` neighbours
 * on each side. `removed` may be NULL. */
PLCEMC_API plcemc_status plcemc_modulation_apply_notch_file(plcemc_modulation* m, const char* path, size_t guard,
                                                            size_t* removed);
/* L K / M1 as a reduced fraction. */
PLCEMC_API plcemc_status plcemc_modulation_rate(const plcemc_modulation* m, int64_t* num, int64_t* den);
PLCEMC_API plcemc_status plcemc_modulation_carrier_spacing(const plcemc_modulation* m, double* hz);

/* ------------------------------------------------------------------------ */
/* Waveforms. */

/* n_blocks blocks of random unit-power QAM symbols (order 4, 16 or 64) on the
 * active carriers. With real_passband != 0 the result is the ideal x2
 * interpolation to a real signal at ts / 2. */
PLCEMC_API plcemc_status plcemc_waveform_synthesize(const plcemc_modulation* m, size_t n_blocks, unsigned qam_order,
                                                    uint64_t seed, int real_passband, plcemc_waveform** out);
/* im may be NULL for a real signal. */
PLCEMC_API plcemc_status plcemc_waveform_from_samples(const double* re, const double* im, size_t n, double ts,
                                                      plcemc_waveform** out);
PLCEMC_API void plcemc_waveform_destroy(plcemc_waveform* w);

PLCEMC_API plcemc_status plcemc_waveform_info(const plcemc_waveform* w, size_t* n, double* ts, int* is_real);
/* Copies min(cap, n) samples; im may be NULL. */
PLCEMC_API plcemc_status plcemc_waveform_samples(const plcemc_waveform* w, double* re, double* im, size_t cap);
PLCEMC_API plcemc_status plcemc_waveform_scale(plcemc_waveform* w, double factor);
PLCEMC_API plcemc_status plcemc_waveform_to_real(const plcemc_waveform* w, plcemc_waveform** out);

/* ------------------------------------------------------------------------ */
/* Spectra. */

/* Analytic mean PSD in W/Hz at each frequency of the baseband frame [0, 1/Ts). */
PLCEMC_API plcemc_status plcemc_psd_analytic(const plcemc_modulation* m, const double* freq, size_t n,
                                             double* psd_w_hz);
/* Averaged periodogram with resolution bandwidth rbw. Two-call pattern on cap. */
PLCEMC_API plcemc_status plcemc_psd_empirical(const plcemc_waveform* w, double rbw, double* freq, double* psd_w_hz,
                                              size_t cap, size_t* n);
/* level - 10 log10(2 Z0) - 10 log10(b_if) - 90 */
PLCEMC_API plcemc_status plcemc_dbuv_to_psd(double level_dbuv, double b_if, double* dbm_hz);

/* ------------------------------------------------------------------------ */
/* EMI receiver. */

typedef struct plcemc_reading {
  double freq_hz;
  plcemc_detector detector;
  double level_dbuv;
} plcemc_reading;

/* Sweeps every grid frequency with the receiver profile of that frequency
 * (220 Hz below 150 kHz, 9 kHz above). t_m <= 0 uses the whole settled record.
 * detectors may be NULL for all three. */
PLCEMC_API plcemc_status plcemc_sweep(const plcemc_waveform* w, const double* grid, size_t n, double t_m,
                                      const plcemc_detector* detectors, size_t n_detectors,
                                      plcemc_readings** out);
/* Shortest record (seconds) that plcemc_sweep accepts for this grid and t_m. */
PLCEMC_API plcemc_status plcemc_sweep_min_duration(const double* grid, size_t n, double t_m, double* seconds);
PLCEMC_API plcemc_status plcemc_readings_create(const plcemc_reading* r, size_t n, plcemc_readings** out);
PLCEMC_API void plcemc_readings_destroy(plcemc_readings* r);
PLCEMC_API plcemc_status plcemc_readings_count(const plcemc_readings* r, size_t* n);
PLCEMC_API plcemc_status plcemc_readings_get(const plcemc_readings* r, size_t i, plcemc_reading* out);

/* ------------------------------------------------------------------------ */
/* Regulatory masks. */

PLCEMC_API plcemc_status plcemc_masks_create(plcemc_masks** out);
PLCEMC_API void plcemc_masks_destroy(plcemc_masks* m);
PLCEMC_API plcemc_status plcemc_masks_add_builtin(plcemc_masks* m, const char* name);
/* Adds every mask of a mask file. */
PLCEMC_API plcemc_status plcemc_masks_load(plcemc_masks* m, const char* path);
PLCEMC_API plcemc_status plcemc_masks_count(const plcemc_masks* m, size_t* n);
/* Limit of the named mask of the set; *covered = 0 when it has none there. */
PLCEMC_API plcemc_status plcemc_masks_limit(const plcemc_masks* m, const char* name, double freq_hz,
                                            plcemc_detector d, double* limit_dbuv, int* covered);

/* Newline-separated names written into buf (NUL terminated); *needed receives
 * the size including the terminator. */
PLCEMC_API plcemc_status plcemc_builtin_mask_names(char* buf, size_t cap, size_t* needed);
PLCEMC_API plcemc_status plcemc_band_plan_names(char* buf, size_t cap, size_t* needed);

/* ------------------------------------------------------------------------ */
/* Compliance. */

typedef struct plcemc_report_summary {
  double worst_margin_db;
  double max_scale;
  double psd_limit_dbm_hz;
  size_t limiting;
  size_t n_entries;
  size_t n_not_covered;
  int compliant;
} plcemc_report_summary;

typedef struct plcemc_margin_entry {
  double freq_hz;
  plcemc_detector detector;
  const char* mask; /* owned by the report */
  double reading_dbuv;
  double limit_dbuv;
  double margin_db;
} plcemc_margin_entry;

PLCEMC_API plcemc_status plcemc_comply_readings(const plcemc_readings* r, const plcemc_masks* m,
                                                plcemc_report** out);
/* Sweep on grid, local refinement around the binding frequency, margins. */
PLCEMC_API plcemc_status plcemc_comply_max_scale(const plcemc_waveform* w, const plcemc_masks* m, const double* grid,
                                                 size_t n, double t_m, int refine_iterations, plcemc_report** out);
PLCEMC_API void plcemc_report_destroy(plcemc_report* r);
PLCEMC_API plcemc_status plcemc_report_summary_get(const plcemc_report* r, plcemc_report_summary* out);
PLCEMC_API plcemc_status plcemc_report_entry(const plcemc_report* r, size_t i, plcemc_margin_entry* out);
PLCEMC_API plcemc_status plcemc_report_not_covered(const plcemc_report* r, size_t i, plcemc_reading* out);

/* ------------------------------------------------------------------------ */
/* Link model. */

typedef struct plcemc_noise_params {
  double a;
  double b;
  double c;
  double offset_db;
} plcemc_noise_params;

/* "NB" or "BB". */
PLCEMC_API plcemc_status plcemc_noise_preset(const char* name, plcemc_noise_params* out);
PLCEMC_API plcemc_status plcemc_noise_psd(double freq_hz, const plcemc_noise_params* p, double* dbm_hz);

PLCEMC_API plcemc_status plcemc_scenario_create(const char* name, const double* delays_s, const double* amplitudes,
                                                size_t n_taps, const plcemc_noise_params* noise,
                                                plcemc_scenario** out);
PLCEMC_API plcemc_status plcemc_scenario_load(const char* name, const char* path, const plcemc_noise_params* noise,
                                              plcemc_scenario** out);
PLCEMC_API plcemc_status plcemc_scenario_synthetic(const char* name, size_t n_taps, double delay_spread_s,
                                                   double attenuation_db, uint64_t seed,
                                                   const plcemc_noise_params* noise, plcemc_scenario** out);
PLCEMC_API void plcemc_scenario_destroy(plcemc_scenario* s);
PLCEMC_API const char* plcemc_scenario_name(const plcemc_scenario* s);
PLCEMC_API plcemc_status plcemc_scenario_taps(const plcemc_scenario* s, double* delays_s, double* amplitudes,
                                              size_t cap, size_t* n);

/* y = x * g_ch (+ colored noise when with_noise != 0). */
PLCEMC_API plcemc_status plcemc_apply_channel(const plcemc_waveform* x, const plcemc_scenario* s, uint64_t noise_seed,
                                              int with_noise, plcemc_waveform** out);

/* Shannon rate in bit/s over the active carriers. tx_w_hz has one entry per
 * active carrier. */
PLCEMC_API plcemc_status plcemc_capacity(const plcemc_modulation* m, const plcemc_scenario* s, const double* tx_w_hz,
                                         size_t n, double* bps);
PLCEMC_API plcemc_status plcemc_capacity_uniform(const plcemc_modulation* m, const plcemc_scenario* s,
                                                 double tx_dbm_hz, double* bps);

/* Fraction of samples strictly greater than each x[i]. */
PLCEMC_API plcemc_status plcemc_ccdf(const double* samples, size_t n, const double* x, size_t nx, double* out);

#ifdef __cplusplus
}
#endif

#endif /* PLCEMC_H */
