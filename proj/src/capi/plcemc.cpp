// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/plcemc.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <random>
#include <string>
#include <vector>

#include "plcemc/compliance.hpp"
#include "plcemc/emi.hpp"
#include "plcemc/filterbank.hpp"
#include "plcemc/linkmodel.hpp"
#include "plcemc/regdb.hpp"
#include "plcemc/spectral.hpp"

using namespace plcemc;

struct plcemc_modulation {
  ModulationParams params;
  // Depend on the geometry only, which is fixed at creation.
  PrototypePulse pulse;
  std::vector<double> window;

  explicit plcemc_modulation(ModulationParams p)
      : params(std::move(p)),
        pulse(PrototypePulse::rectangular_frequency(params)),
        window(raised_cosine_window(params.M1(), params.alpha)) {}
};

struct plcemc_waveform {
  WaveformSegment w;
};

struct plcemc_masks {
  std::vector<RegulatoryMask> masks;
};

struct plcemc_readings {
  std::vector<EmiReading> r;
};

struct plcemc_report {
  ComplianceReport rep;
};

struct plcemc_scenario {
  ChannelScenario s;
};

namespace {

thread_local std::string g_last_error;

plcemc_status to_status(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return PLCEMC_E_INVALID_ARGUMENT;
    case Errc::not_covered: return PLCEMC_E_NOT_COVERED;
    case Errc::undefined_scale: return PLCEMC_E_UNDEFINED_SCALE;
    case Errc::singular: return PLCEMC_E_SINGULAR;
    case Errc::io: return PLCEMC_E_IO;
    case Errc::parse: return PLCEMC_E_PARSE;
    case Errc::unknown_name: return PLCEMC_E_UNKNOWN_NAME;
  }
  return PLCEMC_E_INTERNAL;
}

plcemc_status set_error(plcemc_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs f, translating exceptions into a status and the thread's last error.
template <class F>
plcemc_status guarded(F&& f) noexcept {
  try {
    f();
    return PLCEMC_OK;
  } catch (const Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PLCEMC_E_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PLCEMC_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(PLCEMC_E_INTERNAL, "unknown error");
  }
}

template <class... P>
bool any_null(const P*... p) {
  return ((p == nullptr) || ...);
}

plcemc_status null_error() { return set_error(PLCEMC_E_NULL_POINTER, "required pointer argument is NULL"); }

Detector to_detector(plcemc_detector d) {
  switch (d) {
    case PLCEMC_PEAK: return Detector::peak;
    case PLCEMC_QUASI_PEAK: return Detector::quasi_peak;
    case PLCEMC_AVERAGE: return Detector::average;
  }
  fail(Errc::invalid_argument, "unknown detector value");
}

plcemc_detector from_detector(Detector d) {
  switch (d) {
    case Detector::peak: return PLCEMC_PEAK;
    case Detector::quasi_peak: return PLCEMC_QUASI_PEAK;
    case Detector::average: return PLCEMC_AVERAGE;
  }
  return PLCEMC_PEAK;
}

NoiseParams to_noise(const plcemc_noise_params& p) { return {p.a, p.b, p.c, p.offset_db}; }

plcemc_status write_names(const std::vector<std::string>& names, char* buf, size_t cap, size_t* needed) {
  std::string joined;
  for (const auto& n : names) joined += n + '\n';
  if (needed) *needed = joined.size() + 1;
  if (buf == nullptr || cap == 0) return PLCEMC_OK;
  if (cap < joined.size() + 1) return set_error(PLCEMC_E_BUFFER_TOO_SMALL, "name buffer too small");
  std::memcpy(buf, joined.c_str(), joined.size() + 1);
  return PLCEMC_OK;
}

}  // namespace

extern "C" {

const char* plcemc_version(void) { return "0.1.0"; }

const char* plcemc_status_string(plcemc_status s) {
  switch (s) {
    case PLCEMC_OK: return "ok";
    case PLCEMC_E_INVALID_ARGUMENT: return "invalid argument";
    case PLCEMC_E_NOT_COVERED: return "frequency not covered";
    case PLCEMC_E_UNDEFINED_SCALE: return "compliant scale undefined";
    case PLCEMC_E_SINGULAR: return "singular";
    case PLCEMC_E_IO: return "i/o error";
    case PLCEMC_E_PARSE: return "parse error";
    case PLCEMC_E_UNKNOWN_NAME: return "unknown name";
    case PLCEMC_E_NULL_POINTER: return "null pointer";
    case PLCEMC_E_BUFFER_TOO_SMALL: return "buffer too small";
    case PLCEMC_E_OUT_OF_MEMORY: return "out of memory";
    case PLCEMC_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* plcemc_last_error(void) { return g_last_error.c_str(); }

const char* plcemc_detector_name(plcemc_detector d) {
  switch (d) {
    case PLCEMC_PEAK:
    case PLCEMC_QUASI_PEAK:
    case PLCEMC_AVERAGE: return detector_name(to_detector(d));
  }
  return nullptr;
}

plcemc_status plcemc_detector_parse(const char* name, plcemc_detector* out) {
  if (any_null(name, out)) return null_error();
  auto d = parse_detector(name);
  if (!d) return set_error(PLCEMC_E_UNKNOWN_NAME, std::string("unknown detector '") + name + "'");
  *out = from_detector(*d);
  return PLCEMC_OK;
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_modulation_create(const plcemc_geometry* g, plcemc_modulation** out) {
  if (any_null(g, out)) return null_error();
  return guarded([&] {
    ModulationParams p;
    p.K = g->K;
    p.N = g->N;
    p.L = g->L;
    p.mu = g->mu;
    p.alpha = g->alpha;
    p.ts = g->ts;
    require(p.K >= 1, "K must be >= 1");
    p.activate_all();
    p.validate();
    *out = new plcemc_modulation(std::move(p));
  });
}

plcemc_status plcemc_modulation_from_plan(const char* plan, size_t L, size_t mu, size_t alpha,
                                          plcemc_modulation** out) {
  if (any_null(plan, out)) return null_error();
  return guarded([&] { *out = new plcemc_modulation(make_params(band_plan(plan), L, mu, alpha)); });
}

void plcemc_modulation_destroy(plcemc_modulation* m) { delete m; }

plcemc_status plcemc_modulation_geometry(const plcemc_modulation* m, plcemc_geometry* out) {
  if (any_null(m, out)) return null_error();
  const auto& p = m->params;
  *out = {p.K, p.N, p.L, p.mu, p.alpha, p.ts};
  return PLCEMC_OK;
}

plcemc_status plcemc_modulation_set_active(plcemc_modulation* m, const size_t* idx, size_t n) {
  if (m == nullptr || (idx == nullptr && n > 0)) return null_error();
  return guarded([&] { m->params.set_active(std::vector<std::size_t>(idx, idx + n)); });
}

plcemc_status plcemc_modulation_active(const plcemc_modulation* m, size_t* idx, size_t cap, size_t* n) {
  if (any_null(m, n)) return null_error();
  const auto& a = m->params.active;
  *n = a.size();
  if (idx == nullptr || cap == 0) return PLCEMC_OK;
  if (cap < a.size()) return set_error(PLCEMC_E_BUFFER_TOO_SMALL, "active-set buffer too small");
  std::copy(a.begin(), a.end(), idx);
  return PLCEMC_OK;
}

plcemc_status plcemc_modulation_apply_notch_file(plcemc_modulation* m, const char* path, size_t guard,
                                                 size_t* removed) {
  if (any_null(m, path)) return null_error();
  return guarded([&] {
    auto res = apply_notches(m->params.active, load_notches(path), m->params, guard);
    m->params.active = std::move(res.active);
    if (removed) *removed = res.removed.size();
  });
}

plcemc_status plcemc_modulation_rate(const plcemc_modulation* m, int64_t* num, int64_t* den) {
  if (any_null(m, num, den)) return null_error();
  return guarded([&] {
    auto r = normalized_rate(m->params);
    *num = r.num;
    *den = r.den;
  });
}

plcemc_status plcemc_modulation_carrier_spacing(const plcemc_modulation* m, double* hz) {
  if (any_null(m, hz)) return null_error();
  *hz = m->params.carrier_spacing();
  return PLCEMC_OK;
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_waveform_synthesize(const plcemc_modulation* m, size_t n_blocks, unsigned qam_order,
                                         uint64_t seed, int real_passband, plcemc_waveform** out) {
  if (any_null(m, out)) return null_error();
  return guarded([&] {
    require(n_blocks >= 1, "at least one block is required");
    QamMapper qam(qam_order);
    std::mt19937_64 rng(seed);
    std::vector<SymbolGrid> blocks;
    blocks.reserve(n_blocks);
    for (size_t i = 0; i < n_blocks; ++i) blocks.push_back(random_symbols(m->params, qam, rng));
    auto w = modulate(m->params, m->pulse, blocks);
    if (real_passband) w = interpolate_to_real(w);
    *out = new plcemc_waveform{std::move(w)};
  });
}

plcemc_status plcemc_waveform_from_samples(const double* re, const double* im, size_t n, double ts,
                                           plcemc_waveform** out) {
  if (any_null(re, out)) return null_error();
  return guarded([&] {
    WaveformSegment w;
    w.ts = ts;
    w.real = im == nullptr;
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i) w.samples[i] = {re[i], im ? im[i] : 0.0};
    w.validate();
    *out = new plcemc_waveform{std::move(w)};
  });
}

void plcemc_waveform_destroy(plcemc_waveform* w) { delete w; }

plcemc_status plcemc_waveform_info(const plcemc_waveform* w, size_t* n, double* ts, int* is_real) {
  if (w == nullptr) return null_error();
  if (n) *n = w->w.size();
  if (ts) *ts = w->w.ts;
  if (is_real) *is_real = w->w.real ? 1 : 0;
  return PLCEMC_OK;
}

plcemc_status plcemc_waveform_samples(const plcemc_waveform* w, double* re, double* im, size_t cap) {
  if (any_null(w, re)) return null_error();
  const size_t n = std::min(cap, w->w.size());
  for (size_t i = 0; i < n; ++i) {
    re[i] = w->w.samples[i].real();
    if (im) im[i] = w->w.samples[i].imag();
  }
  return PLCEMC_OK;
}

plcemc_status plcemc_waveform_scale(plcemc_waveform* w, double factor) {
  if (w == nullptr) return null_error();
  if (!std::isfinite(factor)) return set_error(PLCEMC_E_INVALID_ARGUMENT, "scale factor must be finite");
  for (auto& v : w->w.samples) v *= factor;
  return PLCEMC_OK;
}

plcemc_status plcemc_waveform_to_real(const plcemc_waveform* w, plcemc_waveform** out) {
  if (any_null(w, out)) return null_error();
  return guarded([&] {
    require(!w->w.real, "waveform is already real");
    *out = new plcemc_waveform{interpolate_to_real(w->w)};
  });
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_psd_analytic(const plcemc_modulation* m, const double* freq, size_t n, double* psd_w_hz) {
  if (any_null(m, freq, psd_w_hz)) return null_error();
  return guarded([&] {
    require(n >= 1, "frequency grid is empty");
    auto c = analytic_psd(m->params, m->pulse, m->window, std::span<const double>(freq, n));
    std::copy(c.values.begin(), c.values.end(), psd_w_hz);
  });
}

plcemc_status plcemc_psd_empirical(const plcemc_waveform* w, double rbw, double* freq, double* psd_w_hz, size_t cap,
                                   size_t* n) {
  if (any_null(w, n)) return null_error();
  return guarded([&] {
    auto c = empirical_psd(w->w, rbw);
    *n = c.freq.size();
    if (freq == nullptr || psd_w_hz == nullptr || cap == 0) return;
    if (cap < c.freq.size()) fail(Errc::invalid_argument, "PSD buffer too small");
    std::copy(c.freq.begin(), c.freq.end(), freq);
    std::copy(c.values.begin(), c.values.end(), psd_w_hz);
  });
}

plcemc_status plcemc_dbuv_to_psd(double level_dbuv, double b_if, double* dbm_hz) {
  if (dbm_hz == nullptr) return null_error();
  return guarded([&] { *dbm_hz = dbuv_to_psd(level_dbuv, b_if); });
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_sweep(const plcemc_waveform* w, const double* grid, size_t n, double t_m,
                           const plcemc_detector* detectors, size_t n_detectors, plcemc_readings** out) {
  if (any_null(w, grid, out)) return null_error();
  if (detectors == nullptr && n_detectors > 0) return null_error();
  return guarded([&] {
    SweepOptions opt;
    opt.t_m = t_m;
    if (detectors) {
      opt.detectors.clear();
      for (size_t i = 0; i < n_detectors; ++i) opt.detectors.push_back(to_detector(detectors[i]));
    }
    *out = new plcemc_readings{sweep_spectrum(w->w, std::span<const double>(grid, n), opt)};
  });
}

plcemc_status plcemc_sweep_min_duration(const double* grid, size_t n, double t_m, double* seconds) {
  if (any_null(grid, seconds)) return null_error();
  return guarded([&] {
    require(n >= 1, "frequency grid is empty");
    double d = 0.0;
    for (size_t i = 0; i < n; ++i) d = std::max(d, min_record_duration(profile_for(grid[i]), t_m));
    *seconds = d;
  });
}

plcemc_status plcemc_readings_create(const plcemc_reading* r, size_t n, plcemc_readings** out) {
  if (out == nullptr || (r == nullptr && n > 0)) return null_error();
  return guarded([&] {
    std::vector<EmiReading> v;
    for (size_t i = 0; i < n; ++i) v.push_back({r[i].freq_hz, to_detector(r[i].detector), r[i].level_dbuv});
    *out = new plcemc_readings{std::move(v)};
  });
}

void plcemc_readings_destroy(plcemc_readings* r) { delete r; }

plcemc_status plcemc_readings_count(const plcemc_readings* r, size_t* n) {
  if (any_null(r, n)) return null_error();
  *n = r->r.size();
  return PLCEMC_OK;
}

plcemc_status plcemc_readings_get(const plcemc_readings* r, size_t i, plcemc_reading* out) {
  if (any_null(r, out)) return null_error();
  if (i >= r->r.size()) return set_error(PLCEMC_E_INVALID_ARGUMENT, "reading index out of range");
  const auto& e = r->r[i];
  *out = {e.freq, from_detector(e.detector), e.level_dbuv};
  return PLCEMC_OK;
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_masks_create(plcemc_masks** out) {
  if (out == nullptr) return null_error();
  return guarded([&] { *out = new plcemc_masks{}; });
}

void plcemc_masks_destroy(plcemc_masks* m) { delete m; }

plcemc_status plcemc_masks_add_builtin(plcemc_masks* m, const char* name) {
  if (any_null(m, name)) return null_error();
  return guarded([&] { m->masks.push_back(find_mask(name)); });
}

plcemc_status plcemc_masks_load(plcemc_masks* m, const char* path) {
  if (any_null(m, path)) return null_error();
  return guarded([&] {
    auto loaded = load_masks(path);
    m->masks.insert(m->masks.end(), loaded.begin(), loaded.end());
  });
}

plcemc_status plcemc_masks_count(const plcemc_masks* m, size_t* n) {
  if (any_null(m, n)) return null_error();
  *n = m->masks.size();
  return PLCEMC_OK;
}

plcemc_status plcemc_masks_limit(const plcemc_masks* m, const char* name, double freq_hz, plcemc_detector d,
                                 double* limit_dbuv, int* covered) {
  if (any_null(m, name, limit_dbuv, covered)) return null_error();
  return guarded([&] {
    const RegulatoryMask* mask = nullptr;
    for (const auto& x : m->masks)
      if (x.name == name) mask = &x;
    if (mask == nullptr) fail(Errc::unknown_name, std::string("mask '") + name + "' is not in the set");
    auto lim = limit_at(*mask, freq_hz, to_detector(d));
    *covered = lim ? 1 : 0;
    *limit_dbuv = lim.value_or(0.0);
  });
}

plcemc_status plcemc_builtin_mask_names(char* buf, size_t cap, size_t* needed) {
  std::vector<std::string> names;
  for (const auto& m : builtin_masks()) names.push_back(m.name);
  return write_names(names, buf, cap, needed);
}

plcemc_status plcemc_band_plan_names(char* buf, size_t cap, size_t* needed) {
  std::vector<std::string> names;
  for (const auto& p : builtin_band_plans()) names.push_back(p.name);
  return write_names(names, buf, cap, needed);
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_comply_readings(const plcemc_readings* r, const plcemc_masks* m, plcemc_report** out) {
  if (any_null(r, m, out)) return null_error();
  return guarded([&] { *out = new plcemc_report{compliance_margins(r->r, m->masks)}; });
}

plcemc_status plcemc_comply_max_scale(const plcemc_waveform* w, const plcemc_masks* m, const double* grid, size_t n,
                                      double t_m, int refine_iterations, plcemc_report** out) {
  if (any_null(w, m, grid, out)) return null_error();
  return guarded([&] {
    require(refine_iterations >= 0, "refinement iterations must be >= 0");
    ScaleSearchOptions opt;
    opt.sweep.t_m = t_m;
    opt.refine_iterations = refine_iterations;
    *out = new plcemc_report{max_compliant_scale(w->w, m->masks, std::span<const double>(grid, n), opt)};
  });
}

void plcemc_report_destroy(plcemc_report* r) { delete r; }

plcemc_status plcemc_report_summary_get(const plcemc_report* r, plcemc_report_summary* out) {
  if (any_null(r, out)) return null_error();
  const auto& p = r->rep;
  *out = {p.worst_margin, p.max_scale, p.psd_limit_dbm_hz, p.limiting, p.entries.size(), p.not_covered.size(),
          p.compliant() ? 1 : 0};
  return PLCEMC_OK;
}

plcemc_status plcemc_report_entry(const plcemc_report* r, size_t i, plcemc_margin_entry* out) {
  if (any_null(r, out)) return null_error();
  if (i >= r->rep.entries.size()) return set_error(PLCEMC_E_INVALID_ARGUMENT, "entry index out of range");
  const auto& e = r->rep.entries[i];
  *out = {e.freq, from_detector(e.detector), e.mask.c_str(), e.reading_dbuv, e.limit_dbuv, e.margin_db};
  return PLCEMC_OK;
}

plcemc_status plcemc_report_not_covered(const plcemc_report* r, size_t i, plcemc_reading* out) {
  if (any_null(r, out)) return null_error();
  if (i >= r->rep.not_covered.size()) return set_error(PLCEMC_E_INVALID_ARGUMENT, "index out of range");
  const auto& e = r->rep.not_covered[i];
  *out = {e.freq, from_detector(e.detector), e.level_dbuv};
  return PLCEMC_OK;
}

// ---------------------------------------------------------------------------

plcemc_status plcemc_noise_preset(const char* name, plcemc_noise_params* out) {
  if (any_null(name, out)) return null_error();
  NoiseParams p;
  if (std::strcmp(name, "NB") == 0)
    p = nb_noise();
  else if (std::strcmp(name, "BB") == 0)
    p = bb_noise();
  else
    return set_error(PLCEMC_E_UNKNOWN_NAME, std::string("unknown noise preset '") + name + "' (NB or BB)");
  *out = {p.a, p.b, p.c, p.offset_db};
  return PLCEMC_OK;
}

plcemc_status plcemc_noise_psd(double freq_hz, const plcemc_noise_params* p, double* dbm_hz) {
  if (any_null(p, dbm_hz)) return null_error();
  return guarded([&] {
    auto np = to_noise(*p);
    np.validate();
    *dbm_hz = noise_psd(freq_hz, np);
  });
}

plcemc_status plcemc_scenario_create(const char* name, const double* delays_s, const double* amplitudes, size_t n_taps,
                                     const plcemc_noise_params* noise, plcemc_scenario** out) {
  if (any_null(name, noise, out)) return null_error();
  if ((delays_s == nullptr || amplitudes == nullptr) && n_taps > 0) return null_error();
  return guarded([&] {
    ChannelScenario s{name, {}, to_noise(*noise), ""};
    for (size_t i = 0; i < n_taps; ++i) s.taps.push_back({delays_s[i], amplitudes[i]});
    s.validate();
    *out = new plcemc_scenario{std::move(s)};
  });
}

plcemc_status plcemc_scenario_load(const char* name, const char* path, const plcemc_noise_params* noise,
                                   plcemc_scenario** out) {
  if (any_null(name, path, noise, out)) return null_error();
  return guarded([&] {
    ChannelScenario s{name, load_channel(path), to_noise(*noise), "file"};
    s.validate();
    *out = new plcemc_scenario{std::move(s)};
  });
}

plcemc_status plcemc_scenario_synthetic(const char* name, size_t n_taps, double delay_spread_s, double attenuation_db,
                                        uint64_t seed, const plcemc_noise_params* noise, plcemc_scenario** out) {
  if (any_null(name, noise, out)) return null_error();
  return guarded([&] {
    auto np = to_noise(*noise);
    np.validate();
    *out = new plcemc_scenario{synthetic_multipath(name, n_taps, delay_spread_s, attenuation_db, seed, np)};
  });
}

void plcemc_scenario_destroy(plcemc_scenario* s) { delete s; }

const char* plcemc_scenario_name(const plcemc_scenario* s) { return s ? s->s.name.c_str() : nullptr; }

plcemc_status plcemc_scenario_taps(const plcemc_scenario* s, double* delays_s, double* amplitudes, size_t cap,
                                   size_t* n) {
  if (any_null(s, n)) return null_error();
  const auto& t = s->s.taps;
  *n = t.size();
  if (delays_s == nullptr || amplitudes == nullptr || cap == 0) return PLCEMC_OK;
  if (cap < t.size()) return set_error(PLCEMC_E_BUFFER_TOO_SMALL, "tap buffer too small");
  for (size_t i = 0; i < t.size(); ++i) {
    delays_s[i] = t[i].delay_s;
    amplitudes[i] = t[i].amplitude;
  }
  return PLCEMC_OK;
}

plcemc_status plcemc_apply_channel(const plcemc_waveform* x, const plcemc_scenario* s, uint64_t noise_seed,
                                   int with_noise, plcemc_waveform** out) {
  if (any_null(x, s, out)) return null_error();
  return guarded([&] { *out = new plcemc_waveform{apply_channel(x->w, s->s, noise_seed, with_noise != 0)}; });
}

plcemc_status plcemc_capacity(const plcemc_modulation* m, const plcemc_scenario* s, const double* tx_w_hz, size_t n,
                              double* bps) {
  if (any_null(m, s, bps)) return null_error();
  if (tx_w_hz == nullptr && n > 0) return null_error();
  return guarded([&] { *bps = shannon_capacity(std::span<const double>(tx_w_hz, n), s->s, m->params); });
}

plcemc_status plcemc_capacity_uniform(const plcemc_modulation* m, const plcemc_scenario* s, double tx_dbm_hz,
                                      double* bps) {
  if (any_null(m, s, bps)) return null_error();
  return guarded([&] { *bps = shannon_capacity_uniform(tx_dbm_hz, s->s, m->params); });
}

plcemc_status plcemc_ccdf(const double* samples, size_t n, const double* x, size_t nx, double* out) {
  if (samples == nullptr && n > 0) return null_error();
  if ((x == nullptr || out == nullptr) && nx > 0) return null_error();
  return guarded([&] {
    Ccdf c(std::vector<double>(samples, samples + n));
    for (size_t i = 0; i < nx; ++i) out[i] = c(x[i]);
  });
}

}  // extern "C"
