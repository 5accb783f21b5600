// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

// Command-line front end. Talks to the library through the C interface only.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "plcemc/plcemc.h"

namespace fs = std::filesystem;
using namespace plcemc_cli;

namespace {

struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(plcemc_status s, const std::string& what) {
  if (s != PLCEMC_OK)
    throw LibraryError(what + ": " + plcemc_status_string(s) + ": " + plcemc_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
template <class T, void (*Destroy)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Destroy>>;

using Modulation = Handle<plcemc_modulation, plcemc_modulation_destroy>;
using Waveform = Handle<plcemc_waveform, plcemc_waveform_destroy>;
using Masks = Handle<plcemc_masks, plcemc_masks_destroy>;
using Readings = Handle<plcemc_readings, plcemc_readings_destroy>;
using Report = Handle<plcemc_report, plcemc_report_destroy>;
using Scenario = Handle<plcemc_scenario, plcemc_scenario_destroy>;

// Output files are assembled in memory and written only once everything has
// succeeded, so a failing run leaves no partial artifacts behind.
class Outputs {
 public:
  std::ostringstream& file(const std::string& name) {
    files_.emplace_back(name, std::make_unique<std::ostringstream>());
    return *files_.back().second;
  }
  void write(const fs::path& dir) const {
    fs::create_directories(dir);
    for (const auto& [name, body] : files_) {
      std::ofstream f(dir / name, std::ios::binary);
      if (!(f << body->str())) throw std::runtime_error("cannot write " + (dir / name).string());
      std::cout << "wrote " << (dir / name).string() << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, std::unique_ptr<std::ostringstream>>> files_;
};

double to_dbm(double w_hz) { return w_hz > 0.0 ? std::max(10.0 * std::log10(w_hz) + 30.0, -400.0) : -400.0; }

plcemc_detector detector_of(const std::string& name) {
  plcemc_detector d{};
  check(plcemc_detector_parse(name.c_str(), &d), "detector");
  return d;
}

// ---------------------------------------------------------------------------
// Pipeline pieces shared by the subcommands.

Modulation make_modulation(const ScenarioConfig& c) {
  plcemc_modulation* raw = nullptr;
  check(plcemc_modulation_from_plan(c.plan.c_str(), c.L, c.mu, c.alpha, &raw), "modulation");
  Modulation m(raw);
  if (c.active) check(plcemc_modulation_set_active(m.get(), c.active->data(), c.active->size()), "active set");
  if (!c.notches.empty()) check(plcemc_modulation_apply_notch_file(m.get(), c.notches.c_str(), c.notch_guard, nullptr), "notches");
  return m;
}

plcemc_geometry geometry(const plcemc_modulation* m) {
  plcemc_geometry g{};
  check(plcemc_modulation_geometry(m, &g), "geometry");
  return g;
}

std::size_t blocks_for(const plcemc_modulation* m, double seconds) {
  const auto g = geometry(m);
  const double block = static_cast<double>(g.L * g.N + g.mu + g.alpha) * g.ts;
  return static_cast<std::size_t>(std::ceil(seconds / block)) + 1;
}

bool is_broadband(const plcemc_modulation* m) { return 1.0 / geometry(m).ts > 10e6; }

double default_tm(const plcemc_modulation* m) { return is_broadband(m) ? 0.1 : 1.0; }

// Two points per IF bandwidth: 110 Hz steps under the 220 Hz filter below
// 150 kHz, 4.5 kHz steps under the 9 kHz filter above. The top stays clear of
// the Nyquist edge of the real signal by a few IF bandwidths.
std::vector<double> auto_grid(const plcemc_modulation* m) {
  const double top = std::min(30e6, 1.0 / geometry(m).ts - 30e3);
  const double lo = is_broadband(m) ? 150e3 : 3e3;
  std::vector<double> g;
  for (std::size_t i = 0; lo + 110.0 * i < 150e3 && lo + 110.0 * i <= top; ++i) g.push_back(lo + 110.0 * i);
  const double lo_b = std::max(lo, 150e3);
  for (std::size_t i = 0; lo_b + 4.5e3 * i <= top; ++i) g.push_back(lo_b + 4.5e3 * i);
  return g;
}

struct SweepPlan {
  std::vector<double> grid;
  double tm = 0.0;
};

SweepPlan sweep_plan(const ScenarioConfig& c, const plcemc_modulation* m) {
  SweepPlan s{c.grid ? c.grid->points() : auto_grid(m), c.tm.value_or(default_tm(m))};
  if (s.grid.empty()) throw ConfigError("frequency grid is empty for this band plan");
  return s;
}

// Number of blocks from the config, or enough for a sweep over `grid` with `tm`.
std::size_t sweep_blocks(const ScenarioConfig& c, const plcemc_modulation* m, const std::vector<double>& grid,
                         double tm) {
  if (c.blocks > 0) return c.blocks;
  double need = 0.0;
  check(plcemc_sweep_min_duration(grid.data(), grid.size(), tm, &need), "record length");
  return blocks_for(m, std::max(need, c.duration_s));
}

Waveform synthesize(const plcemc_modulation* m, std::size_t blocks, unsigned qam, std::uint64_t seed, bool real) {
  plcemc_waveform* raw = nullptr;
  check(plcemc_waveform_synthesize(m, blocks, qam, seed, real ? 1 : 0, &raw), "synthesis");
  return Waveform(raw);
}

Masks make_masks(const std::vector<std::string>& names, const std::string& file) {
  plcemc_masks* raw = nullptr;
  check(plcemc_masks_create(&raw), "masks");
  Masks m(raw);
  if (!file.empty()) check(plcemc_masks_load(m.get(), file.c_str()), "mask file");
  for (const auto& n : names) {
    // Names already defined by the mask file take precedence over built-ins.
    double lim = 0.0;
    int covered = 0;
    if (plcemc_masks_limit(m.get(), n.c_str(), 1e6, PLCEMC_PEAK, &lim, &covered) != PLCEMC_OK)
      check(plcemc_masks_add_builtin(m.get(), n.c_str()), "mask '" + n + "'");
  }
  size_t count = 0;
  plcemc_masks_count(m.get(), &count);
  if (count == 0) throw ConfigError("no masks configured (emi.masks or emi.mask_file)");
  return m;
}

std::vector<plcemc_reading> all_readings(const plcemc_readings* r) {
  size_t n = 0;
  check(plcemc_readings_count(r, &n), "readings");
  std::vector<plcemc_reading> out(n);
  for (size_t i = 0; i < n; ++i) check(plcemc_readings_get(r, i, &out[i]), "readings");
  return out;
}

plcemc_report_summary summary_of(const plcemc_report* r) {
  plcemc_report_summary s{};
  check(plcemc_report_summary_get(r, &s), "report");
  return s;
}

std::vector<plcemc_margin_entry> entries_of(const plcemc_report* r) {
  const auto s = summary_of(r);
  std::vector<plcemc_margin_entry> out(s.n_entries);
  for (size_t i = 0; i < s.n_entries; ++i) check(plcemc_report_entry(r, i, &out[i]), "report");
  return out;
}

Report comply(const plcemc_waveform* w, const plcemc_masks* masks, const std::vector<double>& grid, double tm,
              int refine) {
  plcemc_report* raw = nullptr;
  check(plcemc_comply_max_scale(w, masks, grid.data(), grid.size(), tm, refine, &raw), "compliance");
  return Report(raw);
}

plcemc_noise_params noise_of(const std::string& preset, double offset_db) {
  plcemc_noise_params p{};
  check(plcemc_noise_preset(preset.c_str(), &p), "noise");
  p.offset_db = offset_db;
  return p;
}

struct ScenarioSpec {
  std::size_t synthetic = 0;
  std::size_t taps = 8;
  double delay_spread_s = 2e-6;
  double att_lo = 40.0;
  double att_hi = 80.0;
  std::uint64_t seed = 1;
};

std::vector<Scenario> make_scenarios(const std::vector<std::string>& files, const ScenarioSpec& gen,
                                     const plcemc_noise_params& noise) {
  std::vector<Scenario> out;
  for (const auto& f : files) {
    plcemc_scenario* raw = nullptr;
    check(plcemc_scenario_load(fs::path(f).stem().string().c_str(), f.c_str(), &noise, &raw), "channel " + f);
    out.emplace_back(raw);
  }
  // Attenuations spread evenly over [att_lo, att_hi], one seed per channel.
  for (std::size_t i = 0; i < gen.synthetic; ++i) {
    const double t = gen.synthetic > 1 ? static_cast<double>(i) / static_cast<double>(gen.synthetic - 1) : 0.0;
    const double att = gen.att_lo + t * (gen.att_hi - gen.att_lo);
    const std::string name = "synthetic-" + std::to_string(i + 1);
    plcemc_scenario* raw = nullptr;
    check(plcemc_scenario_synthetic(name.c_str(), gen.taps, gen.delay_spread_s, att, gen.seed + i, &noise, &raw),
          "synthetic channel");
    out.emplace_back(raw);
  }
  if (out.empty()) throw ConfigError("no channel scenarios (capacity.channels or capacity.synthetic)");
  return out;
}

double capacity_of(const plcemc_modulation* m, const plcemc_scenario* s, double tx_dbm_hz) {
  double bps = 0.0;
  check(plcemc_capacity_uniform(m, s, tx_dbm_hz, &bps), "capacity");
  return bps;
}

// CCDF evaluated at every distinct sample value and just below the smallest.
void write_ccdf(std::ostream& out, const std::string& prefix, std::vector<double> rates) {
  std::sort(rates.begin(), rates.end());
  std::vector<double> x{rates.front() > 0.0 ? 0.0 : rates.front() - 1.0};
  for (double r : rates)
    if (r != x.back()) x.push_back(r);
  std::vector<double> y(x.size());
  check(plcemc_ccdf(rates.data(), rates.size(), x.data(), x.size(), y.data()), "ccdf");
  for (std::size_t i = 0; i < x.size(); ++i) out << prefix << fmt(x[i]) << ',' << fmt(y[i]) << '\n';
}

void write_readings(std::ostream& out, const std::vector<plcemc_reading>& r) {
  out << "freq_hz,detector,level_dbuv\n";
  for (const auto& e : r) out << fmt(e.freq_hz) << ',' << plcemc_detector_name(e.detector) << ',' << fmt(e.level_dbuv) << '\n';
}

void write_report(Outputs& o, const plcemc_report* rep, const std::string& suffix) {
  const auto s = summary_of(rep);
  const auto entries = entries_of(rep);
  auto& m = o.file("margins" + suffix + ".csv");
  m << "freq_hz,detector,mask,reading_dbuv,limit_dbuv,margin_db\n";
  for (const auto& e : entries)
    m << fmt(e.freq_hz) << ',' << plcemc_detector_name(e.detector) << ',' << e.mask << ',' << fmt(e.reading_dbuv)
      << ',' << fmt(e.limit_dbuv) << ',' << fmt(e.margin_db) << '\n';
  const auto& lim = entries.at(s.limiting);
  auto& f = o.file("summary" + suffix + ".csv");
  f << "key,value\n"
    << "compliant," << (s.compliant ? "yes" : "no") << '\n'
    << "worst_margin_db," << fmt(s.worst_margin_db) << '\n'
    << "max_scale," << fmt(s.max_scale) << '\n'
    << "max_scale_db," << fmt(20.0 * std::log10(s.max_scale)) << '\n'
    << "psd_limit_dbm_hz," << fmt(s.psd_limit_dbm_hz) << '\n'
    << "limiting_freq_hz," << fmt(lim.freq_hz) << '\n'
    << "limiting_detector," << plcemc_detector_name(lim.detector) << '\n'
    << "limiting_mask," << lim.mask << '\n'
    << "entries," << s.n_entries << '\n'
    << "not_covered," << s.n_not_covered << '\n';
}

void print_summary(const plcemc_report* rep) {
  const auto s = summary_of(rep);
  plcemc_margin_entry lim{};
  check(plcemc_report_entry(rep, s.limiting, &lim), "report");
  std::cout << "compliant: " << (s.compliant ? "yes" : "no") << '\n'
            << "worst margin: " << fmt(s.worst_margin_db) << " dB at " << fmt(lim.freq_hz) << " Hz ("
            << plcemc_detector_name(lim.detector) << ", " << lim.mask << ")\n"
            << "max scale: " << fmt(s.max_scale) << '\n'
            << "psd limit: " << fmt(s.psd_limit_dbm_hz) << " dBm/Hz\n";
}

// ---------------------------------------------------------------------------
// Subcommands.

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::optional<double> tm;
};

ScenarioConfig configured(const Common& o) {
  auto c = load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.grid.empty()) c.grid = parse_grid(o.grid);
  if (o.tm) {
    if (*o.tm <= 0.0) throw ConfigError("--tm must be > 0");
    c.tm = o.tm;
  }
  return c;
}

void run_synth(const Common& o) {
  const auto c = configured(o);
  auto m = make_modulation(c);
  const auto blocks = c.blocks > 0 ? c.blocks : c.duration_s > 0 ? blocks_for(m.get(), c.duration_s) : 10;
  auto w = synthesize(m.get(), blocks, c.qam, c.seed, true);
  size_t n = 0;
  double ts = 0;
  plcemc_waveform_info(w.get(), &n, &ts, nullptr);
  std::vector<double> re(n);
  check(plcemc_waveform_samples(w.get(), re.data(), nullptr, n), "samples");
  Outputs out;
  auto& f = out.file("waveform.csv");
  f << "time_s,sample_v\n";
  for (size_t i = 0; i < n; ++i) f << fmt(static_cast<double>(i) * ts) << ',' << fmt(re[i]) << '\n';
  out.write(o.out);
  std::cout << "samples: " << n << ", fs: " << fmt(1.0 / ts) << " Hz, blocks: " << blocks << '\n';
}

void run_psd(const Common& o) {
  const auto c = configured(o);
  auto m = make_modulation(c);
  const auto g = geometry(m.get());
  const double fs = 1.0 / g.ts;
  // Analytic curve on [0, fs); the empirical one from a complex baseband run of
  // roughly a hundred averaging segments unless the config says otherwise.
  std::vector<double> grid;
  for (double f = 0.0; f < fs * (1.0 - 1e-12); f += c.psd_step) grid.push_back(f);
  std::vector<double> ana(grid.size());
  check(plcemc_psd_analytic(m.get(), grid.data(), grid.size(), ana.data()), "analytic PSD");

  const auto blocks = c.blocks > 0 ? c.blocks : blocks_for(m.get(), std::max(c.duration_s, 100.0 / c.rbw));
  auto w = synthesize(m.get(), blocks, c.qam, c.seed, false);
  size_t n = 0;
  check(plcemc_psd_empirical(w.get(), c.rbw, nullptr, nullptr, 0, &n), "empirical PSD");
  std::vector<double> ef(n), ep(n);
  check(plcemc_psd_empirical(w.get(), c.rbw, ef.data(), ep.data(), n, &n), "empirical PSD");

  Outputs out;
  auto& a = out.file("analytic_psd.csv");
  a << "freq_hz,psd_w_hz,psd_dbm_hz\n";
  for (size_t i = 0; i < grid.size(); ++i) a << fmt(grid[i]) << ',' << fmt(ana[i]) << ',' << fmt(to_dbm(ana[i])) << '\n';
  auto& e = out.file("empirical_psd.csv");
  e << "freq_hz,psd_w_hz,psd_dbm_hz\n";
  for (size_t i = 0; i < n; ++i) e << fmt(ef[i]) << ',' << fmt(ep[i]) << ',' << fmt(to_dbm(ep[i])) << '\n';
  out.write(o.out);
}

void run_sweep(const Common& o) {
  const auto c = configured(o);
  auto m = make_modulation(c);
  const auto sp = sweep_plan(c, m.get());
  std::vector<plcemc_detector> dets;
  for (const auto& d : c.detectors) dets.push_back(detector_of(d));
  auto w = synthesize(m.get(), sweep_blocks(c, m.get(), sp.grid, sp.tm), c.qam, c.seed, true);
  plcemc_readings* raw = nullptr;
  check(plcemc_sweep(w.get(), sp.grid.data(), sp.grid.size(), sp.tm, dets.data(), dets.size(), &raw), "sweep");
  Readings r(raw);
  Outputs out;
  write_readings(out.file("readings.csv"), all_readings(r.get()));
  out.write(o.out);
}

void run_comply(const Common& o) {
  const auto c = configured(o);
  auto m = make_modulation(c);
  auto masks = make_masks(c.masks, c.mask_file);
  const auto sp = sweep_plan(c, m.get());
  auto w = synthesize(m.get(), sweep_blocks(c, m.get(), sp.grid, sp.tm), c.qam, c.seed, true);
  auto rep = comply(w.get(), masks.get(), sp.grid, sp.tm, c.refine);
  Outputs out;
  write_report(out, rep.get(), "");
  out.write(o.out);
  print_summary(rep.get());
}

void run_capacity(const Common& o) {
  const auto c = configured(o);
  auto m = make_modulation(c);
  const auto noise = noise_of(c.noise, c.noise_offset_db);
  auto scenarios = make_scenarios(c.channels, {c.synthetic, c.taps, c.delay_spread_s, c.attenuation_lo_db,
                                               c.attenuation_hi_db, c.seed},
                                  noise);
  double tx = 0.0;
  if (c.tx_psd_dbm_hz) {
    tx = *c.tx_psd_dbm_hz;
  } else {
    auto masks = make_masks(c.masks, c.mask_file);
    const auto sp = sweep_plan(c, m.get());
    auto w = synthesize(m.get(), sweep_blocks(c, m.get(), sp.grid, sp.tm), c.qam, c.seed, true);
    tx = summary_of(comply(w.get(), masks.get(), sp.grid, sp.tm, c.refine).get()).psd_limit_dbm_hz;
  }
  std::vector<double> rates;
  Outputs out;
  auto& f = out.file("capacity.csv");
  f << "scenario,rate_bps\n";
  for (const auto& s : scenarios) {
    rates.push_back(capacity_of(m.get(), s.get(), tx));
    f << plcemc_scenario_name(s.get()) << ',' << fmt(rates.back()) << '\n';
  }
  auto& cc = out.file("ccdf.csv");
  cc << "rate_bps,ccdf\n";
  write_ccdf(cc, "", rates);
  out.write(o.out);
  std::cout << "tx psd: " << fmt(tx) << " dBm/Hz, scenarios: " << rates.size() << '\n';
}

// Canned configurations of the comparison study.
struct Row {
  const char* name;
  std::size_t L, mu, alpha;
};
constexpr Row kNbRows[] = {{"PS-OFDM", 1, 30, 8}, {"CB-FMT-HR", 20, 30, 8}, {"CB-FMT-LR", 20, 30, 239}};
constexpr Row kBbRows[] = {{"PS-OFDM", 1, 556, 496}, {"CB-FMT-HR", 4, 556, 496}, {"CB-FMT-LR", 4, 556, 1264}};

ScenarioConfig row_config(const std::string& plan, const Row& r) {
  ScenarioConfig c;
  c.plan = plan;
  c.L = r.L;
  c.mu = r.mu;
  c.alpha = r.alpha;
  return c;
}

struct Band {
  const char* label;
  const char* plan;
  const char* mask;
  bool broadband;
};

void run_reproduce(const Common& o, std::size_t n_scenarios, const std::string& notch_file) {
  const std::uint64_t seed = o.seed.value_or(1);
  if (o.tm && *o.tm <= 0.0) throw ConfigError("--tm must be > 0");
  const std::optional<FreqGrid> grid_override =
      o.grid.empty() ? std::nullopt : std::optional<FreqGrid>(parse_grid(o.grid));
  if (n_scenarios == 0) throw ConfigError("--scenarios must be >= 1");
  if (!fs::exists(notch_file)) throw ConfigError("notch file not found: " + notch_file);
  const Band bands[] = {
      {"CENELEC-A", "CENELEC-A", "CENELEC-A", false},
      {"CENELEC-B", "CENELEC-B", "CENELEC-B", false},
      {"FCC-Low", "FCC-Low", "FCC-Low", false},
      {"FCC-Above", "FCC-above-CENELEC", "FCC", false},
      {"BB", "BB", "BB", true},
  };

  Outputs out;
  auto& notes = out.file("notes.txt");
  auto& rates = out.file("rates.csv");
  rates << "config,band,K,N,L,alpha,mu,rate_num,rate_den,rate\n";
  for (bool bb : {false, true}) {
    for (const auto& r : bb ? kBbRows : kNbRows) {
      auto m = make_modulation(row_config(bb ? "BB" : "CENELEC-A", r));
      const auto g = geometry(m.get());
      int64_t num = 0, den = 1;
      check(plcemc_modulation_rate(m.get(), &num, &den), "rate");
      rates << r.name << ',' << (bb ? "BB" : "NB") << ',' << g.K << ',' << g.N << ',' << g.L << ',' << g.alpha << ','
            << g.mu << ',' << num << ',' << den << ',' << fmt(static_cast<double>(num) / static_cast<double>(den))
            << '\n';
    }
  }
  notes << "CB-FMT-HR (BB): K=2048, L=4, mu=556, alpha=496 gives L*K/M1 = 8192/9244 = 0.886;"
           " this is the exact value of the parameters, not the rounded 0.9 quoted for the configuration.\n";

  auto& limits = out.file("psd_limits.csv");
  limits << "band,config,psd_limit_dbm_hz,max_scale_db,limiting_freq_hz,limiting_detector,limiting_mask\n";
  for (const auto& b : bands) {
    Masks masks = make_masks({b.mask}, "");
    auto& levels = out.file(std::string("levels_") + b.label + ".csv");
    levels << "config,freq_hz,detector,level_dbuv,limit_dbuv\n";
    auto& cap = out.file(std::string("capacity_") + b.label + ".csv");
    cap << "config,scenario,rate_bps\n";
    auto& ccdf = out.file(std::string("ccdf_") + b.label + ".csv");
    ccdf << "config,rate_bps,ccdf\n";

    const auto noise = noise_of(b.broadband ? "BB" : "NB", 0.0);
    ScenarioSpec gen{n_scenarios, 8, b.broadband ? 0.5e-6 : 2e-6, b.broadband ? 20.0 : 40.0,
                      b.broadband ? 60.0 : 80.0, seed};
    auto scenarios = make_scenarios({}, gen, noise);

    std::vector<double> bb_grid;
    std::vector<std::vector<double>> bb_psd;
    for (const auto& r : b.broadband ? kBbRows : kNbRows) {
      auto c = row_config(b.plan, r);
      if (b.broadband) c.notches = notch_file;
      c.grid = grid_override;
      c.tm = o.tm;
      auto m = make_modulation(c);
      const auto sp = sweep_plan(c, m.get());
      auto w = synthesize(m.get(), sweep_blocks(c, m.get(), sp.grid, sp.tm), 4, seed, true);
      auto rep = comply(w.get(), masks.get(), sp.grid, sp.tm, 3);
      const auto s = summary_of(rep.get());
      const auto entries = entries_of(rep.get());
      const auto& lim = entries.at(s.limiting);
      limits << b.label << ',' << r.name << ',' << fmt(s.psd_limit_dbm_hz) << ','
             << fmt(20.0 * std::log10(s.max_scale)) << ',' << fmt(lim.freq_hz) << ','
             << plcemc_detector_name(lim.detector) << ',' << lim.mask << '\n';
      // Levels after scaling to the compliant maximum.
      for (const auto& e : entries)
        levels << r.name << ',' << fmt(e.freq_hz) << ',' << plcemc_detector_name(e.detector) << ','
               << fmt(e.reading_dbuv + s.worst_margin_db) << ',' << fmt(e.limit_dbuv) << '\n';

      std::vector<double> rts;
      for (const auto& sc : scenarios) {
        rts.push_back(capacity_of(m.get(), sc.get(), s.psd_limit_dbm_hz));
        cap << r.name << ',' << plcemc_scenario_name(sc.get()) << ',' << fmt(rts.back()) << '\n';
      }
      write_ccdf(ccdf, std::string(r.name) + ',', rts);

      if (b.broadband) {
        if (bb_grid.empty())
          for (double f = 1e6; f <= 30e6; f += 5e3) bb_grid.push_back(f);
        std::vector<double> p(bb_grid.size());
        check(plcemc_psd_analytic(m.get(), bb_grid.data(), bb_grid.size(), p.data()), "analytic PSD");
        bb_psd.push_back(std::move(p));
      }
      std::cout << b.label << ' ' << r.name << ": psd limit " << fmt(s.psd_limit_dbm_hz) << " dBm/Hz\n";
    }
    if (b.broadband) {
      // Unit-power symbols on the same notched active set for every row.
      auto& f = out.file("psd_bb.csv");
      f << "freq_hz";
      for (const auto& r : kBbRows) f << ',' << r.name << "_dbm_hz";
      f << '\n';
      for (std::size_t i = 0; i < bb_grid.size(); ++i) {
        f << fmt(bb_grid[i]);
        for (const auto& p : bb_psd) f << ',' << fmt(to_dbm(p[i]));
        f << '\n';
      }
    }
  }
  out.write(o.out);
  std::cout << "note: " << "BB CB-FMT-HR normalized rate is 8192/9244 = 0.886 (see notes.txt)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plcemc: multicarrier PLC waveforms, EMI receiver model, compliance and capacity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(plcemc_version()));

  Common o;
  auto add_common = [&](CLI::App* s, bool config_required) {
    auto* opt = s->add_option("--config", o.config, "Scenario configuration (INI)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "Output directory")->capture_default_str();
    s->add_option("--seed", o.seed, "Random seed (overrides signal.seed)");
    s->add_option("--grid", o.grid, "Sweep grid f_lo:f_hi:step in Hz (overrides emi.grid)");
    s->add_option("--tm", o.tm, "Measurement time per frequency in seconds (overrides emi.tm)");
  };

  auto* synth = app.add_subcommand("synth", "Synthesize the real passband waveform to waveform.csv");
  auto* psd = app.add_subcommand("psd", "Analytic and empirical PSD curves");
  auto* sweep = app.add_subcommand("sweep", "EMI receiver readings over the grid");
  auto* compl_ = app.add_subcommand("comply", "Margins, maximum compliant scale and PSD limit");
  auto* cap = app.add_subcommand("capacity", "Shannon rate per channel scenario and its CCDF");
  auto* repro = app.add_subcommand("reproduce", "Canned comparison of PS-OFDM and CB-FMT rows");
  for (auto* s : {synth, psd, sweep, compl_, cap}) add_common(s, true);
  add_common(repro, false);
  std::size_t n_scenarios = 20;
  std::string notch_file = std::string(PLCEMC_DEFAULT_DATA_DIR) + "/notches_amateur.txt";
  repro->add_option("--scenarios", n_scenarios, "Synthetic channels per band")->capture_default_str();
  repro->add_option("--notches", notch_file, "Notch list for the broadband rows")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) run_synth(o);
    if (*psd) run_psd(o);
    if (*sweep) run_sweep(o);
    if (*compl_) run_comply(o);
    if (*cap) run_capacity(o);
    if (*repro) run_reproduce(o, n_scenarios, notch_file);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
