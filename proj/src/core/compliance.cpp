// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/compliance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plcemc {

namespace {

constexpr double kFloorDbuv = -200.0;

bool at_floor(double dbuv) { return dbuv <= kFloorDbuv + 1e-9; }

}  // namespace

double dbuv_to_psd(double level_dbuv, double b_if) {
  require(b_if > 0.0 && std::isfinite(b_if), "IF bandwidth must be positive");
  return level_dbuv - 10.0 * std::log10(2.0 * kZ0) - 10.0 * std::log10(b_if) - kPsdOffsetDb;
}

double psd_limit(std::span<const double> levels_dbuv, double b_if) {
  require(!levels_dbuv.empty(), "no readings");
  return dbuv_to_psd(*std::max_element(levels_dbuv.begin(), levels_dbuv.end()), b_if);
}

double psd_limit(std::span<const EmiReading> readings) {
  require(!readings.empty(), "no readings");
  const bool any_peak =
      std::any_of(readings.begin(), readings.end(), [](const auto& r) { return r.detector == Detector::peak; });
  double best = -INFINITY;
  for (const auto& r : readings) {
    if (any_peak && r.detector != Detector::peak) continue;
    best = std::max(best, dbuv_to_psd(r.level_dbuv, profile_for(r.freq).b_if));
  }
  return best;
}

ComplianceReport compliance_margins(std::span<const EmiReading> readings, const std::vector<RegulatoryMask>& masks) {
  require(!masks.empty(), "no masks to check against");
  ComplianceReport rep;
  bool signal = false;
  for (const auto& r : readings) {
    require(std::isfinite(r.level_dbuv), "reading is not finite");
    bool covered = false;
    for (const auto& m : masks) {
      auto lim = limit_at(m, r.freq, r.detector);
      if (!lim) continue;
      covered = true;
      signal = signal || !at_floor(r.level_dbuv);
      rep.entries.push_back({r.freq, r.detector, m.name, r.level_dbuv, *lim, *lim - r.level_dbuv});
    }
    if (!covered) rep.not_covered.push_back(r);
  }
  if (rep.entries.empty()) fail(Errc::undefined_scale, "no reading is covered by the masks");
  if (!signal) fail(Errc::undefined_scale, "signal is zero at every covered frequency");

  auto worst = std::min_element(rep.entries.begin(), rep.entries.end(),
                                [](const auto& a, const auto& b) { return a.margin_db < b.margin_db; });
  rep.limiting = static_cast<std::size_t>(worst - rep.entries.begin());
  rep.worst_margin = worst->margin_db;
  rep.max_scale = std::pow(10.0, rep.worst_margin / 20.0);

  std::vector<EmiReading> scaled;
  for (const auto& r : readings) {
    if (r.freq < 3e3 || r.freq > 30e6) continue;
    scaled.push_back({r.freq, r.detector, r.level_dbuv + rep.worst_margin});
  }
  rep.psd_limit_dbm_hz = scaled.empty() ? -INFINITY : psd_limit(scaled);
  return rep;
}

ComplianceReport max_compliant_scale(const WaveformSegment& signal, const std::vector<RegulatoryMask>& masks,
                                     std::span<const double> grid, const ScaleSearchOptions& opt) {
  require(!grid.empty(), "frequency grid is empty");
  require(signal.mean_power() > 0.0, "signal is zero; the compliant scale is undefined");
  SweepEngine engine(signal);
  std::vector<EmiReading> readings;
  auto measure = [&](double f) {
    auto r = engine.measure(f, profile_for(f), opt.sweep);
    readings.insert(readings.end(), r.begin(), r.end());
  };
  for (double f : grid) measure(f);
  auto rep = compliance_margins(readings, masks);

  // Local refinement around the binding frequency.
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  double fstar = rep.limiting_entry().freq;
  double h = INFINITY;
  auto it = std::lower_bound(sorted.begin(), sorted.end(), fstar);
  if (it != sorted.begin()) h = fstar - *std::prev(it);
  if (it != sorted.end() && std::next(it) != sorted.end()) h = std::min(h, *std::next(it) - fstar);
  if (!std::isfinite(h)) h = profile_for(fstar).b_if;
  for (int k = 0; k < opt.refine_iterations; ++k) {
    h *= 0.5;
    for (double f : {fstar - h, fstar + h}) {
      if (!(f > 0.0 && f < engine.max_frequency())) continue;
      try {
        measure(f);
      } catch (const Error& e) {
        if (e.code() != Errc::not_covered) throw;
      }
    }
    rep = compliance_margins(readings, masks);
    fstar = rep.limiting_entry().freq;
  }
  return rep;
}

std::string summary(const ComplianceReport& rep) {
  std::ostringstream os;
  const auto& e = rep.limiting_entry();
  os << "compliant: " << (rep.compliant() ? "yes" : "no") << '\n'
     << "worst margin: " << rep.worst_margin << " dB at " << e.freq << " Hz (" << detector_name(e.detector) << ", "
     << e.mask << ")\n"
     << "max scale: " << rep.max_scale << " (" << 20.0 * std::log10(rep.max_scale) << " dB)\n"
     << "psd limit: " << rep.psd_limit_dbm_hz << " dBm/Hz\n"
     << "entries: " << rep.entries.size() << ", not covered: " << rep.not_covered.size() << '\n';
  return os.str();
}

}  // namespace plcemc
