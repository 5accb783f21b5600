// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <span>
#include <string>
#include <vector>

#include "plcemc/emi.hpp"
#include "plcemc/regdb.hpp"

namespace plcemc {

/// Reference offset between dBpW/Hz and dBm/Hz used by the PSD conversion.
inline constexpr double kPsdOffsetDb = 90.0;

struct MarginEntry {
  double freq = 0.0;
  Detector detector = Detector::peak;
  std::string mask;
  double reading_dbuv = 0.0;
  double limit_dbuv = 0.0;
  double margin_db = 0.0;  // limit - reading
};

struct ComplianceReport {
  std::vector<MarginEntry> entries;
  std::vector<EmiReading> not_covered;
  double worst_margin = 0.0;
  std::size_t limiting = 0;  // index into entries
  /// 10^(worst_margin / 20): uniform scale that puts the binding reading on its limit.
  double max_scale = 0.0;
  /// PSD limit of the signal after scaling by max_scale.
  double psd_limit_dbm_hz = 0.0;

  bool compliant() const { return worst_margin >= 0.0; }
  const MarginEntry& limiting_entry() const { return entries.at(limiting); }
};

/// level - 10 log10(2 Z0) - 10 log10(B_IF) - 90.
double dbuv_to_psd(double level_dbuv, double b_if);

/// Max over readings of dbuv_to_psd(reading, B_IF(f)), B_IF taken from the EMI
/// profile at each reading frequency. Peak readings are used when present.
double psd_limit(std::span<const EmiReading> readings);
/// Max over levels of dbuv_to_psd(level, b_if).
double psd_limit(std::span<const double> levels_dbuv, double b_if);

/// Confronts every reading with every mask that has a limit for its frequency
/// and detector. Readings covered by no mask are listed in `not_covered`.
/// Throws Errc::undefined_scale when nothing is covered or every covered
/// reading is at the detector floor (no signal).
ComplianceReport compliance_margins(std::span<const EmiReading> readings, const std::vector<RegulatoryMask>& masks);

struct ScaleSearchOptions {
  SweepOptions sweep;
  /// Bisection steps around the binding frequency.
  int refine_iterations = 3;
};

/// Sweeps `signal` on `grid` (profile per frequency), refines around the binding
/// frequency and returns the report; report.max_scale is s*.
ComplianceReport max_compliant_scale(const WaveformSegment& signal, const std::vector<RegulatoryMask>& masks,
                                     std::span<const double> grid, const ScaleSearchOptions& opt = {});

/// Human-readable multi-line summary.
std::string summary(const ComplianceReport& report);

}  // namespace plcemc
