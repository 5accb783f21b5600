// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plcemc/emi.hpp"
#include "plcemc/filterbank.hpp"

// Conducted-emission limit masks, band plans and notch lists.
namespace plcemc {

enum class Interp { constant, log_linear };

struct LimitSegment {
  double f_lo = 0.0;
  double f_hi = 0.0;
  Detector detector = Detector::peak;
  double level_lo = 0.0;  // dBuV at f_lo
  double level_hi = 0.0;  // dBuV at f_hi
  Interp interp = Interp::constant;

  void validate() const;
  bool contains(double f) const { return f >= f_lo && f <= f_hi; }
  double level_at(double f) const;
};

struct Notch {
  std::string label;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

struct RegulatoryMask {
  std::string name;
  std::string region;
  std::vector<LimitSegment> segments;
  std::vector<Notch> notches;

  void validate() const;
  std::vector<Detector> detectors() const;
  double f_min() const;
  double f_max() const;
};

/// Limit in dBuV. A frequency on a shared boundary belongs to the lower segment.
/// nullopt when no segment for that detector covers f.
std::optional<double> limit_at(const RegulatoryMask& mask, double f, Detector detector);

/// Every built-in mask: the EN55022 rows, the EN50065 / P1901.2 / EN50561-1
/// pieces, and the composite masks used for compliance ("CENELEC-A",
/// "CENELEC-B", "FCC", "FCC-Low", "BB").
const std::vector<RegulatoryMask>& builtin_masks();
/// Throws Errc::unknown_name.
const RegulatoryMask& find_mask(const std::string& name);
/// Looks up `name` among `masks` first, then the built-ins.
const RegulatoryMask& find_mask(const std::vector<RegulatoryMask>& masks, const std::string& name);

struct BandPlan {
  std::string name;
  double first_carrier = 0.0;  // Hz
  double last_carrier = 0.0;   // Hz
  std::size_t n_on = 0;
  std::size_t K = 0;
  double fs = 0.0;  // real passband sampling rate, Hz

  void validate() const;
  /// fs / (2K)
  double carrier_spacing() const;
  /// Complex-baseband sampling period 1 / (K * carrier_spacing()).
  double baseband_ts() const;
  std::size_t first_index() const;
  std::size_t last_index() const;
  std::vector<std::size_t> active_carriers() const;
};

const std::vector<BandPlan>& builtin_band_plans();
/// "CENELEC-A", "CENELEC-B", "FCC-above-CENELEC", "FCC-Low", "BB". Throws Errc::unknown_name.
const BandPlan& band_plan(const std::string& name);

/// Cyclic filter-bank parameters for a band plan: K = N = plan.K, the plan's
/// carriers active.
ModulationParams make_params(const BandPlan& plan, std::size_t L, std::size_t mu, std::size_t alpha);

struct NotchResult {
  std::vector<std::size_t> active;
  std::vector<std::size_t> removed;
  double depth_target_dbuv = 0.0;
};

/// Removes every carrier whose band [(k - 1/2) df, (k + 1/2) df) meets a notch,
/// plus `guard` carriers on each side. The notch depth target is
/// in_band_limit_dbuv - 30 dB.
NotchResult apply_notches(const std::vector<std::size_t>& active, const std::vector<Notch>& notches,
                          const ModulationParams& params, std::size_t guard = 6,
                          double in_band_limit_dbuv = 105.0);

// ---------------------------------------------------------------------------
// Text formats (see docs/file_formats.md). Blank lines and '#' comments are ignored.

std::vector<RegulatoryMask> read_masks(std::istream& in);
void write_masks(std::ostream& out, const std::vector<RegulatoryMask>& masks);
std::vector<RegulatoryMask> load_masks(const std::string& path);
void save_masks(const std::string& path, const std::vector<RegulatoryMask>& masks);

std::vector<Notch> read_notches(std::istream& in);
void write_notches(std::ostream& out, const std::vector<Notch>& notches);
std::vector<Notch> load_notches(const std::string& path);

std::vector<BandPlan> read_band_plans(std::istream& in);
void write_band_plans(std::ostream& out, const std::vector<BandPlan>& plans);
std::vector<BandPlan> load_band_plans(const std::string& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace plcemc
