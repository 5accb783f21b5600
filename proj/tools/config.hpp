// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Scenario configuration of the command-line tool. INI syntax; the schema is
// documented in docs/config.md.
namespace plcemc_cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FreqGrid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::vector<double> points() const;
};

struct ScenarioConfig {
  // [modulation]
  std::string plan;
  std::size_t L = 1;
  std::size_t mu = 0;
  std::size_t alpha = 0;
  unsigned qam = 4;
  /// nullopt: the plan's carriers. Otherwise the explicit (possibly empty) set.
  std::optional<std::vector<std::size_t>> active;
  std::string notches;  // resolved path, empty for none
  std::size_t notch_guard = 6;

  // [signal]
  double duration_s = 0.0;  // 0: derived from the sweep needs
  std::size_t blocks = 0;   // overrides duration_s when > 0
  std::uint64_t seed = 1;

  // [emi]
  /// nullopt: automatic grid with two points per IF bandwidth over the band plan's range.
  std::optional<FreqGrid> grid;
  /// nullopt: 1 s for narrowband plans, 100 ms for broadband.
  std::optional<double> tm;
  std::vector<std::string> detectors{"PK", "QP", "AV"};
  std::vector<std::string> masks;
  std::string mask_file;
  int refine = 3;

  // [psd]
  double rbw = 200.0;
  double psd_step = 100.0;

  // [capacity]
  std::string noise = "NB";
  double noise_offset_db = 0.0;
  std::vector<std::string> channels;  // resolved paths
  std::size_t synthetic = 0;
  std::size_t taps = 8;
  double delay_spread_s = 2e-6;
  double attenuation_lo_db = 40.0;
  double attenuation_hi_db = 80.0;
  std::optional<double> tx_psd_dbm_hz;
};

/// Parses and checks syntax, ranges and unknown keys. Relative paths are
/// resolved against the directory of the config file.
ScenarioConfig load_config(const std::string& path);

/// "lo:hi:step" with lo < hi and step > 0.
FreqGrid parse_grid(const std::string& text);

/// Shortest round-trip decimal text, independent of the locale.
std::string fmt(double v);

}  // namespace plcemc_cli
