// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "plcemc/filterbank.hpp"
#include "plcemc/types.hpp"

namespace plcemc {

/// Power spectral density sampled on a frequency grid. Linear values are W/Hz
/// into kZ0; logarithmic values are dBm/Hz.
struct PsdCurve {
  std::vector<double> freq;
  std::vector<double> values;
  bool dbm = false;
  double rbw = 0.0;

  std::size_t size() const { return freq.size(); }
  void validate() const;
  PsdCurve to_dbm() const;
  PsdCurve to_linear() const;
  /// Integral of the linear PSD over the grid (W). Uniform grids reduce to sum * step.
  double integrated_power() const;
};

/// Power response of the interpolator that maps the complex baseband onto the
/// passband. Argument in Hz.
using InterpolatorResponse = std::function<double(double)>;

/// Ideal brick-wall: 1 on [0, 1/ts), 0 elsewhere.
InterpolatorResponse brickwall_interpolator(double ts);

/// Mean PSD of the shaped filter-bank signal driven by independent unit-power
/// symbols on the active sub-channels. Frequencies are in the baseband frame
/// [0, 1/Ts); the same curve is the one-sided PSD of the real passband signal
/// produced by interpolate_to_real.
PsdCurve analytic_psd(const ModulationParams& params, const PrototypePulse& pulse,
                      std::span<const double> window, const InterpolatorResponse& interpolator,
                      std::span<const double> freq_grid);

PsdCurve analytic_psd(const ModulationParams& params, const PrototypePulse& pulse,
                      std::span<const double> window, std::span<const double> freq_grid);

/// Averaged periodogram: Hann taper, 50% overlap, segment length round(fs / rbw).
/// Complex input yields a two-sided estimate on [0, fs); real input a one-sided
/// estimate on [0, fs/2].
PsdCurve empirical_psd(const WaveformSegment& waveform, double resolution_bw);

/// Ideal two-times interpolation of a complex baseband signal onto the band
/// [0, 1/Ts) followed by sqrt(2)*Re, so the real result keeps the mean power.
WaveformSegment interpolate_to_real(const WaveformSegment& baseband);

/// f_lo, f_lo + step, ... up to and including f_hi (up to rounding).
std::vector<double> uniform_grid(double f_lo, double f_hi, double step);

/// 10 log10(p_w_hz / 1 mW), floored at -400 for zero.
double w_hz_to_dbm_hz(double p_w_hz);
double dbm_hz_to_w_hz(double dbm_hz);

}  // namespace plcemc
