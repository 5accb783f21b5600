// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plcemc/types.hpp"

// Software EMI receiver: mix to IF, Gaussian IF filter, envelope, then peak,
// quasi-peak and average detectors. Readings are in dBuV and calibrated so an
// unmodulated sinusoid of RMS voltage V reads 20 log10(V / 1 uV).
namespace plcemc {

struct EmiBandProfile {
  std::string name;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double b_if = 0.0;  // 6-dB IF bandwidth, Hz
  double tau_c = 0.0;
  double tau_d = 0.0;

  void validate() const;
};

/// 9-150 kHz: 220 Hz, 45 ms, 500 ms. Also used down to 3 kHz.
EmiBandProfile profile_band_a();
/// 0.15-30 MHz: 9 kHz, 1 ms, 160 ms.
EmiBandProfile profile_band_b();
/// Band A below 150 kHz (from 3 kHz), band B from 150 kHz to 30 MHz.
EmiBandProfile profile_for(double freq_hz);

enum class Detector { peak, quasi_peak, average };

const char* detector_name(Detector d);  // "PK", "QP", "AV"
std::optional<Detector> parse_detector(std::string_view s);

struct EmiReading {
  double freq = 0.0;
  Detector detector = Detector::peak;
  double level_dbuv = 0.0;
};

/// 20 log10(v / 1 uV), floored at -200 dBuV.
double volts_to_dbuv(double v);

// ---------------------------------------------------------------------------
// Gaussian IF filter. Continuous response H(f) = exp(-T0^2 f^2).

/// 1/T0^2 = (5/6) B^2 ln 10. Its 6-dB bandwidth is about 2.3 B, hence calibration.
double gaussian_t0_initial(double b_if);
/// T0 whose continuous response has a 6-dB bandwidth of exactly b_if.
double gaussian_t0_calibrated(double b_if);

struct GaussianIf {
  std::vector<double> taps;  // symmetric, centre at taps.size() / 2
  double t0 = 0.0;
  double ts = 0.0;
  double centre_tap_raw = 0.0;  // sqrt(pi)/T0 before DC normalisation
};

/// Sampled g(t) = (sqrt(pi)/T0) exp(-pi^2 t^2 / T0^2), truncated where taps drop
/// below truncation_eps * peak, normalised to unit DC gain. T0 is refined until
/// the measured 6-dB bandwidth of the taps equals b_if.
GaussianIf gaussian_if_taps(double b_if, double ts, double truncation_eps = 1e-6);

/// Two-sided 6-dB bandwidth of a symmetric real FIR (|H| = 10^(-6/20) |H(0)|).
double measure_6db_bandwidth(std::span<const double> taps, double ts);

// ---------------------------------------------------------------------------
// Detectors. Envelopes are in volts; calibration factors are applied upstream.

/// Mixes to baseband at fc, filters with the IF taps, returns |.| scaled by the
/// sinusoid calibration (sqrt(2) for real input). Output aligned with the input.
std::vector<double> envelope_at(const WaveformSegment& signal, double fc, const GaussianIf& filter);

double detect_peak(std::span<const double> envelope);
double detect_average(std::span<const double> envelope);

/// Quasi-peak IIR output for every input sample, starting from state v0.
std::vector<double> quasi_peak_trace(std::span<const double> envelope, const EmiBandProfile& profile,
                                     double ts, double v0 = 0.0);
/// Maximum of the quasi-peak trace.
double detect_quasi_peak(std::span<const double> envelope, const EmiBandProfile& profile, double ts);

// ---------------------------------------------------------------------------
// Frequency sweep.

struct SweepOptions {
  /// Measurement time per frequency after settling; <= 0 uses everything available.
  double t_m = 1.0;
  std::vector<Detector> detectors{Detector::peak, Detector::quasi_peak, Detector::average};
};

/// Sweep engine working on the spectrum of the whole record. For each centre
/// frequency the bins within three IF bandwidths are weighted by the Gaussian
/// response and brought back to a decimated complex envelope, so the cost per
/// point does not grow with the sampling rate. The first and last 5*T0 are
/// discarded as filter settling.
class SweepEngine {
 public:
  explicit SweepEngine(const WaveformSegment& signal);

  double max_frequency() const;
  /// Calibrated envelope around fc with the given profile; `ts_out` receives the
  /// envelope sampling period.
  std::vector<double> envelope(double fc, const EmiBandProfile& profile, double& ts_out) const;
  std::vector<EmiReading> measure(double fc, const EmiBandProfile& profile, const SweepOptions& opt) const;

 private:
  std::vector<cplx> spectrum_;
  std::size_t n_ = 0;
  double ts_ = 0.0;
  bool real_ = false;
};

/// Shortest record SweepEngine::measure accepts for this profile and t_m:
/// settling at both ends plus t_m, with slack for envelope decimation.
double min_record_duration(const EmiBandProfile& profile, double t_m);

/// Sweep with one explicit profile for every grid frequency.
std::vector<EmiReading> sweep_spectrum(const WaveformSegment& signal, std::span<const double> freq_grid,
                                       const EmiBandProfile& profile, const SweepOptions& opt);
/// Sweep choosing the profile per frequency with profile_for.
std::vector<EmiReading> sweep_spectrum(const WaveformSegment& signal, std::span<const double> freq_grid,
                                       const SweepOptions& opt);

}  // namespace plcemc
