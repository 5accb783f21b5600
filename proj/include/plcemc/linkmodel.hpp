// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plcemc/filterbank.hpp"
#include "plcemc/types.hpp"

namespace plcemc {

/// Background noise PSD(f) = a + b exp(1e-6 f c) + offset_db, in dBm/Hz.
struct NoiseParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double offset_db = 0.0;

  void validate() const;
};

NoiseParams nb_noise();  // a = -106, b = 52.98, c = -0.0032
NoiseParams bb_noise();  // a = -107.625, b = 28.694, c = -0.044

double noise_psd(double f_hz, const NoiseParams& p);

struct ChannelTap {
  double delay_s = 0.0;
  double amplitude = 0.0;
};

struct ChannelScenario {
  std::string name;
  std::vector<ChannelTap> taps;
  NoiseParams noise;
  std::string tag;

  void validate() const;
};

/// Exact response sum_i a_i exp(-i 2 pi f tau_i).
cplx channel_response(const ChannelScenario& s, double f_hz);

/// Taps placed at round(delay / ts) and summed.
std::vector<cplx> sampled_impulse_response(const ChannelScenario& s, double ts);

/// Gaussian noise whose PSD follows noise_psd over [0, 1/ts) for complex output,
/// or one-sided over [0, 1/(2 ts)] for real output. Built by weighting the
/// spectrum of white noise, so it is exact in expectation on every bin.
WaveformSegment colored_noise(std::size_t n, double ts, const NoiseParams& p, std::uint64_t seed, bool real);

/// y = x * g_ch (full-length direct convolution) plus colored noise when `with_noise`.
WaveformSegment apply_channel(const WaveformSegment& x, const ChannelScenario& s, std::uint64_t noise_seed,
                              bool with_noise = true);

/// Multipath channel with exponentially decaying random taps. Delays are drawn
/// on [0, 4 delay_spread], power decays as exp(-tau / delay_spread), and the
/// total power gain is 10^(-attenuation_db / 10).
ChannelScenario synthetic_multipath(std::string name, std::size_t n_taps, double delay_spread_s,
                                    double attenuation_db, std::uint64_t seed, const NoiseParams& noise);

/// C = df sum_k log2(1 + P_k |H(f_k)|^2 / N(f_k)) over the active carriers,
/// f_k = k df. tx_psd_w_hz holds one linear PSD per active carrier.
double shannon_capacity(std::span<const double> tx_psd_w_hz, const ChannelScenario& s, const ModulationParams& params);
/// Same with one PSD in dBm/Hz for every active carrier.
double shannon_capacity_uniform(double tx_psd_dbm_hz, const ChannelScenario& s, const ModulationParams& params);

/// Empirical complementary CDF: fraction of samples strictly greater than x.
class Ccdf {
 public:
  explicit Ccdf(std::vector<double> samples);
  double operator()(double x) const;
  /// Distinct sample values with the CCDF right after each, ascending.
  std::vector<std::pair<double, double>> steps() const;
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

/// Two-column text: delay_s amplitude. '#' comments allowed.
std::vector<ChannelTap> read_channel(std::istream& in);
std::vector<ChannelTap> load_channel(const std::string& path);
void write_channel(std::ostream& out, const std::vector<ChannelTap>& taps);

}  // namespace plcemc
