// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "plcemc/dft.hpp"
#include "plcemc/regdb.hpp"

namespace plcemc {

void NoiseParams::validate() const {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(offset_db),
          "noise parameters must be finite");
}

NoiseParams nb_noise() { return {-106.0, 52.98, -0.0032, 0.0}; }
NoiseParams bb_noise() { return {-107.625, 28.694, -0.044, 0.0}; }

double noise_psd(double f, const NoiseParams& p) {
  require(f >= 0.0 && std::isfinite(f), "noise PSD needs f >= 0");
  return p.a + p.b * std::exp(1e-6 * f * p.c) + p.offset_db;
}

void ChannelScenario::validate() const {
  require(!taps.empty(), "channel has no taps");
  for (const auto& t : taps)
    require(std::isfinite(t.delay_s) && t.delay_s >= 0.0 && std::isfinite(t.amplitude),
            "channel taps need finite amplitudes and non-negative delays");
  noise.validate();
}

cplx channel_response(const ChannelScenario& s, double f) {
  cplx h{};
  for (const auto& t : s.taps) h += t.amplitude * std::polar(1.0, -2.0 * std::numbers::pi * f * t.delay_s);
  return h;
}

std::vector<cplx> sampled_impulse_response(const ChannelScenario& s, double ts) {
  s.validate();
  require(ts > 0.0, "sampling period must be positive");
  std::size_t len = 0;
  for (const auto& t : s.taps) len = std::max(len, static_cast<std::size_t>(std::llround(t.delay_s / ts)) + 1);
  std::vector<cplx> h(len);
  for (const auto& t : s.taps) h[static_cast<std::size_t>(std::llround(t.delay_s / ts))] += t.amplitude;
  return h;
}

WaveformSegment colored_noise(std::size_t n, double ts, const NoiseParams& p, std::uint64_t seed, bool real) {
  require(n >= 2, "noise record needs at least two samples");
  require(ts > 0.0 && std::isfinite(ts), "sampling period must be positive");
  p.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const double fs = 1.0 / ts;
  const double df = fs / static_cast<double>(n);
  auto amp = [&](double f, double share) {
    return std::sqrt(std::pow(10.0, noise_psd(f, p) / 10.0) * 1e-3 * kZ0 * fs * share);
  };

  std::vector<cplx> w(n);
  if (real) {
    for (auto& v : w) v = g(rng);
  } else {
    const double s = std::sqrt(0.5);
    for (auto& v : w) v = {s * g(rng), s * g(rng)};
  }
  auto W = dft::forward(w);
  if (real) {
    // Hermitian weighting keeps the output real; one-sided PSD = 2 x two-sided.
    for (std::size_t k = 0; k <= n / 2; ++k) {
      const double a = amp(static_cast<double>(k) * df, 0.5);
      W[k] *= a;
      if (k != 0 && k != n - k) W[n - k] *= a;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) W[k] *= amp(static_cast<double>(k) * df, 1.0);
  }
  WaveformSegment out;
  out.samples = dft::inverse(W);
  if (real)
    for (auto& v : out.samples) v = v.real();
  out.ts = ts;
  out.real = real;
  return out;
}

WaveformSegment apply_channel(const WaveformSegment& x, const ChannelScenario& s, std::uint64_t noise_seed,
                              bool with_noise) {
  x.validate();
  const auto h = sampled_impulse_response(s, x.ts);
  WaveformSegment y;
  y.ts = x.ts;
  y.origin = x.origin;
  y.real = x.real;
  y.samples.assign(x.size() + h.size() - 1, cplx{});
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == cplx{}) continue;
    for (std::size_t i = 0; i < x.size(); ++i) y.samples[i + j] += x.samples[i] * h[j];
  }
  if (x.real)
    for (auto& v : y.samples) v = v.real();
  if (with_noise) {
    auto eta = colored_noise(y.size(), y.ts, s.noise, noise_seed, y.real);
    for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += eta.samples[i];
  }
  return y;
}

ChannelScenario synthetic_multipath(std::string name, std::size_t n_taps, double delay_spread_s,
                                    double attenuation_db, std::uint64_t seed, const NoiseParams& noise) {
  require(n_taps >= 1, "multipath channel needs at least one tap");
  require(delay_spread_s >= 0.0 && std::isfinite(delay_spread_s), "delay spread must be >= 0");
  require(std::isfinite(attenuation_db), "attenuation must be finite");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 4.0 * delay_spread_s);
  std::normal_distribution<double> g;
  std::vector<double> delays{0.0};
  for (std::size_t i = 1; i < n_taps; ++i) delays.push_back(u(rng));
  std::sort(delays.begin(), delays.end());

  ChannelScenario s{std::move(name), {}, noise, "synthetic"};
  double power = 0.0;
  for (std::size_t i = 0; i < n_taps; ++i) {
    const double decay = delay_spread_s > 0.0 ? std::exp(-delays[i] / (2.0 * delay_spread_s)) : 1.0;
    const double a = (i == 0 ? 1.0 : g(rng)) * decay;
    s.taps.push_back({delays[i], a});
    power += a * a;
  }
  const double norm = std::sqrt(std::pow(10.0, -attenuation_db / 10.0) / power);
  for (auto& t : s.taps) t.amplitude *= norm;
  return s;
}

double shannon_capacity(std::span<const double> tx, const ChannelScenario& s, const ModulationParams& params) {
  s.validate();
  params.validate();
  require(tx.size() == params.active.size(), "one transmit PSD per active carrier is required");
  const double df = params.carrier_spacing();
  double bits = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    require(tx[i] >= 0.0 && std::isfinite(tx[i]), "transmit PSD must be finite and >= 0");
    const double f = static_cast<double>(params.active[i]) * df;
    const double n = std::pow(10.0, noise_psd(f, s.noise) / 10.0) * 1e-3;
    if (!(n > 0.0) || !std::isfinite(n)) fail(Errc::singular, "noise PSD is zero at an active carrier");
    bits += std::log2(1.0 + tx[i] * std::norm(channel_response(s, f)) / n);
  }
  return df * bits;
}

double shannon_capacity_uniform(double tx_psd_dbm_hz, const ChannelScenario& s, const ModulationParams& params) {
  const double p = std::isinf(tx_psd_dbm_hz) && tx_psd_dbm_hz < 0 ? 0.0 : std::pow(10.0, tx_psd_dbm_hz / 10.0) * 1e-3;
  std::vector<double> tx(params.active.size(), p);
  return shannon_capacity(tx, s, params);
}

Ccdf::Ccdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  require(!sorted_.empty(), "CCDF needs at least one sample");
  for (double v : sorted_) require(!std::isnan(v), "CCDF samples must not be NaN");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ccdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> Ccdf::steps() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < sorted_.size(); ++i)
    if (i + 1 == sorted_.size() || sorted_[i + 1] != sorted_[i]) out.emplace_back(sorted_[i], (*this)(sorted_[i]));
  return out;
}

std::vector<ChannelTap> read_channel(std::istream& in) {
  std::vector<ChannelTap> taps;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    std::istringstream is(line.substr(0, line.find('#')));
    std::vector<std::string> t;
    for (std::string w; is >> w;) t.push_back(w);
    if (t.empty()) continue;
    if (t.size() != 2) fail(Errc::parse, "line " + std::to_string(no) + ": expected: delay_s amplitude");
    try {
      taps.push_back({parse_double(t[0]), parse_double(t[1])});
    } catch (const Error& e) {
      fail(Errc::parse, "line " + std::to_string(no) + ": " + e.what());
    }
    if (taps.back().delay_s < 0.0) fail(Errc::parse, "line " + std::to_string(no) + ": negative delay");
  }
  if (taps.empty()) fail(Errc::parse, "channel file has no taps");
  return taps;
}

std::vector<ChannelTap> load_channel(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io, "cannot open '" + path + "'");
  return read_channel(f);
}

void write_channel(std::ostream& out, const std::vector<ChannelTap>& taps) {
  out << "# delay_s amplitude\n";
  for (const auto& t : taps) out << format_double(t.delay_s) << ' ' << format_double(t.amplitude) << '\n';
}

}  // namespace plcemc
