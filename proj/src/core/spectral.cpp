// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plcemc/dft.hpp"

namespace plcemc {

double w_hz_to_dbm_hz(double p) {
  if (p <= 0.0) return -400.0;
  return std::max(-400.0, 10.0 * std::log10(p * 1e3));
}

double dbm_hz_to_w_hz(double d) { return std::pow(10.0, d / 10.0) * 1e-3; }

void PsdCurve::validate() const {
  require(freq.size() == values.size(), "PSD grid and values differ in length");
  for (std::size_t i = 0; i < freq.size(); ++i) {
    require(std::isfinite(freq[i]) && std::isfinite(values[i]), "PSD curve has non-finite entries");
    require(i == 0 || freq[i] > freq[i - 1], "PSD grid must be strictly increasing");
    require(dbm || values[i] >= 0.0, "linear PSD values must be non-negative");
  }
}

PsdCurve PsdCurve::to_dbm() const {
  if (dbm) return *this;
  PsdCurve out = *this;
  out.dbm = true;
  for (auto& v : out.values) v = w_hz_to_dbm_hz(v);
  return out;
}

PsdCurve PsdCurve::to_linear() const {
  if (!dbm) return *this;
  PsdCurve out = *this;
  out.dbm = false;
  for (auto& v : out.values) v = dbm_hz_to_w_hz(v);
  return out;
}

double PsdCurve::integrated_power() const {
  const auto lin = to_linear();
  const std::size_t n = lin.size();
  if (n == 0) return 0.0;
  if (n == 1) return lin.values[0] * rbw;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? freq[1] - freq[0] : freq[i] - freq[i - 1];
    const double hi = i + 1 == n ? freq[n - 1] - freq[n - 2] : freq[i + 1] - freq[i];
    acc += lin.values[i] * 0.5 * (lo + hi);
  }
  return acc;
}

InterpolatorResponse brickwall_interpolator(double ts) {
  require(ts > 0.0, "sampling period must be positive");
  const double fs = 1.0 / ts;
  return [fs](double f) { return (f >= 0.0 && f < fs) ? 1.0 : 0.0; };
}

PsdCurve analytic_psd(const ModulationParams& params, const PrototypePulse& pulse,
                      std::span<const double> window, std::span<const double> freq_grid) {
  return analytic_psd(params, pulse, window, brickwall_interpolator(params.ts), freq_grid);
}

PsdCurve analytic_psd(const ModulationParams& params, const PrototypePulse& pulse,
                      std::span<const double> window, const InterpolatorResponse& interpolator,
                      std::span<const double> freq_grid) {
  params.validate();
  require(pulse.size() == params.M(), "prototype pulse length must equal M = L*N");
  require(!freq_grid.empty(), "frequency grid is empty");
  require(!window.empty(), "window is empty");
  require(static_cast<bool>(interpolator), "interpolator response is empty");

  const std::size_t M = params.M(), Q = params.Q();
  // |G_ps|^2 tabulated on P = M*U points, so every carrier offset (s + kQ)/M is
  // an integer number of table steps and one interpolation weight serves all terms.
  const std::size_t U = dft::good_size((64 * window.size() + M - 1) / M);
  const std::size_t P = M * U;
  std::vector<cplx> buf(P);
  for (std::size_t n = 0; n < window.size(); ++n) buf[n % P] += window[n];
  auto W = dft::forward(buf);
  std::vector<double> table(P);
  for (std::size_t j = 0; j < P; ++j) table[j] = std::norm(W[j]);

  struct Term {
    std::size_t offset;
    double weight;
  };
  std::vector<Term> terms;
  const auto& G = pulse.freq();
  for (std::size_t k : params.active)
    for (std::size_t s : pulse.support()) terms.push_back({((s + k * Q) % M) * U, std::norm(G[s])});

  const double Md = static_cast<double>(M);
  const double scale = params.ts * static_cast<double>(params.L) /
                       (static_cast<double>(params.M1()) * Md * Md * kZ0);

  PsdCurve out;
  out.freq.assign(freq_grid.begin(), freq_grid.end());
  out.values.resize(freq_grid.size());
  out.rbw = freq_grid.size() > 1 ? freq_grid[1] - freq_grid[0] : 0.0;
  for (std::size_t i = 0; i < freq_grid.size(); ++i) {
    const double f = freq_grid[i];
    require(std::isfinite(f), "frequency grid has non-finite entries");
    require(i == 0 || f > freq_grid[i - 1], "frequency grid must be strictly increasing");
    const double gi = interpolator(f);
    if (gi == 0.0 || terms.empty()) continue;
    double u = f * params.ts;
    u -= std::floor(u);
    const double pos = u * static_cast<double>(P);
    auto i0 = static_cast<std::size_t>(pos);
    const double fr = pos - static_cast<double>(i0);
    i0 %= P;
    double acc = 0.0;
    for (const auto& t : terms) {
      const std::size_t a = (i0 + P - t.offset) % P;
      const std::size_t b = a + 1 == P ? 0 : a + 1;
      acc += t.weight * ((1.0 - fr) * table[a] + fr * table[b]);
    }
    out.values[i] = gi * scale * acc;
  }
  return out;
}

PsdCurve empirical_psd(const WaveformSegment& waveform, double resolution_bw) {
  waveform.validate();
  require(resolution_bw > 0.0 && std::isfinite(resolution_bw), "resolution bandwidth must be positive");
  const double fs = waveform.sample_rate();
  const auto nseg = static_cast<std::size_t>(std::llround(fs / resolution_bw));
  require(nseg >= 4, "resolution bandwidth too coarse for the sampling rate");
  require(waveform.size() >= nseg, "waveform shorter than one periodogram segment");

  // Periodic Hann taper.
  std::vector<double> w(nseg);
  double wsum2 = 0.0;
  for (std::size_t n = 0; n < nseg; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(nseg));
    wsum2 += w[n] * w[n];
  }

  const std::size_t hop = std::max<std::size_t>(1, nseg / 2);
  std::vector<double> acc(nseg, 0.0);
  std::vector<cplx> seg(nseg), spec(nseg);
  std::size_t count = 0;
  for (std::size_t start = 0; start + nseg <= waveform.size(); start += hop, ++count) {
    for (std::size_t n = 0; n < nseg; ++n) seg[n] = waveform.samples[start + n] * w[n];
    dft::forward(seg, spec);
    for (std::size_t p = 0; p < nseg; ++p) acc[p] += std::norm(spec[p]);
  }
  const double norm = 1.0 / (static_cast<double>(count) * fs * wsum2 * kZ0);
  const double df = fs / static_cast<double>(nseg);

  PsdCurve out;
  out.rbw = df;
  if (!waveform.real) {
    out.freq.resize(nseg);
    out.values.resize(nseg);
    for (std::size_t p = 0; p < nseg; ++p) {
      out.freq[p] = static_cast<double>(p) * df;
      out.values[p] = acc[p] * norm;
    }
    return out;
  }
  const std::size_t half = nseg / 2;
  out.freq.resize(half + 1);
  out.values.resize(half + 1);
  for (std::size_t p = 0; p <= half; ++p) {
    const bool edge = p == 0 || (nseg % 2 == 0 && p == half);
    out.freq[p] = static_cast<double>(p) * df;
    out.values[p] = acc[p] * norm * (edge ? 1.0 : 2.0);
  }
  return out;
}

WaveformSegment interpolate_to_real(const WaveformSegment& baseband) {
  baseband.validate();
  const std::size_t n = baseband.size();
  auto X = dft::forward(baseband.samples);
  std::vector<cplx> Y(2 * n);
  for (std::size_t p = 0; p < n; ++p) Y[p] = 2.0 * X[p];
  auto y = dft::inverse(Y);
  WaveformSegment out;
  out.ts = baseband.ts / 2.0;
  out.origin = baseband.origin * 2;
  out.real = true;
  out.samples.resize(2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j) out.samples[j] = std::numbers::sqrt2 * y[j].real();
  return out;
}

std::vector<double> uniform_grid(double f_lo, double f_hi, double step) {
  require(std::isfinite(f_lo) && std::isfinite(f_hi) && f_hi >= f_lo, "grid bounds must satisfy f_lo <= f_hi");
  require(step > 0.0 && std::isfinite(step), "grid step must be positive");
  const auto n = static_cast<std::size_t>(std::floor((f_hi - f_lo) / step * (1.0 + 1e-12) + 1e-9)) + 1;
  require(n <= 50'000'000, "grid has too many points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = f_lo + static_cast<double>(i) * step;
  return g;
}

}  // namespace plcemc
