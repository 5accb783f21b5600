// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/emi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "plcemc/dft.hpp"

namespace plcemc {

namespace {

constexpr double kPi = std::numbers::pi;
// |H| at the 6-dB points.
const double kSixDb = std::pow(10.0, -6.0 / 20.0);
// Spectrum kept around the centre frequency, in IF bandwidths on each side.
constexpr double kGatherSpan = 3.0;
// Envelope sampling rate of the sweep engine, in IF bandwidths.
constexpr double kEnvelopeRate = 16.0;
// Settling time discarded at each end of the record, in units of T0.
constexpr double kSettleT0 = 5.0;

}  // namespace

void EmiBandProfile::validate() const {
  require(f_lo >= 0.0 && f_lo < f_hi, "EMI profile needs f_lo < f_hi");
  require(b_if > 0.0 && std::isfinite(b_if), "EMI profile IF bandwidth must be positive");
  require(tau_c > 0.0 && tau_d > tau_c, "EMI profile needs tau_d > tau_c > 0");
}

EmiBandProfile profile_band_a() { return {"A", 9e3, 150e3, 220.0, 45e-3, 500e-3}; }
EmiBandProfile profile_band_b() { return {"B", 150e3, 30e6, 9e3, 1e-3, 160e-3}; }

EmiBandProfile profile_for(double f) {
  if (f >= 3e3 && f < 150e3) {
    auto p = profile_band_a();
    p.f_lo = 3e3;
    return p;
  }
  if (f >= 150e3 && f <= 30e6) return profile_band_b();
  fail(Errc::not_covered, "no EMI receiver profile covers " + std::to_string(f) + " Hz");
}

const char* detector_name(Detector d) {
  switch (d) {
    case Detector::peak: return "PK";
    case Detector::quasi_peak: return "QP";
    case Detector::average: return "AV";
  }
  return "?";
}

std::optional<Detector> parse_detector(std::string_view s) {
  if (s == "PK") return Detector::peak;
  if (s == "QP") return Detector::quasi_peak;
  if (s == "AV") return Detector::average;
  return std::nullopt;
}

double volts_to_dbuv(double v) {
  if (!(v > 0.0)) return -200.0;
  return std::max(-200.0, 20.0 * std::log10(v / 1e-6));
}

// ---------------------------------------------------------------------------

double gaussian_t0_initial(double b_if) {
  require(b_if > 0.0, "IF bandwidth must be positive");
  return 1.0 / std::sqrt(5.0 / 6.0 * b_if * b_if * std::log(10.0));
}

double gaussian_t0_calibrated(double b_if) {
  // exp(-T0^2 (B/2)^2) = 10^(-6/20)
  require(b_if > 0.0, "IF bandwidth must be positive");
  return 2.0 * std::sqrt(-std::log(kSixDb)) / b_if;
}

namespace {

std::vector<double> sample_gaussian(double t0, double ts, double eps, double& centre_raw) {
  const double half_span = t0 * std::sqrt(std::log(1.0 / eps)) / kPi;
  const auto nh = static_cast<std::size_t>(std::floor(half_span / ts));
  std::vector<double> taps(2 * nh + 1);
  centre_raw = std::sqrt(kPi) / t0;
  for (std::size_t j = 0; j < taps.size(); ++j) {
    const double t = (static_cast<double>(j) - static_cast<double>(nh)) * ts;
    taps[j] = centre_raw * std::exp(-kPi * kPi * t * t / (t0 * t0));
  }
  const double dc = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (auto& v : taps) v /= dc;
  return taps;
}

double fir_response(std::span<const double> taps, double ts, double f) {
  const double c = static_cast<double>(taps.size() / 2);
  double acc = 0.0;
  for (std::size_t j = 0; j < taps.size(); ++j)
    acc += taps[j] * std::cos(2.0 * kPi * f * (static_cast<double>(j) - c) * ts);
  return acc;
}

}  // namespace

double measure_6db_bandwidth(std::span<const double> taps, double ts) {
  require(!taps.empty() && ts > 0.0, "bandwidth measurement needs taps and a sampling period");
  const double h0 = fir_response(taps, ts, 0.0);
  require(h0 != 0.0, "filter has zero DC gain");
  const double target = kSixDb;
  const double nyq = 0.5 / ts;
  const double step = std::min(nyq, 1.0 / (8.0 * static_cast<double>(taps.size()) * ts));
  double lo = 0.0, hi = 0.0;
  for (double f = step;; f += step) {
    f = std::min(f, nyq);
    if (std::abs(fir_response(taps, ts, f) / h0) <= target) {
      hi = f;
      lo = f - step;
      break;
    }
    if (f >= nyq) fail(Errc::invalid_argument, "filter does not reach -6 dB below Nyquist");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(fir_response(taps, ts, mid) / h0) > target ? lo : hi) = mid;
  }
  return lo + hi;  // two-sided
}

GaussianIf gaussian_if_taps(double b_if, double ts, double truncation_eps) {
  require(b_if > 0.0 && std::isfinite(b_if), "IF bandwidth must be positive");
  require(ts > 0.0 && std::isfinite(ts), "sampling period must be positive");
  require(b_if * ts < 0.5, "IF bandwidth not representable at this sampling rate");
  require(truncation_eps > 0.0 && truncation_eps < 1.0, "truncation threshold must be in (0, 1)");

  GaussianIf out;
  out.ts = ts;
  out.t0 = gaussian_t0_initial(b_if);
  for (int it = 0; it < 50; ++it) {
    out.taps = sample_gaussian(out.t0, ts, truncation_eps, out.centre_tap_raw);
    const double bw = measure_6db_bandwidth(out.taps, ts);
    if (std::abs(bw / b_if - 1.0) < 1e-9) break;
    out.t0 *= bw / b_if;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> envelope_at(const WaveformSegment& signal, double fc, const GaussianIf& filter) {
  signal.validate();
  require(std::abs(filter.ts - signal.ts) <= 1e-12 * signal.ts, "IF taps designed for another sampling rate");
  require(!filter.taps.empty(), "IF filter has no taps");
  const double fmax = signal.real ? 0.5 / signal.ts : 1.0 / signal.ts;
  require(fc > 0.0 && fc < fmax, "centre frequency outside the representable band");

  const std::size_t n = signal.size(), nt = filter.taps.size(), c = nt / 2;
  const std::size_t nfft = dft::good_size(n + nt - 1);
  std::vector<cplx> a(nfft), b(nfft);
  const double step = fc * signal.ts;
  for (std::size_t i = 0; i < n; ++i) {
    double ph = step * static_cast<double>(i);
    ph -= std::floor(ph);
    a[i] = signal.samples[i] * std::polar(1.0, -2.0 * kPi * ph);
  }
  for (std::size_t j = 0; j < nt; ++j) b[j] = filter.taps[j];
  auto A = dft::forward(a), B = dft::forward(b);
  for (std::size_t p = 0; p < nfft; ++p) A[p] *= B[p];
  auto y = dft::inverse(A);
  const double gain = signal.real ? std::numbers::sqrt2 : 1.0;
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = gain * std::abs(y[i + c]);
  return env;
}

double detect_peak(std::span<const double> envelope) {
  require(!envelope.empty(), "envelope is empty");
  return *std::max_element(envelope.begin(), envelope.end());
}

double detect_average(std::span<const double> envelope) {
  require(!envelope.empty(), "envelope is empty");
  return std::accumulate(envelope.begin(), envelope.end(), 0.0) / static_cast<double>(envelope.size());
}

std::vector<double> quasi_peak_trace(std::span<const double> envelope, const EmiBandProfile& profile,
                                     double ts, double v0) {
  profile.validate();
  require(ts > 0.0 && std::isfinite(ts), "sampling period must be positive");
  require(std::isfinite(v0), "initial state must be finite");
  auto coeffs = [ts](double tau) {
    const double r = 2.0 * tau / ts;
    return std::pair{1.0 / (1.0 + r), (1.0 - r) / (1.0 + r)};
  };
  const auto [bc, ac] = coeffs(profile.tau_c);
  const auto [bd, ad] = coeffs(profile.tau_d);

  std::vector<double> out(envelope.size());
  double v = v0, xprev = 0.0;
  for (std::size_t n = 0; n < envelope.size(); ++n) {
    const double x = envelope[n];
    require(std::isfinite(x), "envelope has non-finite samples");
    if (x > v)
      v = bc * x + bc * xprev - ac * v;  // charge
    else
      v = bd * xprev - ad * v;  // discharge, b0 = 0
    out[n] = v;
    xprev = x;
  }
  return out;
}

double detect_quasi_peak(std::span<const double> envelope, const EmiBandProfile& profile, double ts) {
  require(!envelope.empty(), "envelope is empty");
  auto trace = quasi_peak_trace(envelope, profile, ts);
  return *std::max_element(trace.begin(), trace.end());
}

// ---------------------------------------------------------------------------

SweepEngine::SweepEngine(const WaveformSegment& signal) {
  signal.validate();
  for (const auto& v : signal.samples)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), "signal has non-finite samples");
  spectrum_ = dft::forward(signal.samples);
  n_ = signal.size();
  ts_ = signal.ts;
  real_ = signal.real;
}

double SweepEngine::max_frequency() const { return real_ ? 0.5 / ts_ : 1.0 / ts_; }

std::vector<double> SweepEngine::envelope(double fc, const EmiBandProfile& profile, double& ts_out) const {
  profile.validate();
  require(fc > 0.0 && fc < max_frequency(), "centre frequency outside the representable band");
  const double fs = 1.0 / ts_, df = fs / static_cast<double>(n_);
  const double b = profile.b_if;
  require(2.0 * kGatherSpan * b < fs, "IF bandwidth too wide for the sampling rate");
  const double t0 = gaussian_t0_calibrated(b);

  const auto half = static_cast<std::int64_t>(std::ceil(kGatherSpan * b / df));
  const auto want = static_cast<std::size_t>(std::ceil(kEnvelopeRate * b / df));
  std::size_t nd = dft::good_size(std::max<std::size_t>(want, static_cast<std::size_t>(2 * half + 1)));
  nd = std::min(nd, n_);
  require(static_cast<std::size_t>(2 * half + 1) <= nd, "record too short for this IF bandwidth");

  const auto n = static_cast<std::int64_t>(n_);
  const auto ndi = static_cast<std::int64_t>(nd);
  const auto pc = static_cast<std::int64_t>(std::llround(fc / df));
  std::vector<cplx> Y(nd);
  for (std::int64_t d = -half; d <= half; ++d) {
    const double off = static_cast<double>(pc + d) * df - fc;
    const double w = std::exp(-t0 * t0 * off * off);
    Y[static_cast<std::size_t>(((d % ndi) + ndi) % ndi)] += w * spectrum_[static_cast<std::size_t>(((pc + d) % n + n) % n)];
  }
  std::vector<cplx> y(nd);
  dft::backward(Y, y);
  const double gain = (real_ ? std::numbers::sqrt2 : 1.0) / static_cast<double>(n_);
  std::vector<double> env(nd);
  for (std::size_t j = 0; j < nd; ++j) env[j] = gain * std::abs(y[j]);
  ts_out = ts_ * static_cast<double>(n_) / static_cast<double>(nd);
  return env;
}

std::vector<EmiReading> SweepEngine::measure(double fc, const EmiBandProfile& profile,
                                             const SweepOptions& opt) const {
  require(!opt.detectors.empty(), "no detectors requested");
  double tsd = 0.0;
  const auto env = envelope(fc, profile, tsd);
  const auto settle = static_cast<std::size_t>(std::ceil(kSettleT0 * gaussian_t0_calibrated(profile.b_if) / tsd));
  require(2 * settle < env.size(), "record too short for IF filter settling");
  std::size_t count = env.size() - 2 * settle;
  if (opt.t_m > 0.0) {
    const auto need = static_cast<std::size_t>(std::ceil(opt.t_m / tsd - 1e-9));
    require(need <= count, "record too short for the measurement time after settling");
    count = std::max<std::size_t>(need, 1);
  }
  std::span<const double> window(env.data() + settle, count);

  std::vector<EmiReading> out;
  for (auto d : opt.detectors) {
    double v = 0.0;
    switch (d) {
      case Detector::peak: v = detect_peak(window); break;
      case Detector::quasi_peak: v = detect_quasi_peak(window, profile, tsd); break;
      case Detector::average: v = detect_average(window); break;
    }
    out.push_back({fc, d, volts_to_dbuv(v)});
  }
  return out;
}

double min_record_duration(const EmiBandProfile& profile, double t_m) {
  profile.validate();
  const double settle = 2.0 * kSettleT0 * gaussian_t0_calibrated(profile.b_if);
  return 1.02 * (std::max(t_m, 0.0) + settle) + 4.0 / profile.b_if;
}

std::vector<EmiReading> sweep_spectrum(const WaveformSegment& signal, std::span<const double> freq_grid,
                                       const EmiBandProfile& profile, const SweepOptions& opt) {
  require(!freq_grid.empty(), "frequency grid is empty");
  SweepEngine engine(signal);
  std::vector<EmiReading> out;
  for (double f : freq_grid) {
    auto r = engine.measure(f, profile, opt);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::vector<EmiReading> sweep_spectrum(const WaveformSegment& signal, std::span<const double> freq_grid,
                                       const SweepOptions& opt) {
  require(!freq_grid.empty(), "frequency grid is empty");
  SweepEngine engine(signal);
  std::vector<EmiReading> out;
  for (double f : freq_grid) {
    auto r = engine.measure(f, profile_for(f), opt);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace plcemc
