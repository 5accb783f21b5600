// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plcemc/emi.hpp"

using namespace plcemc;

namespace {

WaveformSegment complex_tones(const std::vector<std::pair<double, double>>& tones, double fs, std::size_t n) {
  WaveformSegment w;
  w.ts = 1.0 / fs;
  w.samples.assign(n, cplx{});
  for (auto [f, a] : tones)
    for (std::size_t i = 0; i < n; ++i) {
      double ph = f / fs * static_cast<double>(i);
      ph -= std::floor(ph);
      w.samples[i] += std::polar(a, 2.0 * oracle::kPi * ph);
    }
  return w;
}

WaveformSegment real_tone(double f, double rms, double fs, std::size_t n) {
  WaveformSegment w;
  w.ts = 1.0 / fs;
  w.real = true;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = rms * std::sqrt(2.0) * std::cos(2.0 * oracle::kPi * f / fs * static_cast<double>(i));
  return w;
}

std::span<const double> settled(const std::vector<double>& env, const GaussianIf& g) {
  const auto skip = static_cast<std::size_t>(std::ceil(5.0 * g.t0 / g.ts));
  return {env.data() + skip, env.size() - 2 * skip};
}

}  // namespace

TEST_CASE("band profiles") {
  auto a = profile_band_a(), b = profile_band_b();
  CHECK(a.b_if == 220.0);
  CHECK(a.tau_c == 45e-3);
  CHECK(a.tau_d == 500e-3);
  CHECK(b.b_if == 9e3);
  CHECK(b.tau_c == 1e-3);
  CHECK(b.tau_d == 160e-3);
  CHECK(profile_for(50e3).b_if == 220.0);
  CHECK(profile_for(3e3).b_if == 220.0);
  CHECK(profile_for(149.9e3).b_if == 220.0);
  CHECK(profile_for(150e3).b_if == 9e3);
  CHECK(profile_for(30e6).b_if == 9e3);
  CHECK_THROWS_AS(profile_for(31e6), Error);
  CHECK_THROWS_AS(profile_for(1e3), Error);
  EmiBandProfile bad = a;
  bad.tau_d = bad.tau_c;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("detector names round-trip") {
  for (auto d : {Detector::peak, Detector::quasi_peak, Detector::average})
    CHECK(parse_detector(detector_name(d)) == d);
  CHECK_FALSE(parse_detector("RMS").has_value());
  CHECK(volts_to_dbuv(1e-6) == doctest::Approx(0.0));
  CHECK(volts_to_dbuv(0.0) == -200.0);
}

TEST_CASE("gaussian_if_taps") {
  SUBCASE("paper T0 is off by about ln 10 in bandwidth") {
    CHECK(gaussian_t0_calibrated(9e3) / gaussian_t0_initial(9e3) == doctest::Approx(std::log(10.0)));
  }
  SUBCASE("centre tap and symmetry") {
    auto g = gaussian_if_taps(9e3, 100e-9);
    CHECK(g.centre_tap_raw == doctest::Approx(std::sqrt(oracle::kPi) / g.t0));
    const std::size_t n = g.taps.size();
    CHECK(n % 2 == 1);
    for (std::size_t j = 0; j < n / 2; ++j) CHECK(g.taps[j] == g.taps[n - 1 - j]);
    double dc = 0.0;
    for (double v : g.taps) dc += v;
    CHECK(dc == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("6-dB bandwidth after calibration") {
    auto g = gaussian_if_taps(9e3, 100e-9);
    CHECK(measure_6db_bandwidth(g.taps, g.ts) == doctest::Approx(9e3).epsilon(0.01));
    auto h = gaussian_if_taps(220.0, 2.5e-6);
    CHECK(measure_6db_bandwidth(h.taps, h.ts) == doctest::Approx(220.0).epsilon(0.01));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(gaussian_if_taps(9e3, 1e-4), Error);
    CHECK_THROWS_AS(gaussian_if_taps(-1.0, 1e-6), Error);
    CHECK_THROWS_AS(gaussian_if_taps(9e3, 1e-7, 0.0), Error);
  }
}

TEST_CASE("envelope_at") {
  const double fs = 1e6, fc = 200e3, B = 9e3;
  auto g = gaussian_if_taps(B, 1.0 / fs);
  SUBCASE("tone at fc gives a unit envelope") {
    auto env = envelope_at(complex_tones({{fc, 1.0}}, fs, 20000), fc, g);
    for (double v : settled(env, g)) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("tone ten bandwidths away is rejected by at least 60 dB") {
    auto env = envelope_at(complex_tones({{fc + 10 * B, 1.0}}, fs, 20000), fc, g);
    CHECK(detect_peak(settled(env, g)) < 1e-3);
  }
  SUBCASE("two tones beat with the closed-form maximum") {
    const double h = std::exp(-g.t0 * g.t0 * (B / 4) * (B / 4));
    auto env = envelope_at(complex_tones({{fc - B / 4, 1.0}, {fc + B / 4, 1.0}}, fs, 40000), fc, g);
    auto s = settled(env, g);
    CHECK(detect_peak(s) == doctest::Approx(2.0 * h).epsilon(1e-3));
    // beat at B/2: minimum reaches (near) zero
    CHECK(*std::min_element(s.begin(), s.end()) < 0.02);
  }
  SUBCASE("real input is calibrated to RMS") {
    auto env = envelope_at(real_tone(fc, 0.5, fs, 20000), fc, g);
    for (double v : settled(env, g)) CHECK(v == doctest::Approx(0.5).epsilon(1e-5));
  }
  SUBCASE("out-of-band centre frequency") {
    auto w = complex_tones({{fc, 1.0}}, fs, 1000);
    CHECK_THROWS_AS(envelope_at(w, 0.0, g), Error);
    CHECK_THROWS_AS(envelope_at(w, fs, g), Error);
    w.real = true;
    CHECK_THROWS_AS(envelope_at(w, 0.6 * fs, g), Error);
  }
}

TEST_CASE("peak and average detectors") {
  std::vector<double> a{1, 3, 2};
  CHECK(detect_peak(a) == 3.0);
  CHECK(detect_average(a) == 2.0);
  std::vector<double> z(10, 0.0), c(10, 0.7);
  CHECK(detect_peak(z) == 0.0);
  CHECK(detect_peak(c) == 0.7);
  CHECK(detect_average(c) == doctest::Approx(0.7));
  std::vector<double> sq(1000);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (i / 50) % 2 == 0 ? 1.0 : 0.0;
  CHECK(detect_average(sq) == doctest::Approx(0.5));
  CHECK_THROWS_AS(detect_peak(std::vector<double>{}), Error);
  CHECK_THROWS_AS(detect_average(std::vector<double>{}), Error);
}

TEST_CASE("quasi-peak detector") {
  for (const auto& prof : {profile_band_a(), profile_band_b()}) {
    CAPTURE(prof.name);
    const double ts = prof.tau_c / 2000.0;
    SUBCASE("constant envelope settles at the input level") {
      std::vector<double> c(static_cast<std::size_t>(20 * prof.tau_c / ts), 0.8);
      CHECK(detect_quasi_peak(c, prof, ts) == doctest::Approx(0.8).epsilon(1e-3));
    }
    SUBCASE("step response reaches 1 - 1/e at tau_c") {
      std::vector<double> step(static_cast<std::size_t>(3 * prof.tau_c / ts), 1.0);
      auto tr = quasi_peak_trace(step, prof, ts);
      const auto n = static_cast<std::size_t>(std::lround(prof.tau_c / ts));
      CHECK(tr[n] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.02));
    }
    SUBCASE("discharge reaches 1/e at tau_d") {
      std::vector<double> zero(static_cast<std::size_t>(2 * prof.tau_d / ts), 0.0);
      auto tr = quasi_peak_trace(zero, prof, ts, 2.0);
      const auto n = static_cast<std::size_t>(std::lround(prof.tau_d / ts));
      CHECK(tr[n] == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(0.02));
    }
    SUBCASE("IIR poles are stable") {
      for (double tau : {prof.tau_c, prof.tau_d}) {
        const double r = 2.0 * tau / ts;
        CHECK(std::abs((1.0 - r) / (1.0 + r)) < 1.0);
      }
    }
  }
  std::vector<double> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(detect_quasi_peak(bad, profile_band_b(), 1e-6), Error);
}

TEST_CASE("detector ordering on random envelopes") {
  std::mt19937_64 rng(17);
  std::exponential_distribution<double> d(1.0);
  const auto prof = profile_band_b();
  for (int t = 0; t < 100; ++t) {
    std::vector<double> env(5000);
    for (auto& v : env) v = d(rng);
    const double pk = detect_peak(env);
    CHECK(pk >= detect_quasi_peak(env, prof, 1e-5));
    CHECK(pk >= detect_average(env));
  }
}

TEST_CASE("quasi-peak reading is monotone in the envelope") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto prof = profile_band_b();
  const double ts = 1e-5;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> lo(4000), hi(4000);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = u(rng) * (i % 97 < 10 ? 1.0 : 0.1);
      hi[i] = lo[i] + (u(rng) < 0.3 ? u(rng) * 0.2 : 0.0);
    }
    const double a = detect_quasi_peak(lo, prof, ts), b = detect_quasi_peak(hi, prof, ts);
    worst = std::max(worst, (a - b) / a);
  }
  // The b0 = 0 discharge branch can overshoot the charge branch by at most
  // about Ts / (2 tau_d) when the two states coincide.
  CHECK(worst <= ts / (2.0 * prof.tau_d));
}

TEST_CASE("quasi-peak to peak ratio falls with the duty cycle") {
  const auto prof = profile_band_b();
  const double ts = 1e-5, period = 10e-3, tm = 1.0;
  double prev = 2.0;
  for (double duty : {0.5, 0.1, 0.01}) {
    std::vector<double> env(static_cast<std::size_t>(tm / ts));
    for (std::size_t i = 0; i < env.size(); ++i) {
      const double ph = std::fmod(static_cast<double>(i) * ts, period) / period;
      env[i] = ph < duty ? 1.0 : 0.0;
    }
    const double ratio = detect_quasi_peak(env, prof, ts) / detect_peak(env);
    CAPTURE(duty);
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("sweep calibration: a sinusoid of RMS V reads 20 log10(V / 1 uV)") {
  SUBCASE("band B, complex and real records") {
    const double fs = 2e6, n = 200000, f0 = 400e3;  // f0 on a bin
    SweepOptions opt;
    opt.t_m = 0.05;
    for (bool real : {false, true}) {
      auto w = real ? real_tone(f0, 1e-6, fs, static_cast<std::size_t>(n))
                    : complex_tones({{f0, 1e-6}}, fs, static_cast<std::size_t>(n));
      std::vector<double> grid{f0};
      auto r = sweep_spectrum(w, grid, profile_band_b(), opt);
      REQUIRE(r.size() == 3);
      for (const auto& x : r) {
        CAPTURE(detector_name(x.detector));
        CHECK(x.level_dbuv == doctest::Approx(0.0).epsilon(0.1).scale(1.0));
      }
    }
  }
  SUBCASE("band A, off-bin tone") {
    const double fs = 40e3, f0 = 12345.6;
    SweepOptions opt;
    opt.t_m = 0.6;
    auto w = complex_tones({{f0, 3e-3}}, fs, 28000);
    std::vector<double> grid{f0};
    auto r = sweep_spectrum(w, grid, opt);
    for (const auto& x : r) CHECK(x.level_dbuv == doctest::Approx(20.0 * std::log10(3e3)).epsilon(0.1 / 70.0));
  }
}

TEST_CASE("sweep readings scale by 20 log10(s)") {
  std::mt19937_64 rng(3);
  WaveformSegment w;
  w.ts = 1e-6;
  w.samples = oracle::random_complex(100000, rng);
  auto w2 = w;
  for (auto& v : w2.samples) v *= 3.0;
  SweepOptions opt;
  opt.t_m = 0.05;
  std::vector<double> grid{160e3, 250e3, 420e3};
  auto a = sweep_spectrum(w, grid, opt), b = sweep_spectrum(w2, grid, opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(b[i].level_dbuv - a[i].level_dbuv == doctest::Approx(20.0 * std::log10(3.0)).epsilon(1e-6));
}

TEST_CASE("sweep engine agrees with the time-domain receiver") {
  std::mt19937_64 rng(12);
  const double fs = 1e6;
  WaveformSegment w;
  w.ts = 1.0 / fs;
  w.samples = oracle::random_complex(60000, rng);
  auto prof = profile_band_b();
  auto g = gaussian_if_taps(prof.b_if, w.ts);
  SweepEngine eng(w);
  for (double fc : {123e3, 300e3, 777e3}) {
    double tsd = 0.0;
    auto fast = eng.envelope(fc, prof, tsd);
    auto slow = envelope_at(w, fc, g);
    // Compare at the decimated instants, away from the record ends.
    const auto skip = static_cast<std::size_t>(std::ceil(5.0 * g.t0 / tsd));
    double err = 0.0, ref = 0.0;
    for (std::size_t j = skip; j + skip < fast.size(); ++j) {
      const double t = static_cast<double>(j) * tsd;
      const auto i = static_cast<std::size_t>(std::llround(t * fs));
      if (std::abs(t * fs - static_cast<double>(i)) > 1e-6) continue;
      err = std::max(err, std::abs(fast[j] - slow[i]));
      ref = std::max(ref, slow[i]);
    }
    CAPTURE(fc);
    CHECK(ref > 0.0);
    CHECK(err / ref < 1e-4);
  }
}

TEST_CASE("sweep argument validation") {
  WaveformSegment w;
  w.ts = 1e-6;
  w.samples.assign(1000, cplx{1.0});
  SweepOptions opt;
  opt.t_m = 1.0;
  std::vector<double> grid{200e3};
  CHECK_THROWS_AS(sweep_spectrum(w, grid, profile_band_b(), opt), Error);  // too short for T_m
  CHECK_THROWS_AS(sweep_spectrum(w, std::vector<double>{}, opt), Error);
  opt.t_m = 0.0;
  std::vector<double> above{1.5e6};
  CHECK_THROWS_AS(sweep_spectrum(w, above, profile_band_b(), opt), Error);
}
