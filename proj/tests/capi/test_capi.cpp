// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "plcemc/plcemc.h"

namespace {

const std::string kData = PLCEMC_DATA_DIR;

std::vector<double> tone(double f, double rms, double fs, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ph = f / fs * static_cast<double>(i);
    ph -= std::floor(ph);
    x[i] = std::sqrt(2.0) * rms * std::cos(2.0 * M_PI * ph);
  }
  return x;
}

plcemc_modulation* plan_modulation(const char* plan, size_t L, size_t mu, size_t alpha) {
  plcemc_modulation* m = nullptr;
  REQUIRE(plcemc_modulation_from_plan(plan, L, mu, alpha, &m) == PLCEMC_OK);
  return m;
}

}  // namespace

TEST_CASE("status and error reporting") {
  CHECK(std::string(plcemc_version()) == "0.1.0");
  CHECK(std::string(plcemc_status_string(PLCEMC_OK)) == "ok");
  CHECK(std::string(plcemc_status_string(PLCEMC_E_SINGULAR)) == "singular");

  plcemc_modulation* m = nullptr;
  CHECK(plcemc_modulation_from_plan("NOPE", 1, 0, 0, &m) == PLCEMC_E_UNKNOWN_NAME);
  CHECK(m == nullptr);
  CHECK(std::string(plcemc_last_error()).find("NOPE") != std::string::npos);

  CHECK(plcemc_modulation_from_plan(nullptr, 1, 0, 0, &m) == PLCEMC_E_NULL_POINTER);
  CHECK(plcemc_modulation_from_plan("BB", 1, 0, 0, nullptr) == PLCEMC_E_NULL_POINTER);

  SUBCASE("the last error is per thread") {
    std::string other;
    std::thread t([&] {
      plcemc_masks* ms = nullptr;
      plcemc_masks_create(&ms);
      plcemc_masks_add_builtin(ms, "missing-mask");
      other = plcemc_last_error();
      plcemc_masks_destroy(ms);
    });
    t.join();
    CHECK(other.find("missing-mask") != std::string::npos);
    CHECK(std::string(plcemc_last_error()).find("missing-mask") == std::string::npos);
  }

  plcemc_detector d{};
  CHECK(plcemc_detector_parse("QP", &d) == PLCEMC_OK);
  CHECK(d == PLCEMC_QUASI_PEAK);
  CHECK(std::string(plcemc_detector_name(PLCEMC_AVERAGE)) == "AV");
  CHECK(plcemc_detector_parse("XX", &d) == PLCEMC_E_UNKNOWN_NAME);

  // destroy accepts NULL
  plcemc_modulation_destroy(nullptr);
  plcemc_waveform_destroy(nullptr);
  plcemc_masks_destroy(nullptr);
  plcemc_readings_destroy(nullptr);
  plcemc_report_destroy(nullptr);
  plcemc_scenario_destroy(nullptr);
}

TEST_CASE("modulation handles") {
  plcemc_modulation* m = plan_modulation("CENELEC-A", 20, 30, 8);
  plcemc_geometry g{};
  REQUIRE(plcemc_modulation_geometry(m, &g) == PLCEMC_OK);
  CHECK(g.K == 128);
  CHECK(g.N == 128);
  CHECK(g.L == 20);
  CHECK(g.ts == doctest::Approx(5e-6));

  int64_t num = 0, den = 0;
  REQUIRE(plcemc_modulation_rate(m, &num, &den) == PLCEMC_OK);
  CHECK(num == 1280);
  CHECK(den == 1299);

  size_t n = 0;
  REQUIRE(plcemc_modulation_active(m, nullptr, 0, &n) == PLCEMC_OK);
  CHECK(n == 36);
  std::vector<size_t> act(n);
  REQUIRE(plcemc_modulation_active(m, act.data(), act.size(), &n) == PLCEMC_OK);
  CHECK(act.front() == 23);
  std::vector<size_t> small(3);
  CHECK(plcemc_modulation_active(m, small.data(), small.size(), &n) == PLCEMC_E_BUFFER_TOO_SMALL);

  size_t bad = 500;
  CHECK(plcemc_modulation_set_active(m, &bad, 1) == PLCEMC_E_INVALID_ARGUMENT);
  size_t some[] = {40, 30, 30};
  REQUIRE(plcemc_modulation_set_active(m, some, 3) == PLCEMC_OK);
  REQUIRE(plcemc_modulation_active(m, nullptr, 0, &n) == PLCEMC_OK);
  CHECK(n == 2);
  plcemc_modulation_destroy(m);

  plcemc_geometry wrong{128, 100, 1, 0, 0, 1e-6};
  CHECK(plcemc_modulation_create(&wrong, &m) == PLCEMC_E_INVALID_ARGUMENT);
  plcemc_geometry ok{16, 16, 2, 4, 2, 1e-6};
  REQUIRE(plcemc_modulation_create(&ok, &m) == PLCEMC_OK);
  REQUIRE(plcemc_modulation_active(m, nullptr, 0, &n) == PLCEMC_OK);
  CHECK(n == 16);
  plcemc_modulation_destroy(m);

  plcemc_modulation* bb = plan_modulation("BB", 4, 556, 1264);
  size_t removed = 0;
  REQUIRE(plcemc_modulation_apply_notch_file(bb, (kData + "/notches_amateur.txt").c_str(), 6, &removed) == PLCEMC_OK);
  CHECK(removed > 100);
  CHECK(plcemc_modulation_apply_notch_file(bb, "/no/such/file", 6, &removed) == PLCEMC_E_IO);
  plcemc_modulation_destroy(bb);
}

TEST_CASE("waveforms and spectra") {
  plcemc_modulation* m = plan_modulation("CENELEC-A", 1, 30, 8);
  plcemc_waveform *a = nullptr, *b = nullptr, *r = nullptr;
  REQUIRE(plcemc_waveform_synthesize(m, 50, 4, 9, 0, &a) == PLCEMC_OK);
  REQUIRE(plcemc_waveform_synthesize(m, 50, 4, 9, 1, &r) == PLCEMC_OK);
  REQUIRE(plcemc_waveform_synthesize(m, 50, 4, 9, 0, &b) == PLCEMC_OK);
  size_t n = 0, nr = 0;
  double ts = 0, tsr = 0;
  int real = -1;
  plcemc_waveform_info(a, &n, &ts, &real);
  CHECK(n == 50 * 166 + 8);
  CHECK(real == 0);
  plcemc_waveform_info(r, &nr, &tsr, &real);
  CHECK(real == 1);
  CHECK(nr == 2 * n);
  CHECK(tsr == doctest::Approx(ts / 2));

  std::vector<double> re1(n), im1(n), re2(n), im2(n);
  plcemc_waveform_samples(a, re1.data(), im1.data(), n);
  plcemc_waveform_samples(b, re2.data(), im2.data(), n);
  CHECK(re1 == re2);
  CHECK(im1 == im2);

  REQUIRE(plcemc_waveform_scale(b, 2.0) == PLCEMC_OK);
  plcemc_waveform_samples(b, re2.data(), nullptr, n);
  CHECK(re2[100] == 2.0 * re1[100]);
  CHECK(plcemc_waveform_synthesize(m, 5, 8, 1, 0, &b) == PLCEMC_E_INVALID_ARGUMENT);
  CHECK(plcemc_waveform_synthesize(m, 0, 4, 1, 0, &b) == PLCEMC_E_INVALID_ARGUMENT);

  size_t np = 0;
  REQUIRE(plcemc_psd_empirical(a, 1000.0, nullptr, nullptr, 0, &np) == PLCEMC_OK);
  CHECK(np == 200);
  std::vector<double> f(np), p(np);
  REQUIRE(plcemc_psd_empirical(a, 1000.0, f.data(), p.data(), np, &np) == PLCEMC_OK);
  CHECK(f[1] == doctest::Approx(1000.0));

  std::vector<double> grid{10e3, 50e3, 150e3}, ana(3);
  REQUIRE(plcemc_psd_analytic(m, grid.data(), grid.size(), ana.data()) == PLCEMC_OK);
  CHECK(ana[1] > ana[0]);
  CHECK(ana[1] > ana[2]);
  REQUIRE(plcemc_modulation_set_active(m, nullptr, 0) == PLCEMC_OK);
  REQUIRE(plcemc_psd_analytic(m, grid.data(), grid.size(), ana.data()) == PLCEMC_OK);
  for (double v : ana) CHECK(v == 0.0);

  double psd = 0;
  REQUIRE(plcemc_dbuv_to_psd(95.0, 9e3, &psd) == PLCEMC_OK);
  CHECK(psd == doctest::Approx(-54.54).epsilon(1e-4));
  CHECK(plcemc_dbuv_to_psd(95.0, 0.0, &psd) == PLCEMC_E_INVALID_ARGUMENT);

  plcemc_waveform* rr = nullptr;
  CHECK(plcemc_waveform_to_real(r, &rr) == PLCEMC_E_INVALID_ARGUMENT);
  plcemc_waveform_destroy(a);
  plcemc_waveform_destroy(b);
  plcemc_waveform_destroy(r);
  plcemc_modulation_destroy(m);
}

TEST_CASE("sweep, masks and compliance") {
  const double fs = 2e6;
  auto x = tone(400e3, 1e-3, fs, 200000);  // 60 dBuV
  plcemc_waveform* w = nullptr;
  REQUIRE(plcemc_waveform_from_samples(x.data(), nullptr, x.size(), 1.0 / fs, &w) == PLCEMC_OK);

  std::vector<double> grid{300e3, 400e3, 500e3};
  plcemc_detector pk = PLCEMC_PEAK;
  plcemc_readings* rd = nullptr;
  REQUIRE(plcemc_sweep(w, grid.data(), grid.size(), 0.05, &pk, 1, &rd) == PLCEMC_OK);
  size_t n = 0;
  plcemc_readings_count(rd, &n);
  REQUIRE(n == 3);
  plcemc_reading r{};
  REQUIRE(plcemc_readings_get(rd, 1, &r) == PLCEMC_OK);
  CHECK(r.freq_hz == 400e3);
  CHECK(r.detector == PLCEMC_PEAK);
  CHECK(r.level_dbuv == doctest::Approx(60.0).epsilon(0.003));
  CHECK(plcemc_readings_get(rd, 3, &r) == PLCEMC_E_INVALID_ARGUMENT);
  plcemc_readings_destroy(rd);
  // all detectors: the mask below has QP and AV limits only
  REQUIRE(plcemc_sweep(w, grid.data(), grid.size(), 0.05, nullptr, 0, &rd) == PLCEMC_OK);
  plcemc_readings_count(rd, &n);
  REQUIRE(n == 9);
  CHECK(plcemc_sweep(w, grid.data(), grid.size(), 10.0, nullptr, 0, &rd) == PLCEMC_E_INVALID_ARGUMENT);

  // The advertised minimum record length is enough, and grows with t_m and narrower IF.
  double need_b = 0.0, need_b_long = 0.0, need_a = 0.0;
  REQUIRE(plcemc_sweep_min_duration(grid.data(), grid.size(), 0.05, &need_b) == PLCEMC_OK);
  CHECK(need_b > 0.05);
  CHECK(need_b <= 0.1);  // the record above is 0.1 s and the sweep accepted it
  REQUIRE(plcemc_sweep_min_duration(grid.data(), grid.size(), 0.5, &need_b_long) == PLCEMC_OK);
  CHECK(need_b_long > need_b + 0.4);
  const double band_a = 100e3;
  REQUIRE(plcemc_sweep_min_duration(&band_a, 1, 0.05, &need_a) == PLCEMC_OK);
  CHECK(need_a > need_b);
  CHECK(plcemc_sweep_min_duration(grid.data(), 0, 0.05, &need_a) == PLCEMC_E_INVALID_ARGUMENT);
  CHECK(plcemc_sweep_min_duration(nullptr, 1, 0.05, &need_a) == PLCEMC_E_NULL_POINTER);

  size_t need = 0;
  REQUIRE(plcemc_builtin_mask_names(nullptr, 0, &need) == PLCEMC_OK);
  std::string names(need, '\0');
  REQUIRE(plcemc_builtin_mask_names(names.data(), names.size(), &need) == PLCEMC_OK);
  CHECK(names.find("CENELEC-A\n") != std::string::npos);
  char tiny[4];
  CHECK(plcemc_builtin_mask_names(tiny, sizeof tiny, &need) == PLCEMC_E_BUFFER_TOO_SMALL);
  REQUIRE(plcemc_band_plan_names(nullptr, 0, &need) == PLCEMC_OK);
  std::string plans(need, '\0');
  plcemc_band_plan_names(plans.data(), plans.size(), &need);
  CHECK(plans.find("FCC-Low") != std::string::npos);

  plcemc_masks* ms = nullptr;
  REQUIRE(plcemc_masks_create(&ms) == PLCEMC_OK);
  CHECK(plcemc_masks_add_builtin(ms, "nope") == PLCEMC_E_UNKNOWN_NAME);
  REQUIRE(plcemc_masks_add_builtin(ms, "EN55022-B-main") == PLCEMC_OK);
  double lim = 0;
  int cov = 0;
  REQUIRE(plcemc_masks_limit(ms, "EN55022-B-main", 1e6, PLCEMC_QUASI_PEAK, &lim, &cov) == PLCEMC_OK);
  CHECK(cov == 1);
  CHECK(lim == doctest::Approx(56.0));
  REQUIRE(plcemc_masks_limit(ms, "EN55022-B-main", 50e3, PLCEMC_QUASI_PEAK, &lim, &cov) == PLCEMC_OK);
  CHECK(cov == 0);
  CHECK(plcemc_masks_load(ms, "/no/such/masks.txt") == PLCEMC_E_IO);

  plcemc_report* rep = nullptr;
  REQUIRE(plcemc_comply_readings(rd, ms, &rep) == PLCEMC_OK);
  plcemc_report_summary s{};
  plcemc_report_summary_get(rep, &s);
  CHECK(s.n_entries == 6);
  CHECK(s.n_not_covered == 3);
  plcemc_margin_entry e{};
  REQUIRE(plcemc_report_entry(rep, s.limiting, &e) == PLCEMC_OK);
  CHECK(e.freq_hz == 400e3);
  CHECK(std::string(e.mask) == "EN55022-B-main");
  plcemc_report_destroy(rep);

  SUBCASE("max scale for a tone") {
    REQUIRE(plcemc_comply_max_scale(w, ms, grid.data(), grid.size(), 0.05, 3, &rep) == PLCEMC_OK);
    plcemc_report_summary_get(rep, &s);
    CHECK(s.worst_margin_db < 0.0);
    CHECK(s.compliant == 0);
    CHECK(s.max_scale == doctest::Approx(std::pow(10.0, s.worst_margin_db / 20.0)));
    plcemc_report_destroy(rep);
  }
  SUBCASE("nothing covered") {
    plcemc_reading only{50e3, PLCEMC_PEAK, 30.0};
    plcemc_readings* one = nullptr;
    REQUIRE(plcemc_readings_create(&only, 1, &one) == PLCEMC_OK);
    CHECK(plcemc_comply_readings(one, ms, &rep) == PLCEMC_E_UNDEFINED_SCALE);
    plcemc_readings_destroy(one);
  }

  plcemc_masks_destroy(ms);
  plcemc_readings_destroy(rd);
  plcemc_waveform_destroy(w);
}

TEST_CASE("link model") {
  plcemc_noise_params nb{};
  REQUIRE(plcemc_noise_preset("NB", &nb) == PLCEMC_OK);
  double v = 0;
  REQUIRE(plcemc_noise_psd(0.0, &nb, &v) == PLCEMC_OK);
  CHECK(v == doctest::Approx(-53.02));
  CHECK(plcemc_noise_preset("XX", &nb) == PLCEMC_E_UNKNOWN_NAME);
  CHECK(plcemc_noise_psd(-1.0, &nb, &v) == PLCEMC_E_INVALID_ARGUMENT);

  plcemc_scenario* sc = nullptr;
  CHECK(plcemc_scenario_create("empty", nullptr, nullptr, 0, &nb, &sc) == PLCEMC_E_INVALID_ARGUMENT);
  double d0 = 0.0, a0 = 1.0;
  REQUIRE(plcemc_scenario_create("delta", &d0, &a0, 1, &nb, &sc) == PLCEMC_OK);
  CHECK(std::string(plcemc_scenario_name(sc)) == "delta");

  double x[] = {1.0, -2.0, 3.0};
  plcemc_waveform *w = nullptr, *y = nullptr;
  REQUIRE(plcemc_waveform_from_samples(x, nullptr, 3, 1e-6, &w) == PLCEMC_OK);
  REQUIRE(plcemc_apply_channel(w, sc, 1, 0, &y) == PLCEMC_OK);
  double out[3];
  plcemc_waveform_samples(y, out, nullptr, 3);
  CHECK(out[1] == -2.0);
  plcemc_waveform_destroy(y);
  plcemc_waveform_destroy(w);

  plcemc_modulation* m = plan_modulation("CENELEC-A", 1, 30, 8);
  double c_lo = 0, c_hi = 0;
  REQUIRE(plcemc_capacity_uniform(m, sc, -60.0, &c_lo) == PLCEMC_OK);
  REQUIRE(plcemc_capacity_uniform(m, sc, -50.0, &c_hi) == PLCEMC_OK);
  CHECK(c_hi > c_lo);
  std::vector<double> tx(36, 0.0);
  REQUIRE(plcemc_capacity(m, sc, tx.data(), tx.size(), &v) == PLCEMC_OK);
  CHECK(v == 0.0);
  CHECK(plcemc_capacity(m, sc, tx.data(), 3, &v) == PLCEMC_E_INVALID_ARGUMENT);
  plcemc_noise_params silent{-5000.0, 0.0, 0.0, 0.0};
  plcemc_scenario* quiet = nullptr;
  REQUIRE(plcemc_scenario_create("quiet", &d0, &a0, 1, &silent, &quiet) == PLCEMC_OK);
  CHECK(plcemc_capacity_uniform(m, quiet, -60.0, &v) == PLCEMC_E_SINGULAR);
  plcemc_scenario_destroy(quiet);
  plcemc_modulation_destroy(m);
  plcemc_scenario_destroy(sc);

  REQUIRE(plcemc_scenario_load("good", (kData + "/channels/nb_short_good.txt").c_str(), &nb, &sc) == PLCEMC_OK);
  size_t nt = 0;
  plcemc_scenario_taps(sc, nullptr, nullptr, 0, &nt);
  CHECK(nt == 4);
  plcemc_scenario_destroy(sc);
  CHECK(plcemc_scenario_load("x", "/no/such/channel", &nb, &sc) == PLCEMC_E_IO);

  REQUIRE(plcemc_scenario_synthetic("syn", 6, 1e-6, 40.0, 3, &nb, &sc) == PLCEMC_OK);
  plcemc_scenario_taps(sc, nullptr, nullptr, 0, &nt);
  std::vector<double> dl(nt), am(nt);
  REQUIRE(plcemc_scenario_taps(sc, dl.data(), am.data(), nt, &nt) == PLCEMC_OK);
  double pw = 0;
  for (double a : am) pw += a * a;
  CHECK(pw == doctest::Approx(1e-4));
  plcemc_scenario_destroy(sc);

  double samples[] = {3.0, 1.0, 2.0};
  double xs[] = {0.0, 1.0, 3.0};
  double cc[3];
  REQUIRE(plcemc_ccdf(samples, 3, xs, 3, cc) == PLCEMC_OK);
  CHECK(cc[0] == 1.0);
  CHECK(cc[1] == doctest::Approx(2.0 / 3.0));
  CHECK(cc[2] == 0.0);
  CHECK(plcemc_ccdf(nullptr, 0, xs, 3, cc) == PLCEMC_E_INVALID_ARGUMENT);
}
