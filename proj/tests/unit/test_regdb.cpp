// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "plcemc/regdb.hpp"
#include "plcemc/spectral.hpp"

using namespace plcemc;

namespace {

double lim(const std::string& mask, double f, Detector d) {
  auto v = limit_at(find_mask(mask), f, d);
  REQUIRE(v.has_value());
  return *v;
}

}  // namespace

TEST_CASE("limit_at: table values") {
  CHECK(lim("EN55022-B-main", 600e3, Detector::quasi_peak) == 56.0);
  CHECK(lim("EN50561-1-IB", 10e6, Detector::peak) == 105.0);
  CHECK(lim("EN50561-1-IB", 10e6, Detector::average) == 95.0);
  CHECK(lim("EN55022-B-main", std::sqrt(150e3 * 500e3), Detector::quasi_peak) == doctest::Approx(61.0));
  CHECK(lim("EN55022-B-main", 10e6, Detector::quasi_peak) == 60.0);
  CHECK(lim("EN55022-B-main", 10e6, Detector::average) == 50.0);
  CHECK(lim("EN55022-A-main", 200e3, Detector::quasi_peak) == 79.0);
  CHECK(lim("EN55022-A-main", 1e6, Detector::average) == 60.0);
  CHECK(lim("EN55022-A-telecom", 150e3, Detector::quasi_peak) == doctest::Approx(97.0));
  CHECK(lim("EN55022-B-telecom", 500e3, Detector::average) == doctest::Approx(64.0));
  CHECK(lim("EN50065-IB-NB-122", 5e3, Detector::peak) == 134.0);
  CHECK(lim("EN50065-IB-NB-122", 95e3, Detector::peak) == doctest::Approx(120.0));
  CHECK(lim("EN50065-IB-WB-122", 50e3, Detector::peak) == 134.0);
  CHECK(lim("EN50065-IB-NB-122", 100e3, Detector::peak) == 122.0);
  CHECK(lim("EN50065-IB-NB-134", 100e3, Detector::peak) == 134.0);
  CHECK(lim("P1901.2-FCC-IB", 150e3, Detector::quasi_peak) == doctest::Approx(115.0));
  CHECK(lim("P1901.2-FCC-IB", 500e3, Detector::average) == doctest::Approx(95.0));
  CHECK(lim("EN50065-OOB", 5e3, Detector::peak) == 89.0);
  CHECK(lim("EN50065-OOB", 9e3, Detector::quasi_peak) == doctest::Approx(89.0));
  CHECK(lim("EN50065-OOB", 149.999e3, Detector::quasi_peak) == doctest::Approx(66.0).epsilon(1e-4));
  CHECK(lim("EN50065-OOB", 1e6, Detector::quasi_peak) == 56.0);
}

TEST_CASE("limit_at: coverage and boundaries") {
  const auto& b = find_mask("EN55022-B-main");
  CHECK_FALSE(limit_at(b, 100e3, Detector::quasi_peak).has_value());
  CHECK_FALSE(limit_at(b, 1e6, Detector::peak).has_value());
  CHECK_FALSE(limit_at(b, 31e6, Detector::average).has_value());
  // 5 MHz sits on the 56/60 boundary and belongs to the lower segment
  CHECK(*limit_at(b, 5e6, Detector::quasi_peak) == 56.0);
  CHECK(*limit_at(b, std::nextafter(5e6, 1e9), Detector::quasi_peak) == 60.0);
  CHECK(*limit_at(b, 150e3, Detector::quasi_peak) == doctest::Approx(66.0));
  CHECK(*limit_at(b, 30e6, Detector::quasi_peak) == 60.0);
  CHECK_THROWS_AS(find_mask("no-such-mask"), Error);
}

TEST_CASE("limit_at: log-linear segments decrease monotonically and continuously") {
  for (const auto& m : builtin_masks())
    for (const auto& s : m.segments) {
      if (s.interp != Interp::log_linear) continue;
      double prev = s.level_at(s.f_lo);
      CHECK(prev == doctest::Approx(s.level_lo));
      for (int i = 1; i <= 200; ++i) {
        const double f = s.f_lo * std::pow(s.f_hi / s.f_lo, i / 200.0);
        const double v = s.level_at(f);
        CHECK(v <= prev + 1e-12);
        CHECK(std::abs(v - prev) < 0.2);
        prev = v;
      }
      CHECK(prev == doctest::Approx(s.level_hi));
    }
}

TEST_CASE("class B limits never exceed class A") {
  for (auto [a, b] : {std::pair{"EN55022-A-main", "EN55022-B-main"}, {"EN55022-A-telecom", "EN55022-B-telecom"}})
    for (auto d : {Detector::quasi_peak, Detector::average})
      for (double f = 150e3; f <= 30e6; f *= 1.01) {
        auto la = limit_at(find_mask(a), f, d), lb = limit_at(find_mask(b), f, d);
        REQUIRE(la.has_value());
        REQUIRE(lb.has_value());
        CHECK(*lb <= *la);
      }
}

TEST_CASE("composite masks") {
  SUBCASE("CENELEC-A: in-band PK up to 95 kHz, out-band QP above") {
    CHECK(lim("CENELEC-A", 50e3, Detector::peak) == 134.0);
    CHECK_FALSE(limit_at(find_mask("CENELEC-A"), 50e3, Detector::quasi_peak).has_value());
    CHECK_FALSE(limit_at(find_mask("CENELEC-A"), 100e3, Detector::peak).has_value());
    // out-band QP keeps the 9-150 kHz log-linear line
    CHECK(lim("CENELEC-A", 100e3, Detector::quasi_peak) == doctest::Approx(lim("EN50065-OOB", 100e3, Detector::quasi_peak)));
    CHECK(lim("CENELEC-A", 1e6, Detector::average) == 46.0);
  }
  SUBCASE("CENELEC-B") {
    CHECK(lim("CENELEC-B", 110e3, Detector::peak) == 122.0);
    CHECK(lim("CENELEC-B", 5e3, Detector::peak) == 89.0);
    CHECK(lim("CENELEC-B", 60e3, Detector::quasi_peak) == doctest::Approx(lim("EN50065-OOB", 60e3, Detector::quasi_peak)));
    CHECK(lim("CENELEC-B", 140e3, Detector::quasi_peak) == doctest::Approx(lim("EN50065-OOB", 140e3, Detector::quasi_peak)));
  }
  SUBCASE("FCC") {
    CHECK(lim("FCC", 300e3, Detector::quasi_peak) == doctest::Approx(lim("P1901.2-FCC-IB", 300e3, Detector::quasi_peak)));
    CHECK(lim("FCC", 600e3, Detector::quasi_peak) == 56.0);
    CHECK(lim("FCC", 100e3, Detector::quasi_peak) == doctest::Approx(lim("EN50065-OOB", 100e3, Detector::quasi_peak)));
  }
  SUBCASE("BB") {
    CHECK(lim("BB", 10e6, Detector::peak) == 105.0);
    CHECK(lim("BB", 1e6, Detector::quasi_peak) == 56.0);
    CHECK_FALSE(limit_at(find_mask("BB"), 1e6, Detector::peak).has_value());
  }
  for (const auto& m : builtin_masks()) CHECK_NOTHROW(m.validate());
}

TEST_CASE("band plans") {
  const auto& a = band_plan("CENELEC-A");
  CHECK(a.first_carrier == 35.9e3);
  CHECK(a.last_carrier == 90.6e3);
  CHECK(a.n_on == 36);
  CHECK(a.carrier_spacing() == doctest::Approx(1562.5));
  CHECK(a.first_index() == 23);
  CHECK(a.last_index() == 58);
  CHECK(a.active_carriers().size() == a.n_on);
  const auto& b = band_plan("CENELEC-B");
  CHECK(b.first_carrier == 98.4e3);
  CHECK(b.last_carrier == 121.8e3);
  CHECK(b.active_carriers().size() == 16);
  const auto& f = band_plan("FCC-above-CENELEC");
  CHECK(f.first_carrier == 154.6e3);
  CHECK(f.last_carrier == 487.5e3);
  CHECK(f.active_carriers().size() == 72);
  CHECK(band_plan("FCC-Low").active_carriers().size() == 18);
  const auto& bb = band_plan("BB");
  CHECK(bb.K == 2048);
  CHECK(bb.fs == 100e6);
  CHECK(bb.first_carrier == 1.8e6);
  CHECK(bb.last_carrier == 28e6);
  CHECK(bb.active_carriers().size() == bb.n_on);
  CHECK(bb.baseband_ts() == doctest::Approx(2.0 / 100e6));
  CHECK_THROWS_AS(band_plan("CENELEC-C"), Error);

  auto p = make_params(a, 20, 30, 8);
  CHECK(p.M() == 2560);
  CHECK(p.active.front() == 23);
  CHECK(p.carrier_spacing() == doctest::Approx(1562.5));
}

TEST_CASE("apply_notches") {
  auto p = make_params(band_plan("BB"), 1, 0, 0);
  const double df = p.carrier_spacing();
  SUBCASE("empty notch list leaves the set unchanged") {
    auto r = apply_notches(p.active, {}, p);
    CHECK(r.active == p.active);
    CHECK(r.removed.empty());
    CHECK(r.depth_target_dbuv == 75.0);
  }
  SUBCASE("narrow notch removes one carrier plus the guards") {
    const double f = 500.0 * df;
    auto r = apply_notches(p.active, {{"x", f - 0.1 * df, f + 0.1 * df}}, p);
    CHECK(r.removed.size() == 13);
    CHECK(r.removed.front() == 494);
    CHECK(r.removed.back() == 506);
    CHECK(r.active.size() + 13 == p.active.size());
    auto r0 = apply_notches(p.active, {{"x", f - 0.1 * df, f + 0.1 * df}}, p, 0);
    CHECK(r0.removed.size() == 1);
  }
  SUBCASE("amateur bands") {
    auto notches = load_notches(std::string(PLCEMC_DATA_DIR) + "/notches_amateur.txt");
    REQUIRE(notches.size() == 9);
    auto r = apply_notches(p.active, notches, p);
    for (auto k : r.active)
      for (const auto& n : notches) {
        const double f = static_cast<double>(k) * df;
        CHECK_FALSE((f >= n.f_lo - 6 * df && f <= n.f_hi + 6 * df));
      }
  }
}

TEST_CASE("notched BB PS-CB-FMT sits 30 dB below the in-band maximum inside each notch") {
  const auto& plan = band_plan("BB");
  auto p = make_params(plan, 4, 556, 1264);
  auto notches = load_notches(std::string(PLCEMC_DATA_DIR) + "/notches_amateur.txt");
  p.set_active(apply_notches(p.active, notches, p).active);
  auto pulse = PrototypePulse::rectangular_frequency(p);
  auto w = raised_cosine_window(p.M1(), p.alpha);
  auto grid = uniform_grid(1.8e6, 30e6, 5e3);
  auto psd = analytic_psd(p, pulse, w, grid);
  double peak = 0.0;
  for (double v : psd.values) peak = std::max(peak, v);
  for (const auto& n : notches) {
    if (n.f_lo < 2.2e6) continue;  // the 160 m band abuts the lower band edge
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= n.f_lo && grid[i] <= n.f_hi) worst = std::max(worst, psd.values[i]);
    CAPTURE(n.label);
    CHECK(10.0 * std::log10(peak / worst) >= 30.0);
  }
}

TEST_CASE("text formats round-trip exactly") {
  std::stringstream ss;
  write_masks(ss, builtin_masks());
  auto back = read_masks(ss);
  REQUIRE(back.size() == builtin_masks().size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = builtin_masks()[i];
    const auto& b = back[i];
    CHECK(a.name == b.name);
    CHECK(a.region == b.region);
    REQUIRE(a.segments.size() == b.segments.size());
    for (std::size_t j = 0; j < a.segments.size(); ++j) {
      CHECK(a.segments[j].f_lo == b.segments[j].f_lo);
      CHECK(a.segments[j].f_hi == b.segments[j].f_hi);
      CHECK(a.segments[j].level_lo == b.segments[j].level_lo);
      CHECK(a.segments[j].level_hi == b.segments[j].level_hi);
      CHECK(a.segments[j].detector == b.segments[j].detector);
      CHECK(a.segments[j].interp == b.segments[j].interp);
    }
  }

  std::stringstream np;
  std::vector<Notch> notches{{"a", 1.5e6, 2.0000000001e6}, {"b", 0.1, 0.30000000000000004}};
  write_notches(np, notches);
  auto nb = read_notches(np);
  REQUIRE(nb.size() == 2);
  CHECK(nb[1].f_hi == 0.30000000000000004);

  std::stringstream bp;
  write_band_plans(bp, builtin_band_plans());
  auto pb = read_band_plans(bp);
  REQUIRE(pb.size() == builtin_band_plans().size());
  for (std::size_t i = 0; i < pb.size(); ++i) {
    CHECK(pb[i].name == builtin_band_plans()[i].name);
    CHECK(pb[i].first_carrier == builtin_band_plans()[i].first_carrier);
    CHECK(pb[i].n_on == builtin_band_plans()[i].n_on);
  }
  auto shipped = load_band_plans(std::string(PLCEMC_DATA_DIR) + "/band_plans.txt");
  REQUIRE(shipped.size() == 5);
  CHECK(shipped.back().n_on == band_plan("BB").n_on);
}

TEST_CASE("text format errors") {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_masks(is);
  };
  CHECK_THROWS_AS(parse("m 1 2 PK 3 4\n"), Error);
  CHECK_THROWS_AS(parse("m 1 2 XX 3 3 const\n"), Error);
  CHECK_THROWS_AS(parse("m 1 2 PK 3 4 const\n"), Error);  // constant with unequal levels
  CHECK_THROWS_AS(parse("m 2 1 PK 3 3 const\n"), Error);
  CHECK_THROWS_AS(parse("m 1 3 PK 3 3 const\nm 2 4 PK 3 3 const\n"), Error);  // overlap
  CHECK_THROWS_AS(parse("m 1 2 PK abc 3 const\n"), Error);
  auto ok = parse("# comment\n\nm 1e3 2e3 QP 60 50 loglin  # trailing\nregion m EU\n");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].region == "EU");
  try {
    parse("m 1 2 PK 3 3 const\nbad line\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_masks("/nonexistent/masks.txt"), Error);
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double("1e6") == 1e6);
  CHECK_THROWS_AS(parse_double("1e6x"), Error);
}
