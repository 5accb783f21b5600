// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/regdb.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace plcemc {

// ---------------------------------------------------------------------------
// Segments and masks

void LimitSegment::validate() const {
  require(std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo < f_hi, "limit segment needs f_lo < f_hi");
  require(std::isfinite(level_lo) && std::isfinite(level_hi), "limit segment levels must be finite");
  if (interp == Interp::constant) require(level_lo == level_hi, "constant segment needs level_lo == level_hi");
  if (interp == Interp::log_linear) require(f_lo > 0.0, "log-linear segment needs f_lo > 0");
}

double LimitSegment::level_at(double f) const {
  if (interp == Interp::constant) return level_lo;
  const double t = (std::log(f) - std::log(f_lo)) / (std::log(f_hi) - std::log(f_lo));
  return level_lo + (level_hi - level_lo) * t;
}

void RegulatoryMask::validate() const {
  require(!name.empty(), "mask has no name");
  require(!segments.empty(), "mask " + name + " has no segments");
  for (const auto& s : segments) s.validate();
  for (auto d : detectors()) {
    std::vector<const LimitSegment*> seg;
    for (const auto& s : segments)
      if (s.detector == d) seg.push_back(&s);
    std::sort(seg.begin(), seg.end(), [](auto a, auto b) { return a->f_lo < b->f_lo; });
    for (std::size_t i = 1; i < seg.size(); ++i)
      require(seg[i]->f_lo >= seg[i - 1]->f_hi, "mask " + name + " has overlapping segments");
  }
  for (const auto& n : notches)
    require(n.f_lo < n.f_hi && n.f_lo >= f_min() && n.f_hi <= f_max(), "mask " + name + " has a notch outside its span");
}

std::vector<Detector> RegulatoryMask::detectors() const {
  std::vector<Detector> out;
  for (auto d : {Detector::peak, Detector::quasi_peak, Detector::average})
    if (std::any_of(segments.begin(), segments.end(), [d](const auto& s) { return s.detector == d; }))
      out.push_back(d);
  return out;
}

double RegulatoryMask::f_min() const {
  double f = INFINITY;
  for (const auto& s : segments) f = std::min(f, s.f_lo);
  return f;
}

double RegulatoryMask::f_max() const {
  double f = -INFINITY;
  for (const auto& s : segments) f = std::max(f, s.f_hi);
  return f;
}

std::optional<double> limit_at(const RegulatoryMask& mask, double f, Detector detector) {
  const LimitSegment* best = nullptr;
  for (const auto& s : mask.segments)
    if (s.detector == detector && s.contains(f) && (!best || s.f_lo < best->f_lo)) best = &s;
  if (!best) return std::nullopt;
  return best->level_at(f);
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

using D = Detector;
constexpr auto C = Interp::constant;
constexpr auto LL = Interp::log_linear;

LimitSegment seg(double lo, double hi, D d, double a, double b, Interp i) { return {lo, hi, d, a, b, i}; }
LimitSegment flat(double lo, double hi, D d, double a) { return {lo, hi, d, a, a, C}; }

std::vector<LimitSegment> en55022(bool class_b, bool telecom) {
  if (!class_b && !telecom)
    return {flat(150e3, 500e3, D::quasi_peak, 79), flat(500e3, 30e6, D::quasi_peak, 73),
            flat(150e3, 500e3, D::average, 66), flat(500e3, 30e6, D::average, 60)};
  if (!class_b && telecom)
    return {seg(150e3, 500e3, D::quasi_peak, 97, 87, LL), flat(500e3, 30e6, D::quasi_peak, 87),
            seg(150e3, 500e3, D::average, 84, 74, LL), flat(500e3, 30e6, D::average, 74)};
  if (class_b && !telecom)
    return {seg(150e3, 500e3, D::quasi_peak, 66, 56, LL), flat(500e3, 5e6, D::quasi_peak, 56),
            flat(5e6, 30e6, D::quasi_peak, 60),           seg(150e3, 500e3, D::average, 56, 46, LL),
            flat(500e3, 5e6, D::average, 46),             flat(5e6, 30e6, D::average, 50)};
  return {seg(150e3, 500e3, D::quasi_peak, 84, 74, LL), flat(500e3, 30e6, D::quasi_peak, 74),
          seg(150e3, 500e3, D::average, 74, 64, LL), flat(500e3, 30e6, D::average, 64)};
}

std::vector<LimitSegment> en50065_in_band(bool wideband, double class_level) {
  return {flat(3e3, 9e3, D::peak, 134),
          wideband ? flat(9e3, 95e3, D::peak, 134) : seg(9e3, 95e3, D::peak, 134, 120, LL),
          flat(95e3, 148.5e3, D::peak, class_level)};
}

std::vector<LimitSegment> en50065_out_band(bool class_b) {
  std::vector<LimitSegment> s{flat(3e3, 9e3, D::peak, 89), seg(9e3, 150e3, D::quasi_peak, 89, 66, LL)};
  auto tail = en55022(class_b, false);
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

std::vector<LimitSegment> fcc_in_band() {
  return {seg(150e3, 500e3, D::quasi_peak, 115, 105, LL), seg(150e3, 500e3, D::average, 105, 95, LL)};
}

std::vector<LimitSegment> en50561_in_band() {
  return {flat(1.6065e6, 30e6, D::peak, 105), flat(1.6065e6, 30e6, D::average, 95)};
}

/// Restricts segments to [lo, hi], keeping each log-linear line.
std::vector<LimitSegment> clip(const std::vector<LimitSegment>& in, double lo, double hi) {
  std::vector<LimitSegment> out;
  for (const auto& s : in) {
    const double a = std::max(s.f_lo, lo), b = std::min(s.f_hi, hi);
    if (!(a < b)) continue;
    out.push_back({a, b, s.detector, s.level_at(a), s.level_at(b), s.interp});
    if (s.interp == C) out.back().level_hi = out.back().level_lo;
  }
  return out;
}

/// In-band pieces inside [lo, hi] plus out-band pieces outside it.
RegulatoryMask composite(std::string name, std::string region, const std::vector<LimitSegment>& in_band,
                         const std::vector<LimitSegment>& out_band, double lo, double hi) {
  RegulatoryMask m{std::move(name), std::move(region), clip(in_band, lo, hi), {}};
  for (const auto& part : {clip(out_band, 0.0, lo), clip(out_band, hi, INFINITY)})
    m.segments.insert(m.segments.end(), part.begin(), part.end());
  return m;
}

std::vector<RegulatoryMask> make_catalog() {
  std::vector<RegulatoryMask> c;
  c.push_back({"EN55022-A-main", "EU", en55022(false, false), {}});
  c.push_back({"EN55022-A-telecom", "EU", en55022(false, true), {}});
  c.push_back({"EN55022-B-main", "EU", en55022(true, false), {}});
  c.push_back({"EN55022-B-telecom", "EU", en55022(true, true), {}});
  for (bool wb : {false, true})
    for (double cls : {122.0, 134.0})
      c.push_back({std::string("EN50065-IB-") + (wb ? "WB-" : "NB-") + (cls == 122.0 ? "122" : "134"), "EU",
                   en50065_in_band(wb, cls), {}});
  c.push_back({"EN50065-OOB", "EU", en50065_out_band(true), {}});
  c.push_back({"EN50065-OOB-A", "EU", en50065_out_band(false), {}});
  c.push_back({"P1901.2-FCC-IB", "US", fcc_in_band(), {}});
  c.push_back({"EN50561-1-IB", "EU", en50561_in_band(), {}});

  const auto oob = en50065_out_band(true);
  c.push_back(composite("CENELEC-A", "EU", en50065_in_band(true, 122), oob, 3e3, 95e3));
  c.push_back(composite("CENELEC-B", "EU", en50065_in_band(true, 122), oob, 95e3, 125e3));
  c.push_back(composite("FCC", "US", fcc_in_band(), oob, 150e3, 500e3));
  c.push_back(composite("FCC-Low", "US", en50065_in_band(true, 134), oob, 3e3, 148.5e3));
  c.push_back(composite("BB", "EU", en50561_in_band(), oob, 1.6065e6, 30e6));
  for (const auto& m : c) m.validate();
  return c;
}

}  // namespace

const std::vector<RegulatoryMask>& builtin_masks() {
  static const std::vector<RegulatoryMask> catalog = make_catalog();
  return catalog;
}

const RegulatoryMask& find_mask(const std::string& name) {
  for (const auto& m : builtin_masks())
    if (m.name == name) return m;
  fail(Errc::unknown_name, "unknown mask '" + name + "'");
}

const RegulatoryMask& find_mask(const std::vector<RegulatoryMask>& masks, const std::string& name) {
  for (const auto& m : masks)
    if (m.name == name) return m;
  return find_mask(name);
}

// ---------------------------------------------------------------------------
// Band plans

void BandPlan::validate() const {
  require(!name.empty(), "band plan has no name");
  require(K >= 1 && fs > 0.0 && std::isfinite(fs), "band plan needs K >= 1 and fs > 0");
  require(first_carrier > 0.0 && first_carrier < last_carrier, "band plan needs 0 < first < last carrier");
  require(n_on >= 1 && n_on <= K, "band plan needs 1 <= n_on <= K");
  require(last_index() < K, "band plan carriers exceed the sub-channel count");
}

double BandPlan::carrier_spacing() const { return fs / (2.0 * static_cast<double>(K)); }
double BandPlan::baseband_ts() const { return 1.0 / (static_cast<double>(K) * carrier_spacing()); }
std::size_t BandPlan::first_index() const {
  return static_cast<std::size_t>(std::llround(first_carrier / carrier_spacing()));
}
std::size_t BandPlan::last_index() const {
  return static_cast<std::size_t>(std::llround(last_carrier / carrier_spacing()));
}

std::vector<std::size_t> BandPlan::active_carriers() const {
  std::vector<std::size_t> out;
  for (std::size_t k = first_index(); k <= last_index(); ++k) out.push_back(k);
  return out;
}

const std::vector<BandPlan>& builtin_band_plans() {
  static const std::vector<BandPlan> plans = [] {
    std::vector<BandPlan> p{
        {"CENELEC-A", 35.9e3, 90.6e3, 36, 128, 400e3},
        {"CENELEC-B", 98.4e3, 121.8e3, 16, 128, 400e3},
        {"FCC-above-CENELEC", 154.6e3, 487.5e3, 72, 128, 1.2e6},
        {"FCC-Low", 37.5e3, 117.2e3, 18, 128, 1.2e6},
        {"BB", 1.8e6, 28e6, 0, 2048, 100e6},
    };
    auto& bb = p.back();
    bb.n_on = bb.last_index() - bb.first_index() + 1;
    for (const auto& b : p) b.validate();
    return p;
  }();
  return plans;
}

const BandPlan& band_plan(const std::string& name) {
  for (const auto& p : builtin_band_plans())
    if (p.name == name) return p;
  fail(Errc::unknown_name, "unknown band plan '" + name + "'");
}

ModulationParams make_params(const BandPlan& plan, std::size_t L, std::size_t mu, std::size_t alpha) {
  plan.validate();
  ModulationParams p;
  p.K = p.N = plan.K;
  p.L = L;
  p.mu = mu;
  p.alpha = alpha;
  p.ts = plan.baseband_ts();
  p.set_active(plan.active_carriers());
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Notching

NotchResult apply_notches(const std::vector<std::size_t>& active, const std::vector<Notch>& notches,
                          const ModulationParams& params, std::size_t guard, double in_band_limit_dbuv) {
  const double df = params.carrier_spacing();
  std::vector<bool> drop(params.K, false);
  for (const auto& n : notches) {
    require(n.f_lo <= n.f_hi && std::isfinite(n.f_lo) && std::isfinite(n.f_hi), "notch needs f_lo <= f_hi");
    for (std::size_t k = 0; k < params.K; ++k) {
      const double lo = (static_cast<double>(k) - 0.5) * df, hi = (static_cast<double>(k) + 0.5) * df;
      if (lo <= n.f_hi && hi > n.f_lo) {
        const std::size_t a = k >= guard ? k - guard : 0, b = std::min(params.K - 1, k + guard);
        for (std::size_t j = a; j <= b; ++j) drop[j] = true;
      }
    }
  }
  NotchResult r;
  r.depth_target_dbuv = in_band_limit_dbuv - 30.0;
  for (auto k : active) {
    require(k < params.K, "active sub-channel index out of range");
    (drop[k] ? r.removed : r.active).push_back(k);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Text I/O

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    fail(Errc::parse, "not a finite number: '" + std::string(s) + "'");
  return v;
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> t;
  std::istringstream is(line.substr(0, line.find('#')));
  for (std::string w; is >> w;) t.push_back(w);
  return t;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(Errc::parse, "line " + std::to_string(line) + ": " + what);
}

template <class F>
void for_each_record(std::istream& in, F&& f) {
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto t = tokens(line);
    if (t.empty()) continue;
    try {
      f(t, no);
    } catch (const Error& e) {
      if (e.code() == Errc::parse && std::string_view(e.what()).starts_with("line ")) throw;
      parse_error(no, e.what());
    }
  }
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) fail(Errc::parse, "not an unsigned integer: '" + s + "'");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io, "cannot open '" + path + "'");
  return f;
}

}  // namespace

std::vector<RegulatoryMask> read_masks(std::istream& in) {
  std::vector<RegulatoryMask> masks;
  std::map<std::string, std::size_t> index;
  auto get = [&](const std::string& name) -> RegulatoryMask& {
    auto [it, fresh] = index.try_emplace(name, masks.size());
    if (fresh) masks.push_back({name, "", {}, {}});
    return masks[it->second];
  };
  for_each_record(in, [&](const std::vector<std::string>& t, std::size_t no) {
    if (t[0] == "region") {
      if (t.size() != 3) parse_error(no, "expected: region <mask> <region>");
      get(t[1]).region = t[2];
    } else if (t[0] == "notch") {
      if (t.size() != 5) parse_error(no, "expected: notch <mask> <label> <f_lo_hz> <f_hi_hz>");
      get(t[1]).notches.push_back({t[2], parse_double(t[3]), parse_double(t[4])});
    } else {
      if (t.size() != 7) parse_error(no, "expected 7 fields: name f_lo_hz f_hi_hz detector level_lo level_hi interp");
      auto det = parse_detector(t[3]);
      if (!det) parse_error(no, "unknown detector '" + t[3] + "'");
      Interp interp;
      if (t[6] == "const")
        interp = Interp::constant;
      else if (t[6] == "loglin")
        interp = Interp::log_linear;
      else
        parse_error(no, "unknown interpolation '" + t[6] + "'");
      LimitSegment s{parse_double(t[1]), parse_double(t[2]), *det, parse_double(t[4]), parse_double(t[5]), interp};
      s.validate();
      get(t[0]).segments.push_back(s);
    }
  });
  for (const auto& m : masks) {
    try {
      m.validate();
    } catch (const Error& e) {
      fail(Errc::parse, e.what());
    }
  }
  return masks;
}

void write_masks(std::ostream& out, const std::vector<RegulatoryMask>& masks) {
  out << "# name f_lo_hz f_hi_hz detector level_lo_dbuv level_hi_dbuv interp\n";
  for (const auto& m : masks) {
    if (!m.region.empty()) out << "region " << m.name << ' ' << m.region << '\n';
    for (const auto& s : m.segments)
      out << m.name << ' ' << format_double(s.f_lo) << ' ' << format_double(s.f_hi) << ' '
          << detector_name(s.detector) << ' ' << format_double(s.level_lo) << ' ' << format_double(s.level_hi)
          << ' ' << (s.interp == Interp::constant ? "const" : "loglin") << '\n';
    for (const auto& n : m.notches)
      out << "notch " << m.name << ' ' << n.label << ' ' << format_double(n.f_lo) << ' ' << format_double(n.f_hi)
          << '\n';
  }
}

std::vector<RegulatoryMask> load_masks(const std::string& path) {
  auto f = open_in(path);
  return read_masks(f);
}

void save_masks(const std::string& path, const std::vector<RegulatoryMask>& masks) {
  std::ofstream f(path);
  if (!f) fail(Errc::io, "cannot write '" + path + "'");
  write_masks(f, masks);
  if (!f) fail(Errc::io, "write to '" + path + "' failed");
}

std::vector<Notch> read_notches(std::istream& in) {
  std::vector<Notch> out;
  for_each_record(in, [&](const std::vector<std::string>& t, std::size_t no) {
    if (t.size() != 3) parse_error(no, "expected: label f_lo_hz f_hi_hz");
    Notch n{t[0], parse_double(t[1]), parse_double(t[2])};
    if (!(n.f_lo < n.f_hi)) parse_error(no, "notch needs f_lo < f_hi");
    out.push_back(n);
  });
  return out;
}

void write_notches(std::ostream& out, const std::vector<Notch>& notches) {
  out << "# label f_lo_hz f_hi_hz\n";
  for (const auto& n : notches) out << n.label << ' ' << format_double(n.f_lo) << ' ' << format_double(n.f_hi) << '\n';
}

std::vector<Notch> load_notches(const std::string& path) {
  auto f = open_in(path);
  return read_notches(f);
}

std::vector<BandPlan> read_band_plans(std::istream& in) {
  std::vector<BandPlan> out;
  for_each_record(in, [&](const std::vector<std::string>& t, std::size_t no) {
    if (t.size() != 6) parse_error(no, "expected: name first_hz last_hz n_on K fs_hz");
    BandPlan p{t[0], parse_double(t[1]), parse_double(t[2]), parse_size(t[3]), parse_size(t[4]), parse_double(t[5])};
    p.validate();
    out.push_back(p);
  });
  return out;
}

void write_band_plans(std::ostream& out, const std::vector<BandPlan>& plans) {
  out << "# name first_carrier_hz last_carrier_hz n_on K fs_hz\n";
  for (const auto& p : plans)
    out << p.name << ' ' << format_double(p.first_carrier) << ' ' << format_double(p.last_carrier) << ' ' << p.n_on
        << ' ' << p.K << ' ' << format_double(p.fs) << '\n';
}

std::vector<BandPlan> load_band_plans(const std::string& path) {
  auto f = open_in(path);
  return read_band_plans(f);
}

}  // namespace plcemc
