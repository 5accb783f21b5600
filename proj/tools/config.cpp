// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

namespace plcemc_cli {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto item = trim(s.substr(start, pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

// Allowed keys per section; anything else is a typo worth reporting.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"modulation", {"plan", "L", "mu", "alpha", "pulse", "window", "qam", "active", "notches", "notch_guard"}},
      {"signal", {"duration_s", "blocks", "seed"}},
      {"emi", {"grid", "tm", "detectors", "masks", "mask_file", "refine"}},
      {"psd", {"rbw", "step"}},
      {"capacity",
       {"noise", "noise_offset_db", "channels", "synthetic", "taps", "delay_spread_s", "attenuation_db",
        "tx_psd_dbm_hz"}},
  };
  return s;
}

std::vector<std::size_t> parse_active(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_u64(key, item));
      continue;
    }
    const auto a = to_u64(key, item.substr(0, dash));
    const auto b = to_u64(key, item.substr(dash + 1));
    if (b < a) throw ConfigError(key + ": empty range '" + item + "'");
    for (auto k = a; k <= b; ++k) out.push_back(k);
  }
  return out;
}

}  // namespace

std::vector<double> FreqGrid::points() const {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

FreqGrid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("grid: expected f_lo:f_hi:step, got '" + text + "'");
  FreqGrid g{to_double("grid", parts[0]), to_double("grid", parts[1]), to_double("grid", parts[2])};
  if (!(g.lo > 0.0 && g.hi >= g.lo && g.step > 0.0))
    throw ConfigError("grid: need 0 < f_lo <= f_hi and step > 0 in '" + text + "'");
  if ((g.hi - g.lo) / g.step > 1e6) throw ConfigError("grid: more than a million points");
  return g;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

ScenarioConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  const fs::path base = fs::absolute(path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return (q.is_absolute() ? q : base / q).lexically_normal().string();
  };

  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("'" + section + "' must be a section");
    for (const auto& [key, v] : body)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }

  ScenarioConfig c;
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(k, '.'))) return trim(*v);
    return std::nullopt;
  };

  if (auto v = get("modulation.plan")) c.plan = *v;
  if (c.plan.empty()) throw ConfigError("modulation.plan is required");
  if (auto v = get("modulation.L")) c.L = to_u64("modulation.L", *v);
  if (auto v = get("modulation.mu")) c.mu = to_u64("modulation.mu", *v);
  if (auto v = get("modulation.alpha")) c.alpha = to_u64("modulation.alpha", *v);
  if (auto v = get("modulation.pulse"); v && *v != "rect-freq")
    throw ConfigError("modulation.pulse: only 'rect-freq' is supported");
  if (auto v = get("modulation.window"); v && *v != "raised-cosine")
    throw ConfigError("modulation.window: only 'raised-cosine' is supported");
  if (auto v = get("modulation.qam")) c.qam = static_cast<unsigned>(to_u64("modulation.qam", *v));
  if (c.qam != 4 && c.qam != 16 && c.qam != 64) throw ConfigError("modulation.qam must be 4, 16 or 64");
  if (auto v = get("modulation.active")) {
    if (*v == "none")
      c.active = std::vector<std::size_t>{};
    else if (*v != "plan")
      c.active = parse_active("modulation.active", *v);
  }
  if (auto v = get("modulation.notches"); v && !v->empty()) c.notches = resolve(*v);
  if (auto v = get("modulation.notch_guard")) c.notch_guard = to_u64("modulation.notch_guard", *v);

  if (auto v = get("signal.duration_s")) c.duration_s = to_double("signal.duration_s", *v);
  if (c.duration_s < 0.0) throw ConfigError("signal.duration_s must be >= 0");
  if (auto v = get("signal.blocks")) c.blocks = to_u64("signal.blocks", *v);
  if (auto v = get("signal.seed")) c.seed = to_u64("signal.seed", *v);

  if (auto v = get("emi.grid"); v && *v != "auto") c.grid = parse_grid(*v);
  if (auto v = get("emi.tm"); v && *v != "auto") {
    c.tm = to_double("emi.tm", *v);
    if (*c.tm <= 0.0) throw ConfigError("emi.tm must be > 0");
  }
  if (auto v = get("emi.detectors")) c.detectors = split(*v, ',');
  if (c.detectors.empty()) throw ConfigError("emi.detectors must list at least one of PK, QP, AV");
  for (const auto& d : c.detectors)
    if (d != "PK" && d != "QP" && d != "AV") throw ConfigError("emi.detectors: unknown detector '" + d + "'");
  if (auto v = get("emi.masks")) c.masks = split(*v, ',');
  if (auto v = get("emi.mask_file"); v && !v->empty()) c.mask_file = resolve(*v);
  if (auto v = get("emi.refine")) c.refine = static_cast<int>(to_u64("emi.refine", *v));

  if (auto v = get("psd.rbw")) c.rbw = to_double("psd.rbw", *v);
  if (auto v = get("psd.step")) c.psd_step = to_double("psd.step", *v);
  if (c.rbw <= 0.0 || c.psd_step <= 0.0) throw ConfigError("psd.rbw and psd.step must be > 0");

  if (auto v = get("capacity.noise")) c.noise = *v;
  if (c.noise != "NB" && c.noise != "BB") throw ConfigError("capacity.noise must be NB or BB");
  if (auto v = get("capacity.noise_offset_db")) c.noise_offset_db = to_double("capacity.noise_offset_db", *v);
  if (auto v = get("capacity.channels"))
    for (const auto& f : split(*v, ',')) c.channels.push_back(resolve(f));
  if (auto v = get("capacity.synthetic")) c.synthetic = to_u64("capacity.synthetic", *v);
  if (auto v = get("capacity.taps")) c.taps = to_u64("capacity.taps", *v);
  if (c.taps == 0) throw ConfigError("capacity.taps must be >= 1");
  if (auto v = get("capacity.delay_spread_s")) c.delay_spread_s = to_double("capacity.delay_spread_s", *v);
  if (c.delay_spread_s < 0.0) throw ConfigError("capacity.delay_spread_s must be >= 0");
  if (auto v = get("capacity.attenuation_db")) {
    const auto parts = split(*v, ':');
    if (parts.size() == 1) {
      c.attenuation_lo_db = c.attenuation_hi_db = to_double("capacity.attenuation_db", parts[0]);
    } else if (parts.size() == 2) {
      c.attenuation_lo_db = to_double("capacity.attenuation_db", parts[0]);
      c.attenuation_hi_db = to_double("capacity.attenuation_db", parts[1]);
    } else {
      throw ConfigError("capacity.attenuation_db: expected a value or lo:hi");
    }
    if (c.attenuation_hi_db < c.attenuation_lo_db) throw ConfigError("capacity.attenuation_db: hi < lo");
  }
  if (auto v = get("capacity.tx_psd_dbm_hz")) c.tx_psd_dbm_hz = to_double("capacity.tx_psd_dbm_hz", *v);
  return c;
}

}  // namespace plcemc_cli
