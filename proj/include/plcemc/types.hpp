// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plcemc {

using cplx = std::complex<double>;

/// Load impedance used for every voltage/power conversion (LISN / analyzer input).
inline constexpr double kZ0 = 50.0;

enum class Errc {
  invalid_argument,
  not_covered,
  undefined_scale,
  singular,
  io,
  parse,
  unknown_name,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(Errc::invalid_argument, what);
}

/// Sampled signal. Real signals keep a zero imaginary part.
struct WaveformSegment {
  std::vector<cplx> samples;
  double ts = 0.0;
  std::int64_t origin = 0;
  bool real = false;

  std::size_t size() const { return samples.size(); }
  double sample_rate() const { return 1.0 / ts; }
  double duration() const { return static_cast<double>(samples.size()) * ts; }
  double mean_power() const;
  void validate() const;
};

/// K x L grid of complex data symbols, row-major in k.
class SymbolGrid {
 public:
  SymbolGrid() = default;
  SymbolGrid(std::size_t k, std::size_t l) : k_(k), l_(l), data_(k * l) {}

  std::size_t subchannels() const { return k_; }
  std::size_t symbols() const { return l_; }
  cplx& operator()(std::size_t k, std::size_t l) { return data_[k * l_ + l]; }
  const cplx& operator()(std::size_t k, std::size_t l) const { return data_[k * l_ + l]; }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

 private:
  std::size_t k_ = 0;
  std::size_t l_ = 0;
  std::vector<cplx> data_;
};

}  // namespace plcemc
