// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "plcemc/types.hpp"

// Cyclic filter-bank synthesis/analysis for PS-OFDM and PS-CB-FMT.
//
// A block carries L symbols on each of K sub-channels and spans M = L*N
// samples. Every block is cyclically extended, multiplied by a raised-cosine
// window of length M1 + alpha (M1 = M + mu + alpha) and overlap-added at a
// stride of M1 samples. PS-OFDM is the special case L = 1, N = K.
namespace plcemc {

struct ModulationParams {
  std::size_t K = 1;
  std::size_t N = 1;
  std::size_t L = 1;
  std::size_t mu = 0;
  std::size_t alpha = 0;
  double ts = 1.0;
  /// Sorted, unique sub-channel indices in [0, K).
  std::vector<std::size_t> active;

  std::size_t M() const { return L * N; }
  std::size_t Q() const { return M() / K; }
  std::size_t M1() const { return M() + mu + alpha; }
  /// Sub-channel spacing 1/(K Ts) in Hz.
  double carrier_spacing() const { return 1.0 / (static_cast<double>(K) * ts); }
  bool is_ofdm() const { return L == 1 && N == K; }

  void validate() const;
  void set_active(std::vector<std::size_t> idx);
  void activate_all();
};

/// Prototype pulse g(n), n in [0, M), together with its M-point DFT G(p).
class PrototypePulse {
 public:
  static PrototypePulse from_time(std::vector<cplx> g);
  static PrototypePulse from_frequency(std::vector<cplx> G);
  /// Unit-energy pulse whose DFT is constant on Q cyclically consecutive bins
  /// centred on bin 0 (bins -floor(Q/2) .. Q-1-floor(Q/2)), zero elsewhere.
  /// For Q = 1 this is the constant pulse of OFDM.
  static PrototypePulse rectangular_frequency(const ModulationParams& p);

  std::size_t size() const { return time_.size(); }
  const std::vector<cplx>& time() const { return time_; }
  const std::vector<cplx>& freq() const { return freq_; }
  /// DFT bins where G(p) != 0, ascending.
  const std::vector<std::size_t>& support() const { return support_; }
  double energy() const;

 private:
  PrototypePulse(std::vector<cplx> time, std::vector<cplx> freq);
  std::vector<cplx> time_;
  std::vector<cplx> freq_;
  std::vector<std::size_t> support_;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// x_q(n) = sum_k sum_l a[k][l] g((n - l N) mod M) exp(i 2 pi n k / K).
WaveformSegment synthesize_block(const ModulationParams& params, const PrototypePulse& pulse,
                                 const SymbolGrid& symbols);

/// Prepends the last `prefix` samples and appends the first `postfix` samples.
WaveformSegment apply_cyclic_extension(const WaveformSegment& block, std::int64_t prefix,
                                       std::int64_t postfix);

/// Extension used ahead of windowing: prefix mu + alpha, postfix alpha, so the
/// result has M1 + alpha samples and sample n reads x_q((n - mu - alpha) mod M).
WaveformSegment extend_for_shaping(const WaveformSegment& block, const ModulationParams& params);

/// Raised-cosine window of M1 + alpha samples; all ones of length M1 when alpha == 0.
std::vector<double> raised_cosine_window(std::size_t m1, std::size_t alpha);

/// Overlap-add of windowed blocks at stride m1. Output length n_blocks*m1 + (len - m1).
WaveformSegment assemble_waveform(std::span<const WaveformSegment> blocks,
                                  std::span<const double> window, std::size_t m1);

/// z^(k)(mN) = sum_n y(n) exp(-i 2 pi n k / K) conj(g((n - m N) mod M)).
SymbolGrid analyze_block(const WaveformSegment& received, const PrototypePulse& pulse,
                         const ModulationParams& params);

/// Per sub-channel frequency-domain MMSE on the analysis output.
///
/// `H` holds the channel frequency response on the M DFT bins of a block.
/// `noise_var` is the per-sample variance of the noise on the received block;
/// data symbols are assumed to have unit power. noise_var == 0 is zero forcing.
SymbolGrid mmse_equalize(const SymbolGrid& z, std::span<const cplx> H, double noise_var,
                         const PrototypePulse& pulse, const ModulationParams& params);

/// L K / M1, reduced.
Rational normalized_rate(const ModulationParams& params);

// ---------------------------------------------------------------------------
// Transmit / receive chains built from the primitives above.

/// Square QAM with unit average power. Order must be 4, 16 or 64.
class QamMapper {
 public:
  explicit QamMapper(unsigned order = 4);
  unsigned order() const { return order_; }
  cplx map(unsigned index) const;
  cplx draw(std::mt19937_64& rng) const;

 private:
  unsigned order_;
  unsigned side_;
  double scale_;
};

/// Symbol grid with random symbols on active sub-channels, zero elsewhere.
SymbolGrid random_symbols(const ModulationParams& params, const QamMapper& qam,
                          std::mt19937_64& rng);

/// Synthesis, extension, windowing and overlap-add of consecutive blocks.
/// Output has n_blocks * M1 + alpha samples at params.ts.
WaveformSegment modulate(const ModulationParams& params, const PrototypePulse& pulse,
                         std::span<const SymbolGrid> blocks);

/// Extracts the M-sample body of block q (offset q*M1 + mu + alpha) and runs the
/// analysis bank on it.
std::vector<SymbolGrid> demodulate(const WaveformSegment& received, const ModulationParams& params,
                                   const PrototypePulse& pulse, std::size_t n_blocks);

}  // namespace plcemc
