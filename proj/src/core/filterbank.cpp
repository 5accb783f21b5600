// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "plcemc/dft.hpp"

namespace plcemc {

double WaveformSegment::mean_power() const {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& v : samples) acc += std::norm(v);
  return acc / static_cast<double>(samples.size());
}

void WaveformSegment::validate() const {
  require(!samples.empty(), "waveform is empty");
  require(ts > 0.0 && std::isfinite(ts), "waveform sampling period must be positive");
}

void ModulationParams::validate() const {
  require(K >= 1, "K must be >= 1");
  require(N >= 1 && L >= 1, "N and L must be >= 1");
  require(M() % K == 0, "M = L*N must be a multiple of K");
  require(ts > 0.0 && std::isfinite(ts), "sampling period must be positive");
  require(M1() > 0, "M1 must be positive");
  for (std::size_t i = 0; i < active.size(); ++i) {
    require(active[i] < K, "active sub-channel index out of range");
    require(i == 0 || active[i] > active[i - 1], "active set must be sorted and unique");
  }
}

void ModulationParams::set_active(std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (auto k : idx) require(k < K, "active sub-channel index out of range");
  active = std::move(idx);
}

void ModulationParams::activate_all() {
  active.resize(K);
  std::iota(active.begin(), active.end(), std::size_t{0});
}

// ---------------------------------------------------------------------------

PrototypePulse::PrototypePulse(std::vector<cplx> time, std::vector<cplx> freq)
    : time_(std::move(time)), freq_(std::move(freq)) {
  require(!time_.empty(), "prototype pulse is empty");
  for (std::size_t p = 0; p < freq_.size(); ++p) {
    require(std::isfinite(freq_[p].real()) && std::isfinite(freq_[p].imag()),
            "prototype pulse has non-finite coefficients");
    if (freq_[p] != cplx{}) support_.push_back(p);
  }
  require(energy() > 0.0, "prototype pulse has zero energy");
}

PrototypePulse PrototypePulse::from_time(std::vector<cplx> g) {
  require(!g.empty(), "prototype pulse is empty");
  auto G = dft::forward(g);
  return PrototypePulse(std::move(g), std::move(G));
}

PrototypePulse PrototypePulse::from_frequency(std::vector<cplx> G) {
  require(!G.empty(), "prototype pulse is empty");
  auto g = dft::inverse(G);
  return PrototypePulse(std::move(g), std::move(G));
}

PrototypePulse PrototypePulse::rectangular_frequency(const ModulationParams& p) {
  p.validate();
  const std::size_t M = p.M();
  const std::size_t Q = p.Q();
  // Unit energy: sum |g|^2 = (1/M) sum |G|^2 = Q c^2 / M = 1.
  const double c = std::sqrt(static_cast<double>(M) / static_cast<double>(Q));
  std::vector<cplx> G(M);
  const std::int64_t lo = -static_cast<std::int64_t>(Q / 2);
  for (std::int64_t s = lo; s < lo + static_cast<std::int64_t>(Q); ++s) {
    auto idx = static_cast<std::size_t>((s % static_cast<std::int64_t>(M) + M) % M);
    G[idx] = c;
  }
  return from_frequency(std::move(G));
}

double PrototypePulse::energy() const {
  double e = 0.0;
  for (const auto& v : time_) e += std::norm(v);
  return e;
}

// ---------------------------------------------------------------------------

namespace {

void check_geometry(const ModulationParams& params, const PrototypePulse& pulse) {
  params.validate();
  require(pulse.size() == params.M(), "prototype pulse length must equal M = L*N");
}

}  // namespace

WaveformSegment synthesize_block(const ModulationParams& params, const PrototypePulse& pulse,
                                 const SymbolGrid& symbols) {
  check_geometry(params, pulse);
  require(symbols.subchannels() == params.K && symbols.symbols() == params.L,
          "symbol grid must be K x L");
  const std::size_t M = params.M(), L = params.L, Q = params.Q();
  const auto& G = pulse.freq();

  // Sub-channel k contributes G(s) A_k(s mod L) at bin s + kQ, where A_k is
  // the L-point DFT of its symbols.
  std::vector<cplx> X(M);
  std::vector<cplx> row(L), A(L);
  for (std::size_t k = 0; k < params.K; ++k) {
    bool any = false;
    for (std::size_t l = 0; l < L; ++l) {
      row[l] = symbols(k, l);
      any = any || row[l] != cplx{};
    }
    if (!any) continue;
    dft::forward(row, A);
    for (std::size_t s : pulse.support()) X[(s + k * Q) % M] += G[s] * A[s % L];
  }
  WaveformSegment out;
  out.samples = dft::inverse(X);
  out.ts = params.ts;
  return out;
}

WaveformSegment apply_cyclic_extension(const WaveformSegment& block, std::int64_t prefix,
                                       std::int64_t postfix) {
  require(prefix >= 0 && postfix >= 0, "cyclic extension lengths must be non-negative");
  require(!block.samples.empty(), "cannot extend an empty block");
  const auto M = static_cast<std::int64_t>(block.size());
  WaveformSegment out;
  out.ts = block.ts;
  out.real = block.real;
  out.origin = block.origin - prefix;
  out.samples.resize(static_cast<std::size_t>(M + prefix + postfix));
  for (std::int64_t n = 0; n < M + prefix + postfix; ++n) {
    std::int64_t src = ((n - prefix) % M + M) % M;
    out.samples[static_cast<std::size_t>(n)] = block.samples[static_cast<std::size_t>(src)];
  }
  return out;
}

WaveformSegment extend_for_shaping(const WaveformSegment& block, const ModulationParams& params) {
  require(block.size() == params.M(), "block must have exactly M samples");
  return apply_cyclic_extension(block, static_cast<std::int64_t>(params.mu + params.alpha),
                                static_cast<std::int64_t>(params.alpha));
}

std::vector<double> raised_cosine_window(std::size_t m1, std::size_t alpha) {
  require(m1 > alpha, "raised-cosine window needs M1 > alpha");
  if (alpha == 0) return std::vector<double>(m1, 1.0);
  std::vector<double> w(m1 + alpha, 1.0);
  const double n1 = static_cast<double>(m1 + alpha) / 2.0;
  const double n2 = n1 - static_cast<double>(alpha);
  const double a = static_cast<double>(alpha);
  for (std::size_t n = 0; n < w.size(); ++n) {
    if (n <= alpha || n >= m1) {
      const double arg = std::numbers::pi / a * (std::abs(static_cast<double>(n) - n1) - n2);
      w[n] = 0.5 + 0.5 * std::cos(arg);
    }
  }
  return w;
}

WaveformSegment assemble_waveform(std::span<const WaveformSegment> blocks,
                                  std::span<const double> window, std::size_t m1) {
  require(!blocks.empty(), "no blocks to assemble");
  require(m1 > 0 && window.size() >= m1, "window shorter than the block stride");
  const std::size_t len = window.size();
  for (const auto& b : blocks) require(b.size() == len, "block length must match the window length");

  WaveformSegment out;
  out.ts = blocks.front().ts;
  out.real = std::all_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.real; });
  out.samples.assign((blocks.size() - 1) * m1 + len, cplx{});
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    const auto& b = blocks[q].samples;
    cplx* dst = out.samples.data() + q * m1;
    for (std::size_t n = 0; n < len; ++n) dst[n] += b[n] * window[n];
  }
  return out;
}

SymbolGrid analyze_block(const WaveformSegment& received, const PrototypePulse& pulse,
                         const ModulationParams& params) {
  check_geometry(params, pulse);
  require(received.size() == params.M(), "received block must have exactly M samples");
  const std::size_t M = params.M(), L = params.L, Q = params.Q();
  const auto Y = dft::forward(received.samples);
  const auto& G = pulse.freq();
  const double inv_m = 1.0 / static_cast<double>(M);

  SymbolGrid z(params.K, L);
  std::vector<cplx> B(L), b(L);
  for (std::size_t k = 0; k < params.K; ++k) {
    std::fill(B.begin(), B.end(), cplx{});
    for (std::size_t s : pulse.support()) B[s % L] += Y[(s + k * Q) % M] * std::conj(G[s]);
    dft::backward(B, b);
    for (std::size_t m = 0; m < L; ++m) z(k, m) = b[m] * inv_m;
  }
  return z;
}

SymbolGrid mmse_equalize(const SymbolGrid& z, std::span<const cplx> H, double noise_var,
                         const PrototypePulse& pulse, const ModulationParams& params) {
  check_geometry(params, pulse);
  require(z.subchannels() == params.K && z.symbols() == params.L, "symbol grid must be K x L");
  require(H.size() == params.M(), "channel response must be sampled on the M DFT bins");
  require(noise_var >= 0.0 && std::isfinite(noise_var), "noise variance must be >= 0");
  for (const auto& h : H)
    require(std::isfinite(h.real()) && std::isfinite(h.imag()), "channel response is not finite");

  const std::size_t M = params.M(), L = params.L, Q = params.Q();
  const double Ld = static_cast<double>(L), Md = static_cast<double>(M);
  const auto& G = pulse.freq();

  SymbolGrid out(params.K, L);
  std::vector<cplx> row(L), Z(L), heff(L), est(L);
  std::vector<double> gsum(L);
  for (std::size_t k = 0; k < params.K; ++k) {
    for (std::size_t m = 0; m < L; ++m) row[m] = z(k, m);
    dft::forward(row, Z);
    std::fill(heff.begin(), heff.end(), cplx{});
    std::fill(gsum.begin(), gsum.end(), 0.0);
    for (std::size_t s : pulse.support()) {
      const double g2 = std::norm(G[s]);
      heff[s % L] += H[(s + k * Q) % M] * g2;
      gsum[s % L] += g2;
    }
    for (std::size_t r = 0; r < L; ++r) {
      const cplx h = heff[r] * (Ld / Md);
      // Noise on Z(r) has variance L^2 sigma^2 / M * sum|G|^2; A(r) has variance L.
      const double reg = Ld * noise_var * gsum[r] / Md;
      const double den = std::norm(h) + reg;
      est[r] = den > 0.0 ? std::conj(h) * Z[r] / den : cplx{};
    }
    dft::backward(est, row);
    for (std::size_t m = 0; m < L; ++m) out(k, m) = row[m] / Ld;
  }
  return out;
}

Rational normalized_rate(const ModulationParams& params) {
  params.validate();
  auto num = static_cast<std::int64_t>(params.L * params.K);
  auto den = static_cast<std::int64_t>(params.M1());
  auto g = std::gcd(num, den);
  return {num / g, den / g};
}

// ---------------------------------------------------------------------------

QamMapper::QamMapper(unsigned order) : order_(order) {
  require(order == 4 || order == 16 || order == 64, "QAM order must be 4, 16 or 64");
  side_ = static_cast<unsigned>(std::lround(std::sqrt(static_cast<double>(order))));
  scale_ = 1.0 / std::sqrt(2.0 * (static_cast<double>(order) - 1.0) / 3.0);
}

cplx QamMapper::map(unsigned index) const {
  require(index < order_, "QAM index out of range");
  const double i = 2.0 * (index % side_) - (side_ - 1.0);
  const double q = 2.0 * (index / side_) - (side_ - 1.0);
  return {i * scale_, q * scale_};
}

cplx QamMapper::draw(std::mt19937_64& rng) const {
  std::uniform_int_distribution<unsigned> pick(0, order_ - 1);
  return map(pick(rng));
}

SymbolGrid random_symbols(const ModulationParams& params, const QamMapper& qam,
                          std::mt19937_64& rng) {
  params.validate();
  SymbolGrid a(params.K, params.L);
  for (std::size_t k : params.active)
    for (std::size_t l = 0; l < params.L; ++l) a(k, l) = qam.draw(rng);
  return a;
}

WaveformSegment modulate(const ModulationParams& params, const PrototypePulse& pulse,
                         std::span<const SymbolGrid> blocks) {
  check_geometry(params, pulse);
  require(!blocks.empty(), "no symbol blocks to modulate");
  std::vector<WaveformSegment> ext;
  ext.reserve(blocks.size());
  for (const auto& a : blocks) ext.push_back(extend_for_shaping(synthesize_block(params, pulse, a), params));
  const auto window = raised_cosine_window(params.M1(), params.alpha);
  auto out = assemble_waveform(ext, window, params.M1());
  out.origin = 0;
  return out;
}

std::vector<SymbolGrid> demodulate(const WaveformSegment& received, const ModulationParams& params,
                                   const PrototypePulse& pulse, std::size_t n_blocks) {
  check_geometry(params, pulse);
  const std::size_t M = params.M(), M1 = params.M1(), off = params.mu + params.alpha;
  require(received.size() >= (n_blocks == 0 ? 0 : (n_blocks - 1) * M1 + off + M),
          "received waveform too short for the requested number of blocks");
  std::vector<SymbolGrid> out;
  out.reserve(n_blocks);
  WaveformSegment body;
  body.ts = received.ts;
  for (std::size_t q = 0; q < n_blocks; ++q) {
    auto first = received.samples.begin() + static_cast<std::ptrdiff_t>(q * M1 + off);
    body.samples.assign(first, first + static_cast<std::ptrdiff_t>(M));
    out.push_back(analyze_block(body, pulse, params));
  }
  return out;
}

}  // namespace plcemc
