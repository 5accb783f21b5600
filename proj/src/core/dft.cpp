// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#include "plcemc/dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace plcemc::dft {
namespace {

class PlanCache {
 public:
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW_ESTIMATE never touches the buffers, so scratch arrays are enough.
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
  require(in.size() == out.size(), "dft: input/output size mismatch");
  if (in.empty()) return;
  fftw_plan p = cache().get(in.size(), sign);
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return;
  }
  // Out-of-place complex transforms leave the input untouched.
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }
void backward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_BACKWARD); }

std::vector<cplx> forward(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  forward(in, out);
  return out;
}

std::vector<cplx> inverse(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  backward(in, out);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::size_t good_size(std::size_t min_size) {
  std::size_t n = std::max<std::size_t>(min_size, 1);
  for (;; ++n) {
    std::size_t m = n;
    for (std::size_t f : {2u, 3u, 5u})
      while (m % f == 0) m /= f;
    if (m == 1) return n;
  }
}

}  // namespace plcemc::dft
