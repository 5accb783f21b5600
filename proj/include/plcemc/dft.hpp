// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plcemc Authors

#pragma once

#include <span>
#include <vector>

#include "plcemc/types.hpp"

// Thin wrapper over FFTW. Plans are cached per (size, direction); execution is
// thread-safe, plan creation is serialized internally.
namespace plcemc::dft {

/// X(p) = sum_n x(n) exp(-i 2 pi p n / N)
void forward(std::span<const cplx> in, std::span<cplx> out);
/// x(n) = sum_p X(p) exp(+i 2 pi p n / N)   (no 1/N factor)
void backward(std::span<const cplx> in, std::span<cplx> out);

std::vector<cplx> forward(std::span<const cplx> in);
/// Inverse DFT including the 1/N factor.
std::vector<cplx> inverse(std::span<const cplx> in);

/// Smallest n >= min_size whose only prime factors are 2, 3, 5.
std::size_t good_size(std::size_t min_size);

}  // namespace plcemc::dft
