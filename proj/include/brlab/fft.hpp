#pragma once

#include <span>
#include <vector>

#include "brlab/grid.hpp"

namespace brlab::fft {

// Unnormalized in-place DFTs on an n-dimensional N^n array (FFTW sign
// conventions: forward uses e^{-2 pi i jm/N}). Thread-safe.
void forward(std::span<cplx> data, int n, int N);
void backward(std::span<cplx> data, int n, int N);

// Raw DFT of the samples (no dx^n or phase factors).
std::vector<cplx> dft(const SampledField& f);

// Fourier multiplier on a precomputed DFT: IDFT(table * F) / N^n.
SampledField apply_table(const GridSpec& spec, std::span<const cplx> F,
                         std::span<const double> table);

// Convenience: multiplier applied to f directly.
SampledField apply_table(const SampledField& f, std::span<const double> table);

}  // namespace brlab::fft
