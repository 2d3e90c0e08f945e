#pragma once

#include <complex>
#include <vector>

namespace chix {

// In-place iterative radix-2 complex FFT. Deterministic (no planner state),
// which keeps sampled paths bit-identical across runs and machines with the
// same FP environment. Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace chix
