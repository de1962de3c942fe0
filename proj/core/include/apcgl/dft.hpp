#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace apcgl {

// Minimal radix-2 DFT, enough for the power-of-two grids used by the
// reference solver.  Desk-scale sizes (N <= a few thousand) make a tuned
// FFT library unnecessary.

// In-place iterative Cooley-Tukey; size must be a power of two.
// sign = -1: sum with exp(-2 pi i k n / N); sign = +1: exp(+2 pi i k n / N).
// No normalization is applied.
void fft_radix2(std::vector<std::complex<double>>& data, int sign);

// samples -> spectrum, c_k = (1/N) sum_m u_m exp(-2 pi i k m / N).
std::vector<std::complex<double>> dft_forward(std::span<const std::complex<double>> samples);

// spectrum -> samples, u_m = sum_k c_k exp(+2 pi i k m / N).
std::vector<std::complex<double>> dft_inverse(std::span<const std::complex<double>> coeffs);

} // namespace apcgl
