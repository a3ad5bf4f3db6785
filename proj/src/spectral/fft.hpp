#pragma once

#include <complex>
#include <span>

namespace egwp::spectral::detail {

// Complex-to-complex transforms on an n x n array, FFT ordering.
// synthesize: out_j = Re sum_k c_k exp(+i k.x_j)
// analyze:    c_k = n^-2 sum_j g_j exp(-i k.x_j)
// Both are thread-safe; plans are created once per n under a lock.
void synthesize(std::span<const std::complex<double>> coeffs, std::span<double> samples, int n);
void analyze(std::span<const double> samples, std::span<std::complex<double>> coeffs, int n);

}  // namespace egwp::spectral::detail
