#pragma once

#include <complex>
#include <span>

namespace fourq::detail {

// In-place unnormalized forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
// Plans are cached per length; safe to call from several threads.
void fft_forward(std::span<std::complex<double>> data);

}  // namespace fourq::detail
