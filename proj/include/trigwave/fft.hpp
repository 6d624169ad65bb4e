#pragma once

#include <complex>
#include <span>

namespace trigwave::fft {

enum class Direction { forward, backward };

/// Unnormalized in-place DFT of length data.size():
///   forward:  X_m = sum_n x_n exp(-2 pi i m n / N)
///   backward: X_m = sum_n x_n exp(+2 pi i m n / N)
/// Plans are created once per (N, direction) and shared between threads;
/// execution is reentrant.
void transform(std::span<std::complex<double>> data, Direction dir);

}  // namespace trigwave::fft
