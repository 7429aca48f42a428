#pragma once

#include <complex>
#include <vector>

namespace superconv {

// In-place radix-2 complex FFT; size must be a power of two.
// forward: X_m = sum_j x_j exp(-2 pi i j m / n)  (unscaled)
// inverse: x_j = sum_m X_m exp(+2 pi i j m / n)  (unscaled)
void fft(std::vector<std::complex<double>>& data, bool inverse);

// Smallest power of two >= n.
int next_pow2(int n);

} // namespace superconv
