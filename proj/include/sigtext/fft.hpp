#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sigtext::fft {

using Complex = std::complex<double>;

// Unnormalized forward real transform; returns the n/2 + 1 non-negative bins.
std::vector<Complex> forward_real(std::span<const double> x);

// Inverse of forward_real for a length-n signal (normalized by 1/n).
std::vector<double> inverse_real(std::span<const Complex> bins, std::size_t n);

// Full complex transforms; the inverse is normalized by 1/n.
std::vector<Complex> forward(std::span<const Complex> x);
std::vector<Complex> inverse(std::span<const Complex> x);

// |analytic signal| of x (FFT Hilbert transform).
std::vector<double> analytic_envelope(std::span<const double> x);

// Biased autocorrelation r[k] = sum_i x[i] x[i+k], k = 0..n-1.
std::vector<double> autocorrelation(std::span<const double> x);

// Full linear convolution, length a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

} // namespace sigtext::fft
