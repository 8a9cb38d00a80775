// spectrum.hpp - whole-period real transforms and tone-grid synthesis
//
// All spectral operations in this project run on windows spanning whole
// waveform periods, so every tone sits exactly on an integer bin and no
// window function is needed. The fast paths are FFT-backed; the reference
// namespace keeps direct O(n^2) evaluations used by tests and benchmarks.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace mtpsk {

// Forward real-to-complex transform, unnormalized:
// X[m] = sum_k x[k] e^{-2 pi i m k / n}, m = 0..n/2.
std::vector<std::complex<double>> real_fft(std::span<const double> x);

// Inverse of real_fft including the 1/n factor; spec.size() must be n/2+1.
std::vector<double> real_ifft(std::span<const std::complex<double>> spec, std::size_t n);

// Complex amplitude c_m of the tone at integer bin m over a whole-period
// window: x[k] = dc + sum_m |c_m| cos(2 pi m k / n + arg c_m). For m = 0 the
// real DC value is returned.
std::complex<double> bin_amplitude(std::span<const std::complex<double>> spec, std::size_t n,
                                   std::size_t m);

// Samples of sum_i amp[i] * cos(2 pi bins[i] k / n + phase_deg[i] * pi/180),
// k = 0..n-1, via inverse FFT. Bins must satisfy 0 < bin < n/2.
std::vector<double> synthesize_bins(std::size_t n, std::span<const std::int64_t> bins,
                                    std::span<const double> amp,
                                    std::span<const double> phase_deg);

namespace reference {

// Direct trigonometric evaluation of the same tone sum (serial reference).
std::vector<double> synthesize_bins_direct(std::size_t n, std::span<const std::int64_t> bins,
                                           std::span<const double> amp,
                                           std::span<const double> phase_deg);

// Direct projection of one bin (serial reference for bin_amplitude).
std::complex<double> bin_amplitude_direct(std::span<const double> x, std::size_t m);

}  // namespace reference

}  // namespace mtpsk
