#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mixnoise::detail {

// Unnormalized real DFTs backed by cached FFTW plans; safe to call from
// several threads at once.
std::vector<std::complex<double>> rfft(const std::vector<double>& x);
std::vector<double> irfft(const std::vector<std::complex<double>>& half_spectrum, std::size_t n);

}  // namespace mixnoise::detail
