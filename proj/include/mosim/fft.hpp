#pragma once

#include <complex>
#include <vector>

namespace mosim {

// Unitary DFT/IDFT (1/sqrt(N) both ways) backed by FFTW. Thread-safe; plans
// are cached per size behind a mutex, execution uses per-call buffers.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x);

// Non-normalized forward DFT, as used for channel frequency responses
// (H[n] = sum_l h_l e^{-j2pi nl/N}). Input may be shorter than n; it is
// zero-padded.
std::vector<std::complex<double>> dft_raw(const std::vector<std::complex<double>>& x,
                                          std::size_t n);

} // namespace mosim
