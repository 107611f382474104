#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mosim/qam.hpp"

namespace mosim {

struct OfdmConfig {
    int num_subcarriers = 512;  // N, power of two
    double cp_fraction = 0.2;   // CP length = round(cp_fraction * N)
    double bandwidth_hz = 5e6;  // W

    int cp_length() const;
    int symbol_length() const { return num_subcarriers + cp_length(); }
    double sample_period_s() const { return 1.0 / bandwidth_hz; }
    double symbol_duration_s() const { return symbol_length() * sample_period_s(); }
    void validate() const;
};

// unitary IDFT then cyclic prefix (copy of the last CP samples)
std::vector<std::complex<double>> ofdm_modulate(
    const std::vector<std::complex<double>>& freq_symbols, const OfdmConfig& cfg);

// drop CP, unitary DFT
std::vector<std::complex<double>> ofdm_demodulate(
    const std::vector<std::complex<double>>& time_samples, const OfdmConfig& cfg);

// Circular complex AWGN calibrated to Eb/N0. Noise variance per complex
// sample: sigma^2 = E_s * rate_overhead / (log2 M * 10^(ebn0/10)), where
// rate_overhead = (N+CP)/N accounts for the prefix energy. An infinite
// ebn0_db leaves the samples untouched.
void awgn_inject(std::vector<std::complex<double>>& samples, double ebn0_db,
                 const QamConstellation& c, double rate_overhead,
                 std::uint64_t seed);

double awgn_noise_variance(double ebn0_db, const QamConstellation& c,
                           double rate_overhead);

// Per-bin division Y[n]/H[n]. Bins with |H| below the erasure threshold are
// flagged; the caller decides those bits at random.
struct EqualizedSymbols {
    std::vector<std::complex<double>> symbols;
    std::vector<std::uint8_t> erased;
};

EqualizedSymbols equalize_siso(const std::vector<std::complex<double>>& received_bins,
                               const std::vector<std::complex<double>>& h_bins,
                               double erase_threshold = 1e-12);

} // namespace mosim
