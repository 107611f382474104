#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mosim {

// Sum-of-cosines Rayleigh fading generator (modified Jakes): N_d oscillators
// with fixed angle grid and random phases, Walsh-Hadamard row weighting to
// decorrelate the k generated waveforms.
struct JakesConfig {
    int num_oscillators = 1024;   // N_d
    double max_doppler_hz = 83.0; // f_D
    double sample_period_s = 383.5e-6;
    int num_waveforms = 4;        // k, must fit in a WH matrix of size >= k

    void validate() const; // throws std::invalid_argument
};

struct FadingWaveform {
    std::vector<std::complex<double>> samples;
    int waveform_index = 0;
    double sample_period_s = 0.0;
};

// Sylvester-construction Walsh-Hadamard matrix; order must be a power of two.
Eigen::MatrixXd walsh_hadamard_matrix(int order);

// Generates cfg.num_waveforms waveforms of num_samples each. Oscillator
// phases are drawn once per call from the seeded stream and shared across
// waveforms; the WH rows make distinct waveforms uncorrelated.
std::vector<FadingWaveform> generate_jakes_waveforms(const JakesConfig& cfg,
                                                     std::size_t num_samples,
                                                     std::uint64_t seed);

// Normalized (lag 0 == 1) real part of the empirical complex-envelope
// autocorrelation; converges to J0(2 pi f_d tau) for the Jakes spectrum.
std::vector<double> autocorrelation_empirical(const FadingWaveform& w,
                                              std::size_t max_lag);

struct Periodogram {
    std::vector<double> freq_hz;  // bin centers, [-Fs/2, Fs/2)
    std::vector<double> power;
};

// Periodogram of the complex waveform, frequency-shifted so DC is centered.
Periodogram psd_empirical(const FadingWaveform& w);

// |corr| between two waveforms (complex Pearson, mean-removed).
double cross_correlation(const FadingWaveform& a, const FadingWaveform& b);

} // namespace mosim
