#pragma once

#include <vector>

#include "mosim/jakes.hpp"

namespace mosim {

// Kolmogorov-Smirnov statistic of samples against a Rayleigh CDF whose mean
// square equals mean_square (F(r) = 1 - exp(-r^2 / mean_square)).
double ks_statistic_rayleigh(const std::vector<double>& samples, double mean_square);

// KS statistic of samples against uniform on [lo, hi].
double ks_statistic_uniform(std::vector<double> samples, double lo, double hi);

// RMS error between the empirical autocorrelation of a waveform's real part
// and J0(2 pi f_d tau) over lags tau <= max_lag_s.
double autocorrelation_rms_error(const FadingWaveform& w, double doppler_hz,
                                 double max_lag_s);

struct JakesValidationReport {
    double ks_amplitude = 0.0;
    double ks_phase = 0.0;
    double autocorr_rms_error = 0.0;
    double max_cross_correlation = 0.0;
    double psd_peak_low_hz = 0.0;  // dominant peak on the negative-frequency side
    double psd_peak_high_hz = 0.0; // dominant peak on the positive-frequency side
    double psd_bin_width_hz = 0.0;
};

JakesValidationReport validate_jakes(const std::vector<FadingWaveform>& waveforms,
                                     double doppler_hz);

} // namespace mosim
