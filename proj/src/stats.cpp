#include "mosim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mosim {

namespace {

double ks_against_cdf(std::vector<double> samples, double (*cdf)(double, double),
                      double param) {
    if (samples.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i], param);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

} // namespace

double ks_statistic_rayleigh(const std::vector<double>& samples, double mean_square) {
    if (mean_square <= 0.0) throw std::invalid_argument("ks: mean_square must be > 0");
    return ks_against_cdf(
        samples, [](double r, double ms) { return 1.0 - std::exp(-r * r / ms); },
        mean_square);
}

double ks_statistic_uniform(std::vector<double> samples, double lo, double hi) {
    if (hi <= lo) throw std::invalid_argument("ks: empty support");
    for (double& s : samples) s = (s - lo) / (hi - lo);
    return ks_against_cdf(
        samples, [](double x, double) { return std::clamp(x, 0.0, 1.0); }, 0.0);
}

double autocorrelation_rms_error(const FadingWaveform& w, double doppler_hz,
                                 double max_lag_s) {
    if (w.sample_period_s <= 0.0) throw std::invalid_argument("autocorr: bad sample period");
    const std::size_t max_lag = std::min<std::size_t>(
        w.samples.size() - 1,
        static_cast<std::size_t>(std::floor(max_lag_s / w.sample_period_s)));
    const auto ac = autocorrelation_empirical(w, max_lag);
    const double wm = 2.0 * std::numbers::pi * doppler_hz;
    double sum = 0.0;
    for (std::size_t l = 0; l < ac.size(); ++l) {
        const double ref = std::cyl_bessel_j(0.0, wm * static_cast<double>(l) * w.sample_period_s);
        const double e = ac[l] - ref;
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(ac.size()));
}

JakesValidationReport validate_jakes(const std::vector<FadingWaveform>& waveforms,
                                     double doppler_hz) {
    if (waveforms.empty()) throw std::invalid_argument("validate_jakes: no waveforms");
    JakesValidationReport rep;

    std::vector<double> amps, phases;
    double ms = 0.0;
    for (const auto& w : waveforms)
        for (const auto& c : w.samples) {
            const double a = std::abs(c);
            amps.push_back(a);
            phases.push_back(std::arg(c));
            ms += a * a;
        }
    ms /= static_cast<double>(amps.size());
    rep.ks_amplitude = ks_statistic_rayleigh(amps, ms);
    rep.ks_phase =
        ks_statistic_uniform(phases, -std::numbers::pi, std::numbers::pi);

    const double max_lag_s = doppler_hz > 0.0 ? 1.0 / doppler_hz : 0.0;
    double sum_err = 0.0;
    for (const auto& w : waveforms) {
        const double e = autocorrelation_rms_error(w, doppler_hz, max_lag_s);
        sum_err += e * e;
    }
    rep.autocorr_rms_error = std::sqrt(sum_err / static_cast<double>(waveforms.size()));

    for (std::size_t i = 0; i < waveforms.size(); ++i)
        for (std::size_t j = i + 1; j < waveforms.size(); ++j)
            rep.max_cross_correlation = std::max(
                rep.max_cross_correlation, cross_correlation(waveforms[i], waveforms[j]));

    // Doppler spectrum peaks: strongest periodogram bin on each side of DC,
    // averaged over waveforms
    const auto psd0 = psd_empirical(waveforms[0]);
    std::vector<double> power(psd0.power.size(), 0.0);
    for (const auto& w : waveforms) {
        const auto p = psd_empirical(w);
        for (std::size_t i = 0; i < power.size(); ++i) power[i] += p.power[i];
    }
    double best_neg = 0.0, best_pos = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i) {
        if (psd0.freq_hz[i] < 0.0 && power[i] > best_neg) {
            best_neg = power[i];
            rep.psd_peak_low_hz = psd0.freq_hz[i];
        }
        if (psd0.freq_hz[i] > 0.0 && power[i] > best_pos) {
            best_pos = power[i];
            rep.psd_peak_high_hz = psd0.freq_hz[i];
        }
    }
    rep.psd_bin_width_hz = psd0.freq_hz.size() > 1 ? psd0.freq_hz[1] - psd0.freq_hz[0] : 0.0;
    return rep;
}

} // namespace mosim
