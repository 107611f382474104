#include "mosim/pdp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mosim {

double PowerDelayProfile::empirical_rms_delay_spread() const {
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < tap_powers.size(); ++i) {
        mean += tap_powers[i] * tap_delays_s[i];
        second += tap_powers[i] * tap_delays_s[i] * tap_delays_s[i];
    }
    return std::sqrt(std::max(0.0, second - mean * mean));
}

PowerDelayProfile pdp_exponential(double tau_rms_s, double sample_rate_hz,
                                  double power_floor_db) {
    if (tau_rms_s <= 0.0) throw std::invalid_argument("pdp: tau_rms must be > 0");
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("pdp: W must be > 0");

    const double dt = 1.0 / sample_rate_hz;
    const double floor_lin = std::pow(10.0, power_floor_db / 10.0);

    PowerDelayProfile pdp;
    pdp.rms_delay_spread_s = tau_rms_s;
    double total = 0.0;
    for (int i = 0;; ++i) {
        const double t = i * dt;
        const double p = std::exp(-t / tau_rms_s);
        if (i > 0 && p < floor_lin) break;
        pdp.tap_delays_s.push_back(t);
        pdp.tap_powers.push_back(p);
        total += p;
    }
    for (auto& p : pdp.tap_powers) p /= total;
    pdp.single_tap = pdp.tap_powers.size() == 1;
    return pdp;
}

CoherenceParams coherence_params(double doppler_hz, double tau_rms_s) {
    if (doppler_hz <= 0.0 && tau_rms_s <= 0.0)
        throw std::invalid_argument("coherence_params: need f_D > 0 or tau_rms > 0");
    CoherenceParams c;
    if (doppler_hz > 0.0) c.coherence_time_s = 1.0 / doppler_hz;
    if (tau_rms_s > 0.0)
        c.coherence_bandwidth_hz = 1.0 / (2.0 * std::numbers::pi * tau_rms_s);
    return c;
}

int min_subcarriers_flat(double bandwidth_hz, double tau_rms_s,
                         double flatness_factor) {
    if (bandwidth_hz <= 0.0 || flatness_factor <= 0.0)
        throw std::invalid_argument("min_subcarriers_flat: inputs must be positive");
    if (tau_rms_s <= 0.0) return 1; // flat channel
    const double n = bandwidth_hz * 2.0 * std::numbers::pi * tau_rms_s / flatness_factor;
    return std::max(1, static_cast<int>(std::ceil(n)));
}

} // namespace mosim
