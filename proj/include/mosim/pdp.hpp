#pragma once

#include <optional>
#include <vector>

namespace mosim {

// Exponential power-delay profile: taps at spacing 1/W, power ~ exp(-t/tau),
// truncated at a relative power floor and normalized to unit total power.
struct PowerDelayProfile {
    std::vector<double> tap_delays_s;  // strictly increasing from 0
    std::vector<double> tap_powers;    // linear, sums to 1
    double rms_delay_spread_s = 0.0;   // tau_rms the profile was built from
    bool single_tap = false;           // flat profile (truncation left one tap)

    int memory() const { return static_cast<int>(tap_powers.size()) - 1; } // mu
    double empirical_rms_delay_spread() const;
};

PowerDelayProfile pdp_exponential(double tau_rms_s, double sample_rate_hz,
                                  double power_floor_db = -30.0);

struct CoherenceParams {
    std::optional<double> coherence_time_s;      // 1/f_D, defined for f_D > 0
    std::optional<double> coherence_bandwidth_hz; // 1/(2 pi tau_rms)
};

CoherenceParams coherence_params(double doppler_hz, double tau_rms_s);

// Minimum subcarrier count so each subchannel bandwidth is at most
// flatness_factor times the coherence bandwidth: ceil(W 2 pi tau / factor).
int min_subcarriers_flat(double bandwidth_hz, double tau_rms_s,
                         double flatness_factor = 0.2);

} // namespace mosim
