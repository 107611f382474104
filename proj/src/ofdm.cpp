#include "mosim/ofdm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mosim/fft.hpp"
#include "mosim/rng.hpp"

namespace mosim {

int OfdmConfig::cp_length() const {
    return static_cast<int>(std::lround(cp_fraction * num_subcarriers));
}

void OfdmConfig::validate() const {
    const int n = num_subcarriers;
    if (n < 1 || (n & (n - 1)) != 0)
        throw std::invalid_argument("ofdm: N must be a power of two");
    if (cp_fraction < 0.0 || cp_fraction >= 1.0)
        throw std::invalid_argument("ofdm: cp_fraction must be in [0, 1)");
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("ofdm: bandwidth must be > 0");
}

std::vector<std::complex<double>> ofdm_modulate(
    const std::vector<std::complex<double>>& freq_symbols, const OfdmConfig& cfg) {
    if (static_cast<int>(freq_symbols.size()) != cfg.num_subcarriers)
        throw std::invalid_argument("ofdm_modulate: expected N frequency symbols");
    const auto body = idft(freq_symbols);
    const int cp = cfg.cp_length();
    std::vector<std::complex<double>> out;
    out.reserve(body.size() + cp);
    out.insert(out.end(), body.end() - cp, body.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

std::vector<std::complex<double>> ofdm_demodulate(
    const std::vector<std::complex<double>>& time_samples, const OfdmConfig& cfg) {
    const int cp = cfg.cp_length();
    if (static_cast<int>(time_samples.size()) != cfg.num_subcarriers + cp)
        throw std::invalid_argument("ofdm_demodulate: expected N+CP samples");
    std::vector<std::complex<double>> body(time_samples.begin() + cp, time_samples.end());
    return dft(body);
}

double awgn_noise_variance(double ebn0_db, const QamConstellation& c,
                           double rate_overhead) {
    if (std::isinf(ebn0_db)) return 0.0;
    if (!std::isfinite(ebn0_db))
        throw std::invalid_argument("awgn: ebn0_db must be finite or +inf");
    const double gamma = std::pow(10.0, ebn0_db / 10.0);
    return c.avg_energy * rate_overhead / (c.bits_per_symbol * gamma);
}

void awgn_inject(std::vector<std::complex<double>>& samples, double ebn0_db,
                 const QamConstellation& c, double rate_overhead,
                 std::uint64_t seed) {
    const double var = awgn_noise_variance(ebn0_db, c, rate_overhead);
    if (var == 0.0) return;
    const double sigma = std::sqrt(var / 2.0); // per real dimension
    Rng rng(seed);
    for (auto& s : samples)
        s += std::complex<double>(sigma * rng.normal(), sigma * rng.normal());
}

EqualizedSymbols equalize_siso(const std::vector<std::complex<double>>& received_bins,
                               const std::vector<std::complex<double>>& h_bins,
                               double erase_threshold) {
    if (received_bins.size() != h_bins.size())
        throw std::invalid_argument("equalize_siso: bin count mismatch");
    EqualizedSymbols out;
    out.symbols.resize(received_bins.size());
    out.erased.assign(received_bins.size(), 0);
    for (std::size_t i = 0; i < received_bins.size(); ++i) {
        if (std::abs(h_bins[i]) < erase_threshold) {
            out.symbols[i] = {0.0, 0.0};
            out.erased[i] = 1;
        } else {
            out.symbols[i] = received_bins[i] / h_bins[i];
        }
    }
    return out;
}

} // namespace mosim
