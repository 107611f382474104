#include "mosim/jakes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mosim/fft.hpp"
#include "mosim/rng.hpp"

namespace mosim {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

void JakesConfig::validate() const {
    if (num_oscillators < 1) throw std::invalid_argument("jakes: N_d must be >= 1");
    if (max_doppler_hz < 0.0) throw std::invalid_argument("jakes: f_D must be >= 0");
    if (sample_period_s <= 0.0) throw std::invalid_argument("jakes: T_s must be > 0");
    if (num_waveforms < 1) throw std::invalid_argument("jakes: k must be >= 1");
}

Eigen::MatrixXd walsh_hadamard_matrix(int order) {
    if (!is_pow2(order))
        throw std::invalid_argument("walsh_hadamard_matrix: order must be a power of 2");
    Eigen::MatrixXd h(1, 1);
    h(0, 0) = 1.0;
    while (h.rows() < order) {
        Eigen::Index n = h.rows();
        Eigen::MatrixXd next(2 * n, 2 * n);
        next.topLeftCorner(n, n) = h;
        next.topRightCorner(n, n) = h;
        next.bottomLeftCorner(n, n) = h;
        next.bottomRightCorner(n, n) = -h;
        h = std::move(next);
    }
    return h;
}

std::vector<FadingWaveform> generate_jakes_waveforms(const JakesConfig& cfg,
                                                     std::size_t num_samples,
                                                     std::uint64_t seed) {
    cfg.validate();
    if (num_samples < 1) throw std::invalid_argument("jakes: num_samples must be >= 1");

    const int nd = cfg.num_oscillators;
    // WH rows are tiled across the oscillator index, so the matrix order must
    // fit inside N_d for the row orthogonality to survive the tiling.
    const int wh_order = next_pow2(cfg.num_waveforms);
    if (wh_order > nd)
        throw std::invalid_argument("jakes: k exceeds available WH rows");
    const Eigen::MatrixXd wh = walsh_hadamard_matrix(wh_order);

    const double n0 = 4.0 * nd;
    const double omega_m = 2.0 * std::numbers::pi * cfg.max_doppler_hz;
    const double norm = std::sqrt(2.0 / nd);

    // Oscillator grid: phi_n = pi n / N_d, alpha_n = 2pi (n - 0.5) / N_0,
    // omega_n = omega_m cos(alpha_n); theta_n ~ U[0, 2pi], one draw per run.
    Rng rng(seed);
    std::vector<double> omega(nd), theta(nd);
    std::vector<std::complex<double>> rot(nd);
    for (int n = 0; n < nd; ++n) {
        const double phi = std::numbers::pi * (n + 1) / nd;
        const double alpha = 2.0 * std::numbers::pi * ((n + 1) - 0.5) / n0;
        omega[n] = omega_m * std::cos(alpha);
        theta[n] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        rot[n] = std::polar(1.0, phi);
    }

    std::vector<FadingWaveform> out(cfg.num_waveforms);
    for (int k = 0; k < cfg.num_waveforms; ++k) {
        out[k].waveform_index = k;
        out[k].sample_period_s = cfg.sample_period_s;
        out[k].samples.resize(num_samples);
    }
    for (std::size_t s = 0; s < num_samples; ++s) {
        const double t = static_cast<double>(s) * cfg.sample_period_s;
        // accumulate per waveform; shared cosines, signs from the WH row
        for (int k = 0; k < cfg.num_waveforms; ++k) out[k].samples[s] = {0.0, 0.0};
        for (int n = 0; n < nd; ++n) {
            const std::complex<double> term = rot[n] * std::cos(omega[n] * t + theta[n]);
            for (int k = 0; k < cfg.num_waveforms; ++k)
                out[k].samples[s] += wh(k, n % wh.cols()) * term;
        }
        for (int k = 0; k < cfg.num_waveforms; ++k) out[k].samples[s] *= norm;
    }
    return out;
}

std::vector<double> autocorrelation_empirical(const FadingWaveform& w,
                                              std::size_t max_lag) {
    const std::size_t n = w.samples.size();
    if (max_lag >= n)
        throw std::invalid_argument("autocorrelation: max_lag must be < num_samples");

    // Complex-envelope autocorrelation (real part after normalization).
    // The quadrature components individually carry a higher-order Bessel
    // ripple from the deterministic phase grid; the envelope statistic is
    // the one that converges to J0.
    std::complex<double> mean{0.0, 0.0};
    for (const auto& c : w.samples) mean += c;
    mean /= static_cast<double>(n);
    std::vector<std::complex<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = w.samples[i] - mean;

    std::vector<double> ac(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i + lag < n; ++i) acc += z[i] * std::conj(z[i + lag]);
        ac[lag] = acc.real() / static_cast<double>(n - lag);
    }
    const double r0 = ac[0];
    if (r0 <= 0.0) {
        // constant signal (f_D = 0): autocorrelation is identically 1
        std::fill(ac.begin(), ac.end(), 1.0);
        return ac;
    }
    for (auto& v : ac) v /= r0;
    return ac;
}

Periodogram psd_empirical(const FadingWaveform& w) {
    const std::size_t n = w.samples.size();
    if (n < 256) throw std::invalid_argument("psd: need at least 256 samples");
    // Welch averaging over non-overlapping segments: single-shot periodogram
    // bins are exponentially distributed, which makes the band-edge peak
    // location unreliable; averaging pins it down at a modest resolution cost.
    const std::size_t seg = std::min<std::size_t>(2048, n);
    std::vector<double> power(seg, 0.0);
    std::vector<std::complex<double>> block(seg);
    std::size_t segments = 0;
    for (std::size_t off = 0; off + seg <= n; off += seg, ++segments) {
        std::copy(w.samples.begin() + off, w.samples.begin() + off + seg, block.begin());
        const auto spec = dft(block);
        for (std::size_t i = 0; i < seg; ++i) power[i] += std::norm(spec[i]);
    }
    Periodogram p;
    p.freq_hz.resize(seg);
    p.power.resize(seg);
    const double fs = 1.0 / w.sample_period_s;
    // fftshift so the axis runs [-fs/2, fs/2)
    for (std::size_t i = 0; i < seg; ++i) {
        const std::size_t src = (i + seg / 2) % seg;
        const double bin = static_cast<double>(i) - static_cast<double>(seg / 2);
        p.freq_hz[i] = bin * fs / static_cast<double>(seg);
        p.power[i] = power[src] / static_cast<double>(segments);
    }
    return p;
}

double cross_correlation(const FadingWaveform& a, const FadingWaveform& b) {
    const std::size_t n = std::min(a.samples.size(), b.samples.size());
    std::complex<double> ma{0, 0}, mb{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        ma += a.samples[i];
        mb += b.samples[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    std::complex<double> cov{0, 0};
    double va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto da = a.samples[i] - ma;
        const auto db = b.samples[i] - mb;
        cov += da * std::conj(db);
        va += std::norm(da);
        vb += std::norm(db);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return std::abs(cov) / std::sqrt(va * vb);
}

} // namespace mosim
