#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mosim/channel.hpp"
#include "mosim/correlation.hpp"
#include "mosim/fft.hpp"
#include "mosim/jakes.hpp"
#include "mosim/pdp.hpp"
#include "mosim/stats.hpp"

using namespace mosim;

namespace {

JakesConfig reference_jakes() {
    JakesConfig cfg;
    cfg.num_oscillators = 1024;
    cfg.max_doppler_hz = 83.0;
    cfg.sample_period_s = 383.5e-6;
    cfg.num_waveforms = 4;
    return cfg;
}

} // namespace

TEST_CASE("walsh_hadamard_matrix base cases and orthogonality") {
    const auto h1 = walsh_hadamard_matrix(1);
    CHECK(h1.rows() == 1);
    CHECK(h1(0, 0) == doctest::Approx(1.0));

    const auto h2 = walsh_hadamard_matrix(2);
    CHECK(h2(0, 0) == doctest::Approx(1.0));
    CHECK(h2(0, 1) == doctest::Approx(1.0));
    CHECK(h2(1, 0) == doctest::Approx(1.0));
    CHECK(h2(1, 1) == doctest::Approx(-1.0));

    const auto h4 = walsh_hadamard_matrix(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(h4(i, j)) == doctest::Approx(1.0));
            const double dot = h4.row(i).dot(h4.row(j));
            CHECK(dot == doctest::Approx(i == j ? 4.0 : 0.0));
        }

    CHECK_THROWS(walsh_hadamard_matrix(3));
    CHECK_THROWS(walsh_hadamard_matrix(0));
}

TEST_CASE("jakes waveforms: unit power, Rayleigh amplitude, uniform phase") {
    const auto waves = generate_jakes_waveforms(reference_jakes(), 16384, 5);
    REQUIRE(waves.size() == 4);
    for (const auto& w : waves) {
        REQUIRE(w.samples.size() == 16384);
        double power = 0.0;
        for (const auto& c : w.samples) power += std::norm(c);
        power /= 16384.0;
        CHECK(power == doctest::Approx(1.0).epsilon(0.15));
    }
    const auto rep = validate_jakes(waves, 83.0);
    CHECK(rep.ks_amplitude < 0.02);
    CHECK(rep.ks_phase < 0.02);
}

TEST_CASE("jakes autocorrelation tracks the zeroth-order Bessel function") {
    const auto waves = generate_jakes_waveforms(reference_jakes(), 16384, 5);
    const auto ac = autocorrelation_empirical(waves[0], 16);
    CHECK(ac[0] == doctest::Approx(1.0));
    CHECK(autocorrelation_rms_error(waves[0], 83.0, 1.0 / 83.0) < 0.05);
}

TEST_CASE("jakes cross-correlation between distinct waveforms stays small") {
    const auto waves = generate_jakes_waveforms(reference_jakes(), 16384, 5);
    for (std::size_t i = 0; i < waves.size(); ++i)
        for (std::size_t j = i + 1; j < waves.size(); ++j)
            CHECK(cross_correlation(waves[i], waves[j]) < 0.05);
}

TEST_CASE("jakes PSD peaks at +-f_D within one bin") {
    const auto waves = generate_jakes_waveforms(reference_jakes(), 16384, 5);
    const auto rep = validate_jakes(waves, 83.0);
    CHECK(std::abs(rep.psd_peak_high_hz - 83.0) <= rep.psd_bin_width_hz);
    CHECK(std::abs(rep.psd_peak_low_hz + 83.0) <= rep.psd_bin_width_hz);
}

TEST_CASE("zero Doppler freezes the waveform") {
    JakesConfig cfg = reference_jakes();
    cfg.max_doppler_hz = 0.0;
    cfg.num_oscillators = 64;
    const auto waves = generate_jakes_waveforms(cfg, 64, 9);
    for (const auto& w : waves)
        for (const auto& c : w.samples)
            CHECK(std::abs(c - w.samples[0]) < 1e-12);
    const auto ac = autocorrelation_empirical(waves[0], 16);
    for (double v : ac) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("waveform count beyond available rows is rejected") {
    JakesConfig cfg = reference_jakes();
    cfg.num_oscillators = 2;
    cfg.num_waveforms = 3; // needs an order-4 matrix, larger than N_d
    CHECK_THROWS(generate_jakes_waveforms(cfg, 16, 1));
    cfg.num_waveforms = 0;
    CHECK_THROWS(generate_jakes_waveforms(cfg, 16, 1));
}

TEST_CASE("exponential PDP has 87 taps for 5 MHz / 2.5 us / -30 dB") {
    const auto pdp = pdp_exponential(2.5e-6, 5e6, -30.0);
    CHECK(pdp.tap_powers.size() == 87);
    CHECK(pdp.memory() == 86);
    double sum = 0.0;
    for (double p : pdp.tap_powers) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < pdp.tap_delays_s.size(); ++i)
        CHECK(pdp.tap_delays_s[i] == doctest::Approx(i / 5e6));
    // decreasing exponential: each tap is e^{-1/(W tau)} times the previous
    const double ratio = std::exp(-1.0 / (5e6 * 2.5e-6));
    for (std::size_t i = 1; i < pdp.tap_powers.size(); ++i)
        CHECK(pdp.tap_powers[i] / pdp.tap_powers[i - 1] == doctest::Approx(ratio));
    CHECK(pdp.empirical_rms_delay_spread() ==
          doctest::Approx(2.5e-6).epsilon(0.05));
}

TEST_CASE("tiny delay spread collapses the PDP to a single tap") {
    const auto pdp = pdp_exponential(1e-12, 5e6, -30.0);
    CHECK(pdp.single_tap);
    CHECK(pdp.tap_powers.size() == 1);
    CHECK(pdp.tap_powers[0] == doctest::Approx(1.0));
}

TEST_CASE("coherence parameters") {
    const auto c = coherence_params(83.0, 2.5e-6);
    REQUIRE(c.coherence_time_s.has_value());
    REQUIRE(c.coherence_bandwidth_hz.has_value());
    CHECK(*c.coherence_time_s == doctest::Approx(1.0 / 83.0));
    CHECK(*c.coherence_bandwidth_hz ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi * 2.5e-6)));

    const auto only_freq = coherence_params(0.0, 2.5e-6);
    CHECK(!only_freq.coherence_time_s.has_value());
    CHECK(only_freq.coherence_bandwidth_hz.has_value());
    CHECK_THROWS(coherence_params(0.0, 0.0));
}

TEST_CASE("flatness rule: 393 subcarriers at 5 MHz / 2.5 us / 0.2") {
    CHECK(min_subcarriers_flat(5e6, 2.5e-6, 0.2) == 393);
    CHECK(min_subcarriers_flat(5e6, 0.0, 0.2) == 1);
}

TEST_CASE("ULA correlation matrix") {
    const auto r = ula_correlation(0.5, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(r(i, j) == doctest::Approx(std::pow(0.5, (i - j) * (i - j))));
    CHECK(ula_correlation(0.0, 3).isIdentity(1e-15));
    CHECK(ula_correlation(1.0, 3).isOnes(1e-15));
    CHECK_THROWS(ula_correlation(-0.1, 2));
    CHECK_THROWS(ula_correlation(1.1, 2));
}

TEST_CASE("URA correlation is the Kronecker product of axis correlations") {
    CorrelationSpec spec;
    spec.array_kind = ArrayKind::Ura;
    spec.rho = 0.6;
    spec.n = 4;
    spec.nx = 2;
    spec.ny = 2;
    const auto r = ura_correlation(spec);
    const auto rx = ula_correlation(0.6, 2);
    for (int ix = 0; ix < 2; ++ix)
        for (int iy = 0; iy < 2; ++iy)
            for (int jx = 0; jx < 2; ++jx)
                for (int jy = 0; jy < 2; ++jy)
                    CHECK(r(2 * ix + iy, 2 * jx + jy) ==
                          doctest::Approx(rx(ix, jx) * rx(iy, jy)));
}

TEST_CASE("PSD square root reproduces the matrix") {
    const auto r = ula_correlation(0.5, 4);
    const auto s = matrix_sqrt_psd(r);
    CHECK(((s * s) - r).norm() < 1e-10);
    Eigen::MatrixXd not_psd = Eigen::MatrixXd::Identity(2, 2);
    not_psd(1, 1) = -1.0;
    CHECK_THROWS(matrix_sqrt_psd(not_psd));
}

TEST_CASE("frequency response matches a direct DFT of the taps") {
    MimoTaps taps;
    taps.taps = {Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.8, 0.1)),
                 Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.0, -0.3)),
                 Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.2, 0.0))};
    const int n = 8;
    const auto real = channel_frequency_response(taps, n);
    REQUIRE(real.per_subcarrier.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::complex<double> expected{0.0, 0.0};
        for (int l = 0; l < 3; ++l)
            expected += taps.taps[l](0, 0) *
                        std::polar(1.0, -2.0 * std::numbers::pi * k * l / n);
        CHECK(std::abs(real.per_subcarrier[k](0, 0) - expected) < 1e-12);
    }
}

TEST_CASE("block-static taps: per-tap power and decorrelation at rho = 0") {
    const auto pdp = pdp_exponential(51e-9, 20e6, -30.0);
    double p0 = 0.0, cross = 0.0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        const auto taps = draw_block_static_taps(pdp, 2, 2, nullptr, nullptr, 100 + t);
        p0 += std::norm(taps.taps[0](0, 0));
        cross += (taps.taps[0](0, 0) * std::conj(taps.taps[0](1, 1))).real();
    }
    CHECK(p0 / trials == doctest::Approx(pdp.tap_powers[0]).epsilon(0.1));
    CHECK(std::abs(cross / trials) < 0.05);
}

TEST_CASE("spatial correlation shapes the antenna covariance") {
    const double rho = 0.9;
    const auto sr = matrix_sqrt_psd(ula_correlation(rho, 2));
    PowerDelayProfile flat = pdp_exponential(1e-12, 20e6);
    double corr = 0.0, power = 0.0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        const auto taps = draw_block_static_taps(flat, 2, 2, &sr, &sr, 500 + t);
        corr += (taps.taps[0](0, 0) * std::conj(taps.taps[0](1, 0))).real();
        power += std::norm(taps.taps[0](0, 0));
    }
    // receive-side neighbors should correlate at roughly rho
    CHECK(corr / power == doctest::Approx(rho).epsilon(0.1));
}
