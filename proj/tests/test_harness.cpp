#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mosim/analytic.hpp"
#include "mosim/config.hpp"
#include "mosim/flops.hpp"
#include "mosim/harness.hpp"
#include "mosim/rng.hpp"

using namespace mosim;

namespace {

ScenarioConfig small_scenario() {
    ScenarioConfig s;
    s.ofdm.num_subcarriers = 64;
    s.ofdm.cp_fraction = 0.25;
    s.ofdm.bandwidth_hz = 20e6;
    s.mod_order = 4;
    s.n_t = 2;
    s.n_r = 2;
    s.detector = DetectorKind::Zf;
    s.channel_mode = ChannelMode::BlockStatic;
    s.tau_rms_s = 51e-9;
    s.ebn0_db = {8.0};
    s.stop.min_bit_errors = 100;
    s.stop.max_trials = 200;
    s.seed = 17;
    s.workers = 1;
    return s;
}

} // namespace

TEST_CASE("scenario validation rejects broken configs") {
    auto s = small_scenario();
    s.ebn0_db.clear();
    CHECK_THROWS(s.validate());
    s = small_scenario();
    s.n_t = 0;
    CHECK_THROWS(s.validate());
    s = small_scenario();
    s.rho = 1.5;
    CHECK_THROWS(s.validate());
    s = small_scenario();
    s.stop.min_bit_errors = 0;
    CHECK_THROWS(s.validate());
    CHECK_NOTHROW(small_scenario().validate());
}

TEST_CASE("fingerprint discriminates configs and is stable") {
    const auto a = small_scenario();
    auto b = a;
    CHECK(a.fingerprint() == b.fingerprint());
    b.seed += 1;
    CHECK(a.fingerprint() != b.fingerprint());
    b = a;
    b.rho = 0.5;
    CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("URA geometry auto-factorization") {
    auto s = small_scenario();
    s.array = ArrayKind::Ura;
    CHECK(s.correlation_spec(4).nx == 2);
    CHECK(s.correlation_spec(4).ny == 2);
    CHECK(s.correlation_spec(8).nx == 2);
    CHECK(s.correlation_spec(8).ny == 4);
    s.ura_nx = 1;
    s.ura_ny = 4;
    CHECK(s.correlation_spec(4).nx == 1);
}

TEST_CASE("noiseless full-rank ZF yields exactly zero errors") {
    auto s = small_scenario();
    s.ebn0_db = {std::numeric_limits<double>::infinity()};
    s.stop.max_trials = 10;
    const auto curve = run_monte_carlo(s);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].errors == 0);
    CHECK(curve.points[0].ber == 0.0);
    CHECK(curve.points[0].ci_high > 0.0); // zero-error bound, not a hard zero
}

TEST_CASE("bit accounting is exact and CIs bracket the estimate") {
    const auto curve = run_monte_carlo(small_scenario());
    for (const auto& p : curve.points) {
        CHECK(p.ber * static_cast<double>(p.bits) ==
              doctest::Approx(static_cast<double>(p.errors)).epsilon(1e-12));
        CHECK(p.ci_low <= p.ber);
        CHECK(p.ber <= p.ci_high);
        CHECK(p.errors <= p.bits);
    }
}

TEST_CASE("identical config reproduces a bit-identical curve") {
    const auto a = run_monte_carlo(small_scenario());
    const auto b = run_monte_carlo(small_scenario());
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].ber == b.points[i].ber);
        CHECK(a.points[i].errors == b.points[i].errors);
        CHECK(a.points[i].trials == b.points[i].trials);
    }
    auto s = small_scenario();
    s.workers = 4; // results must not depend on worker count
    const auto c = run_monte_carlo(s);
    CHECK(c.points[0].errors == a.points[0].errors);
}

TEST_CASE("SISO flat 4-QAM matches the analytic Rayleigh reference") {
    ScenarioConfig s = small_scenario();
    s.n_t = 1;
    s.n_r = 1;
    s.tau_rms_s = 1e-12; // single tap: flat channel
    s.ebn0_db = {10.0};
    s.stop.min_bit_errors = 600;
    s.stop.max_trials = 3000;
    const auto curve = run_monte_carlo(s);
    const auto& p = curve.points[0];
    const double ref = analytic_ber_rayleigh(4, 10.0);
    const double se = (p.ci_high - p.ci_low) / (2.0 * 1.96);
    CHECK(std::abs(p.ber - ref) <= 3.0 * se);
}

TEST_CASE("multipath-Jakes mode runs and degrades with short CP") {
    ScenarioConfig s = small_scenario();
    s.n_t = 1;
    s.n_r = 1;
    s.channel_mode = ChannelMode::MultipathJakes;
    s.doppler_hz = 23.0;
    s.jakes_oscillators = 64;
    s.tau_rms_s = 2.5e-6;
    s.ofdm.bandwidth_hz = 5e6;
    s.ofdm.num_subcarriers = 64;
    s.ofdm.cp_fraction = 0.05; // CP = 3 samples, far below the channel memory
    s.symbols_per_trial = 2;
    s.ebn0_db = {std::numeric_limits<double>::infinity()};
    s.stop.min_bit_errors = 50;
    s.stop.max_trials = 40;
    const auto curve = run_monte_carlo(s);
    CHECK(curve.points[0].errors > 0); // ISI floor even without noise
}

TEST_CASE("cp_study: no floor without ISI, shared seeds across fractions") {
    ScenarioConfig s = small_scenario();
    s.n_t = 1;
    s.n_r = 1;
    s.tau_rms_s = 1e-12; // single tap: CP irrelevant
    s.ebn0_db = {0.0, 10.0, 20.0};
    s.stop.min_bit_errors = 150;
    s.stop.max_trials = 400;
    const auto entries = cp_study(s, {0.0, 0.25});
    REQUIRE(entries.size() == 2);
    CHECK(!entries[0].floor_flag);
    CHECK(!entries[1].floor_flag);
    CHECK_THROWS(cp_study(s, {1.5}));
}

TEST_CASE("calibration picks the best grid point, ties to smaller population") {
    ScenarioConfig s = small_scenario();
    s.n_t = 1; // two-dimensional search: every budget finds the optimum
    s.n_r = 1;
    s.ebn0_db = {std::numeric_limits<double>::infinity()};
    s.stop.min_bit_errors = 50;
    s.stop.max_trials = 6;
    std::vector<PsoParams> grid;
    for (int pop : {30, 10, 20}) {
        PsoParams p;
        p.population = pop;
        p.iterations = 40;
        grid.push_back(p);
    }
    const auto result = calibrate_pso(s, grid);
    REQUIRE(result.surface.size() == 3);
    // noiseless SISO: every budget reaches zero BER, so the tie-break picks
    // the smallest population
    for (const auto& pt : result.surface) CHECK(pt.mean_ber == 0.0);
    CHECK(result.surface[result.best_index].pso.population == 10);
}

TEST_CASE("sensibility metric") {
    CHECK(sensibility_kappa(1e-2, 1e-2) == doctest::Approx(0.0));
    CHECK(sensibility_kappa(1e-3, 1e-2) == doctest::Approx(-1.0));
    CHECK(sensibility_kappa(1e-1, 1e-3) == doctest::Approx(2.0));
    CHECK_THROWS(sensibility_kappa(0.0, 1e-2));
    CHECK_THROWS(sensibility_kappa(1e-2, 0.0));
    CHECK_THROWS(sensibility_kappa(1.5, 1e-2));
}

TEST_CASE("FLOP closed forms against independently expanded expressions") {
    Rng rng(97);
    for (int rep = 0; rep < 12; ++rep) {
        const int nt = 1 + static_cast<int>(rng.index(12));
        const int nr = 1 + static_cast<int>(rng.index(12));
        const int pop = 1 + static_cast<int>(rng.index(60));
        const int it = 1 + static_cast<int>(rng.index(100));
        const double t = nt, r = nr;
        CHECK(flop_zf(nt, nr) ==
              doctest::Approx(16.0 / 3.0 * t * t * t + 4.0 * t * t +
                              32.0 * t * t * r + 4.0 * t * r - 2.0 * t));
        CHECK(flop_mmse(nt, nr) ==
              doctest::Approx(16.0 / 3.0 * t * t * t + 8.0 * t * t +
                              32.0 * t * t * r + 4.0 * t * r));
        CHECK(flop_pso(nt, nr, pop, it) ==
              doctest::Approx(static_cast<double>(pop) * it *
                              (8.0 * t * r + 20.0 * t + 4.0 * r + 7.0)));
        CHECK(flop_de(nt, nr, pop, it) ==
              doctest::Approx(static_cast<double>(pop) * it *
                              (16.0 * t * r + 12.0 * t + 8.0 * r + 14.0)));
        CHECK(flop_ml(nt, nr, 4) ==
              doctest::Approx(std::pow(4.0, 2.0 * t) *
                              (8.0 * t * r + 4.0 * r + 7.0)));
        // MMSE exceeds ZF by exactly 4 N^2 + 2 N on square systems
        CHECK(flop_mmse(nt, nt) - flop_zf(nt, nt) ==
              doctest::Approx(4.0 * t * t + 2.0 * t));
    }
    CHECK(flop_ml(2, 2, 4) == doctest::Approx(12032.0));
    CHECK(flop_pso(2, 2, 40, 100) == doctest::Approx(348000.0));
}

TEST_CASE("relative complexity report") {
    const auto report = relative_complexity({2, 4, 8, 16});
    for (const auto& row : report.rows) {
        CHECK(row.flops > 0.0);
        if (row.detector == DetectorKind::Zf)
            CHECK(row.ratio_vs_zf == doctest::Approx(1.0));
        if (row.detector == DetectorKind::Ml)
            CHECK(row.ratio_vs_ml == doctest::Approx(1.0));
    }
    // PSO stays cheaper than DE under the default assumptions
    for (int nt : {2, 4, 8, 16}) {
        double pso = 0.0, de = 0.0;
        for (const auto& row : report.rows)
            if (row.n_t == nt) {
                if (row.detector == DetectorKind::Pso) pso = row.flops;
                if (row.detector == DetectorKind::De) de = row.flops;
            }
        CHECK(pso < de);
    }
}

TEST_CASE("config parsing: presets load and missing keys are all reported") {
    const auto cfg =
        ConfigMap::load_file(std::string(MOSIM_PRESET_DIR) + "/table4-mimo.cfg");
    const auto s = parse_scenario(cfg);
    CHECK(s.ofdm.num_subcarriers == 64);
    CHECK(s.ofdm.bandwidth_hz == doctest::Approx(20e6));
    CHECK(s.mod_order == 4);
    CHECK(s.tau_rms_s == doctest::Approx(51e-9));
    CHECK(s.pso.population == 40);
    CHECK(s.pso.iterations == 100);
    CHECK(s.pso.cognitive == doctest::Approx(4.0));

    const auto empty = ConfigMap::parse("", "empty");
    try {
        parse_scenario(empty);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        for (const char* key :
             {"ofdm.num_subcarriers", "modulation.order", "detector.kind",
              "channel.mode", "run.ebn0_db"})
            CHECK(msg.find(key) != std::string::npos);
    }

    CHECK_THROWS_AS(ConfigMap::parse("x = 1\nx = 2\n", "dup"), ConfigError);
    CHECK_THROWS_AS(parse_detector_kind("bogus"), ConfigError);
}

TEST_CASE("jakes validation preset carries the reference parameters") {
    const auto cfg =
        ConfigMap::load_file(std::string(MOSIM_PRESET_DIR) + "/table1-jakes.cfg");
    const auto jv = parse_jakes_validation(cfg);
    CHECK(jv.jakes.num_oscillators == 1024);
    CHECK(jv.jakes.max_doppler_hz == doctest::Approx(83.0));
    CHECK(jv.num_samples == 16384);
    CHECK(jv.jakes.num_waveforms == 4);
}
