#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "mosim/detectors.hpp"
#include "mosim/rng.hpp"

using namespace mosim;

namespace {

MimoObservation random_observation(const QamConstellation& c, int n_t, int n_r,
                                   double noise_std, Rng& rng,
                                   Eigen::VectorXcd* tx = nullptr) {
    MimoObservation obs;
    obs.constellation = &c;
    obs.h.resize(n_r, n_t);
    for (int r = 0; r < n_r; ++r)
        for (int t = 0; t < n_t; ++t)
            obs.h(r, t) = std::complex<double>(rng.normal(), rng.normal()) / std::sqrt(2.0);
    Eigen::VectorXcd x(n_t);
    for (int t = 0; t < n_t; ++t) x(t) = c.points[rng.index(c.points.size())];
    obs.y = obs.h * x;
    for (int r = 0; r < n_r; ++r)
        obs.y(r) += noise_std * std::complex<double>(rng.normal(), rng.normal());
    obs.noise_ratio = 2.0 * noise_std * noise_std / c.avg_energy;
    if (tx != nullptr) *tx = x;
    return obs;
}

// independent exhaustive reference: minimize ||y - Hx|| by odometer enumeration
double brute_force_min_fitness(const MimoObservation& obs) {
    const auto& c = *obs.constellation;
    const int nt = obs.n_t();
    std::vector<int> idx(nt, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        Eigen::VectorXcd x(nt);
        for (int t = 0; t < nt; ++t) x(t) = c.points[idx[t]];
        best = std::min(best, (obs.y - obs.h * x).squaredNorm());
        int pos = nt - 1;
        while (pos >= 0 && ++idx[pos] == c.order) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return best;
}

} // namespace

TEST_CASE("real decomposition preserves the linear model and fitness") {
    const auto c = QamConstellation::make(16);
    Rng rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXcd x;
        const auto obs = random_observation(c, 3, 4, 0.3, rng, &x);
        const auto rd = real_decompose(obs);
        REQUIRE(rd.h.rows() == 8);
        REQUIRE(rd.h.cols() == 6);
        const Eigen::VectorXd xs = stack_complex(x);
        // ||y - H x||^2 identical in both representations
        CHECK(fitness(xs, rd) ==
              doctest::Approx((obs.y - obs.h * x).squaredNorm()).epsilon(1e-9));
        // stacking round-trips
        const Eigen::VectorXcd back = unstack_real(xs);
        CHECK((back - x).norm() < 1e-14);
    }
}

TEST_CASE("ML detector returns the transmitted vector on a noiseless channel") {
    const auto c = QamConstellation::make(4);
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXcd x;
        const auto obs = random_observation(c, 4, 4, 0.0, rng, &x);
        const auto res = detect_ml(obs);
        CHECK((res.x_hat - x).norm() < 1e-12);
        CHECK(res.final_fitness < 1e-18);
        CHECK(res.hard_bits == hard_bits_for(x, c));
    }
}

TEST_CASE("ML detector attains the exhaustive minimum under noise") {
    const auto c = QamConstellation::make(4);
    Rng rng(37);
    for (int rep = 0; rep < 50; ++rep) {
        const auto obs = random_observation(c, 3, 3, 0.7, rng);
        const auto res = detect_ml(obs);
        CHECK(res.final_fitness ==
              doctest::Approx(brute_force_min_fitness(obs)).epsilon(1e-9));
    }
}

TEST_CASE("ML budget guard rejects oversized searches") {
    const auto c = QamConstellation::make(256);
    Rng rng(41);
    const auto obs = random_observation(c, 4, 4, 0.1, rng);
    CHECK_THROWS(detect_ml(obs)); // 256^4 > 2^24
}

TEST_CASE("ZF: pseudo-inverse recovers noiseless symbols") {
    const auto c = QamConstellation::make(16);
    Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXcd x;
        const auto obs = random_observation(c, 4, 4, 0.0, rng, &x);
        const auto res = detect_zf(obs);
        CHECK(!res.singular);
        CHECK((res.x_hat - x).norm() < 1e-9);
    }
}

TEST_CASE("ZF: singular channel triggers the flagged deterministic fallback") {
    const auto c = QamConstellation::make(4);
    MimoObservation obs;
    obs.constellation = &c;
    obs.h = Eigen::MatrixXcd::Zero(2, 2); // rank deficient
    obs.h(0, 0) = obs.h(1, 0) = obs.h(0, 1) = obs.h(1, 1) = 1.0;
    obs.y = Eigen::VectorXcd::Ones(2);
    const auto a = detect_zf(obs, 123);
    const auto b = detect_zf(obs, 123);
    CHECK(a.singular);
    CHECK((a.x_hat - b.x_hat).norm() == 0.0);
    for (int t = 0; t < 2; ++t) {
        // fallback still emits constellation points
        double best = 1e9;
        for (const auto& p : c.points) best = std::min(best, std::abs(p - a.x_hat(t)));
        CHECK(best < 1e-12);
    }
}

TEST_CASE("MMSE with zero noise coincides with ZF") {
    const auto c = QamConstellation::make(16);
    Rng rng(47);
    for (int rep = 0; rep < 30; ++rep) {
        auto obs = random_observation(c, 4, 4, 0.4, rng);
        obs.noise_ratio = 0.0;
        const auto zf = detect_zf(obs);
        const auto mmse = detect_mmse(obs);
        CHECK((zf.x_hat - mmse.x_hat).norm() < 1e-9);
    }
}

TEST_CASE("MMSE regularization shrinks the unquantized estimate") {
    const auto c = QamConstellation::make(4);
    Rng rng(53);
    // statistical check: at matched SNR the MMSE decision errs no more often
    // than ZF over a fixed instance set
    int zf_err = 0, mmse_err = 0;
    for (int rep = 0; rep < 400; ++rep) {
        Eigen::VectorXcd x;
        const auto obs = random_observation(c, 4, 4, 0.5, rng, &x);
        if ((detect_zf(obs).x_hat - x).norm() > 1e-9) ++zf_err;
        if ((detect_mmse(obs).x_hat - x).norm() > 1e-9) ++mmse_err;
    }
    CHECK(mmse_err <= zf_err);
    CHECK(zf_err > 0); // the instance set actually stresses the detectors
}

TEST_CASE("ML fitness lower-bounds the linear detectors on random instances") {
    const auto c = QamConstellation::make(4);
    Rng rng(59);
    for (int rep = 0; rep < 60; ++rep) {
        const auto obs = random_observation(c, 3, 3, 0.6, rng);
        const auto rd = real_decompose(obs);
        const double ml = detect_ml(obs).final_fitness;
        for (const auto& res : {detect_zf(obs), detect_mmse(obs)})
            CHECK(ml <= fitness(stack_complex(res.x_hat), rd) + 1e-9);
    }
}

TEST_CASE("hard bit extraction is MSB-first per antenna") {
    const auto c = QamConstellation::make(4);
    Eigen::VectorXcd x(2);
    x(0) = c.points[1];
    x(1) = c.points[2];
    const auto bits = hard_bits_for(x, c);
    REQUIRE(bits.size() == 4);
    CHECK(bits[0] == 0);
    CHECK(bits[1] == 1);
    CHECK(bits[2] == 1);
    CHECK(bits[3] == 0);
}
