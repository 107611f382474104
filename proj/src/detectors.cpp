#include "mosim/detectors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mosim/rng.hpp"

namespace mosim {

RealDecomposition real_decompose(const MimoObservation& obs) {
    const Eigen::Index nr = obs.h.rows();
    const Eigen::Index nt = obs.h.cols();
    RealDecomposition rd;
    rd.h.resize(2 * nr, 2 * nt);
    rd.h.topLeftCorner(nr, nt) = obs.h.real();
    rd.h.topRightCorner(nr, nt) = -obs.h.imag();
    rd.h.bottomLeftCorner(nr, nt) = obs.h.imag();
    rd.h.bottomRightCorner(nr, nt) = obs.h.real();
    rd.y.resize(2 * nr);
    rd.y.head(nr) = obs.y.real();
    rd.y.tail(nr) = obs.y.imag();
    rd.noise_ratio = obs.noise_ratio;
    rd.constellation = obs.constellation;
    return rd;
}

Eigen::VectorXd stack_complex(const Eigen::VectorXcd& x) {
    Eigen::VectorXd v(2 * x.size());
    v.head(x.size()) = x.real();
    v.tail(x.size()) = x.imag();
    return v;
}

Eigen::VectorXcd unstack_real(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size() / 2;
    Eigen::VectorXcd x(n);
    x.real() = v.head(n);
    x.imag() = v.tail(n);
    return x;
}

double fitness(const Eigen::VectorXd& candidate, const RealDecomposition& rd) {
    if (candidate.size() != rd.h.cols())
        throw std::invalid_argument("fitness: candidate length must equal N_dim");
    return (rd.y - rd.h * candidate).squaredNorm();
}

std::vector<std::uint8_t> hard_bits_for(const Eigen::VectorXcd& x,
                                        const QamConstellation& c) {
    std::vector<std::uint8_t> bits;
    bits.reserve(x.size() * c.bits_per_symbol);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const int label = c.hard_decision(x(i));
        for (int b = c.bits_per_symbol - 1; b >= 0; --b)
            bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    }
    return bits;
}

namespace {

DetectorResult finish_from_soft(const MimoObservation& obs,
                                const Eigen::VectorXcd& soft) {
    const auto& c = *obs.constellation;
    DetectorResult res;
    res.x_hat.resize(soft.size());
    for (Eigen::Index i = 0; i < soft.size(); ++i)
        res.x_hat(i) = c.quantize_point(soft(i));
    res.hard_bits = hard_bits_for(res.x_hat, c);
    res.final_fitness = (obs.y - obs.h * res.x_hat).squaredNorm();
    return res;
}

} // namespace

DetectorResult detect_ml(const MimoObservation& obs, std::uint64_t enumeration_budget) {
    if (!obs.constellation) throw std::invalid_argument("detect_ml: missing constellation");
    const auto& c = *obs.constellation;
    const int nt = obs.n_t();
    double candidates = std::pow(static_cast<double>(c.order), nt);
    if (candidates > static_cast<double>(enumeration_budget))
        throw std::runtime_error(
            "detect_ml: M^Nt exceeds the enumeration budget; use a heuristic detector");

    // depth-first enumeration in lexicographic label order with partial
    // residuals; the first minimum encountered is kept (tie break)
    std::vector<Eigen::VectorXcd> partial(nt + 1, Eigen::VectorXcd(obs.n_r()));
    partial[0] = obs.y;
    std::vector<int> label(nt, 0), best_label(nt, 0);
    double best = std::numeric_limits<double>::infinity();
    int depth = 0;
    while (true) {
        if (depth == nt) {
            const double d = partial[nt].squaredNorm();
            if (d < best) {
                best = d;
                best_label = label;
            }
            --depth;
            ++label[depth];
        } else if (label[depth] >= c.order) {
            label[depth] = 0;
            if (depth == 0) break;
            --depth;
            ++label[depth];
        } else {
            partial[depth + 1] = partial[depth] - obs.h.col(depth) * c.points[label[depth]];
            ++depth;
        }
    }

    DetectorResult res;
    res.x_hat.resize(nt);
    for (int t = 0; t < nt; ++t) res.x_hat(t) = c.points[best_label[t]];
    res.hard_bits.reserve(nt * c.bits_per_symbol);
    for (int t = 0; t < nt; ++t)
        for (int b = c.bits_per_symbol - 1; b >= 0; --b)
            res.hard_bits.push_back(static_cast<std::uint8_t>((best_label[t] >> b) & 1));
    res.final_fitness = best;
    return res;
}

DetectorResult detect_zf(const MimoObservation& obs, std::uint64_t seed,
                         double cond_limit) {
    if (!obs.constellation) throw std::invalid_argument("detect_zf: missing constellation");
    const auto& c = *obs.constellation;
    const Eigen::MatrixXcd gram = obs.h.adjoint() * obs.h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    const double emin = es.eigenvalues().minCoeff();
    const double emax = es.eigenvalues().maxCoeff();
    if (emin <= 0.0 || emax / emin > cond_limit) {
        // deep fade: decide entries uniformly at random
        Rng rng(seed);
        DetectorResult res;
        res.x_hat.resize(obs.n_t());
        for (int t = 0; t < obs.n_t(); ++t)
            res.x_hat(t) = c.points[rng.index(c.order)];
        res.hard_bits = hard_bits_for(res.x_hat, c);
        res.final_fitness = (obs.y - obs.h * res.x_hat).squaredNorm();
        res.singular = true;
        return res;
    }
    const Eigen::VectorXcd soft = gram.ldlt().solve(obs.h.adjoint() * obs.y);
    return finish_from_soft(obs, soft);
}

DetectorResult detect_mmse(const MimoObservation& obs) {
    if (!obs.constellation) throw std::invalid_argument("detect_mmse: missing constellation");
    if (obs.noise_ratio < 0.0)
        throw std::invalid_argument("detect_mmse: noise_ratio must be >= 0");
    const int nt = obs.n_t();
    const Eigen::MatrixXcd reg =
        obs.h.adjoint() * obs.h +
        obs.noise_ratio * Eigen::MatrixXcd::Identity(nt, nt);
    const Eigen::VectorXcd soft = reg.ldlt().solve(obs.h.adjoint() * obs.y);
    return finish_from_soft(obs, soft);
}

} // namespace mosim
