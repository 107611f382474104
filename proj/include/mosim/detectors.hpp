#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mosim/qam.hpp"

namespace mosim {

// One per-subcarrier detection instance: y = H x + z.
struct MimoObservation {
    Eigen::VectorXcd y;          // N_r
    Eigen::MatrixXcd h;          // N_r x N_t
    double noise_ratio = 0.0;    // N_0 / E_S seen by the receiver branch
    const QamConstellation* constellation = nullptr;

    int n_t() const { return static_cast<int>(h.cols()); }
    int n_r() const { return static_cast<int>(h.rows()); }
};

// Real-valued stacked system [[Re H, -Im H], [Im H, Re H]].
struct RealDecomposition {
    Eigen::MatrixXd h;           // 2N_r x 2N_t
    Eigen::VectorXd y;           // 2N_r
    double noise_ratio = 0.0;
    const QamConstellation* constellation = nullptr;

    int n_dim() const { return static_cast<int>(h.cols()); }
};

struct DetectorResult {
    Eigen::VectorXcd x_hat;              // entries are constellation points
    std::vector<std::uint8_t> hard_bits; // MSB-first per symbol
    int iterations = 0;
    double final_fitness = 0.0;
    bool singular = false;               // ZF conditioning fallback fired
};

RealDecomposition real_decompose(const MimoObservation& obs);

// stack(x) = [Re x; Im x] and its inverse
Eigen::VectorXd stack_complex(const Eigen::VectorXcd& x);
Eigen::VectorXcd unstack_real(const Eigen::VectorXd& v);

// ||y - H z||^2 on the real decomposition
double fitness(const Eigen::VectorXd& candidate, const RealDecomposition& rd);

// Exhaustive minimum-distance search; candidates enumerated in
// lexicographic label order, first minimum kept.
// enumeration_budget guards M^{N_t}.
DetectorResult detect_ml(const MimoObservation& obs,
                         std::uint64_t enumeration_budget = (1ULL << 24));

// Moore-Penrose pseudo-inverse receiver. A Gram matrix condition number
// above cond_limit flags the instance singular; entries are then decided
// uniformly at random from the seeded stream.
DetectorResult detect_zf(const MimoObservation& obs, std::uint64_t seed = 0,
                         double cond_limit = 1e12);

// Regularized linear receiver (H^H H + noise_ratio I)^{-1} H^H y.
DetectorResult detect_mmse(const MimoObservation& obs);

// bits (MSB-first per symbol) for an already-quantized symbol vector
std::vector<std::uint8_t> hard_bits_for(const Eigen::VectorXcd& x,
                                        const QamConstellation& c);

} // namespace mosim
