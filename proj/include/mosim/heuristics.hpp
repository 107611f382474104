#pragma once

#include <cstdint>
#include <vector>

#include "mosim/detectors.hpp"

namespace mosim {

struct PsoParams {
    int population = 40;        // N_pop
    int iterations = 100;       // N_iter
    double cognitive = 4.0;     // c1
    double social = 1.0;        // c2
    double inertia = 1.5;       // w0
    double inertia_decay = 0.99;
    double v_max = 1.0;
    double bound = 1.0;         // search box [-bound, bound] per dimension

    void validate() const;
};

struct DeParams {
    int population = 40;        // N_ind, >= 4
    int generations = 100;      // N_gen
    double f_mut = 0.6;         // in [0, 2]
    double f_cr = 0.6;          // in [0, 1]
    double bound = 1.0;

    void validate() const;
};

struct ConvergenceTrace {
    std::vector<double> best_fitness; // per iteration, nonincreasing
};

struct HeuristicResult {
    DetectorResult detection;
    ConvergenceTrace trace;
    Eigen::VectorXd best_position;    // continuous, pre-quantization
};

// PSO over the real decomposition: uniform initial positions in the box,
// zero initial velocities; per iteration velocity update, velocity clamp,
// position update, box clamp, fitness, best refresh, inertia decay.
HeuristicResult pso_detect(const RealDecomposition& rd, const PsoParams& params,
                           std::uint64_t seed);

// DE rand/1/bin with rejection-sampled distinct indices and a forced
// crossover coordinate per individual; greedy selection.
HeuristicResult de_detect(const RealDecomposition& rd, const DeParams& params,
                          std::uint64_t seed);

// First iteration (1-based) after which the relative improvement of the
// best fitness stays below `tolerance` for the remainder of the trace.
int convergence_profile(const ConvergenceTrace& trace, double tolerance);

} // namespace mosim
