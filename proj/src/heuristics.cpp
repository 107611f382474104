#include "mosim/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mosim/rng.hpp"

namespace mosim {

namespace {

// nearest per-axis constellation level, lower level on ties
double quantize_level(double v, const std::vector<double>& levels) {
    double best = levels[0];
    double best_d = std::abs(v - levels[0]);
    for (double l : levels) {
        const double d = std::abs(v - l);
        if (d < best_d) {
            best_d = d;
            best = l;
        }
    }
    return best;
}

HeuristicResult finish(const RealDecomposition& rd, const Eigen::VectorXd& best_pos,
                       ConvergenceTrace trace, int iterations) {
    const auto& c = *rd.constellation;
    Eigen::VectorXd q(best_pos.size());
    for (Eigen::Index i = 0; i < best_pos.size(); ++i)
        q(i) = quantize_level(best_pos(i), c.levels);

    HeuristicResult out;
    out.best_position = best_pos;
    out.trace = std::move(trace);
    out.detection.x_hat = unstack_real(q);
    out.detection.hard_bits = hard_bits_for(out.detection.x_hat, c);
    out.detection.final_fitness = fitness(q, rd);
    out.detection.iterations = iterations;
    return out;
}

} // namespace

void PsoParams::validate() const {
    if (population < 1) throw std::invalid_argument("pso: population must be >= 1");
    if (iterations < 1) throw std::invalid_argument("pso: iterations must be >= 1");
    if (v_max <= 0.0) throw std::invalid_argument("pso: v_max must be > 0");
    if (!(bound > 0.0) || !std::isfinite(bound))
        throw std::invalid_argument("pso: bounds must be finite and positive");
}

void DeParams::validate() const {
    if (population < 4)
        throw std::invalid_argument("de: population must be >= 4 (distinct indices)");
    if (generations < 1) throw std::invalid_argument("de: generations must be >= 1");
    if (f_mut < 0.0 || f_mut > 2.0)
        throw std::invalid_argument("de: f_mut must be in [0, 2]");
    if (f_cr < 0.0 || f_cr > 1.0)
        throw std::invalid_argument("de: f_cr must be in [0, 1]");
    if (!(bound > 0.0) || !std::isfinite(bound))
        throw std::invalid_argument("de: bounds must be finite and positive");
}

HeuristicResult pso_detect(const RealDecomposition& rd, const PsoParams& params,
                           std::uint64_t seed) {
    params.validate();
    if (!rd.constellation) throw std::invalid_argument("pso: missing constellation");
    const int dim = rd.n_dim();
    const int npop = params.population;
    Rng rng(seed);

    Eigen::MatrixXd pos(dim, npop), vel = Eigen::MatrixXd::Zero(dim, npop);
    for (int k = 0; k < npop; ++k)
        for (int i = 0; i < dim; ++i)
            pos(i, k) = rng.uniform(-params.bound, params.bound);

    Eigen::MatrixXd pbest = pos;
    Eigen::VectorXd pbest_fit(npop);
    for (int k = 0; k < npop; ++k) pbest_fit(k) = fitness(pos.col(k), rd);

    int gb = 0;
    pbest_fit.minCoeff(&gb);
    Eigen::VectorXd gbest = pbest.col(gb);
    double gbest_fit = pbest_fit(gb);

    ConvergenceTrace trace;
    trace.best_fitness.reserve(params.iterations);

    double w = params.inertia;
    for (int it = 0; it < params.iterations; ++it) {
        for (int k = 0; k < npop; ++k) {
            for (int i = 0; i < dim; ++i) {
                const double u1 = rng.uniform();
                const double u2 = rng.uniform();
                double v = w * vel(i, k) +
                           params.cognitive * u1 * (pbest(i, k) - pos(i, k)) +
                           params.social * u2 * (gbest(i) - pos(i, k));
                v = std::clamp(v, -params.v_max, params.v_max);
                vel(i, k) = v;
                pos(i, k) = std::clamp(pos(i, k) + v, -params.bound, params.bound);
            }
            const double f = fitness(pos.col(k), rd);
            if (f < pbest_fit(k)) {
                pbest_fit(k) = f;
                pbest.col(k) = pos.col(k);
                if (f < gbest_fit) {
                    gbest_fit = f;
                    gbest = pos.col(k);
                }
            }
        }
        trace.best_fitness.push_back(gbest_fit);
        w *= params.inertia_decay;
    }
    return finish(rd, gbest, std::move(trace), params.iterations);
}

HeuristicResult de_detect(const RealDecomposition& rd, const DeParams& params,
                          std::uint64_t seed) {
    params.validate();
    if (!rd.constellation) throw std::invalid_argument("de: missing constellation");
    const int dim = rd.n_dim();
    const int nind = params.population;
    Rng rng(seed);

    std::vector<Eigen::VectorXd> pop(nind);
    Eigen::VectorXd fit(nind);
    for (int k = 0; k < nind; ++k) {
        pop[k].resize(dim);
        for (int i = 0; i < dim; ++i) pop[k](i) = rng.uniform(-params.bound, params.bound);
        fit(k) = fitness(pop[k], rd);
    }

    ConvergenceTrace trace;
    trace.best_fitness.reserve(params.generations);

    Eigen::VectorXd trial(dim);
    for (int gen = 0; gen < params.generations; ++gen) {
        for (int k = 0; k < nind; ++k) {
            // rejection sampling until k, r1, r2, r3 are all distinct
            int r1, r2, r3;
            do r1 = static_cast<int>(rng.index(nind)); while (r1 == k);
            do r2 = static_cast<int>(rng.index(nind)); while (r2 == k || r2 == r1);
            do r3 = static_cast<int>(rng.index(nind)); while (r3 == k || r3 == r1 || r3 == r2);
            const int r4 = static_cast<int>(rng.index(dim));
            for (int i = 0; i < dim; ++i) {
                const bool from_mutant = (i == r4) || (rng.uniform() <= params.f_cr);
                double v = from_mutant
                               ? pop[r1](i) + params.f_mut * (pop[r2](i) - pop[r3](i))
                               : pop[k](i);
                trial(i) = std::clamp(v, -params.bound, params.bound);
            }
            const double f = fitness(trial, rd);
            if (f < fit(k)) {
                pop[k] = trial;
                fit(k) = f;
            }
        }
        int best = 0;
        fit.minCoeff(&best);
        trace.best_fitness.push_back(fit(best));
    }
    int best = 0;
    fit.minCoeff(&best);
    return finish(rd, pop[best], std::move(trace), params.generations);
}

int convergence_profile(const ConvergenceTrace& trace, double tolerance) {
    const auto& f = trace.best_fitness;
    if (f.empty()) throw std::invalid_argument("convergence_profile: empty trace");
    const int n = static_cast<int>(f.size());
    std::vector<double> suffix_min(n);
    suffix_min[n - 1] = f[n - 1];
    for (int i = n - 2; i >= 0; --i) suffix_min[i] = std::min(f[i], suffix_min[i + 1]);
    for (int p = 0; p < n; ++p) {
        const double scale = std::max(std::abs(f[p]), 1e-12);
        if (f[p] - suffix_min[p] <= tolerance * scale) return p + 1;
    }
    return n;
}

} // namespace mosim
