#include "mosim/flops.hpp"

#include <cmath>
#include <stdexcept>

namespace mosim {

std::string detector_name(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::Ml: return "ml";
        case DetectorKind::Zf: return "zf";
        case DetectorKind::Mmse: return "mmse";
        case DetectorKind::Pso: return "pso";
        case DetectorKind::De: return "de";
    }
    throw std::invalid_argument("detector_name: unknown detector");
}

double flop_zf(int n_t, int n_r) {
    const double t = n_t, r = n_r;
    return 16.0 / 3.0 * t * t * t + 4.0 * t * t + 32.0 * t * t * r + 4.0 * t * r - 2.0 * t;
}

double flop_mmse(int n_t, int n_r) {
    const double t = n_t, r = n_r;
    return 16.0 / 3.0 * t * t * t + 8.0 * t * t + 32.0 * t * t * r + 4.0 * t * r;
}

double flop_pso(int n_t, int n_r, int n_pop, int iterations) {
    const double t = n_t, r = n_r;
    return static_cast<double>(n_pop) * iterations * (8.0 * t * r + 20.0 * t + 4.0 * r + 7.0);
}

double flop_de(int n_t, int n_r, int n_ind, int iterations) {
    const double t = n_t, r = n_r;
    return static_cast<double>(n_ind) * iterations * (16.0 * t * r + 12.0 * t + 8.0 * r + 14.0);
}

double flop_ml(int n_t, int n_r, int mod_order) {
    const double t = n_t, r = n_r;
    return std::pow(static_cast<double>(mod_order), 2.0 * n_t) * (8.0 * t * r + 4.0 * r + 7.0);
}

double flop_count(DetectorKind kind, int n_t, int n_r, const FlopBudget& budget) {
    if (n_t < 1 || n_r < 1)
        throw std::invalid_argument("flop_count: dimensions must be positive");
    switch (kind) {
        case DetectorKind::Zf: return flop_zf(n_t, n_r);
        case DetectorKind::Mmse: return flop_mmse(n_t, n_r);
        case DetectorKind::Pso: return flop_pso(n_t, n_r, budget.population, budget.iterations);
        case DetectorKind::De: return flop_de(n_t, n_r, budget.population, budget.iterations);
        case DetectorKind::Ml: return flop_ml(n_t, n_r, budget.mod_order);
    }
    throw std::invalid_argument("flop_count: unknown detector");
}

FlopReport relative_complexity(const std::vector<int>& n_t_range,
                               const FlopAssumptions& a) {
    if (n_t_range.empty())
        throw std::invalid_argument("relative_complexity: empty range");
    FlopReport report;
    for (int nt : n_t_range) {
        const int pop = a.pop_per_dim * 2 * nt; // N_dim = 2 N_t
        const double ml = flop_ml(nt, nt, a.mod_order);
        const double zf = flop_zf(nt, nt);
        const DetectorKind kinds[] = {DetectorKind::Ml, DetectorKind::Zf,
                                      DetectorKind::Mmse, DetectorKind::Pso,
                                      DetectorKind::De};
        for (DetectorKind k : kinds) {
            FlopRow row;
            row.detector = k;
            row.n_t = row.n_r = nt;
            switch (k) {
                case DetectorKind::Ml: row.flops = ml; break;
                case DetectorKind::Zf: row.flops = zf; break;
                case DetectorKind::Mmse: row.flops = flop_mmse(nt, nt); break;
                case DetectorKind::Pso: row.flops = flop_pso(nt, nt, pop, a.iterations); break;
                case DetectorKind::De: row.flops = flop_de(nt, nt, pop, a.iterations); break;
            }
            row.ratio_vs_ml = row.flops / ml;
            row.ratio_vs_zf = row.flops / zf;
            report.rows.push_back(row);
        }
    }
    return report;
}

} // namespace mosim
