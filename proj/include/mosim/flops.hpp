#pragma once

#include <string>
#include <vector>

namespace mosim {

enum class DetectorKind { Ml, Zf, Mmse, Pso, De };

std::string detector_name(DetectorKind kind);

// Per-subcarrier FLOP closed forms (real-valued, fractional LU term kept).
double flop_zf(int n_t, int n_r);
double flop_mmse(int n_t, int n_r);
double flop_pso(int n_t, int n_r, int n_pop, int iterations);
double flop_de(int n_t, int n_r, int n_ind, int iterations);
double flop_ml(int n_t, int n_r, int mod_order);

struct FlopBudget {
    int population = 0;   // N_pop or N_ind, heuristics only
    int iterations = 0;   // heuristics only
    int mod_order = 0;    // ML only
};

double flop_count(DetectorKind kind, int n_t, int n_r, const FlopBudget& budget);

struct FlopAssumptions {
    int iterations = 50;        // I
    int pop_per_dim = 5;        // N_pop = N_ind = pop_per_dim * N_dim
    int mod_order = 4;          // M
};

struct FlopRow {
    DetectorKind detector;
    int n_t = 0, n_r = 0;
    double flops = 0.0;
    double ratio_vs_ml = 0.0;
    double ratio_vs_zf = 0.0;
};

struct FlopReport {
    std::vector<FlopRow> rows;
};

// Ratios vs. ML and ZF for every detector over the antenna range, N_t = N_r.
FlopReport relative_complexity(const std::vector<int>& n_t_range,
                               const FlopAssumptions& assumptions = {});

} // namespace mosim
