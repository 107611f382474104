#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mosim/correlation.hpp"
#include "mosim/flops.hpp"
#include "mosim/heuristics.hpp"
#include "mosim/ofdm.hpp"
#include "mosim/pdp.hpp"

namespace mosim {

enum class ChannelMode { MultipathJakes, BlockStatic };

struct StoppingRule {
    long long min_bit_errors = 200;
    long long max_trials = 100000;
    long long min_trials = 1;
};

struct ScenarioConfig {
    OfdmConfig ofdm;
    int mod_order = 4;
    int n_t = 1, n_r = 1;
    ArrayKind array = ArrayKind::Ula;
    double rho = 0.0;
    int ura_nx = 0, ura_ny = 0;        // 0 = auto square-ish factorization
    DetectorKind detector = DetectorKind::Zf;
    PsoParams pso;
    DeParams de;
    ChannelMode channel_mode = ChannelMode::BlockStatic;
    double tau_rms_s = 51e-9;
    double power_floor_db = -30.0;
    double doppler_hz = 0.0;           // Jakes mode only
    int jakes_oscillators = 256;
    int symbols_per_trial = 1;
    std::vector<double> ebn0_db;       // +inf allowed (noiseless sentinel)
    StoppingRule stop;
    std::uint64_t seed = 1;
    int workers = 0;                   // 0 = hardware concurrency

    void validate() const;
    std::uint64_t fingerprint() const;
    CorrelationSpec correlation_spec(int n) const;
};

struct BerPoint {
    double ebn0_db = 0.0;
    double ber = 0.0;
    double ci_low = 0.0, ci_high = 0.0; // 95% normal approximation
    long long bits = 0, errors = 0;
    long long trials = 0;
};

struct BerCurve {
    std::vector<BerPoint> points;
    std::uint64_t scenario_fingerprint = 0;
};

BerCurve run_monte_carlo(const ScenarioConfig& cfg);

struct CpStudyEntry {
    double cp_fraction = 0.0;
    BerCurve curve;
    bool floor_flag = false; // BER(highest Eb/N0) / BER(mid Eb/N0) > 0.5
};

std::vector<CpStudyEntry> cp_study(const ScenarioConfig& base,
                                   const std::vector<double>& cp_fractions);

// Grid calibration of heuristic input parameters at a fixed scenario with
// common random numbers across grid points. Ties go to the smaller
// population.
struct CalibrationPoint {
    PsoParams pso;
    DeParams de;
    double mean_ber = 0.0;
};

struct CalibrationResult {
    std::vector<CalibrationPoint> surface;
    std::size_t best_index = 0;
};

CalibrationResult calibrate_pso(const ScenarioConfig& scenario,
                                const std::vector<PsoParams>& grid);
CalibrationResult calibrate_de(const ScenarioConfig& scenario,
                               const std::vector<DeParams>& grid);

} // namespace mosim
