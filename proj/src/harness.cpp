#include "mosim/harness.hpp"

#include <cmath>
#include <cstring>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mosim/channel.hpp"
#include "mosim/detectors.hpp"
#include "mosim/fft.hpp"
#include "mosim/jakes.hpp"
#include "mosim/qam.hpp"
#include "mosim/rng.hpp"

namespace mosim {

namespace {

// purpose tags for substream derivation
constexpr std::uint64_t kBitsStream = 0x62697473;
constexpr std::uint64_t kChanStream = 0x6368616e;
constexpr std::uint64_t kNoiseStream = 0x6e6f6973;
constexpr std::uint64_t kDetStream = 0x64657465;

constexpr int kBatchTrials = 32; // stopping-rule granularity, worker-independent

struct TrialOutcome {
    long long errors = 0;
    long long bits = 0;
};

struct Context {
    const ScenarioConfig* cfg = nullptr;
    QamConstellation constellation;
    PowerDelayProfile pdp;
    bool correlated = false;
    Eigen::MatrixXd sqrt_r_t, sqrt_r_r;
    double overhead = 1.0; // (N+CP)/N
};

Context make_context(const ScenarioConfig& cfg) {
    Context ctx;
    ctx.cfg = &cfg;
    ctx.constellation = QamConstellation::make(cfg.mod_order);
    ctx.pdp = pdp_exponential(cfg.tau_rms_s, cfg.ofdm.bandwidth_hz, cfg.power_floor_db);
    ctx.correlated = cfg.rho > 0.0;
    if (ctx.correlated) {
        ctx.sqrt_r_t = matrix_sqrt_psd(correlation_matrix(cfg.correlation_spec(cfg.n_t)));
        ctx.sqrt_r_r = matrix_sqrt_psd(correlation_matrix(cfg.correlation_spec(cfg.n_r)));
    }
    ctx.overhead = static_cast<double>(cfg.ofdm.symbol_length()) / cfg.ofdm.num_subcarriers;
    return ctx;
}

// H[n] = sum_l taps[l] e^{-j 2 pi n l / N}; taps longer than N fold modulo N
std::vector<Eigen::MatrixXcd> csi_for_taps(const MimoTaps& taps, int n) {
    const Eigen::Index nr = taps.taps[0].rows();
    const Eigen::Index nt = taps.taps[0].cols();
    std::vector<Eigen::MatrixXcd> folded(
        std::min<std::size_t>(taps.taps.size(), static_cast<std::size_t>(n)),
        Eigen::MatrixXcd::Zero(nr, nt));
    for (std::size_t l = 0; l < taps.taps.size(); ++l) folded[l % n] += taps.taps[l];

    std::vector<Eigen::MatrixXcd> h(n, Eigen::MatrixXcd::Zero(nr, nt));
    std::vector<std::complex<double>> seq(folded.size());
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index t = 0; t < nt; ++t) {
            for (std::size_t l = 0; l < folded.size(); ++l) seq[l] = folded[l](r, t);
            const auto bins = dft_raw(seq, static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) h[k](r, t) = bins[k];
        }
    return h;
}

std::vector<MimoTaps> draw_trial_taps(const Context& ctx, std::uint64_t point,
                                      std::uint64_t trial) {
    const auto& cfg = *ctx.cfg;
    const int s_count = cfg.symbols_per_trial;
    std::vector<MimoTaps> taps(s_count);
    const std::uint64_t chan_master = mix64(cfg.seed ^ kChanStream);

    if (cfg.channel_mode == ChannelMode::BlockStatic) {
        for (int s = 0; s < s_count; ++s)
            taps[s] = draw_block_static_taps(
                ctx.pdp, cfg.n_r, cfg.n_t,
                ctx.correlated ? &ctx.sqrt_r_r : nullptr,
                ctx.correlated ? &ctx.sqrt_r_t : nullptr,
                derive_seed(chan_master, point, trial, static_cast<std::uint64_t>(s)));
        return taps;
    }

    // multipath-Jakes: one independent waveform per (tap, rx, tx), sampled at
    // the OFDM symbol rate, scaled by the tap power
    JakesConfig jcfg;
    jcfg.num_oscillators = cfg.jakes_oscillators;
    jcfg.max_doppler_hz = cfg.doppler_hz;
    jcfg.sample_period_s = cfg.ofdm.symbol_duration_s();
    jcfg.num_waveforms = 1;

    const int ntaps = static_cast<int>(ctx.pdp.tap_powers.size());
    for (int s = 0; s < s_count; ++s)
        taps[s].taps.assign(ntaps, Eigen::MatrixXcd::Zero(cfg.n_r, cfg.n_t));
    for (int l = 0; l < ntaps; ++l) {
        const double amp = std::sqrt(ctx.pdp.tap_powers[l]);
        for (int r = 0; r < cfg.n_r; ++r)
            for (int t = 0; t < cfg.n_t; ++t) {
                const std::uint64_t path =
                    (static_cast<std::uint64_t>(l) << 32) |
                    (static_cast<std::uint64_t>(r) << 16) | static_cast<std::uint64_t>(t);
                const auto w = generate_jakes_waveforms(
                    jcfg, s_count, derive_seed(chan_master, point, trial, path));
                for (int s = 0; s < s_count; ++s)
                    taps[s].taps[l](r, t) = amp * w[0].samples[s];
            }
    }
    if (ctx.correlated)
        for (int s = 0; s < s_count; ++s)
            for (auto& g : taps[s].taps)
                g = ctx.sqrt_r_r * g * ctx.sqrt_r_t.transpose();
    return taps;
}

TrialOutcome run_trial(const Context& ctx, std::uint64_t point, std::uint64_t trial,
                       double ebn0_db) {
    const auto& cfg = *ctx.cfg;
    const auto& c = ctx.constellation;
    const int n = cfg.ofdm.num_subcarriers;
    const int len = cfg.ofdm.symbol_length();
    const int s_count = cfg.symbols_per_trial;
    const int bps = c.bits_per_symbol;
    const double tx_scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_t)); // EPA

    Rng bits_rng(derive_seed(mix64(cfg.seed ^ kBitsStream), point, trial));

    // transmit side: bits -> QAM -> OFDM time stream per antenna
    std::vector<std::vector<std::uint8_t>> tx_bits(cfg.n_t);
    std::vector<std::vector<std::complex<double>>> tx_time(cfg.n_t);
    for (int t = 0; t < cfg.n_t; ++t) {
        tx_bits[t].resize(static_cast<std::size_t>(s_count) * n * bps);
        for (auto& b : tx_bits[t]) b = static_cast<std::uint8_t>(bits_rng.bits() & 1);
        tx_time[t].reserve(static_cast<std::size_t>(s_count) * len);
        for (int s = 0; s < s_count; ++s) {
            std::vector<std::uint8_t> frame_bits(
                tx_bits[t].begin() + static_cast<std::size_t>(s) * n * bps,
                tx_bits[t].begin() + static_cast<std::size_t>(s + 1) * n * bps);
            auto syms = qam_modulate(frame_bits, c);
            for (auto& x : syms) x *= tx_scale;
            const auto time = ofdm_modulate(syms, cfg.ofdm);
            tx_time[t].insert(tx_time[t].end(), time.begin(), time.end());
        }
    }

    const auto taps = draw_trial_taps(ctx, point, trial);
    const int ntaps = static_cast<int>(ctx.pdp.tap_powers.size());

    // linear convolution per symbol block; tails spill into later symbols
    std::vector<std::vector<std::complex<double>>> rx_time(
        cfg.n_r, std::vector<std::complex<double>>(
                     static_cast<std::size_t>(s_count) * len + ntaps, {0.0, 0.0}));
    for (int s = 0; s < s_count; ++s)
        for (int r = 0; r < cfg.n_r; ++r)
            for (int t = 0; t < cfg.n_t; ++t) {
                const auto& h = taps[s].taps;
                for (int m = 0; m < len; ++m) {
                    const auto x = tx_time[t][static_cast<std::size_t>(s) * len + m];
                    if (x == std::complex<double>{0.0, 0.0}) continue;
                    for (int l = 0; l < ntaps; ++l)
                        rx_time[r][static_cast<std::size_t>(s) * len + m + l] += h[l](r, t) * x;
                }
            }

    const double sigma2 = awgn_noise_variance(ebn0_db, c, ctx.overhead);
    const std::uint64_t noise_master = mix64(cfg.seed ^ kNoiseStream);
    for (int r = 0; r < cfg.n_r; ++r) {
        auto& y = rx_time[r];
        y.resize(static_cast<std::size_t>(s_count) * len); // drop the trailing spill
        if (sigma2 > 0.0) {
            Rng nrng(derive_seed(noise_master, point, trial, static_cast<std::uint64_t>(r)));
            const double sd = std::sqrt(sigma2 / 2.0);
            for (auto& v : y) v += std::complex<double>(sd * nrng.normal(), sd * nrng.normal());
        }
    }

    const std::uint64_t det_master = mix64(cfg.seed ^ kDetStream);
    const double sqrt_nt = std::sqrt(static_cast<double>(cfg.n_t));
    const double noise_ratio = cfg.n_t * sigma2 / c.avg_energy;

    TrialOutcome out;
    std::vector<std::vector<std::complex<double>>> rx_bins(cfg.n_r);
    for (int s = 0; s < s_count; ++s) {
        for (int r = 0; r < cfg.n_r; ++r) {
            std::vector<std::complex<double>> block(
                rx_time[r].begin() + static_cast<std::size_t>(s) * len,
                rx_time[r].begin() + static_cast<std::size_t>(s + 1) * len);
            rx_bins[r] = ofdm_demodulate(block, cfg.ofdm);
        }
        const auto csi = csi_for_taps(taps[s], n);

        MimoObservation obs;
        obs.constellation = &c;
        obs.noise_ratio = noise_ratio;
        obs.y.resize(cfg.n_r);
        for (int k = 0; k < n; ++k) {
            for (int r = 0; r < cfg.n_r; ++r) obs.y(r) = sqrt_nt * rx_bins[r][k];
            obs.h = csi[k];
            const std::uint64_t sub_path =
                (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(k);
            DetectorResult res;
            switch (cfg.detector) {
                case DetectorKind::Ml:
                    res = detect_ml(obs);
                    break;
                case DetectorKind::Zf:
                    res = detect_zf(obs, derive_seed(det_master, point, trial, sub_path));
                    break;
                case DetectorKind::Mmse:
                    res = detect_mmse(obs);
                    break;
                case DetectorKind::Pso: {
                    const auto rd = real_decompose(obs);
                    res = pso_detect(rd, cfg.pso,
                                     derive_seed(det_master, point, trial, sub_path))
                              .detection;
                    break;
                }
                case DetectorKind::De: {
                    const auto rd = real_decompose(obs);
                    res = de_detect(rd, cfg.de,
                                    derive_seed(det_master, point, trial, sub_path))
                              .detection;
                    break;
                }
            }
            for (int t = 0; t < cfg.n_t; ++t)
                for (int b = 0; b < bps; ++b) {
                    const auto tx =
                        tx_bits[t][(static_cast<std::size_t>(s) * n + k) * bps + b];
                    const auto rx = res.hard_bits[static_cast<std::size_t>(t) * bps + b];
                    if (tx != rx) ++out.errors;
                }
        }
    }
    out.bits = static_cast<long long>(s_count) * n * cfg.n_t * bps;
    return out;
}

} // namespace

void ScenarioConfig::validate() const {
    ofdm.validate();
    QamConstellation::make(mod_order); // throws on bad order
    if (n_t < 1 || n_r < 1) throw std::invalid_argument("scenario: antenna counts must be >= 1");
    if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("scenario: rho must be in [0, 1]");
    if (ebn0_db.empty()) throw std::invalid_argument("scenario: ebn0 grid must be nonempty");
    if (stop.min_bit_errors <= 0 || stop.max_trials <= 0 || stop.min_trials <= 0)
        throw std::invalid_argument("scenario: stopping rule must be positive");
    if (symbols_per_trial < 1)
        throw std::invalid_argument("scenario: symbols_per_trial must be >= 1");
    if (tau_rms_s <= 0.0) throw std::invalid_argument("scenario: tau_rms must be > 0");
    if (channel_mode == ChannelMode::MultipathJakes && doppler_hz < 0.0)
        throw std::invalid_argument("scenario: doppler must be >= 0");
    if (array == ArrayKind::Ura && ura_nx > 0 && ura_ny > 0) {
        if (ura_nx * ura_ny != n_t || ura_nx * ura_ny != n_r)
            throw std::invalid_argument("scenario: URA geometry must match antenna counts");
    }
}

CorrelationSpec ScenarioConfig::correlation_spec(int n) const {
    CorrelationSpec spec;
    spec.array_kind = array;
    spec.rho = rho;
    spec.n = n;
    if (array == ArrayKind::Ura) {
        if (ura_nx > 0 && ura_ny > 0) {
            spec.nx = ura_nx;
            spec.ny = ura_ny;
        } else {
            // closest-to-square factorization
            int nx = static_cast<int>(std::sqrt(static_cast<double>(n)));
            while (nx > 1 && n % nx != 0) --nx;
            spec.nx = nx;
            spec.ny = n / nx;
        }
    }
    return spec;
}

std::uint64_t ScenarioConfig::fingerprint() const {
    auto h = mix64(0x73636e66ULL);
    auto fold = [&h](std::uint64_t v) { h = mix64(h ^ mix64(v)); };
    auto fold_d = [&fold](double v) {
        std::uint64_t u;
        static_assert(sizeof(u) == sizeof(v));
        std::memcpy(&u, &v, sizeof(u));
        fold(u);
    };
    fold(ofdm.num_subcarriers);
    fold_d(ofdm.cp_fraction);
    fold_d(ofdm.bandwidth_hz);
    fold(mod_order);
    fold(n_t);
    fold(n_r);
    fold(static_cast<std::uint64_t>(array));
    fold_d(rho);
    fold(ura_nx);
    fold(ura_ny);
    fold(static_cast<std::uint64_t>(detector));
    fold(pso.population);
    fold(pso.iterations);
    fold_d(pso.cognitive);
    fold_d(pso.social);
    fold_d(pso.inertia);
    fold_d(pso.inertia_decay);
    fold_d(pso.v_max);
    fold_d(pso.bound);
    fold(de.population);
    fold(de.generations);
    fold_d(de.f_mut);
    fold_d(de.f_cr);
    fold_d(de.bound);
    fold(static_cast<std::uint64_t>(channel_mode));
    fold_d(tau_rms_s);
    fold_d(power_floor_db);
    fold_d(doppler_hz);
    fold(jakes_oscillators);
    fold(symbols_per_trial);
    for (double e : ebn0_db) fold_d(e);
    fold(stop.min_bit_errors);
    fold(stop.max_trials);
    fold(stop.min_trials);
    fold(seed);
    return h;
}

BerCurve run_monte_carlo(const ScenarioConfig& cfg) {
    cfg.validate();
    const Context ctx = make_context(cfg);
    const int workers = cfg.workers > 0
                            ? cfg.workers
                            : std::max(1u, std::thread::hardware_concurrency());

    BerCurve curve;
    curve.scenario_fingerprint = cfg.fingerprint();
    for (std::size_t pi = 0; pi < cfg.ebn0_db.size(); ++pi) {
        const double ebn0 = cfg.ebn0_db[pi];
        long long errors = 0, bits = 0, trials = 0;
        double sum_e = 0.0, sum_e2 = 0.0;
        while (trials < cfg.stop.max_trials) {
            const long long batch =
                std::min<long long>(kBatchTrials, cfg.stop.max_trials - trials);
            // round-robin the batch over at most `workers` tasks; results are
            // identical for any worker count because trial indices seed
            // every random stream
            const int tasks = static_cast<int>(std::min<long long>(workers, batch));
            std::vector<std::future<std::vector<TrialOutcome>>> futs;
            futs.reserve(tasks);
            for (int w = 0; w < tasks; ++w)
                futs.push_back(std::async(
                    tasks == 1 ? std::launch::deferred : std::launch::async,
                    [&ctx, pi, ebn0, trials, batch, w, tasks] {
                        std::vector<TrialOutcome> part;
                        for (long long b = w; b < batch; b += tasks)
                            part.push_back(run_trial(
                                ctx, pi, static_cast<std::uint64_t>(trials + b), ebn0));
                        return part;
                    }));
            for (auto& f : futs)
                for (const TrialOutcome& o : f.get()) {
                    errors += o.errors;
                    bits += o.bits;
                    sum_e += static_cast<double>(o.errors);
                    sum_e2 += static_cast<double>(o.errors) * o.errors;
                }
            trials += batch;
            if (errors >= cfg.stop.min_bit_errors && trials >= cfg.stop.min_trials) break;
        }

        BerPoint p;
        p.ebn0_db = ebn0;
        p.bits = bits;
        p.errors = errors;
        p.trials = trials;
        p.ber = bits > 0 ? static_cast<double>(errors) / bits : 0.0;
        if (errors > 0 && trials > 1) {
            // cluster (per-trial) standard error: fades correlate bits inside
            // a trial, so plain binomial bands would be too tight
            const double t = static_cast<double>(trials);
            const double mean_e = sum_e / t;
            const double var_e = std::max(0.0, (sum_e2 - t * mean_e * mean_e) / (t - 1.0));
            const double bits_per_trial = static_cast<double>(bits) / t;
            const double se = std::sqrt(var_e / t) / bits_per_trial;
            p.ci_low = std::max(0.0, p.ber - 1.96 * se);
            p.ci_high = std::min(1.0, p.ber + 1.96 * se);
        } else {
            p.ci_low = 0.0;
            p.ci_high = bits > 0 ? 3.0 / static_cast<double>(bits) : 0.0;
        }
        curve.points.push_back(p);
    }
    return curve;
}

std::vector<CpStudyEntry> cp_study(const ScenarioConfig& base,
                                   const std::vector<double>& cp_fractions) {
    std::vector<CpStudyEntry> out;
    for (double f : cp_fractions) {
        if (f < 0.0 || f >= 1.0)
            throw std::invalid_argument("cp_study: fractions must be in [0, 1)");
        ScenarioConfig cfg = base;
        cfg.ofdm.cp_fraction = f; // shared seed: common random numbers
        CpStudyEntry entry;
        entry.cp_fraction = f;
        entry.curve = run_monte_carlo(cfg);
        const auto& pts = entry.curve.points;
        if (pts.size() >= 2) {
            const auto& mid = pts[pts.size() / 2];
            const auto& top = pts.back();
            if (mid.ber > 0.0) entry.floor_flag = top.ber / mid.ber > 0.5;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

namespace {

template <typename Params, typename Apply>
CalibrationResult calibrate_impl(const ScenarioConfig& scenario,
                                 const std::vector<Params>& grid, Apply apply,
                                 DetectorKind kind) {
    if (grid.empty()) throw std::invalid_argument("calibrate: empty grid");
    CalibrationResult result;
    for (const auto& params : grid) {
        ScenarioConfig cfg = scenario; // same seed everywhere: common random numbers
        cfg.detector = kind;
        apply(cfg, params);
        const BerCurve curve = run_monte_carlo(cfg);
        double mean = 0.0;
        for (const auto& p : curve.points) mean += p.ber;
        mean /= static_cast<double>(curve.points.size());
        CalibrationPoint pt;
        pt.pso = cfg.pso;
        pt.de = cfg.de;
        pt.mean_ber = mean;
        result.surface.push_back(pt);
    }
    auto pop_of = [kind](const CalibrationPoint& p) {
        return kind == DetectorKind::Pso ? p.pso.population : p.de.population;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.surface.size(); ++i) {
        const auto& a = result.surface[i];
        const auto& b = result.surface[best];
        if (a.mean_ber < b.mean_ber ||
            (a.mean_ber == b.mean_ber && pop_of(a) < pop_of(b)))
            best = i;
    }
    result.best_index = best;
    return result;
}

} // namespace

CalibrationResult calibrate_pso(const ScenarioConfig& scenario,
                                const std::vector<PsoParams>& grid) {
    return calibrate_impl(
        scenario, grid,
        [](ScenarioConfig& cfg, const PsoParams& p) { cfg.pso = p; },
        DetectorKind::Pso);
}

CalibrationResult calibrate_de(const ScenarioConfig& scenario,
                               const std::vector<DeParams>& grid) {
    return calibrate_impl(
        scenario, grid,
        [](ScenarioConfig& cfg, const DeParams& p) { cfg.de = p; },
        DetectorKind::De);
}

} // namespace mosim
