// mosim: MIMO-OFDM link simulator command-line front end.
//
// Subcommands dispatch library experiments and write CSV artifacts plus a
// JSON run manifest into the output directory. Exit codes: 0 success,
// 2 configuration error, 3 runtime error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mosim/analytic.hpp"
#include "mosim/config.hpp"
#include "mosim/harness.hpp"
#include "mosim/jakes.hpp"
#include "mosim/pdp.hpp"
#include "mosim/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    bool strict = false;
    bool export_waveforms = false;
};

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

class RunWriter {
  public:
    RunWriter(std::string subcommand, const CliOptions& opts, const mosim::ConfigMap* cfg)
        : subcommand_(std::move(subcommand)), out_dir_(opts.out_dir),
          started_(std::chrono::steady_clock::now()) {
        fs::create_directories(out_dir_);
        manifest_["tool"] = "mosim";
        manifest_["version"] = kVersion;
        manifest_["subcommand"] = subcommand_;
        manifest_["workers"] = opts.workers;
        manifest_["strict"] = opts.strict;
        json snapshot = json::object();
        if (cfg != nullptr)
            for (const auto& [k, v] : cfg->entries()) snapshot[k] = v;
        manifest_["config"] = snapshot;
    }

    void set_seed(std::uint64_t seed) { manifest_["seed"] = seed; }

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
        const fs::path path = fs::path(out_dir_) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        auto emit = [&out](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                out << csv_quote(row[i]);
            }
            out << '\n';
        };
        emit(header);
        for (const auto& r : rows) emit(r);
        out.close();
        outputs_.push_back(name);
    }

    void finish() {
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - started_)
                                 .count();
        manifest_["duration_seconds"] = elapsed;
        json outs = json::array();
        for (const auto& name : outputs_) {
            json o;
            o["file"] = name;
            o["fnv1a64"] = digest(fs::path(out_dir_) / name);
            outs.push_back(o);
        }
        manifest_["outputs"] = outs;
        std::ofstream out(fs::path(out_dir_) / "manifest.json", std::ios::binary);
        out << manifest_.dump(2) << '\n';
    }

  private:
    static std::string digest(const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::uint64_t h = 0xcbf29ce484222325ULL;
        char c;
        while (in.get(c)) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        std::ostringstream os;
        os << std::hex << h;
        return os.str();
    }

    std::string subcommand_;
    std::string out_dir_;
    std::chrono::steady_clock::time_point started_;
    json manifest_;
    std::vector<std::string> outputs_;
};

mosim::ConfigMap load_config(const CliOptions& opts) {
    if (opts.config_path.empty()) throw mosim::ConfigError("--config is required");
    return mosim::ConfigMap::load_file(opts.config_path);
}

mosim::ScenarioConfig scenario_from(const mosim::ConfigMap& cfg, const CliOptions& opts) {
    mosim::ScenarioConfig s = mosim::parse_scenario(cfg);
    if (opts.seed_set) s.seed = opts.seed;
    s.workers = opts.workers;
    return s;
}

std::string scenario_id(const mosim::ScenarioConfig& s) {
    std::ostringstream os;
    os << mosim::detector_name(s.detector) << "_" << s.n_t << "x" << s.n_r << "_"
       << (s.array == mosim::ArrayKind::Ula ? "ula" : "ura") << "_rho" << s.rho << "_n"
       << s.ofdm.num_subcarriers;
    return os.str();
}

void append_curve_rows(std::vector<std::vector<std::string>>& rows,
                       const mosim::ScenarioConfig& s, const mosim::BerCurve& curve) {
    for (const auto& p : curve.points)
        rows.push_back({scenario_id(s), mosim::detector_name(s.detector),
                        s.array == mosim::ArrayKind::Ula ? "ula" : "ura", fmt(s.rho),
                        fmt(p.ebn0_db), fmt(p.ber), fmt(p.ci_low), fmt(p.ci_high),
                        std::to_string(p.bits), std::to_string(p.errors)});
}

const std::vector<std::string> kBerHeader = {"scenario_id", "detector", "array", "rho",
                                             "ebn0_db",     "ber",      "ci_low", "ci_high",
                                             "bits",        "errors"};

int cmd_jakes_validate(const CliOptions& opts) {
    const auto cfg = load_config(opts);
    const auto jv = mosim::parse_jakes_validation(cfg);
    if (opts.strict) cfg.reject_unconsumed();
    RunWriter writer("jakes-validate", opts, &cfg);
    const std::uint64_t seed = opts.seed_set ? opts.seed : cfg.get_u64("run.seed", 1);
    writer.set_seed(seed);

    const auto waves = mosim::generate_jakes_waveforms(jv.jakes, jv.num_samples, seed);
    const auto rep = mosim::validate_jakes(waves, jv.jakes.max_doppler_hz);

    std::vector<std::vector<std::string>> rows = {
        {"ks_amplitude", fmt(rep.ks_amplitude)},
        {"ks_phase", fmt(rep.ks_phase)},
        {"autocorr_rms_error", fmt(rep.autocorr_rms_error)},
        {"max_cross_correlation", fmt(rep.max_cross_correlation)},
        {"psd_peak_low_hz", fmt(rep.psd_peak_low_hz)},
        {"psd_peak_high_hz", fmt(rep.psd_peak_high_hz)},
        {"psd_bin_width_hz", fmt(rep.psd_bin_width_hz)},
    };
    writer.write_csv("jakes_report.csv", {"metric", "value"}, rows);

    if (opts.export_waveforms) {
        std::vector<std::vector<std::string>> wrows;
        for (const auto& w : waves)
            for (std::size_t i = 0; i < w.samples.size(); ++i)
                wrows.push_back({std::to_string(w.waveform_index), std::to_string(i),
                                 fmt(w.samples[i].real()), fmt(w.samples[i].imag())});
        writer.write_csv("waveforms.csv", {"waveform", "sample_index", "re", "im"}, wrows);
    }
    writer.finish();
    return 0;
}

int cmd_ofdm_ber(const CliOptions& opts) {
    const auto cfg = load_config(opts);
    const auto base = scenario_from(cfg, opts);
    std::vector<int> subcarriers;
    if (cfg.has("sweep.subcarriers"))
        for (double v : cfg.get_double_list("sweep.subcarriers"))
            subcarriers.push_back(static_cast<int>(v));
    else
        subcarriers.push_back(base.ofdm.num_subcarriers);
    if (opts.strict) cfg.reject_unconsumed();

    RunWriter writer("ofdm-ber", opts, &cfg);
    writer.set_seed(base.seed);
    std::vector<std::vector<std::string>> rows;
    for (int n : subcarriers) {
        mosim::ScenarioConfig s = base;
        s.ofdm.num_subcarriers = n;
        append_curve_rows(rows, s, mosim::run_monte_carlo(s));
    }
    writer.write_csv("ber.csv", kBerHeader, rows);

    std::vector<std::vector<std::string>> ref;
    for (double e : base.ebn0_db)
        ref.push_back({fmt(e), fmt(mosim::analytic_ber_rayleigh(base.mod_order, e))});
    writer.write_csv("reference.csv", {"ebn0_db", "analytic_ber"}, ref);
    writer.finish();
    return 0;
}

int cmd_cp_study(const CliOptions& opts) {
    const auto cfg = load_config(opts);
    const auto base = scenario_from(cfg, opts);
    const auto fractions = cfg.get_double_list("cp_study.fractions");
    if (opts.strict) cfg.reject_unconsumed();

    RunWriter writer("cp-study", opts, &cfg);
    writer.set_seed(base.seed);
    const auto entries = mosim::cp_study(base, fractions);
    std::vector<std::vector<std::string>> rows, flags;
    for (const auto& entry : entries) {
        mosim::ScenarioConfig s = base;
        s.ofdm.cp_fraction = entry.cp_fraction;
        append_curve_rows(rows, s, entry.curve);
        flags.push_back({fmt(entry.cp_fraction), entry.floor_flag ? "1" : "0"});
    }
    writer.write_csv("ber.csv", kBerHeader, rows);
    writer.write_csv("cp_flags.csv", {"cp_fraction", "floor_flag"}, flags);
    writer.finish();
    return 0;
}

int cmd_mimo_ber(const CliOptions& opts) {
    const auto cfg = load_config(opts);
    const auto base = scenario_from(cfg, opts);

    std::vector<mosim::DetectorKind> detectors = {base.detector};
    if (cfg.has("sweep.detectors")) {
        detectors.clear();
        for (const auto& d : cfg.get_string_list("sweep.detectors"))
            detectors.push_back(mosim::parse_detector_kind(d));
    }
    std::vector<std::pair<int, int>> antennas = {{base.n_t, base.n_r}};
    if (cfg.has("sweep.antennas")) {
        antennas.clear();
        for (const auto& a : cfg.get_string_list("sweep.antennas")) {
            const auto x = a.find('x');
            if (x == std::string::npos)
                throw mosim::ConfigError("sweep.antennas entries must look like 4x4");
            antennas.emplace_back(std::stoi(a.substr(0, x)), std::stoi(a.substr(x + 1)));
        }
    }
    std::vector<double> rhos = {base.rho};
    if (cfg.has("sweep.rhos")) rhos = cfg.get_double_list("sweep.rhos");
    if (opts.strict) cfg.reject_unconsumed();

    RunWriter writer("mimo-ber", opts, &cfg);
    writer.set_seed(base.seed);
    std::vector<std::vector<std::string>> rows;
    for (const auto& [nt, nr] : antennas)
        for (double rho : rhos)
            for (auto det : detectors) {
                mosim::ScenarioConfig s = base;
                s.n_t = nt;
                s.n_r = nr;
                s.rho = rho;
                s.detector = det;
                append_curve_rows(rows, s, mosim::run_monte_carlo(s));
            }
    writer.write_csv("ber.csv", kBerHeader, rows);
    writer.finish();
    return 0;
}

int cmd_calibrate(const CliOptions& opts) {
    const auto cfg = load_config(opts);
    const auto base = scenario_from(cfg, opts);
    const std::string target = cfg.get_string("calibrate.target");
    const auto populations = cfg.get_double_list("calibrate.populations");
    const auto iterations = cfg.get_double_list("calibrate.iterations");
    if (opts.strict) cfg.reject_unconsumed();

    RunWriter writer("calibrate", opts, &cfg);
    writer.set_seed(base.seed);
    mosim::CalibrationResult result;
    if (target == "pso") {
        std::vector<mosim::PsoParams> grid;
        for (double p : populations)
            for (double it : iterations) {
                mosim::PsoParams params = base.pso;
                params.population = static_cast<int>(p);
                params.iterations = static_cast<int>(it);
                grid.push_back(params);
            }
        result = mosim::calibrate_pso(base, grid);
    } else if (target == "de") {
        std::vector<mosim::DeParams> grid;
        for (double p : populations)
            for (double it : iterations) {
                mosim::DeParams params = base.de;
                params.population = static_cast<int>(p);
                params.generations = static_cast<int>(it);
                grid.push_back(params);
            }
        result = mosim::calibrate_de(base, grid);
    } else {
        throw mosim::ConfigError("calibrate.target must be pso or de");
    }

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < result.surface.size(); ++i) {
        const auto& pt = result.surface[i];
        const int pop = target == "pso" ? pt.pso.population : pt.de.population;
        const int its = target == "pso" ? pt.pso.iterations : pt.de.generations;
        rows.push_back({std::to_string(pop), std::to_string(its), fmt(pt.mean_ber),
                        i == result.best_index ? "1" : "0"});
    }
    writer.write_csv("surface.csv", {"population", "iterations", "mean_ber", "best"}, rows);
    writer.finish();
    return 0;
}

int cmd_complexity(const CliOptions& opts) {
    mosim::ConfigMap cfg;
    bool have_cfg = false;
    if (!opts.config_path.empty()) {
        cfg = mosim::ConfigMap::load_file(opts.config_path);
        have_cfg = true;
    }
    std::vector<int> nts = {2, 4, 8, 16};
    mosim::FlopAssumptions assumptions;
    if (have_cfg) {
        if (cfg.has("complexity.nt_range")) {
            nts.clear();
            for (double v : cfg.get_double_list("complexity.nt_range"))
                nts.push_back(static_cast<int>(v));
        }
        assumptions.iterations =
            static_cast<int>(cfg.get_int("complexity.iterations", assumptions.iterations));
        assumptions.pop_per_dim =
            static_cast<int>(cfg.get_int("complexity.pop_per_dim", assumptions.pop_per_dim));
        assumptions.mod_order =
            static_cast<int>(cfg.get_int("complexity.mod_order", assumptions.mod_order));
        if (opts.strict) cfg.reject_unconsumed();
    }

    RunWriter writer("complexity", opts, have_cfg ? &cfg : nullptr);
    writer.set_seed(opts.seed_set ? opts.seed : 0);
    const auto report = mosim::relative_complexity(nts, assumptions);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : report.rows)
        rows.push_back({mosim::detector_name(r.detector), std::to_string(r.n_t),
                        std::to_string(r.n_r), fmt(r.flops), fmt(r.ratio_vs_ml),
                        fmt(r.ratio_vs_zf)});
    writer.write_csv("flops.csv",
                     {"detector", "nt", "nr", "flops", "ratio_vs_ml", "ratio_vs_zf"}, rows);
    writer.finish();
    return 0;
}

int cmd_sensibility(const CliOptions& opts) {
    const auto cfg = load_config(opts);
    const auto base = scenario_from(cfg, opts);
    std::vector<mosim::DetectorKind> detectors = {base.detector};
    if (cfg.has("sensibility.detectors")) {
        detectors.clear();
        for (const auto& d : cfg.get_string_list("sensibility.detectors"))
            detectors.push_back(mosim::parse_detector_kind(d));
    }
    std::vector<double> rhos = {0.5, 0.9};
    if (cfg.has("sensibility.rhos")) rhos = cfg.get_double_list("sensibility.rhos");
    if (opts.strict) cfg.reject_unconsumed();

    RunWriter writer("sensibility", opts, &cfg);
    writer.set_seed(base.seed);
    std::vector<std::vector<std::string>> rows;
    for (auto det : detectors) {
        mosim::ScenarioConfig ref = base;
        ref.detector = det;
        ref.rho = 0.0;
        const auto ref_curve = mosim::run_monte_carlo(ref);
        const auto& rp = ref_curve.points.front();
        for (double rho : rhos) {
            mosim::ScenarioConfig s = ref;
            s.rho = rho;
            const auto curve = mosim::run_monte_carlo(s);
            const auto& p = curve.points.front();
            // zero measured errors: kappa is undefined; report the "< 1/bits"
            // bound instead of a log of zero
            std::string kappa = "nan";
            if (p.errors > 0 && rp.errors > 0)
                kappa = fmt(mosim::sensibility_kappa(p.ber, rp.ber));
            rows.push_back({mosim::detector_name(det), fmt(rho), fmt(p.ber),
                            std::to_string(p.errors), fmt(rp.ber),
                            std::to_string(rp.errors), kappa});
        }
    }
    writer.write_csv(
        "kappa.csv",
        {"detector", "rho", "ber", "errors", "ber_ref", "errors_ref", "kappa"}, rows);
    writer.finish();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mosim: MIMO-OFDM link-level simulator"};
    app.require_subcommand(1);

    CliOptions opts;
    const std::vector<std::string> names = {"jakes-validate", "ofdm-ber", "cp-study",
                                            "mimo-ber",       "calibrate", "complexity",
                                            "sensibility"};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "scenario config file");
        sub->add_option("--out", opts.out_dir, "output directory")->required();
        sub->add_option("--seed", opts.seed, "master seed override")
            ->each([&opts](const std::string&) { opts.seed_set = true; });
        sub->add_option("--workers", opts.workers, "worker thread count (0 = cores)");
        sub->add_flag("--strict", opts.strict, "reject unknown config keys");
        if (name == "jakes-validate")
            sub->add_flag("--export-waveforms", opts.export_waveforms,
                          "also write raw waveform samples");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (sub == "jakes-validate") return cmd_jakes_validate(opts);
        if (sub == "ofdm-ber") return cmd_ofdm_ber(opts);
        if (sub == "cp-study") return cmd_cp_study(opts);
        if (sub == "mimo-ber") return cmd_mimo_ber(opts);
        if (sub == "calibrate") return cmd_calibrate(opts);
        if (sub == "complexity") return cmd_complexity(opts);
        if (sub == "sensibility") return cmd_sensibility(opts);
        std::cerr << "unknown subcommand " << sub << "\n";
        return 2;
    } catch (const mosim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
