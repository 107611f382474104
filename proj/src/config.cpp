#include "mosim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mosim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

ConfigMap ConfigMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

ConfigMap ConfigMap::parse(const std::string& text, const std::string& origin) {
    ConfigMap cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!cfg.entries_.emplace(full, value).second)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                              full + "'");
    }
    return cfg;
}

bool ConfigMap::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    consumed_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "': not a number: '" + v + "'");
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    consumed_.insert(key);
    return has(key) ? get_double(key) : fallback;
}

long long ConfigMap::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t used = 0;
        const long long d = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "': not an integer: '" + v + "'");
    }
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
    consumed_.insert(key);
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
    consumed_.insert(key);
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    try {
        std::size_t used = 0;
        const std::uint64_t d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "': not an unsigned integer: '" + v + "'");
    }
}

std::vector<std::string> ConfigMap::get_string_list(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw ConfigError(origin_ + ": key '" + key + "': empty list");
    return out;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key, bool allow_inf) const {
    std::vector<double> out;
    for (const std::string& item : get_string_list(key)) {
        if (allow_inf && lower(item) == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        try {
            std::size_t used = 0;
            const double d = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(d);
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key '" + key + "': not a number: '" + item + "'");
        }
    }
    return out;
}

void ConfigMap::mark_consumed(const std::string& key) const { consumed_.insert(key); }

void ConfigMap::reject_unconsumed() const {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : entries_)
        if (!consumed_.count(k)) unknown.push_back(k);
    if (!unknown.empty()) {
        std::string msg = origin_ + ": unknown keys:";
        for (const auto& k : unknown) msg += " '" + k + "'";
        throw ConfigError(msg);
    }
}

DetectorKind parse_detector_kind(const std::string& name) {
    const std::string n = lower(name);
    if (n == "ml") return DetectorKind::Ml;
    if (n == "zf") return DetectorKind::Zf;
    if (n == "mmse") return DetectorKind::Mmse;
    if (n == "pso") return DetectorKind::Pso;
    if (n == "de") return DetectorKind::De;
    throw ConfigError("unknown detector '" + name + "' (expected ml|zf|mmse|pso|de)");
}

ScenarioConfig parse_scenario(const ConfigMap& cfg) {
    static const char* required[] = {
        "ofdm.num_subcarriers", "ofdm.cp_fraction", "ofdm.bandwidth_hz",
        "modulation.order",     "mimo.n_t",         "mimo.n_r",
        "detector.kind",        "channel.mode",     "run.ebn0_db",
    };
    std::vector<std::string> missing;
    for (const char* k : required)
        if (!cfg.has(k)) missing.push_back(k);
    if (!missing.empty()) {
        std::string msg = cfg.origin() + ": missing required keys:";
        for (const auto& k : missing) msg += " '" + k + "'";
        throw ConfigError(msg);
    }

    ScenarioConfig s;
    s.ofdm.num_subcarriers = static_cast<int>(cfg.get_int("ofdm.num_subcarriers"));
    s.ofdm.cp_fraction = cfg.get_double("ofdm.cp_fraction");
    s.ofdm.bandwidth_hz = cfg.get_double("ofdm.bandwidth_hz");
    s.mod_order = static_cast<int>(cfg.get_int("modulation.order"));
    s.n_t = static_cast<int>(cfg.get_int("mimo.n_t"));
    s.n_r = static_cast<int>(cfg.get_int("mimo.n_r"));
    const std::string array = lower(cfg.get_string("mimo.array", "ula"));
    if (array == "ula")
        s.array = ArrayKind::Ula;
    else if (array == "ura")
        s.array = ArrayKind::Ura;
    else
        throw ConfigError(cfg.origin() + ": mimo.array must be ula or ura");
    s.rho = cfg.get_double("mimo.rho", 0.0);
    s.ura_nx = static_cast<int>(cfg.get_int("mimo.ura_nx", 0));
    s.ura_ny = static_cast<int>(cfg.get_int("mimo.ura_ny", 0));

    s.detector = parse_detector_kind(cfg.get_string("detector.kind"));
    s.pso.population = static_cast<int>(cfg.get_int("detector.pso_population", s.pso.population));
    s.pso.iterations = static_cast<int>(cfg.get_int("detector.pso_iterations", s.pso.iterations));
    s.pso.cognitive = cfg.get_double("detector.pso_cognitive", s.pso.cognitive);
    s.pso.social = cfg.get_double("detector.pso_social", s.pso.social);
    s.pso.inertia = cfg.get_double("detector.pso_inertia", s.pso.inertia);
    s.pso.inertia_decay = cfg.get_double("detector.pso_inertia_decay", s.pso.inertia_decay);
    s.pso.v_max = cfg.get_double("detector.pso_v_max", s.pso.v_max);
    s.de.population = static_cast<int>(cfg.get_int("detector.de_population", s.de.population));
    s.de.generations =
        static_cast<int>(cfg.get_int("detector.de_generations", s.de.generations));
    s.de.f_mut = cfg.get_double("detector.de_f_mut", s.de.f_mut);
    s.de.f_cr = cfg.get_double("detector.de_f_cr", s.de.f_cr);

    const std::string mode = lower(cfg.get_string("channel.mode"));
    if (mode == "block-static")
        s.channel_mode = ChannelMode::BlockStatic;
    else if (mode == "multipath-jakes")
        s.channel_mode = ChannelMode::MultipathJakes;
    else
        throw ConfigError(cfg.origin() +
                          ": channel.mode must be block-static or multipath-jakes");
    s.tau_rms_s = cfg.get_double("channel.tau_rms_s", s.tau_rms_s);
    s.power_floor_db = cfg.get_double("channel.power_floor_db", s.power_floor_db);
    s.doppler_hz = cfg.get_double("channel.doppler_hz", s.doppler_hz);
    s.jakes_oscillators =
        static_cast<int>(cfg.get_int("channel.jakes_oscillators", s.jakes_oscillators));

    s.ebn0_db = cfg.get_double_list("run.ebn0_db", /*allow_inf=*/true);
    s.symbols_per_trial =
        static_cast<int>(cfg.get_int("run.symbols_per_trial", s.symbols_per_trial));
    s.stop.min_bit_errors = cfg.get_int("run.min_bit_errors", s.stop.min_bit_errors);
    s.stop.max_trials = cfg.get_int("run.max_trials", s.stop.max_trials);
    s.stop.min_trials = cfg.get_int("run.min_trials", s.stop.min_trials);
    s.seed = cfg.get_u64("run.seed", s.seed);

    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(cfg.origin() + ": " + e.what());
    }
    return s;
}

JakesValidationConfig parse_jakes_validation(const ConfigMap& cfg) {
    static const char* required[] = {"jakes.num_oscillators", "jakes.doppler_hz",
                                     "jakes.num_samples", "jakes.num_waveforms"};
    std::vector<std::string> missing;
    for (const char* k : required)
        if (!cfg.has(k)) missing.push_back(k);
    if (!missing.empty()) {
        std::string msg = cfg.origin() + ": missing required keys:";
        for (const auto& k : missing) msg += " '" + k + "'";
        throw ConfigError(msg);
    }
    JakesValidationConfig out;
    out.jakes.num_oscillators = static_cast<int>(cfg.get_int("jakes.num_oscillators"));
    out.jakes.max_doppler_hz = cfg.get_double("jakes.doppler_hz");
    out.jakes.num_waveforms = static_cast<int>(cfg.get_int("jakes.num_waveforms"));
    // default sampling: 100 samples per Doppler period
    out.jakes.sample_period_s = cfg.get_double(
        "jakes.sample_period_s",
        out.jakes.max_doppler_hz > 0.0 ? 1.0 / (100.0 * out.jakes.max_doppler_hz) : 1.0);
    out.num_samples = static_cast<std::size_t>(cfg.get_int("jakes.num_samples"));
    out.validate();
    return out;
}

void JakesValidationConfig::validate() const {
    jakes.validate();
    if (num_samples < 2) throw ConfigError("jakes.num_samples must be >= 2");
}

} // namespace mosim
