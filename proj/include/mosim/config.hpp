#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mosim/harness.hpp"
#include "mosim/jakes.hpp"

namespace mosim {

// Raised for malformed files, missing keys, and out-of-range values; the CLI
// maps it to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Sectioned key-value text: `[section]` headers, `key = value` lines, `#`
// comments. Keys are addressed as "section.key".
class ConfigMap {
  public:
    static ConfigMap load_file(const std::string& path);
    static ConfigMap parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    // comma-separated; "inf" allowed when allow_inf
    std::vector<double> get_double_list(const std::string& key, bool allow_inf = false) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    void mark_consumed(const std::string& key) const;
    // throws listing every key never consumed (strict mode)
    void reject_unconsumed() const;
    const std::map<std::string, std::string>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }

  private:
    std::map<std::string, std::string> entries_;
    mutable std::set<std::string> consumed_;
    std::string origin_;
};

struct JakesValidationConfig {
    JakesConfig jakes;
    std::size_t num_samples = 0;
    void validate() const;
};

// Builds a validated ScenarioConfig; collects every missing required key into
// a single ConfigError.
ScenarioConfig parse_scenario(const ConfigMap& cfg);

JakesValidationConfig parse_jakes_validation(const ConfigMap& cfg);

DetectorKind parse_detector_kind(const std::string& name);

} // namespace mosim
