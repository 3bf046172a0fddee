#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specavg {

// Flat key-value view of a run configuration file. Lines are "key = value",
// '#' starts a comment, dots in keys express hierarchy. Every randomized
// experiment must carry an explicit seed.
class ExperimentConfig {
public:
    static ExperimentConfig parse_file(const std::filesystem::path& file);
    static ExperimentConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;                   // throws if missing
    std::string get_or(const std::string& key, std::string def) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double def) const;
    int get_int(const std::string& key) const;
    int get_int_or(const std::string& key, int def) const;
    std::uint64_t get_seed() const;                                  // throws if missing
    std::vector<double> get_list(const std::string& key) const;      // comma separated

    void set(const std::string& key, std::string value);
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool greater_is_pass = false;  // value >= tolerance instead of <=
};

struct RunReport {
    std::string experiment;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;  // files written, relative to out dir
    double wall_seconds = 0.0;

    bool all_pass() const;
};

// Exit-code contract of the driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;
inline constexpr int kExitAcceptanceFailure = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs one experiment; writes all artifacts inside out_dir and returns the
// report. Throws ConfigError for malformed configs and std::runtime_error
// for numerical failures.
RunReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Stable machine-readable catalog: experiment kind -> statement exercised.
std::string experiment_catalog_json();

// Known experiment kinds, in catalog order.
std::vector<std::string> experiment_kinds();

std::string report_to_json(const RunReport& rep);

}  // namespace specavg
