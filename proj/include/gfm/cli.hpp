#pragma once

// Config-driven experiment runner: parses a JSON experiment description, runs
// one task through the library and writes a CSV report, a JSON manifest and a
// separate timing file.

#include "gfm/multiplier.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gfm {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class ExitCode : int { Ok = 0, ConfigFailure = 1, ToleranceViolated = 2 };

using ReportCell = std::variant<std::string, double, std::int64_t>;

struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<ReportCell>> rows;
};

enum class ReportFormat { Csv, Json };

/// Doubles as %.17g, '.' decimal separator, '\n' line endings. Throws
/// PreconditionError for a table without rows and ConfigError when the path
/// cannot be written.
void emit_report(const ReportTable& table, const std::filesystem::path& path, ReportFormat format);
std::string format_csv(const ReportTable& table);
nlohmann::json report_to_json(const ReportTable& table);
ReportTable report_from_json(const nlohmann::json& j);

struct KernelDecaySettings {
    double c = 1.0;
    GroupPoint z;
    std::vector<int> windows;
};

struct ExperimentConfig {
    std::string task;  ///< transform, check-symbol, tl-norm, kernel-decay, bound-sweep, selftest
    GroupDescriptor group;
    std::vector<double> cutoffs;
    std::vector<ScalarProfile> symbols;
    std::vector<NormSpec> specs;
    std::uint64_t seed = 0;
    std::string output = "out";
    std::map<std::string, double> tolerances;
    std::string condition = "marcinkiewicz";  ///< check-symbol: marcinkiewicz, hormander-mihlin, weak-marcinkiewicz
    std::optional<double> order;              ///< kappa, s or s0 depending on the condition
    int functions = 8;
    double oversample = 1.0;
    EnsembleConfig ensemble;
    KernelDecaySettings kernel;
    nlohmann::json echo;  ///< normalized config, written to the manifest
};

/// Validates against the schema in docs/; unknown fields raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Applies --seed and --tol overrides and refreshes the echo. Unknown
/// tolerance names raise ConfigError.
void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     const std::vector<std::pair<std::string, double>>& tolerances);

/// Tolerance names accepted by a task with their defaults.
std::map<std::string, double> default_tolerances(const std::string& task);

/// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct RunResult {
    ExitCode code = ExitCode::Ok;
    ReportTable table;
    nlohmann::json summary;
    std::vector<std::string> violations;
};

/// Runs the task without touching the filesystem.
RunResult execute(const ExperimentConfig& cfg);

/// Runs the task and writes report.csv, manifest.json and timing.json into
/// out_dir. A failed run still flushes its partial rows followed by a
/// "failed" marker row.
ExitCode run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Command-line entry: --config PATH, --seed N, --out DIR, --tol NAME=VALUE.
int run_cli(int argc, const char* const* argv);

}  // namespace gfm
