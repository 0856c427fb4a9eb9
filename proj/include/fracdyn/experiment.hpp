// Runs one configured experiment and writes its files:
//   metadata.json  resolved config and library version
//   summary.json   pass/fail against the configured tolerance plus metrics
//   *.csv          trajectories, snapshots, per-k tables (17 significant digits)
//   report.json    structured reports where the experiment produces one
#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdyn/config.hpp"

namespace fracdyn::experiment {

inline constexpr const char* kLibraryVersion = "fracdyn 0.1.0";

enum ExitCode : int { ok = 0, validation_error = 1, numerical_failure = 2, io_error = 3 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunResult {
    bool passed = false;
    nlohmann::json metrics;
    std::vector<std::filesystem::path> files;
};

// Throws ValidationError, NumericalError or IoError.
RunResult run(const config::ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// run() with errors mapped to exit codes and reported on `err`. A completed
// run whose summary fails its tolerance returns numerical_failure.
int run_and_report(const config::ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& err);

} // namespace fracdyn::experiment
