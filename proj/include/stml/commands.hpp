#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "stml/config.hpp"
#include "stml/error.hpp"

namespace stml::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_config = 3,
    exit_below_threshold = 4,
    exit_numerical = 5,
    exit_io = 6,
};

class UsageError : public Error {
public:
    using Error::Error;
};

/// Every requested bias lies inside the elastic gap of all channels.
class BelowThresholdError : public Error {
public:
    using Error::Error;
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    /// Explicit worker count; falls back to STML_THREADS, then the config, then all cores.
    std::optional<unsigned> threads;
    bool log10 = false;
};

/// Worker count after applying the flag / STML_THREADS / config precedence.
/// A malformed STML_THREADS is a UsageError.
unsigned effective_threads(const RunOptions& options, const RunConfig& config);

/// Each command writes its files into options.out_dir together with
/// effective_config.json, all or nothing, and a short report to `report`.
/// Errors are thrown; `run` maps them to exit codes.
void cmd_density_info(const RunConfig& config, const RunOptions& options, std::ostream& report);
void cmd_map(const RunConfig& config, const RunOptions& options, std::ostream& report);
void cmd_bias_sweep(const RunConfig& config, const RunOptions& options, std::ostream& report);
void cmd_kinetics(const RunConfig& config, const RunOptions& options, std::ostream& report);

/// Loads the config (defaults when `config_path` is empty), dispatches on
/// `command` and converts exceptions to an exit code with a message on `err`.
int run(const std::string& command, const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& report, std::ostream& err);

}  // namespace stml::cli
