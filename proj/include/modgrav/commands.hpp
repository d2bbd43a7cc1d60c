#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "modgrav/config.hpp"

namespace modgrav {

// Command-line overrides applied on top of the loaded config.
struct CommandOptions {
    std::string out_path;  // scan base path / report file; empty = default
    int grid_nx = 0;       // 0 = keep config value
    int grid_ny = 0;
    std::optional<ScanMetric> metric;
    std::optional<bool> probe_screening;
    double casimir_temperature_K = 300.0;
    int workers = 0;  // 0 = MODGRAV_THREADS or hardware concurrency
};

// Runs one subcommand and streams its JSON report to `out`. Returns the
// process exit code: 0 success, 2 when verify-qfi sees a deviation beyond
// tolerance. Validation problems throw validation_error (exit 1), solver
// problems numerical_error (exit 2); the mapping lives in the CLI driver.
int execute(const std::string& command, const RunConfig& cfg, const CommandOptions& opts,
            std::ostream& out);

}  // namespace modgrav
