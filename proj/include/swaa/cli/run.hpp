#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "swaa/cli/config.hpp"

namespace swaa::cli {

enum class Command { check, solve, compare, breaking };

std::optional<Command> parse_command(const std::string& name);

/// Runs one pipeline and writes its artifacts under `out_dir`:
///   check    report.json
///   solve    snapshots.csv, ledger.csv, report.json
///   compare  as solve, plus errors.csv
///   breaking breaking.json, breaking_series.csv
/// Returns the process exit code. Solver errors propagate as swaa::Error.
int run(const RunConfig& config, Command command, const std::string& out_dir, std::ostream& log);

}  // namespace swaa::cli
