// commands.hpp: analyses behind the lgap subcommands.

#pragma once

#include <string>
#include <vector>

#include "lgap/cli/config.hpp"

namespace lgap::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitStructure = 4,
};

struct CommandResult {
    json document;
    /// header row first; empty when the command has no tabular form
    std::vector<std::vector<std::string>> table;
    int exit_code = kExitOk;
    /// diagnostics for standard error
    std::vector<std::string> messages;
};

std::vector<std::string> command_names();

/// Runs one subcommand. Library errors propagate as exceptions; structural
/// verification failures are reported through exit_code.
CommandResult run_command(const std::string& command, const RunConfig& config, int threads = 1);

std::string to_csv(const std::vector<std::vector<std::string>>& table);

} // namespace lgap::cli
