#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "taskload/cli/config.hpp"
#include "taskload/cli/csv.hpp"

namespace taskload::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitNumerical = 4,
    kExitComparison = 5,
};

struct Provenance {
    std::string tool_version = kToolVersion;
    std::string command;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    nlohmann::json config;  // resolved
};

Provenance make_provenance(const std::string& command, const Config& cfg);

/// One named table of a command result. Cells are already formatted text.
struct NamedTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct CommandResult {
    std::string command;
    Provenance provenance;
    std::vector<NamedTable> tables;
    std::vector<std::string> messages;  // for stdout
    int exit_code = kExitOk;
};

/// Runs one of generate, calibrate, analytic, simulate, compare, safe-zone.
/// Errors propagate as ConfigError / DataError / NumericalError.
CommandResult run_command(const std::string& command, const Config& cfg);

/// File name and contents per output: one CSV per table, or one JSON document.
std::vector<std::pair<std::string, std::string>> render(const CommandResult& r, OutputFormat format);

/// Provenance block of a rendered CSV or JSON output.
Provenance read_provenance(const std::string& content);

/// The output with its provenance removed: CSV comment lines dropped, or the
/// JSON document without its "provenance" member.
std::string numeric_payload(const std::string& content);

/// Re-runs the command recorded in a rendered output.
CommandResult replay(const std::string& content);

/// Table `name` from a CSV file, or from the "tables" member of a JSON output.
CsvTable load_table(const std::string& path, const std::string& name);

/// Maps the error categories to exit codes.
int exit_code_for(const std::exception& e);

/// Command-line entry point.
int run_cli(int argc, char** argv);

}  // namespace taskload::cli
