#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace strobo::cli {

/// Column-oriented output written as CSV or as a JSON array of records.
struct Table {
  using Cell = std::variant<long long, double, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void writeTable(const Table& table, const std::filesystem::path& stem, OutputFormat format);

struct CommandResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json summary = nlohmann::json::object();
};

CommandResult runEvolve(const RunConfig& cfg);
CommandResult runSpectrum(const RunConfig& cfg);
CommandResult runQuasi(const RunConfig& cfg);
CommandResult runQfi(const RunConfig& cfg);
CommandResult runCfi(const RunConfig& cfg);
CommandResult runSweep(const RunConfig& cfg);

/// Full command-line entry point. Returns 0 on success, 2 on usage or
/// configuration errors and 1 when a computation fails.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strobo::cli
