#pragma once

// Executes a run configuration: writes the scenario's CSV files and a
// manifest.json into an output directory.

#include <filesystem>
#include <ostream>

#include "eitcav/config.hpp"

namespace eitcav {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitNotConverged = 4,
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  int threads = 0;  ///< 0: hardware concurrency
};

/// Throws on failure; the validate scenario returns kExitNumeric if any check fails.
int run(const RunConfig& config, const RunOptions& options, std::ostream& log);

/// Maps an exception thrown by parsing or running to its exit code.
int exit_code_for(const std::exception& e);

const char* version();

}  // namespace eitcav
