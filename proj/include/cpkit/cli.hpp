#pragma once

#include <string>
#include <vector>

namespace cpkit::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kInternalError = 3,
};

/// Entry point for `cpkit <subcommand> [flags]`. Messages go to stderr; data
/// only to the declared output files.
int run(int argc, char** argv);

/// Same as run(argc, argv) with the program name omitted from `args`.
int run(const std::vector<std::string>& args);

}  // namespace cpkit::cli
