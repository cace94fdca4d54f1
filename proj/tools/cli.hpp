#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qdelta::cli {

/// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kComputationError = 3;

/// Runs one command line (without the program name). Results go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdelta::cli
