#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nqs::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration or
/// unreadable input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name, e.g. {"optimize", "--model", "tfi1d", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Splices the flat `key = value` entries of `--config FILE` into the
/// argument list as `--key=value`, skipping keys already given as flags so
/// that flags win. Array values expand to repeated flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace nqs::cli
