#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cop::cli {

enum ExitCode : int {
  kSuccess = 0,
  kRuntimeError = 1,
  kStaticError = 2,
  kUsageError = 3,
};

inline constexpr const char* kUsage =
    "usage: cop run <file> [--trace] | cop check <file> | cop parse <file> --dump";

/// Full driver: `args[0]` is the program name. Program output goes to `out`,
/// diagnostics and traces to `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace cop::cli
