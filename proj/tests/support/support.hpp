#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cop/diagnostic.hpp"

namespace cop::testing {

struct RunResult {
  int status = 0;
  std::string out;
  std::string err;
};

/// Runs a program held in memory with the CLI's pipeline and exit codes.
RunResult run_source(std::string_view source, bool trace = false);

/// Static diagnostics of a program (lex, parse, table, bodies); empty if clean.
std::vector<Diagnostic> static_errors(std::string_view source);

/// Codes of static_errors, in order.
std::vector<std::string> static_codes(std::string_view source);

std::string read_text(const std::string& path);

/// Splits on '\n'; a trailing newline does not produce an empty last line.
std::vector<std::string> lines(std::string_view text);

}  // namespace cop::testing
