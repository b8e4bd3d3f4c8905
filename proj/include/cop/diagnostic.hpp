#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cop {

/// 1-based position in a source file. Columns count bytes.
struct SourceLoc {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

/// A located, coded error. Static errors (lex, parse, resolve) and runtime
/// errors share this shape; only their rendering differs.
struct Diagnostic {
  std::string code;
  std::string message;
  SourceLoc loc;
};

/// `error: <CODE> at <line>:<col>: <message>`
std::string format_static(const Diagnostic& d);

/// `runtime error: <CODE>: <message> at <line>:<col>`
std::string format_runtime(const Diagnostic& d);

class CopError : public std::runtime_error {
 public:
  explicit CopError(Diagnostic d)
      : std::runtime_error(d.message), diag_(std::move(d)) {}

  const Diagnostic& diagnostic() const noexcept { return diag_; }
  const std::string& code() const noexcept { return diag_.code; }
  SourceLoc loc() const noexcept { return diag_.loc; }

 private:
  Diagnostic diag_;
};

class LexError : public CopError {
 public:
  LexError(std::string message, SourceLoc loc)
      : CopError({"LexError", std::move(message), loc}) {}
};

class ParseError : public CopError {
 public:
  ParseError(std::string message, SourceLoc loc)
      : CopError({"ParseError", std::move(message), loc}) {}
};

class RuntimeError : public CopError {
 public:
  RuntimeError(std::string code, std::string message, SourceLoc loc)
      : CopError({std::move(code), std::move(message), loc}) {}
};

/// Thrown by the resolver front door when a program has static errors.
class StaticErrors : public std::runtime_error {
 public:
  explicit StaticErrors(std::vector<Diagnostic> errors)
      : std::runtime_error("static errors"), errors_(std::move(errors)) {}

  const std::vector<Diagnostic>& errors() const noexcept { return errors_; }

 private:
  std::vector<Diagnostic> errors_;
};

}  // namespace cop
