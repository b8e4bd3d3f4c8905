#include "support.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "cop/interpreter.hpp"
#include "cop/parser.hpp"
#include "cop/resolve.hpp"

namespace cop::testing {

RunResult run_source(std::string_view source, bool trace) {
  RunResult r;
  std::ostringstream out, err;
  std::vector<Diagnostic> errors = static_errors(source);
  if (!errors.empty()) {
    for (const auto& d : errors) err << format_static(d) << '\n';
    r.status = 2;
  } else {
    ConceptTable table = load_program(source);
    r.status = run_program(table, out, err, trace);
  }
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<Diagnostic> static_errors(std::string_view source) {
  std::shared_ptr<const SyntaxTree> tree;
  try {
    tree = std::make_shared<const SyntaxTree>(parse_source(source));
  } catch (const CopError& e) {
    return {e.diagnostic()};
  }
  TableResult built = build_table(tree);
  if (!built.ok()) return built.errors;
  return check_bodies(built.table);
}

std::vector<std::string> static_codes(std::string_view source) {
  std::vector<std::string> codes;
  for (const auto& d : static_errors(source)) codes.push_back(d.code);
  return codes;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines(std::string_view text) {
  std::vector<std::string> result;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    result.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return result;
}

}  // namespace cop::testing
