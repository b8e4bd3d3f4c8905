#include "cop/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cop/dump.hpp"
#include "cop/interpreter.hpp"
#include "cop/parser.hpp"
#include "cop/resolve.hpp"

namespace cop::cli {
namespace {

enum class Command { Run, Check, Parse };

struct Invocation {
  Command command = Command::Run;
  std::string file;
  bool trace = false;
  bool dump = false;
};

bool read_file(const std::string& path, std::string& contents) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return false;
  contents = buf.str();
  return true;
}

int report(const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) err << format_static(d) << '\n';
  return kStaticError;
}

int execute(const Invocation& inv, const std::string& source, std::ostream& out,
            std::ostream& err) {
  std::shared_ptr<const SyntaxTree> tree;
  try {
    tree = std::make_shared<const SyntaxTree>(parse_source(source));
  } catch (const CopError& e) {
    return report({e.diagnostic()}, err);
  }
  if (inv.command == Command::Parse) {
    if (inv.dump) out << dump_tree(*tree) << '\n';
    return kSuccess;
  }

  TableResult built = build_table(tree);
  if (!built.ok()) return report(built.errors, err);
  std::vector<Diagnostic> errors = check_bodies(built.table);
  if (!errors.empty()) return report(errors, err);
  if (inv.command == Command::Check) return kSuccess;

  return run_program(built.table, out, err, inv.trace) == 0 ? kSuccess
                                                            : kRuntimeError;
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Interpreter for concept-oriented programs", "cop"};
  app.require_subcommand(1);

  Invocation inv;
  CLI::App* run = app.add_subcommand("run", "Execute a program");
  run->add_option("file", inv.file, "Source file")->required();
  run->add_flag("--trace", inv.trace, "Write dispatch events to stderr");

  CLI::App* check = app.add_subcommand("check", "Parse and resolve only");
  check->add_option("file", inv.file, "Source file")->required();

  CLI::App* parse = app.add_subcommand("parse", "Parse only");
  parse->add_option("file", inv.file, "Source file")->required();
  parse->add_flag("--dump", inv.dump, "Print the syntax tree as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "cop: " << e.what() << '\n' << kUsage << '\n';
    return kUsageError;
  }

  if (run->parsed()) {
    inv.command = Command::Run;
  } else if (check->parsed()) {
    inv.command = Command::Check;
  } else {
    inv.command = Command::Parse;
  }

  std::string source;
  if (!read_file(inv.file, source)) {
    err << "cop: cannot read '" << inv.file << "'\n" << kUsage << '\n';
    return kUsageError;
  }
  try {
    return execute(inv, source, out, err);
  } catch (const std::exception& e) {
    // Anything escaping the pipeline is an interpreter defect; keep the exit
    // code inside the documented set.
    err << "runtime error: InternalError: " << e.what() << " at 1:1\n";
    return kRuntimeError;
  }
}

}  // namespace cop::cli
