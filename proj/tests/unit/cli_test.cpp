#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cop/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using cop::testing::read_text;

namespace {

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cop");
  std::ostringstream out, err;
  int status = cop::cli::main_entry(args, out, err);
  return {status, out.str(), err.str()};
}

std::string corpus(const std::string& name) {
  return (fs::path(COP_CORPUS_DIR) / name).string();
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = (fs::temp_directory_path() /
             ("cop_cli_test_" + std::to_string(++counter) + ".cop"))
                .string();
    std::ofstream(path_, std::ios::binary) << contents;
  }
  ~TempFile() { fs::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

TEST_CASE("run prints the Panel/Button lines") {
  auto r = cli({"run", corpus("panel_button_inverse.cop")});
  CHECK(r.status == 0);
  CHECK(r.out == "fillBackground\ndrawButtonText(MyButton)\n");
  CHECK(r.err.empty());
}

TEST_CASE("check reports one cycle") {
  TempFile f("concept A in B {} concept B in A {}\nfunc void main() {}\n");
  auto r = cli({"check", f.path()});
  CHECK(r.status == 2);
  CHECK(r.out.empty());
  CHECK(r.err == "error: InclusionCycle at 1:1: inclusion cycle: A -> B -> A\n");
}

TEST_CASE("unknown subcommand is a usage error") {
  auto r = cli({"frobnicate", "x.cop"});
  CHECK(r.status == 3);
  CHECK(r.err.find(cop::cli::kUsage) != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).status == 3);
  CHECK(cli({"run"}).status == 3);
  CHECK(cli({"run", "a.cop", "b.cop"}).status == 3);
  CHECK(cli({"run", "--bogus", corpus("interest.cop")}).status == 3);
  CHECK(cli({"check", "--trace", corpus("interest.cop")}).status == 3);
  CHECK(cli({"run", "/nonexistent/file.cop"}).status == 3);
  CHECK(cli({"--help"}).status == 0);
}

TEST_CASE("check never runs user code") {
  auto r = cli({"check", corpus("panel_button_inverse.cop")});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  CHECK(r.err.empty());
}

TEST_CASE("parse --dump prints the tree") {
  TempFile f("concept Point { int x; int y; }\n");
  auto r = cli({"parse", f.path(), "--dump"});
  CHECK(r.status == 0);
  CHECK(r.out.rfind(R"({"kind":"program","concepts":[{"kind":"concept","name":"Point")", 0) == 0);
  TempFile bad("concept A {");
  CHECK(cli({"parse", bad.path(), "--dump"}).status == 2);
}

TEST_CASE("tracing leaves standard output unchanged") {
  for (const auto& entry : fs::directory_iterator(COP_CORPUS_DIR)) {
    if (entry.path().extension() != ".cop") continue;
    CAPTURE(entry.path().string());
    auto plain = cli({"run", entry.path().string()});
    auto traced = cli({"run", entry.path().string(), "--trace"});
    CHECK(plain.out == traced.out);
    CHECK(plain.status == traced.status);
  }
}

TEST_CASE("corpus goldens") {
  int programs = 0;
  for (const auto& entry : fs::directory_iterator(COP_CORPUS_DIR)) {
    if (entry.path().extension() != ".cop") continue;
    ++programs;
    fs::path base = entry.path();
    CAPTURE(base.string());
    auto r = cli({"run", base.string(), "--trace"});
    CHECK(r.status == 0);
    CHECK(r.out == read_text(fs::path(base).replace_extension(".expected").string()));
    fs::path trace = fs::path(base).replace_extension(".trace.expected");
    if (fs::exists(trace)) CHECK(r.err == read_text(trace.string()));
  }
  CHECK(programs >= 13);
}

TEST_CASE("error corpus goldens") {
  int programs = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(COP_CORPUS_DIR) / "errors")) {
    if (entry.path().extension() != ".cop") continue;
    ++programs;
    fs::path base = entry.path();
    CAPTURE(base.string());
    auto r = cli({"run", base.string()});
    int status = std::stoi(read_text(fs::path(base).replace_extension(".status").string()));
    CHECK(r.status == status);
    CHECK(r.out == read_text(fs::path(base).replace_extension(".expected").string()));
    CHECK(r.err ==
          read_text(fs::path(base).replace_extension(".stderr.expected").string()));
  }
  CHECK(programs >= 10);
}
