// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cop/cli.hpp"
#include "cop/interpreter.hpp"
#include "cop/resolve.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

using cop::ConceptValue;
using cop::Segment;
using cop::Value;
using cop::testing::lines;
using cop::testing::read_text;
using cop::testing::run_source;
using Lines = std::vector<std::string>;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string corpus(const std::string& name) {
  return std::string(COP_CORPUS_DIR) + "/" + name;
}

cop::testing::RunResult run_corpus(const std::string& name, bool trace) {
  return run_source(read_text(corpus(name)), trace);
}

std::string join(const Lines& ls) {
  std::string s;
  for (const auto& l : ls) s += l + "\n";
  return s;
}

Outcome golden(const std::string& file, const Lines& out, const Lines& trace) {
  Outcome o;
  auto r = run_corpus(file, true);
  if (r.status != 0) o.fail("exit status " + std::to_string(r.status));
  if (r.out != join(out)) o.fail("stdout was:\n" + r.out);
  if (r.err != join(trace)) o.fail("trace was:\n" + r.err);
  return o;
}

Outcome inverse_overriding() {
  return golden("panel_button_inverse.cop",
                {"fillBackground", "drawButtonText(MyButton)"},
                {"IN Panel.draw", "OUT Panel.fillBackground", "IN Button.draw",
                 "OUT Button.drawButtonText"});
}

Outcome direct_overriding() {
  return golden("panel_button_direct.cop",
                {"fillBackground", "drawButtonText(MyButton)"},
                {"OUT Button.draw", "OUT Panel.fillBackground",
                 "OUT Button.drawButtonText"});
}

Outcome interest_composition() {
  Outcome o;
  auto r = run_corpus("interest.cop", false);
  if (r.status != 0 || r.out != "4.0\n") o.fail("output was: " + r.out + r.err);
  return o;
}

Outcome interception() {
  Outcome o;
  auto r = run_corpus("logging.cop", false);
  if (r.status != 0) o.fail("exit status " + std::to_string(r.status));
  // Count log lines per section, and check the log precedes the value.
  int external = 0, internal = 0;
  int* section = nullptr;
  bool value_before_log = false;
  for (const auto& l : lines(r.out)) {
    if (l == "external:") section = &external;
    else if (l == "internal:") section = &internal;
    else if (l == "Balance accessed.") ++*section;
    else if (section == &external && external == 0) value_before_log = true;
  }
  if (external != 1 || internal != 0)
    o.fail("log counts " + std::to_string(external) + "/" + std::to_string(internal));
  if (value_before_log) o.fail("balance printed before the log line");
  return o;
}

// Random text that includes characters the serializer has to escape.
std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const std::string alphabet = "AB01\"\\/,() ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (char& c : s) c = alphabet[pick(rng)];
  return s;
}

Outcome object_field_sharing() {
  Outcome o;
  cop::ConceptTable table = cop::load_program(read_text(corpus("balance_store.cop")));
  std::ostringstream sink;
  cop::Interpreter interp(table, sink);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> amount(-1e6, 1e6);
  for (int i = 0; i < 100; ++i) {
    std::string bank = random_text(rng, 12);
    std::string acc = random_text(rng, 10);
    double v = amount(rng);
    ConceptValue first =
        interp.construct("Account", {interp.construct("Bank", {bank}), acc});
    // Built from scratch so nothing is shared with `first`.
    ConceptValue second = interp.construct(
        "Account", {interp.construct("Bank", {std::string(bank)}), std::string(acc)});
    if (!(first == second)) o.fail("copies differ for " + bank + "/" + acc);
    interp.property_set(first, "balance", v);
    Value got = interp.property_get(second, "balance");
    if (!got.is_double() || got.as_double() != v)
      o.fail("case " + std::to_string(i) + ": set " + cop::format_double(v) +
             ", got " + cop::render(got));
  }
  return o;
}

Outcome empty_segment_singleton() {
  Outcome o;
  auto r = run_corpus("bonus_account.cop", false);
  Lines want = {"true", "Bank(\"B1\")/Account(\"0001\")/BonusAccount()", "12.5",
                "0.0", "false"};
  if (r.status != 0 || lines(r.out) != want) o.fail("output was:\n" + r.out + r.err);
  return o;
}

Outcome dispatch_oracle() {
  Outcome o;
  constexpr std::size_t kChain = 5;
  int mismatches = 0, runs = 0;
  for (unsigned mask = 0; mask < (1u << (2 * kChain)); ++mask) {
    cop::oracle::DualLayout layout;
    for (std::size_t k = 0; k < kChain; ++k) {
      layout.in.push_back(mask >> (2 * k) & 1);
      layout.out.push_back(mask >> (2 * k + 1) & 1);
    }
    for (std::size_t depth = 1; depth <= kChain; ++depth) {
      ++runs;
      auto want = cop::oracle::predict_dispatch(layout, depth);
      auto r = run_source(cop::oracle::dual_program(layout, depth), true);
      bool same = false;
      if (want.outcome == "static") {
        same = r.status == 2 && r.err.find("NoSuchMethod") != std::string::npos;
      } else if (want.outcome == "NoSuchMethod") {
        std::string prefix = join(want.events) + "runtime error: NoSuchMethod:";
        same = r.status == 1 && r.err.rfind(prefix, 0) == 0 &&
               lines(r.err).size() == want.events.size() + 1;
      } else {
        same = r.status == 0 && r.err == join(want.events);
      }
      if (!same) {
        ++mismatches;
        o.fail("mask " + std::to_string(mask) + " depth " + std::to_string(depth) +
               ": got\n" + r.err + "want\n" + join(want.events));
      }
    }
  }
  if (!o.pass) o.detail += "\n" + std::to_string(mismatches) + " of " +
                           std::to_string(runs) + " mismatched";
  return o;
}

Outcome classical_degeneracy() {
  Outcome o;
  std::mt19937_64 rng(8);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 200; ++trial) {
    cop::oracle::ClassicalProgram p;
    p.method_count = static_cast<std::size_t>(uniform(1, 6));
    int class_count = uniform(1, 6);
    std::vector<int> depth;
    for (int c = 0; c < class_count; ++c) {
      cop::oracle::ClassicalClass cls;
      // Parent among earlier classes of depth < 4, or none.
      std::vector<std::size_t> parents;
      for (int j = 0; j < c; ++j)
        if (depth[j] < 4) parents.push_back(j);
      if (!parents.empty() && uniform(0, 3) > 0)
        cls.parent = parents[uniform(0, static_cast<int>(parents.size()) - 1)];
      depth.push_back(cls.parent ? depth[*cls.parent] + 1 : 1);
      cls.methods.resize(p.method_count);
      p.classes.push_back(cls);
      auto line = cop::oracle::lineage(p, c);
      for (std::size_t m = 0; m < p.method_count; ++m) {
        if (uniform(0, 2) == 0) continue;
        cop::oracle::ClassicalMethod body;
        bool inherited = cls.parent && cop::oracle::classical_lookup(p, *cls.parent, m);
        body.shape = uniform(0, inherited ? 2 : 1);
        body.k = uniform(-9, 9);
        body.field_owner = line[uniform(0, static_cast<int>(line.size()) - 1)];
        p.classes[c].methods[m] = body;
      }
    }
    std::vector<std::vector<std::int64_t>> objects(p.classes.size());
    Lines want;
    for (std::size_t c = 0; c < p.classes.size(); ++c) {
      objects[c].assign(p.classes.size(), 0);
      for (std::size_t k : cop::oracle::lineage(p, c)) objects[c][k] = uniform(-9, 9);
      for (std::size_t m = 0; m < p.method_count; ++m)
        if (cop::oracle::classical_lookup(p, c, m))
          want.push_back(std::to_string(cop::oracle::classical_call(p, c, m, objects[c])));
    }
    std::string src = cop::oracle::classical_to_cop(p, objects);
    auto r = run_source(src);
    if (r.status != 0 || lines(r.out) != want)
      o.fail("trial " + std::to_string(trial) + ":\n" + src + "got\n" + r.out + r.err);
  }
  return o;
}

// Model of the value-semantics program: every local owns its own copy.
struct PairModel {
  bool tri = false;
  std::int64_t a = 0;
  std::string b;
  std::int64_t c = 0;

  std::string serialize() const {
    std::string s = "Pair(" + std::to_string(a) + ",\"" + b + "\")";
    if (tri) s += "/Tri(" + std::to_string(c) + ")";
    return s;
  }
};

Outcome value_semantics() {
  Outcome o;
  std::mt19937_64 rng(9);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto word = [&] {
    std::string s;
    for (int n = uniform(0, 3); n > 0; --n) s += static_cast<char>('a' + uniform(0, 3));
    return s;
  };
  const std::string prelude = R"(
concept Pair { int a; string b; }
concept Tri in Pair { int c; }
func Pair bumpPair(Pair p) { p.a = p.a + 1; p.b = p.b + "!"; return p; }
func Tri bumpTri(Tri t) { t.c = t.c * 2; t.a = 0; return t; }
)";
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PairModel> model;
    std::ostringstream body;
    int locals = uniform(2, 5);
    for (int i = 0; i < locals; ++i) {
      PairModel m;
      m.tri = uniform(0, 1) == 1;
      m.a = uniform(-50, 50);
      m.b = word();
      m.c = uniform(-50, 50);
      model.push_back(m);
      std::string pair = "Pair(" + std::to_string(m.a) + ", \"" + m.b + "\")";
      if (m.tri)
        body << "  Tri v" << i << " = Tri(" << pair << ", " << m.c << ");\n";
      else
        body << "  Pair v" << i << " = " << pair << ";\n";
    }
    for (int step = uniform(1, 10); step > 0; --step) {
      int i = uniform(0, locals - 1);
      int j = uniform(0, locals - 1);
      PairModel& m = model[i];
      std::string v = "v" + std::to_string(i);
      switch (uniform(0, 4)) {
        case 0: {
          int n = uniform(-50, 50);
          body << "  " << v << ".a = " << n << ";\n";
          m.a = n;
          break;
        }
        case 1: {
          std::string s = word();
          body << "  " << v << ".b = \"" << s << "\";\n";
          m.b = s;
          break;
        }
        case 2:
          if (m.tri) {
            int n = uniform(-50, 50);
            body << "  " << v << ".c = " << n << ";\n";
            m.c = n;
          }
          break;
        case 3:
          if (model[j].tri == m.tri) {
            body << "  " << v << " = v" << j << ";\n";
            m = model[j];
          }
          break;
        case 4:
          // The callee mutates its parameter; only the assigned local changes.
          if (model[j].tri == m.tri) {
            PairModel arg = model[j];
            if (m.tri) {
              body << "  " << v << " = bumpTri(v" << j << ");\n";
              arg.c *= 2;
              arg.a = 0;
            } else {
              body << "  " << v << " = bumpPair(v" << j << ");\n";
              arg.a += 1;
              arg.b += "!";
            }
            m = arg;
          }
          break;
      }
    }
    Lines want;
    for (int i = 0; i < locals; ++i) {
      body << "  print(v" << i << ");\n";
      want.push_back(model[i].serialize());
    }
    std::string src = prelude + "func void main() {\n" + body.str() + "}\n";
    auto r = run_source(src);
    if (r.status != 0 || lines(r.out) != want)
      o.fail("trial " + std::to_string(trial) + ":\n" + src + "got\n" + r.out + r.err);
  }

  // Equality laws over values that include awkward doubles and text.
  const std::vector<Value> atoms = {
      Value(0),   Value(-1),  Value(0.0),   Value(-0.0),
      Value(std::nan("")),    Value(std::numeric_limits<double>::infinity()),
      Value(1.5), Value(true), Value(false), Value(""),
      Value("\""), Value("\\"), Value("a,b"), Value(cop::CharArray{4, "a,b"})};
  auto random_ref = [&] {
    ConceptValue ref;
    static const char* const names[] = {"Bank", "Account", "Bonus"};
    for (int s = 0, n = uniform(1, 3); s < n; ++s) {
      Segment seg{names[s], {}};
      for (int f = uniform(0, 2); f > 0; --f)
        seg.fields.push_back(atoms[uniform(0, static_cast<int>(atoms.size()) - 1)]);
      ref.segments.push_back(std::move(seg));
    }
    return ref;
  };
  for (int trial = 0; trial < 500; ++trial) {
    ConceptValue x = random_ref();
    ConceptValue y = uniform(0, 3) == 0 ? x : random_ref();
    std::string sx = cop::serialize_reference(x);
    std::string sy = cop::serialize_reference(y);
    if (!(x == x)) o.fail("not reflexive: " + sx);
    if ((x == y) != (y == x)) o.fail("not symmetric: " + sx + " vs " + sy);
    if ((x == y) != (sx == sy)) o.fail("equality disagrees with text: " + sx + " vs " + sy);
    ConceptValue copy = x;
    copy.segments[0].fields.push_back(Value(1));
    if (cop::serialize_reference(x) != sx) o.fail("copy shares state with " + sx);
  }
  return o;
}

// Deterministic byte mutations of a seed program.
std::string mutate(std::string s, std::mt19937_64& rng) {
  static const std::string tokens[] = {"{", "}", "(", ")", ";", "\"", "/*", "sub.",
                                       "super.", " in ", " out ", "concept ", "1e999",
                                       "char[0]", "value", "this", "\\"};
  std::uniform_int_distribution<int> ops(0, 3);
  for (int n = std::uniform_int_distribution<int>(1, 8)(rng); n > 0; --n) {
    std::size_t at = s.empty() ? 0 : std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
    switch (ops(rng)) {
      case 0:
        if (!s.empty()) s.erase(at, std::uniform_int_distribution<std::size_t>(1, 20)(rng));
        break;
      case 1:
        s.insert(at, tokens[std::uniform_int_distribution<std::size_t>(0, std::size(tokens) - 1)(rng)]);
        break;
      case 2:
        if (!s.empty()) s[at] = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
        break;
      case 3: {
        std::size_t from = s.empty() ? 0 : std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
        s.insert(at, s.substr(from, 40));
        break;
      }
    }
  }
  return s;
}

Outcome parser_totality() {
  Outcome o;
  Lines listings = {"panel_button_inverse.cop", "panel_button_direct.cop",
                    "interest.cop", "logging.cop", "bonus_account.cop",
                    "account_dual.cop", "balance_property.cop", "bank_account.cop",
                    "balance_store.cop", "point3d.cop", "reserves.cop",
                    "postal_address.cop", "savings_account.cop"};
  std::vector<std::string> seeds;
  for (const auto& name : listings) {
    std::string src = read_text(corpus(name));
    auto diags = cop::testing::static_errors(src);
    if (!diags.empty()) o.fail(name + ": " + cop::format_static(diags[0]));
    seeds.push_back(src);
  }

  std::mt19937_64 rng(10);
  auto start = std::chrono::steady_clock::now();
  int crashes = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string input;
    if (i % 2 == 0) {
      input.resize(std::uniform_int_distribution<std::size_t>(0, 400)(rng));
      for (char& c : input) c = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
    } else {
      input = mutate(seeds[static_cast<std::size_t>(i / 2) % seeds.size()], rng);
    }
    try {
      cop::testing::static_errors(input);
    } catch (const std::exception& e) {
      ++crashes;
      o.fail("case " + std::to_string(i) + " escaped with: " + e.what());
    }
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > 5.0) o.fail("fuzz run took " + std::to_string(seconds) + " s");
  if (crashes) o.detail += "\n" + std::to_string(crashes) + " escaped exceptions";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"inverse overriding golden trace", inverse_overriding},
      {"direct overriding golden trace", direct_overriding},
      {"interest composition", interest_composition},
      {"cross-cutting interception", interception},
      {"object-field sharing", object_field_sharing},
      {"empty-segment singleton", empty_segment_singleton},
      {"dispatch oracle equivalence", dispatch_oracle},
      {"classical degeneracy", classical_degeneracy},
      {"value semantics", value_semantics},
      {"parser totality", parser_totality},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s (%.0f ms)\n", o.pass ? "PASS" : "FAIL", index, c.name, ms);
    if (!o.pass) {
      ++failed;
      std::printf("  %s\n", o.detail.c_str());
    }
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
