#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Reference models the interpreter is compared against. None of them touch
// interpreter code.
namespace cop::oracle {

/// Presence of `in m` / `out m` on each concept of a chain, outermost first.
struct DualLayout {
  std::vector<bool> in;
  std::vector<bool> out;
  std::size_t size() const { return in.size(); }
};

/// The program generated for a layout: `in m` runs `sub.m();` and then `m();`
/// when some concept at or above it declares `out m`; `out m` runs
/// `super.m();` when some concept above it declares `out m`.
std::string dual_program(const DualLayout& layout, std::size_t value_depth);

struct DispatchPrediction {
  /// "static", "NoSuchMethod", or "ok".
  std::string outcome;
  std::vector<std::string> events;
};

/// Trace of `x.m()` for a value of the first `value_depth` concepts, derived
/// from the dispatch rules alone.
DispatchPrediction predict_dispatch(const DualLayout& layout,
                                    std::size_t value_depth);

/// A class hierarchy in the classical sense: single inheritance, virtual
/// methods, `super` calls the parent's implementation.
struct ClassicalMethod {
  /// 0: return k; 1: return k + field; 2: return k * field + super.name()
  int shape = 0;
  std::int64_t k = 0;
  /// Index of the class whose field is read (self or an ancestor).
  std::size_t field_owner = 0;
};

struct ClassicalClass {
  std::optional<std::size_t> parent;
  /// method name index -> body
  std::vector<std::optional<ClassicalMethod>> methods;
};

struct ClassicalProgram {
  std::vector<ClassicalClass> classes;
  std::size_t method_count = 0;
};

/// Ancestors of `c` and `c` itself, root first.
std::vector<std::size_t> lineage(const ClassicalProgram& p, std::size_t c);

/// The most-derived implementation of `method` seen from `c`, if any.
std::optional<std::size_t> classical_lookup(const ClassicalProgram& p,
                                            std::size_t c, std::size_t method);

/// Result of calling `method` on an object of class `c` whose per-class field
/// values are `fields` (indexed by class).
std::int64_t classical_call(const ClassicalProgram& p, std::size_t c,
                            std::size_t method,
                            const std::vector<std::int64_t>& fields);

/// COP rendering of a classical program: outgoing methods only, one int
/// reference field per concept. `objects[i]` holds the field values of an
/// instance of class i; main prints every defined method of every object.
std::string classical_to_cop(const ClassicalProgram& p,
                             const std::vector<std::vector<std::int64_t>>& objects);

}  // namespace cop::oracle
