#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cop/ast.hpp"

namespace cop {

struct Value;

/// One concept's contribution to a complex reference.
struct Segment {
  std::string concept_name;
  /// Values of the concept's reference fields, in declaration order.
  std::vector<Value> fields;

  friend bool operator==(const Segment&, const Segment&);
};

/// A complex reference: segments ordered outermost (root concept) first.
/// Its segment concepts always spell out the inclusion chain of the innermost
/// concept.
struct ConceptValue {
  std::vector<Segment> segments;

  const std::string& concept_name() const { return segments.back().concept_name; }
  /// Copy of the first `count` segments.
  ConceptValue prefix(std::size_t count) const;

  friend bool operator==(const ConceptValue&, const ConceptValue&);
};

struct VoidUnit {
  friend bool operator==(VoidUnit, VoidUnit) { return true; }
};

/// Fixed-capacity character payload; payload.size() <= capacity always.
struct CharArray {
  std::int64_t capacity = 1;
  std::string payload;

  friend bool operator==(const CharArray&, const CharArray&) = default;
};

/// Runtime value. Copies are deep: nothing is shared between two Values.
struct Value {
  std::variant<VoidUnit, std::int64_t, double, bool, std::string, CharArray,
               ConceptValue>
      data;

  Value() = default;
  Value(std::int64_t v) : data(v) {}
  Value(int v) : data(std::int64_t{v}) {}
  Value(const char* v) : data(std::string(v)) {}
  Value(double v) : data(v) {}
  Value(bool v) : data(v) {}
  Value(std::string v) : data(std::move(v)) {}
  Value(CharArray v) : data(std::move(v)) {}
  Value(ConceptValue v) : data(std::move(v)) {}

  bool is_void() const { return std::holds_alternative<VoidUnit>(data); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_double() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_concept() const { return std::holds_alternative<ConceptValue>(data); }
  /// string or char-array
  bool is_text() const {
    return std::holds_alternative<std::string>(data) ||
           std::holds_alternative<CharArray>(data);
  }

  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  double as_double() const { return std::get<double>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  const std::string& as_text() const;
  const ConceptValue& as_concept() const { return std::get<ConceptValue>(data); }
  ConceptValue& as_concept() { return std::get<ConceptValue>(data); }

  /// Structural equality; a string and a char-array with equal payloads are
  /// equal. Doubles compare by identity of their canonical text (NaN equals
  /// NaN, 0.0 differs from -0.0) so equality agrees with serialization.
  friend bool operator==(const Value&, const Value&);
};

/// Name of the dynamic type, for diagnostics: `int`, `char[10]`, `Account`.
std::string type_name(const Value& v);

/// Shortest round-trip decimal; integral values keep a trailing `.0`.
std::string format_double(double d);

/// Canonical text of a reference: `Bank("B1")/Account("0001")`.
std::string serialize_reference(const ConceptValue& ref);

/// Rendering used by print and str: text unquoted, references serialized.
std::string render(const Value& v);

}  // namespace cop
