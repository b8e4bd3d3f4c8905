#include "cop/value.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace cop {

bool operator==(const Segment& a, const Segment& b) {
  return a.concept_name == b.concept_name && a.fields == b.fields;
}

bool operator==(const ConceptValue& a, const ConceptValue& b) {
  return a.segments == b.segments;
}

ConceptValue ConceptValue::prefix(std::size_t count) const {
  ConceptValue out;
  out.segments.assign(segments.begin(),
                      segments.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

const std::string& Value::as_text() const {
  if (const auto* s = std::get_if<std::string>(&data)) return *s;
  return std::get<CharArray>(data).payload;
}

bool operator==(const Value& a, const Value& b) {
  if (a.is_text() && b.is_text()) return a.as_text() == b.as_text();
  if (a.is_double() && b.is_double()) {
    double x = a.as_double();
    double y = b.as_double();
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    return x == y && std::signbit(x) == std::signbit(y);
  }
  return a.data == b.data;
}

std::string type_name(const Value& v) {
  struct {
    std::string operator()(VoidUnit) const { return "void"; }
    std::string operator()(std::int64_t) const { return "int"; }
    std::string operator()(double) const { return "double"; }
    std::string operator()(bool) const { return "bool"; }
    std::string operator()(const std::string&) const { return "string"; }
    std::string operator()(const CharArray& c) const {
      return "char[" + std::to_string(c.capacity) + "]";
    }
    std::string operator()(const ConceptValue& c) const { return c.concept_name(); }
  } visitor;
  return std::visit(visitor, v.data);
}

std::string format_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d < 0 ? "-inf" : "inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  std::string s(buf.data(), end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string serialize_field(const Value& v) {
  if (v.is_text()) return quote(v.as_text());
  return render(v);
}

}  // namespace

std::string serialize_reference(const ConceptValue& ref) {
  std::string out;
  for (std::size_t i = 0; i < ref.segments.size(); ++i) {
    const Segment& seg = ref.segments[i];
    if (i > 0) out.push_back('/');
    out += seg.concept_name;
    out.push_back('(');
    for (std::size_t f = 0; f < seg.fields.size(); ++f) {
      if (f > 0) out.push_back(',');
      out += serialize_field(seg.fields[f]);
    }
    out.push_back(')');
  }
  return out;
}

std::string render(const Value& v) {
  struct {
    std::string operator()(VoidUnit) const { return "void"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const CharArray& c) const { return c.payload; }
    std::string operator()(const ConceptValue& c) const {
      return serialize_reference(c);
    }
  } visitor;
  return std::visit(visitor, v.data);
}

}  // namespace cop
