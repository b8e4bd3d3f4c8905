#include "cop/diagnostic.hpp"

namespace cop {

std::string format_static(const Diagnostic& d) {
  return "error: " + d.code + " at " + std::to_string(d.loc.line) + ":" +
         std::to_string(d.loc.column) + ": " + d.message;
}

std::string format_runtime(const Diagnostic& d) {
  return "runtime error: " + d.code + ": " + d.message + " at " +
         std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column);
}

}  // namespace cop
