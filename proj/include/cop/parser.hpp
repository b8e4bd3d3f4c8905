#pragma once

#include <span>
#include <string_view>

#include "cop/ast.hpp"
#include "cop/lexer.hpp"

namespace cop {

/// Maximum nesting of blocks and expressions accepted by the parser.
inline constexpr int kMaxParseDepth = 256;

/// Builds a syntax tree from a token stream ending in EndOfInput. Stops at the
/// first error and throws ParseError located at the offending token.
SyntaxTree parse(std::span<const Token> tokens);

/// tokenize + parse.
SyntaxTree parse_source(std::string_view source);

}  // namespace cop
