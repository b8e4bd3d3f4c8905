#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cop/diagnostic.hpp"

namespace cop {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLiteral,
  FloatLiteral,
  StringLiteral,
  Punct,
  EndOfInput,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  /// Raw source text of the token (string literals keep their quotes).
  std::string lexeme;
  SourceLoc loc;
  /// Decoded payload of a string literal.
  std::string text;
  std::int64_t int_value = 0;
  double float_value = 0.0;

  bool is(TokenKind k, std::string_view lex) const {
    return kind == k && lexeme == lex;
  }
  bool is_keyword(std::string_view kw) const {
    return is(TokenKind::Keyword, kw);
  }
  bool is_punct(std::string_view p) const { return is(TokenKind::Punct, p); }
};

bool is_keyword(std::string_view word);

/// Splits COP source into tokens. Whitespace and comments (`//` line,
/// non-nesting `/* */` block) are dropped. The result always ends with a
/// single EndOfInput token. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

}  // namespace cop
