#include "cop/lexer.hpp"

#include <array>
#include <algorithm>
#include <charconv>
#include <system_error>

namespace cop {
namespace {

constexpr std::array<std::string_view, 25> kKeywords = {
    "concept", "in",      "out",    "super",  "sub",    "func",   "public",
    "protected", "private", "int",  "double", "bool",   "string", "void",
    "char",    "get",     "set",    "if",     "else",   "while",  "return",
    "this",    "value",   "true",   "false"};

constexpr std::array<std::string_view, 6> kTwoCharPunct = {"==", "!=", "<=",
                                                           ">=", "&&", "||"};

constexpr std::string_view kOneCharPunct = "{}()[];,.=<>+-*/%!";

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next_token());
    }
    Token eoi;
    eoi.kind = TokenKind::EndOfInput;
    eoi.loc = here();
    out.push_back(std::move(eoi));
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  SourceLoc here() const { return {line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourceLoc start = here();
        advance();
        advance();
        for (;;) {
          if (at_end()) throw LexError("unterminated block comment", start);
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::size_t begin, SourceLoc loc) const {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(src_.substr(begin, pos_ - begin));
    t.loc = loc;
    return t;
  }

  Token next_token() {
    SourceLoc loc = here();
    std::size_t begin = pos_;
    char c = peek();

    if (is_ident_start(c)) {
      while (!at_end() && is_ident_char(peek())) advance();
      Token t = make(TokenKind::Identifier, begin, loc);
      if (is_keyword(t.lexeme)) t.kind = TokenKind::Keyword;
      return t;
    }
    if (is_digit(c)) return number(begin, loc);
    if (c == '"') return string_literal(begin, loc);

    std::string_view two = src_.substr(pos_, 2);
    if (std::find(kTwoCharPunct.begin(), kTwoCharPunct.end(), two) !=
        kTwoCharPunct.end()) {
      advance();
      advance();
      return make(TokenKind::Punct, begin, loc);
    }
    if (kOneCharPunct.find(c) != std::string_view::npos) {
      advance();
      return make(TokenKind::Punct, begin, loc);
    }

    auto byte = static_cast<unsigned char>(c);
    std::string shown = (byte >= 0x20 && byte < 0x7f)
                            ? "'" + std::string(1, c) + "'"
                            : "byte 0x" + hex(byte);
    throw LexError("illegal character " + shown, loc);
  }

  static std::string hex(unsigned char b) {
    constexpr char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xf]};
  }

  Token number(std::size_t begin, SourceLoc loc) {
    bool is_float = false;
    while (is_digit(peek())) advance();
    if (peek() == '.' && is_digit(peek(1))) {
      is_float = true;
      advance();
      while (is_digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) ||
         ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
      is_float = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (is_digit(peek())) advance();
    }
    if (is_ident_char(peek())) {
      throw LexError("malformed number literal", loc);
    }
    Token t = make(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral,
                   begin, loc);
    const char* first = t.lexeme.data();
    const char* last = first + t.lexeme.size();
    if (is_float) {
      auto [ptr, ec] = std::from_chars(first, last, t.float_value);
      if (ec != std::errc() || ptr != last) {
        throw LexError("float literal out of range", loc);
      }
    } else {
      auto [ptr, ec] = std::from_chars(first, last, t.int_value);
      if (ec != std::errc() || ptr != last) {
        throw LexError("integer literal out of range", loc);
      }
    }
    return t;
  }

  Token string_literal(std::size_t begin, SourceLoc loc) {
    advance();  // opening quote
    std::string text;
    for (;;) {
      if (at_end() || peek() == '\n') {
        throw LexError("unterminated string literal", loc);
      }
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        SourceLoc esc_loc = here();
        advance();
        if (at_end()) throw LexError("unterminated string literal", loc);
        switch (peek()) {
          case '"': text.push_back('"'); break;
          case '\\': text.push_back('\\'); break;
          case 'n': text.push_back('\n'); break;
          case 't': text.push_back('\t'); break;
          default:
            throw LexError("invalid escape sequence", esc_loc);
        }
        advance();
        continue;
      }
      text.push_back(c);
      advance();
    }
    Token t = make(TokenKind::StringLiteral, begin, loc);
    t.text = std::move(text);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "integer literal";
    case TokenKind::FloatLiteral: return "float literal";
    case TokenKind::StringLiteral: return "string literal";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::EndOfInput: return "end of input";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) !=
         kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

}  // namespace cop
