#include "cop/parser.hpp"

#include <utility>

namespace cop {

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Public: return "public";
    case Visibility::Protected: return "protected";
    case Visibility::Private: return "private";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::None: return "none";
    case Direction::Incoming: return "in";
    case Direction::Outgoing: return "out";
  }
  return "?";
}

std::string_view to_string(MemberKind k) {
  switch (k) {
    case MemberKind::ReferenceField: return "reference-field";
    case MemberKind::ObjectField: return "object-field";
    case MemberKind::Method: return "method";
    case MemberKind::Property: return "property";
  }
  return "?";
}

std::string_view to_string(UnaryOp op) {
  return op == UnaryOp::Negate ? "-" : "!";
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string TypeExpr::to_string() const {
  switch (base) {
    case BaseType::Int: return "int";
    case BaseType::Double: return "double";
    case BaseType::Bool: return "bool";
    case BaseType::String: return "string";
    case BaseType::Void: return "void";
    case BaseType::CharArray: return "char[" + std::to_string(size) + "]";
    case BaseType::Concept: return concept_name;
  }
  return "?";
}

namespace {

std::string describe(const Token& t) {
  if (t.kind == TokenKind::EndOfInput) return "end of input";
  return "'" + t.lexeme + "'";
}

bool is_type_keyword(const Token& t) {
  return t.kind == TokenKind::Keyword &&
         (t.lexeme == "int" || t.lexeme == "double" || t.lexeme == "bool" ||
          t.lexeme == "string" || t.lexeme == "void" || t.lexeme == "char");
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {
    if (toks_.empty() || toks_.back().kind != TokenKind::EndOfInput) {
      throw ParseError("token stream does not end in end of input", {});
    }
  }

  SyntaxTree program() {
    SyntaxTree tree;
    while (!at_end()) {
      if (peek().is_keyword("concept")) {
        tree.concepts.push_back(concept_decl());
      } else if (peek().is_keyword("func")) {
        tree.functions.push_back(func_decl());
      } else {
        fail("expected 'concept' or 'func'");
      }
    }
    return tree;
  }

 private:
  // RAII guard on nesting depth so hostile input cannot exhaust the stack.
  class DepthGuard {
   public:
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxParseDepth) {
        p_.fail("nesting too deep");
      }
    }
    ~DepthGuard() { --p_.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;

   private:
    Parser& p_;
  };

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == TokenKind::EndOfInput; }
  const Token& advance() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + ", found " + describe(peek()), peek().loc);
  }

  bool accept_punct(std::string_view p) {
    if (peek().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view kw) {
    if (peek().is_keyword(kw)) {
      advance();
      return true;
    }
    return false;
  }
  const Token& expect_punct(std::string_view p) {
    if (!peek().is_punct(p)) fail("expected '" + std::string(p) + "'");
    return advance();
  }
  const Token& expect_keyword(std::string_view kw) {
    if (!peek().is_keyword(kw)) fail("expected '" + std::string(kw) + "'");
    return advance();
  }
  const Token& expect_ident(std::string_view what) {
    if (peek().kind != TokenKind::Identifier) {
      fail("expected " + std::string(what));
    }
    return advance();
  }

  // -- declarations --------------------------------------------------------

  ConceptDecl concept_decl() {
    ConceptDecl c;
    c.loc = expect_keyword("concept").loc;
    c.name = expect_ident("concept name").lexeme;
    if (peek().is_keyword("in")) {
      advance();
      const Token& parent = expect_ident("parent concept name");
      c.parent = parent.lexeme;
      c.parent_loc = parent.loc;
    }
    expect_punct("{");
    while (!peek().is_punct("}")) {
      if (at_end()) fail("expected '}' to close concept '" + c.name + "'");
      c.members.push_back(member());
    }
    advance();
    return c;
  }

  MemberDecl member() {
    MemberDecl m;
    m.loc = peek().loc;
    if (accept_keyword("public")) {
      m.visibility = Visibility::Public;
    } else if (accept_keyword("protected")) {
      m.visibility = Visibility::Protected;
    } else if (accept_keyword("private")) {
      m.visibility = Visibility::Private;
    }
    if (accept_keyword("in")) {
      m.direction = Direction::Incoming;
    } else if (accept_keyword("out")) {
      m.direction = Direction::Outgoing;
    }
    m.type = type();
    m.name = expect_ident("member name").lexeme;

    if (peek().is_punct("(")) {
      if (m.direction == Direction::None) {
        fail("method '" + m.name + "' needs an 'in' or 'out' modifier");
      }
      m.kind = MemberKind::Method;
      m.params = params();
      m.body = block();
    } else if (peek().is_punct("{")) {
      if (m.direction == Direction::None) {
        fail("property '" + m.name + "' needs an 'out' modifier");
      }
      m.kind = MemberKind::Property;
      advance();
      if (accept_keyword("get")) m.getter = block();
      if (accept_keyword("set")) m.setter = block();
      if (!m.getter && !m.setter) fail("expected 'get' or 'set'");
      expect_punct("}");
    } else {
      expect_punct(";");
      m.kind = m.direction == Direction::None ? MemberKind::ReferenceField
                                              : MemberKind::ObjectField;
    }
    return m;
  }

  FuncDecl func_decl() {
    FuncDecl f;
    f.loc = expect_keyword("func").loc;
    f.return_type = type();
    f.name = expect_ident("function name").lexeme;
    f.params = params();
    f.body = block();
    return f;
  }

  std::vector<Param> params() {
    std::vector<Param> out;
    expect_punct("(");
    if (!peek().is_punct(")")) {
      do {
        Param p;
        p.loc = peek().loc;
        p.type = type();
        p.name = expect_ident("parameter name").lexeme;
        out.push_back(std::move(p));
      } while (accept_punct(","));
    }
    expect_punct(")");
    return out;
  }

  TypeExpr type() {
    TypeExpr t;
    const Token& tok = peek();
    t.loc = tok.loc;
    if (tok.kind == TokenKind::Identifier) {
      t.base = BaseType::Concept;
      t.concept_name = tok.lexeme;
      advance();
      return t;
    }
    if (!is_type_keyword(tok)) fail("expected a type");
    advance();
    if (tok.lexeme == "int") {
      t.base = BaseType::Int;
    } else if (tok.lexeme == "double") {
      t.base = BaseType::Double;
    } else if (tok.lexeme == "bool") {
      t.base = BaseType::Bool;
    } else if (tok.lexeme == "string") {
      t.base = BaseType::String;
    } else if (tok.lexeme == "void") {
      t.base = BaseType::Void;
    } else {
      t.base = BaseType::CharArray;
      expect_punct("[");
      if (peek().kind != TokenKind::IntLiteral) fail("expected array size");
      t.size = advance().int_value;
      if (t.size < 1) {
        throw ParseError("char-array size must be at least 1", t.loc);
      }
      expect_punct("]");
    }
    return t;
  }

  // -- statements ----------------------------------------------------------

  Block block() {
    DepthGuard guard(*this);
    Block b;
    b.loc = expect_punct("{").loc;
    while (!peek().is_punct("}")) {
      if (at_end()) fail("expected '}'");
      b.stmts.push_back(statement());
    }
    advance();
    return b;
  }

  StmtPtr make_stmt(SourceLoc loc, auto node) {
    auto s = std::make_unique<Stmt>();
    s->loc = loc;
    s->node = std::move(node);
    return s;
  }

  bool starts_declaration() const {
    if (is_type_keyword(peek())) return true;
    return peek().kind == TokenKind::Identifier &&
           peek(1).kind == TokenKind::Identifier;
  }

  StmtPtr statement() {
    DepthGuard guard(*this);
    SourceLoc loc = peek().loc;
    if (peek().is_punct("{")) return make_stmt(loc, block());
    if (accept_keyword("if")) {
      If s;
      expect_punct("(");
      s.cond = expression();
      expect_punct(")");
      s.then_branch = statement();
      if (accept_keyword("else")) s.else_branch = statement();
      return make_stmt(loc, std::move(s));
    }
    if (accept_keyword("while")) {
      While s;
      expect_punct("(");
      s.cond = expression();
      expect_punct(")");
      s.body = statement();
      return make_stmt(loc, std::move(s));
    }
    if (accept_keyword("return")) {
      Return s;
      if (!peek().is_punct(";")) s.value = expression();
      expect_punct(";");
      return make_stmt(loc, std::move(s));
    }
    if (starts_declaration()) {
      VarDecl d;
      d.type = type();
      d.name = expect_ident("variable name").lexeme;
      expect_punct("=");
      d.init = expression();
      expect_punct(";");
      return make_stmt(loc, std::move(d));
    }
    ExprPtr e = expression();
    if (peek().is_punct("=")) {
      const auto& n = e->node;
      bool assignable = std::holds_alternative<NameRef>(n) ||
                        std::holds_alternative<MemberAccess>(n) ||
                        (std::holds_alternative<SuperAccess>(n) &&
                         !std::get<SuperAccess>(n).is_call);
      if (!assignable) fail("invalid assignment target before '='");
      advance();
      Assign a;
      a.target = std::move(e);
      a.value = expression();
      expect_punct(";");
      return make_stmt(loc, std::move(a));
    }
    expect_punct(";");
    return make_stmt(loc, ExprStmt{std::move(e)});
  }

  // -- expressions ---------------------------------------------------------

  ExprPtr make_expr(SourceLoc loc, auto node) {
    auto e = std::make_unique<Expr>();
    e->loc = loc;
    e->node = std::move(node);
    return e;
  }

  ExprPtr expression() {
    DepthGuard guard(*this);
    return logical_or();
  }

  ExprPtr binary_level(int level) {
    // Lowest to highest precedence.
    static const std::vector<std::vector<std::pair<std::string_view, BinaryOp>>>
        kLevels = {
            {{"||", BinaryOp::Or}},
            {{"&&", BinaryOp::And}},
            {{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}},
            {{"<", BinaryOp::Lt},
             {"<=", BinaryOp::Le},
             {">", BinaryOp::Gt},
             {">=", BinaryOp::Ge}},
            {{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}},
            {{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"%", BinaryOp::Mod}},
        };
    if (level == static_cast<int>(kLevels.size())) return unary();
    ExprPtr lhs = binary_level(level + 1);
    for (;;) {
      const Token& t = peek();
      std::optional<BinaryOp> op;
      if (t.kind == TokenKind::Punct) {
        for (const auto& [text, o] : kLevels[level]) {
          if (t.lexeme == text) op = o;
        }
      }
      if (!op) return lhs;
      SourceLoc loc = advance().loc;
      ExprPtr rhs = binary_level(level + 1);
      lhs = make_expr(loc, Binary{*op, std::move(lhs), std::move(rhs)});
    }
  }

  ExprPtr logical_or() { return binary_level(0); }

  ExprPtr unary() {
    DepthGuard guard(*this);
    SourceLoc loc = peek().loc;
    if (accept_punct("-")) return make_expr(loc, Unary{UnaryOp::Negate, unary()});
    if (accept_punct("!")) return make_expr(loc, Unary{UnaryOp::Not, unary()});
    return postfix();
  }

  std::vector<ExprPtr> arguments() {
    std::vector<ExprPtr> args;
    expect_punct("(");
    if (!peek().is_punct(")")) {
      do {
        args.push_back(expression());
      } while (accept_punct(","));
    }
    expect_punct(")");
    return args;
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (peek().is_punct(".")) {
      advance();
      SourceLoc loc = peek().loc;
      std::string name = expect_ident("member name").lexeme;
      if (peek().is_punct("(")) {
        e = make_expr(loc, MethodCall{std::move(e), std::move(name), arguments()});
      } else {
        e = make_expr(loc, MemberAccess{std::move(e), std::move(name)});
      }
    }
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case TokenKind::IntLiteral:
        advance();
        return make_expr(loc, IntLit{t.int_value});
      case TokenKind::FloatLiteral:
        advance();
        return make_expr(loc, FloatLit{t.float_value});
      case TokenKind::StringLiteral:
        advance();
        return make_expr(loc, StringLit{t.text});
      case TokenKind::Identifier: {
        std::string name = advance().lexeme;
        if (peek().is_punct("(")) {
          return make_expr(loc, Call{std::move(name), arguments()});
        }
        return make_expr(loc, NameRef{std::move(name)});
      }
      case TokenKind::Keyword:
        if (accept_keyword("true")) return make_expr(loc, BoolLit{true});
        if (accept_keyword("false")) return make_expr(loc, BoolLit{false});
        if (accept_keyword("this")) return make_expr(loc, ThisRef{});
        if (accept_keyword("value")) return make_expr(loc, ValueRef{});
        if (accept_keyword("super")) {
          expect_punct(".");
          SuperAccess s;
          s.name = expect_ident("member name after 'super.'").lexeme;
          if (peek().is_punct("(")) {
            s.is_call = true;
            s.args = arguments();
          }
          return make_expr(loc, std::move(s));
        }
        if (accept_keyword("sub")) {
          expect_punct(".");
          SubCall s;
          s.name = expect_ident("method name after 'sub.'").lexeme;
          if (!peek().is_punct("(")) fail("'sub' may only be used to call a method");
          s.args = arguments();
          return make_expr(loc, std::move(s));
        }
        break;
      case TokenKind::Punct:
        if (t.lexeme == "(") {
          advance();
          ExprPtr inner = expression();
          expect_punct(")");
          return inner;
        }
        break;
      default:
        break;
    }
    fail("expected an expression");
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

SyntaxTree parse(std::span<const Token> tokens) {
  return Parser(tokens).program();
}

SyntaxTree parse_source(std::string_view source) {
  std::vector<Token> tokens = tokenize(source);
  return parse(tokens);
}

}  // namespace cop
