#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cop/diagnostic.hpp"

namespace cop {

enum class Visibility { Public, Protected, Private };
enum class Direction { None, Incoming, Outgoing };

std::string_view to_string(Visibility v);
/// "in", "out" or "none".
std::string_view to_string(Direction d);

enum class BaseType { Int, Double, Bool, String, Void, CharArray, Concept };

struct TypeExpr {
  BaseType base = BaseType::Void;
  /// Capacity of a char-array; always >= 1 for CharArray.
  std::int64_t size = 0;
  /// Concept name for BaseType::Concept.
  std::string concept_name;
  SourceLoc loc;

  bool is_void() const { return base == BaseType::Void; }
  bool is_concept() const { return base == BaseType::Concept; }
  /// Source spelling: `int`, `char[10]`, `Account`, ...
  std::string to_string() const;

  friend bool operator==(const TypeExpr& a, const TypeExpr& b) {
    return a.base == b.base && a.size == b.size &&
           a.concept_name == b.concept_name;
  }
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class UnaryOp { Negate, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

std::string_view to_string(UnaryOp op);
std::string_view to_string(BinaryOp op);

struct IntLit { std::int64_t value; };
struct FloatLit { double value; };
struct BoolLit { bool value; };
struct StringLit { std::string value; };
/// Bare identifier: a local, or a field/property of the executing prefix.
struct NameRef { std::string name; };
struct ThisRef {};
/// `value` inside a property setter.
struct ValueRef {};
/// `object.name` without a call.
struct MemberAccess {
  ExprPtr object;
  std::string name;
};
/// `name(args)`: builtin, constructor, outgoing member of the prefix, or free
/// function.
struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};
/// `object.name(args)`.
struct MethodCall {
  ExprPtr object;
  std::string name;
  std::vector<ExprPtr> args;
};
/// `super.name` or `super.name(args)`.
struct SuperAccess {
  std::string name;
  bool is_call = false;
  std::vector<ExprPtr> args;
};
/// `sub.name(args)`.
struct SubCall {
  std::string name;
  std::vector<ExprPtr> args;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  SourceLoc loc;
  std::variant<IntLit, FloatLit, BoolLit, StringLit, NameRef, ThisRef,
               ValueRef, MemberAccess, Call, MethodCall, SuperAccess, SubCall,
               Unary, Binary>
      node;
};

// ---------------------------------------------------------------------------
// Statements

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
  std::vector<StmtPtr> stmts;
  SourceLoc loc;
};

struct VarDecl {
  TypeExpr type;
  std::string name;
  ExprPtr init;
};
struct Assign {
  ExprPtr target;
  ExprPtr value;
};
struct ExprStmt { ExprPtr expr; };
struct If {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;  // may be null
};
struct While {
  ExprPtr cond;
  StmtPtr body;
};
struct Return { ExprPtr value; };  // value may be null

struct Stmt {
  SourceLoc loc;
  std::variant<VarDecl, Assign, ExprStmt, If, While, Return, Block> node;
};

// ---------------------------------------------------------------------------
// Declarations

struct Param {
  TypeExpr type;
  std::string name;
  SourceLoc loc;
};

enum class MemberKind { ReferenceField, ObjectField, Method, Property };

std::string_view to_string(MemberKind k);

struct MemberDecl {
  MemberKind kind = MemberKind::ReferenceField;
  Visibility visibility = Visibility::Public;
  Direction direction = Direction::None;
  TypeExpr type;
  std::string name;
  std::vector<Param> params;    // methods
  std::optional<Block> body;    // methods
  std::optional<Block> getter;  // properties
  std::optional<Block> setter;  // properties
  SourceLoc loc;
};

struct ConceptDecl {
  std::string name;
  std::optional<std::string> parent;
  SourceLoc parent_loc;
  std::vector<MemberDecl> members;
  SourceLoc loc;
};

struct FuncDecl {
  TypeExpr return_type;
  std::string name;
  std::vector<Param> params;
  Block body;
  SourceLoc loc;
};

struct SyntaxTree {
  std::vector<ConceptDecl> concepts;
  std::vector<FuncDecl> functions;
};

}  // namespace cop
