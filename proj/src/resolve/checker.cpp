#include <map>
#include <set>

#include "cop/resolve.hpp"

namespace cop {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

using StaticType = std::optional<TypeExpr>;

bool is_builtin(std::string_view name) { return name == "print" || name == "str"; }

TypeExpr simple(BaseType b) {
  TypeExpr t;
  t.base = b;
  return t;
}

TypeExpr concept_type(const std::string& name) {
  TypeExpr t;
  t.base = BaseType::Concept;
  t.concept_name = name;
  return t;
}

class Checker {
 public:
  explicit Checker(const ConceptTable& table) : table_(table) {}

  std::vector<Diagnostic> run() {
    for (const auto& info : table_.concepts()) {
      if (info->chain.empty()) continue;
      for (const MemberDecl& m : info->decl->members) check_member(*info, m);
    }
    for (const FuncDecl& f : table_.tree().functions) check_function(f);
    check_main();
    sort_diagnostics(errors_);
    return std::move(errors_);
  }

 private:
  struct Frame {
    const ConceptInfo* owner = nullptr;
    Direction direction = Direction::None;
    bool in_setter = false;
    TypeExpr property_type;
    TypeExpr return_type;
    std::vector<std::map<std::string, TypeExpr, std::less<>>> scopes;
  };

  void error(std::string code, std::string message, SourceLoc loc) {
    errors_.push_back({std::move(code), std::move(message), loc});
  }

  // -- declarations --------------------------------------------------------

  void bind_params(const std::vector<Param>& params) {
    frame_.scopes.emplace_back();
    for (const Param& p : params) declare(p.name, p.type, p.loc);
  }

  void check_member(const ConceptInfo& info, const MemberDecl& m) {
    if (m.kind == MemberKind::Method) {
      frame_ = Frame{&info, m.direction, false, {}, m.type, {}};
      bind_params(m.params);
      check_block(*m.body);
    } else if (m.kind == MemberKind::Property) {
      if (m.getter) {
        frame_ = Frame{&info, Direction::Outgoing, false, {}, m.type, {}};
        check_block(*m.getter);
      }
      if (m.setter) {
        frame_ = Frame{&info, Direction::Outgoing, true, m.type,
                       simple(BaseType::Void), {}};
        check_block(*m.setter);
      }
    }
  }

  void check_function(const FuncDecl& f) {
    frame_ = Frame{nullptr, Direction::None, false, {}, f.return_type, {}};
    bind_params(f.params);
    check_block(f.body);
  }

  void check_main() {
    const FuncDecl* main = table_.function("main");
    if (!main) {
      error("MissingMain", "program has no 'func void main()'", {1, 1});
    } else if (!main->params.empty() || !main->return_type.is_void()) {
      error("MissingMain", "'main' must be declared 'func void main()'", main->loc);
    }
  }

  // -- scopes --------------------------------------------------------------

  void declare(const std::string& name, const TypeExpr& type, SourceLoc loc) {
    auto& scope = frame_.scopes.back();
    if (scope.count(name)) {
      error("DuplicateLocal", "'" + name + "' is already declared in this scope", loc);
      return;
    }
    scope.emplace(name, type);
  }

  const TypeExpr* find_local(std::string_view name) const {
    for (auto it = frame_.scopes.rbegin(); it != frame_.scopes.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void check_type(const TypeExpr& t) {
    if (t.is_concept() && !table_.find(t.concept_name)) {
      error("UnknownType", "unknown concept '" + t.concept_name + "'", t.loc);
    }
    if (t.is_void()) error("InvalidType", "variables cannot be 'void'", t.loc);
  }

  // -- statements ----------------------------------------------------------

  void check_block(const Block& b) {
    frame_.scopes.emplace_back();
    for (const auto& s : b.stmts) check_stmt(*s);
    frame_.scopes.pop_back();
  }

  void check_nested(const Stmt& s) {
    frame_.scopes.emplace_back();
    check_stmt(s);
    frame_.scopes.pop_back();
  }

  void check_stmt(const Stmt& s) {
    std::visit(
        Overloaded{
            [&](const VarDecl& d) {
              check_type(d.type);
              infer(*d.init);
              declare(d.name, d.type, s.loc);
            },
            [&](const Assign& a) {
              check_target(*a.target);
              infer(*a.value);
            },
            [&](const ExprStmt& e) { infer(*e.expr); },
            [&](const If& i) {
              infer(*i.cond);
              check_nested(*i.then_branch);
              if (i.else_branch) check_nested(*i.else_branch);
            },
            [&](const While& w) {
              infer(*w.cond);
              check_nested(*w.body);
            },
            [&](const Return& r) {
              if (r.value) {
                infer(*r.value);
                if (frame_.return_type.is_void()) {
                  error("ReturnShape", "return with a value in a void body", s.loc);
                }
              } else if (!frame_.return_type.is_void()) {
                error("ReturnShape",
                      "bare return in a body returning '" +
                          frame_.return_type.to_string() + "'",
                      s.loc);
              }
            },
            [&](const Block& b) { check_block(b); },
        },
        s.node);
  }

  void check_target(const Expr& target) {
    if (const auto* n = std::get_if<NameRef>(&target.node)) {
      if (find_local(n->name)) return;
      if (!frame_.owner) {
        error("UnknownName", "unknown variable '" + n->name + "'", target.loc);
        return;
      }
      prefix_member(n->name, target.loc);
      return;
    }
    infer(target);
  }

  // -- expressions ---------------------------------------------------------

  std::span<const ConceptInfo* const> prefix() const {
    return frame_.owner->chain;
  }

  /// Field or property visible as a bare name in the executing prefix.
  StaticType prefix_member(const std::string& name, SourceLoc loc) {
    LookupResult r = find_upward(prefix(), prefix().size() - 1, name,
                                 MemberClass::FieldOrProperty,
                                 visible_from(frame_.owner));
    if (r.hit) return r.hit->decl->type;
    if (r.blocked) {
      error("VisibilityViolation", "'" + name + "' is not accessible here", loc);
    } else {
      error("UnknownName", "unknown name '" + name + "'", loc);
    }
    return std::nullopt;
  }

  /// Outgoing method/property reachable by a bare call in the prefix, or
  /// through `super` when `above_current` is set.
  StaticType outgoing_call(const std::string& name, std::size_t arg_count,
                           bool above_current, SourceLoc loc) {
    std::span<const ConceptInfo* const> chain = prefix();
    if (above_current) chain = chain.first(chain.size() - 1);
    LookupResult r;
    if (!chain.empty()) {
      r = find_upward(chain, chain.size() - 1, name, MemberClass::Outgoing,
                      visible_from(frame_.owner));
    }
    if (!r.hit) {
      error(r.blocked ? "VisibilityViolation" : "NoSuchMethod",
            "no accessible outgoing member '" + name + "'" +
                (above_current ? " above '" : " in '") + frame_.owner->name + "'",
            loc);
      return std::nullopt;
    }
    const MemberDecl& d = *r.hit->decl;
    std::size_t expected = d.kind == MemberKind::Method ? d.params.size() : 0;
    if (expected != arg_count) arity_error(name, expected, arg_count, loc);
    return d.type;
  }

  void arity_error(const std::string& name, std::size_t expected,
                   std::size_t got, SourceLoc loc) {
    error("ArityMismatch",
          "'" + name + "' takes " + std::to_string(expected) + " argument(s), " +
              std::to_string(got) + " given",
          loc);
  }

  /// Concepts a value of static type T may have at runtime.
  std::vector<const ConceptInfo*> reachable(const ConceptInfo& t) const {
    std::vector<const ConceptInfo*> out(t.chain.rbegin(), t.chain.rend());
    for (const ConceptInfo* d : table_.descendants(t)) out.push_back(d);
    return out;
  }

  const ConceptInfo* concept_of(const StaticType& t, SourceLoc loc) {
    if (!t) return nullptr;
    if (!t->is_concept()) {
      error("NotAConcept", "value of type '" + t->to_string() + "' has no members", loc);
      return nullptr;
    }
    const ConceptInfo* c = table_.find(t->concept_name);
    return c && !c->chain.empty() ? c : nullptr;
  }

  StaticType infer_args(const std::vector<ExprPtr>& args) {
    for (const auto& a : args) infer(*a);
    return std::nullopt;
  }

  bool require_member_frame(std::string_view keyword, SourceLoc loc) {
    if (frame_.owner) return true;
    error("ThisOutsideMember",
          "'" + std::string(keyword) + "' used outside a concept member", loc);
    return false;
  }

  StaticType infer(const Expr& e) {
    return std::visit(
        Overloaded{
            [&](const IntLit&) -> StaticType { return simple(BaseType::Int); },
            [&](const FloatLit&) -> StaticType { return simple(BaseType::Double); },
            [&](const BoolLit&) -> StaticType { return simple(BaseType::Bool); },
            [&](const StringLit&) -> StaticType { return simple(BaseType::String); },
            [&](const NameRef& n) -> StaticType {
              if (const TypeExpr* t = find_local(n.name)) return *t;
              if (!frame_.owner) {
                error("UnknownName", "unknown name '" + n.name + "'", e.loc);
                return std::nullopt;
              }
              return prefix_member(n.name, e.loc);
            },
            [&](const ThisRef&) -> StaticType {
              if (!require_member_frame("this", e.loc)) return std::nullopt;
              return concept_type(frame_.owner->name);
            },
            [&](const ValueRef&) -> StaticType {
              if (!frame_.in_setter) {
                error("ValueOutsideSetter", "'value' is only available in a setter", e.loc);
                return std::nullopt;
              }
              return frame_.property_type;
            },
            [&](const MemberAccess& m) -> StaticType {
              if (std::holds_alternative<ThisRef>(m.object->node)) {
                if (!require_member_frame("this", m.object->loc)) return std::nullopt;
                return prefix_member(m.name, e.loc);
              }
              const ConceptInfo* c = concept_of(infer(*m.object), e.loc);
              if (!c) return std::nullopt;
              for (const ConceptInfo* k : reachable(*c)) {
                if (const MemberDecl* d = member_of(*k, m.name, MemberClass::FieldOrProperty)) {
                  return d->type;
                }
              }
              error("NoSuchMember",
                    "'" + c->name + "' and its sub-concepts declare no field or property '" +
                        m.name + "'",
                    e.loc);
              return std::nullopt;
            },
            [&](const Call& c) -> StaticType { return infer_call(c, e.loc); },
            [&](const MethodCall& m) -> StaticType {
              infer_args(m.args);
              if (std::holds_alternative<ThisRef>(m.object->node)) {
                if (!require_member_frame("this", m.object->loc)) return std::nullopt;
                return outgoing_call(m.name, m.args.size(), false, e.loc);
              }
              const ConceptInfo* c = concept_of(infer(*m.object), e.loc);
              if (!c) return std::nullopt;
              return external_call(*c, m.name, m.args.size(), e.loc);
            },
            [&](const SuperAccess& s) -> StaticType {
              infer_args(s.args);
              if (!require_member_frame("super", e.loc)) return std::nullopt;
              if (!frame_.owner->parent) {
                error("SuperWithoutParent",
                      "'super' used in '" + frame_.owner->name + "', which has no parent",
                      e.loc);
                return std::nullopt;
              }
              if (s.is_call) return outgoing_call(s.name, s.args.size(), true, e.loc);
              auto chain = prefix().first(prefix().size() - 1);
              LookupResult r = find_upward(chain, chain.size() - 1, s.name,
                                           MemberClass::FieldOrProperty,
                                           visible_from(frame_.owner));
              if (r.hit) return r.hit->decl->type;
              error(r.blocked ? "VisibilityViolation" : "NoSuchMember",
                    "no accessible field or property '" + s.name + "' above '" +
                        frame_.owner->name + "'",
                    e.loc);
              return std::nullopt;
            },
            [&](const SubCall& s) -> StaticType {
              infer_args(s.args);
              if (!frame_.owner || frame_.direction != Direction::Incoming) {
                error("SubOutsideIncoming", "'sub' is only allowed in incoming methods", e.loc);
                return std::nullopt;
              }
              return sub_call(s, e.loc);
            },
            [&](const Unary& u) -> StaticType {
              StaticType t = infer(*u.operand);
              if (u.op == UnaryOp::Not) return simple(BaseType::Bool);
              return t;
            },
            [&](const Binary& b) -> StaticType {
              StaticType l = infer(*b.lhs);
              StaticType r = infer(*b.rhs);
              switch (b.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub:
                case BinaryOp::Mul:
                case BinaryOp::Div:
                case BinaryOp::Mod: {
                  if (!l || !r) return std::nullopt;
                  auto stringy = [](const TypeExpr& t) {
                    return t.base == BaseType::String || t.base == BaseType::CharArray;
                  };
                  if (b.op == BinaryOp::Add && stringy(*l) && stringy(*r)) {
                    return simple(BaseType::String);
                  }
                  if (l->base == r->base &&
                      (l->base == BaseType::Int || l->base == BaseType::Double)) {
                    return l;
                  }
                  return std::nullopt;
                }
                default:
                  return simple(BaseType::Bool);
              }
            },
        },
        e.node);
  }

  StaticType infer_call(const Call& c, SourceLoc loc) {
    infer_args(c.args);
    if (is_builtin(c.callee)) {
      if (c.args.size() != 1) arity_error(c.callee, 1, c.args.size(), loc);
      return simple(c.callee == "print" ? BaseType::Void : BaseType::String);
    }
    if (const ConceptInfo* k = table_.find(c.callee)) {
      std::size_t expected = k->reference_fields.size() + (k->parent ? 1 : 0);
      if (expected != c.args.size()) arity_error(c.callee, expected, c.args.size(), loc);
      return concept_type(k->name);
    }
    if (frame_.owner) {
      LookupResult r = find_upward(prefix(), prefix().size() - 1, c.callee,
                                   MemberClass::Outgoing, visible_from(frame_.owner));
      if (r.hit || r.blocked) return outgoing_call(c.callee, c.args.size(), false, loc);
    }
    if (const FuncDecl* f = table_.function(c.callee)) {
      if (f->params.size() != c.args.size()) {
        arity_error(c.callee, f->params.size(), c.args.size(), loc);
      }
      return f->return_type;
    }
    error(frame_.owner ? "NoSuchMethod" : "UnknownName",
          "unknown function or method '" + c.callee + "'", loc);
    return std::nullopt;
  }

  StaticType external_call(const ConceptInfo& c, const std::string& name,
                           std::size_t arg_count, SourceLoc loc) {
    std::vector<const MemberDecl*> candidates;
    for (const ConceptInfo* k : reachable(c)) {
      for (MemberClass cls : {MemberClass::Incoming, MemberClass::Outgoing}) {
        if (const MemberDecl* d = member_of(*k, name, cls)) candidates.push_back(d);
      }
    }
    if (candidates.empty()) {
      error("NoSuchMethod",
            "'" + c.name + "' and its sub-concepts declare no method '" + name + "'", loc);
      return std::nullopt;
    }
    StaticType result;
    bool any = false;
    bool uniform = true;
    for (const MemberDecl* d : candidates) {
      std::size_t expected = d->kind == MemberKind::Method ? d->params.size() : 0;
      if (expected != arg_count) continue;
      if (any && !(*result == d->type)) uniform = false;
      result = d->type;
      any = true;
    }
    if (!any) {
      const MemberDecl* d = candidates.front();
      arity_error(name, d->kind == MemberKind::Method ? d->params.size() : 0, arg_count, loc);
      return std::nullopt;
    }
    return uniform ? result : std::nullopt;
  }

  StaticType sub_call(const SubCall& s, SourceLoc loc) {
    std::vector<const MemberDecl*> deeper;
    for (const ConceptInfo* k : table_.descendants(*frame_.owner)) {
      const MemberDecl* d = k->incoming_method(s.name);
      if (d && d->visibility != Visibility::Private) deeper.push_back(d);
    }
    bool arity_ok = deeper.empty();
    for (const MemberDecl* d : deeper) {
      if (d->params.size() == s.args.size()) arity_ok = true;
    }
    if (!arity_ok) {
      arity_error(s.name, deeper.front()->params.size(), s.args.size(), loc);
    }
    if (const MemberDecl* own = frame_.owner->incoming_method(s.name)) {
      return own->type;
    }
    return std::nullopt;
  }

  const ConceptTable& table_;
  std::vector<Diagnostic> errors_;
  Frame frame_;
};

}  // namespace

std::vector<Diagnostic> check_bodies(const ConceptTable& table) {
  return Checker(table).run();
}

}  // namespace cop
