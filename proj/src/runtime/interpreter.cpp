#include "cop/interpreter.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace cop {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

[[noreturn]] void fail(std::string code, std::string message, SourceLoc loc) {
  throw RuntimeError(std::move(code), std::move(message), loc);
}

bool is_builtin(std::string_view name) { return name == "print" || name == "str"; }

VisibilityFilter not_private() {
  return [](const MemberDecl& d, const ConceptInfo&) {
    return d.visibility != Visibility::Private;
  };
}

VisibilityFilter anything() {
  return [](const MemberDecl&, const ConceptInfo&) { return true; };
}

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void check_arity(std::string_view name, std::size_t expected, std::size_t got,
                 SourceLoc loc) {
  if (expected != got) {
    fail("ArityMismatch",
         "'" + std::string(name) + "' takes " + std::to_string(expected) +
             " argument(s), " + std::to_string(got) + " given",
         loc);
  }
}

}  // namespace

class Interpreter::DepthGuard {
 public:
  DepthGuard(Interpreter& in, SourceLoc loc) : in_(in) {
    if (++in_.depth_ > kMaxCallDepth) {
      --in_.depth_;
      fail("StackOverflow",
           "call depth exceeds " + std::to_string(kMaxCallDepth), loc);
    }
  }
  ~DepthGuard() { --in_.depth_; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;

 private:
  Interpreter& in_;
};

Interpreter::Interpreter(const ConceptTable& table, std::ostream& out,
                         std::ostream* trace)
    : table_(table), out_(out), trace_(trace) {}

// ---------------------------------------------------------------------------
// Plumbing

std::span<const ConceptInfo* const> Interpreter::chain_for(
    const ConceptValue& ref, SourceLoc loc) const {
  const ConceptInfo* info =
      ref.segments.empty() ? nullptr : table_.find(ref.concept_name());
  bool ok = info && info->chain.size() == ref.segments.size();
  for (std::size_t i = 0; ok && i < ref.segments.size(); ++i) {
    ok = info->chain[i]->name == ref.segments[i].concept_name &&
         info->chain[i]->reference_fields.size() == ref.segments[i].fields.size();
  }
  if (!ok) fail("MalformedReference", "reference does not match its inclusion chain", loc);
  return info->chain;
}

const ConceptInfo* Interpreter::concept_at(const DispatchContext& ctx) const {
  if (!ctx.in_member()) return nullptr;
  return table_.find(ctx.reference.segments[ctx.segment - 1].concept_name);
}

DispatchContext Interpreter::member_context(const ConceptValue& ref,
                                            std::size_t segment,
                                            Direction direction) const {
  std::size_t n = chain_for(ref, {}).size();
  if (segment < 1 || segment > n) {
    fail("MalformedReference", "segment index out of range", {});
  }
  DispatchContext ctx;
  ctx.reference = ref;
  ctx.segment = segment;
  ctx.direction = direction;
  ctx.scopes.emplace_back();
  return ctx;
}

void Interpreter::emit(std::string_view kind, std::string_view what) {
  if (trace_) *trace_ << kind << ' ' << what << '\n';
}

Value Interpreter::coerce(Value v, const TypeExpr& type, SourceLoc loc) const {
  auto mismatch = [&]() -> Value {
    fail("TypeMismatch",
         "expected '" + type.to_string() + "', got '" + type_name(v) + "'", loc);
  };
  switch (type.base) {
    case BaseType::Int:
      return v.is_int() ? v : mismatch();
    case BaseType::Double:
      return v.is_double() ? v : mismatch();
    case BaseType::Bool:
      return v.is_bool() ? v : mismatch();
    case BaseType::Void:
      return v.is_void() ? v : mismatch();
    case BaseType::String:
      if (!v.is_text()) return mismatch();
      return Value(std::string(v.as_text()));
    case BaseType::CharArray: {
      if (!v.is_text()) return mismatch();
      const std::string& text = v.as_text();
      if (static_cast<std::int64_t>(text.size()) > type.size) {
        fail("CharArrayOverflow",
             std::to_string(text.size()) + " characters do not fit in '" +
                 type.to_string() + "'",
             loc);
      }
      return Value(CharArray{type.size, text});
    }
    case BaseType::Concept: {
      if (!v.is_concept()) return mismatch();
      const ConceptInfo* want = table_.find(type.concept_name);
      const ConceptInfo* have = table_.find(v.as_concept().concept_name());
      if (!want || !have || !ConceptTable::is_within(*have, *want)) return mismatch();
      return v;
    }
  }
  return mismatch();
}

Value Interpreter::default_value(const MemberDecl& prop, SourceLoc loc) const {
  switch (prop.type.base) {
    case BaseType::Int: return Value(std::int64_t{0});
    case BaseType::Double: return Value(0.0);
    case BaseType::Bool: return Value(false);
    case BaseType::String: return Value(std::string());
    case BaseType::CharArray: return Value(CharArray{prop.type.size, {}});
    default:
      fail("UnsetObjectField",
           "object field '" + prop.name + "' of type '" + prop.type.to_string() +
               "' was read before it was written",
           loc);
  }
}

// ---------------------------------------------------------------------------
// Activation

Value Interpreter::finish(DispatchContext& ctx, const TypeExpr& type,
                          SourceLoc loc) {
  if (type.is_void()) return Value();
  if (!ctx.returned) {
    fail("MissingReturn",
         "body ended without returning a '" + type.to_string() + "'", loc);
  }
  return coerce(std::move(*ctx.returned), type, loc);
}

Value Interpreter::invoke_method(const ConceptValue& ref, std::size_t position,
                                 const MemberDecl& method, std::vector<Value> args,
                                 SourceLoc loc) {
  const std::string& owner = ref.segments[position].concept_name;
  check_arity(owner + "." + method.name, method.params.size(), args.size(), loc);
  DepthGuard guard(*this, loc);
  emit(method.direction == Direction::Incoming ? "IN" : "OUT", owner + "." + method.name);

  DispatchContext ctx;
  ctx.reference = ref;
  ctx.segment = position + 1;
  ctx.direction = method.direction;
  ctx.return_type = &method.type;
  ctx.scopes.emplace_back();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Param& p = method.params[i];
    ctx.scopes.back()[p.name] = Binding{p.type, coerce(std::move(args[i]), p.type, loc)};
  }
  exec_block(ctx, *method.body);
  return finish(ctx, method.type, method.loc);
}

Value Interpreter::invoke_outgoing(const ConceptValue& ref, const MemberHit& hit,
                                   std::vector<Value> args, SourceLoc loc) {
  if (hit.decl->kind == MemberKind::Method) {
    return invoke_method(ref, hit.position, *hit.decl, std::move(args), loc);
  }
  check_arity(hit.owner->name + "." + hit.decl->name, 0, args.size(), loc);
  return get_at(ref, hit.position, *hit.decl, loc);
}

Value Interpreter::call_function(const FuncDecl& f, std::vector<Value> args,
                                 SourceLoc loc) {
  check_arity(f.name, f.params.size(), args.size(), loc);
  DepthGuard guard(*this, loc);
  DispatchContext ctx;
  ctx.return_type = &f.return_type;
  ctx.scopes.emplace_back();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Param& p = f.params[i];
    ctx.scopes.back()[p.name] = Binding{p.type, coerce(std::move(args[i]), p.type, loc)};
  }
  exec_block(ctx, f.body);
  return finish(ctx, f.return_type, f.loc);
}

void Interpreter::run_main() {
  const FuncDecl* main = table_.function("main");
  if (!main) fail("MissingMain", "program has no 'main'", {1, 1});
  call_function(*main, {}, main->loc);
}

// ---------------------------------------------------------------------------
// Construction and dispatch

ConceptValue Interpreter::construct(std::string_view concept_name,
                                    std::vector<Value> args, SourceLoc loc) {
  const ConceptInfo* info = table_.find(concept_name);
  if (!info || info->chain.empty()) {
    fail("UnknownConcept", "unknown concept '" + std::string(concept_name) + "'", loc);
  }
  std::size_t offset = info->parent ? 1 : 0;
  check_arity(info->name, info->reference_fields.size() + offset, args.size(), loc);

  ConceptValue result;
  if (info->parent) {
    const Value& parent = args[0];
    if (!parent.is_concept() || parent.as_concept().concept_name() != *info->parent) {
      fail("TypeMismatch",
           "'" + info->name + "' must be constructed inside a '" + *info->parent +
               "', got '" + type_name(parent) + "'",
           loc);
    }
    result = parent.as_concept();
  }
  Segment seg;
  seg.concept_name = info->name;
  for (std::size_t i = 0; i < info->reference_fields.size(); ++i) {
    seg.fields.push_back(
        coerce(std::move(args[i + offset]), info->reference_fields[i]->type, loc));
  }
  result.segments.push_back(std::move(seg));
  return result;
}

Value Interpreter::dispatch_external(const ConceptValue& ref, std::string_view method,
                                     std::vector<Value> args,
                                     const ConceptInfo* caller, SourceLoc loc) {
  auto chain = chain_for(ref, loc);
  VisibilityFilter visible = visible_from(caller);
  LookupResult in = find_downward(chain, 0, method, MemberClass::Incoming, visible);
  if (in.hit) return invoke_method(ref, in.hit->position, *in.hit->decl, std::move(args), loc);
  LookupResult out =
      find_upward(chain, chain.size() - 1, method, MemberClass::Outgoing, visible);
  if (out.hit) return invoke_outgoing(ref, *out.hit, std::move(args), loc);
  if (in.blocked || out.blocked) {
    fail("VisibilityViolation",
         "'" + std::string(method) + "' of '" + ref.concept_name() +
             "' is not accessible here",
         loc);
  }
  fail("NoSuchMethod",
       "no method '" + std::string(method) + "' in the chain of '" +
           ref.concept_name() + "'",
       loc);
}

Value Interpreter::dispatch_sub(DispatchContext& ctx, std::string_view method,
                                std::vector<Value> args, SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  std::size_t here = ctx.segment - 1;
  LookupResult deeper =
      find_downward(chain, here + 1, method, MemberClass::Incoming, not_private());
  if (deeper.hit) {
    return invoke_method(ctx.reference, deeper.hit->position, *deeper.hit->decl,
                         std::move(args), loc);
  }

  // Leaf of the incoming chain: a void request ends here, a value-returning
  // one has nothing to answer it.
  bool non_void = false;
  LookupResult own = find_upward(chain, here, method, MemberClass::Incoming, anything());
  if (own.hit) {
    non_void = !own.hit->decl->type.is_void();
  } else {
    for (std::size_t j = here + 1; j < chain.size(); ++j) {
      for (MemberClass cls : {MemberClass::Incoming, MemberClass::Outgoing}) {
        const MemberDecl* d = member_of(*chain[j], method, cls);
        if (d && !d->type.is_void()) non_void = true;
      }
    }
  }
  if (non_void) {
    fail("SubNonVoidUnimplemented",
         "no incoming '" + std::string(method) + "' below '" + chain[here]->name +
             "' to produce a value",
         loc);
  }
  emit("NOOP", method);
  return Value();
}

Value Interpreter::dispatch_super(DispatchContext& ctx, std::string_view method,
                                  std::vector<Value> args, SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r;
  if (ctx.segment > 1) {
    r = find_upward(chain, ctx.segment - 2, method, MemberClass::Outgoing,
                    visible_from(concept_at(ctx)));
  }
  if (r.hit) return invoke_outgoing(ctx.reference, *r.hit, std::move(args), loc);
  fail(r.blocked ? "VisibilityViolation" : "NoSuchMethod",
       "no accessible outgoing '" + std::string(method) + "' above '" +
           chain[ctx.segment - 1]->name + "'",
       loc);
}

Value Interpreter::dispatch_bare(DispatchContext& ctx, std::string_view method,
                                 std::vector<Value> args, SourceLoc loc) {
  if (is_builtin(method)) {
    check_arity(method, 1, args.size(), loc);
    std::string text = render(args[0]);
    if (method == "str") return Value(std::move(text));
    out_ << text << '\n';
    return Value();
  }
  if (!ctx.in_member()) {
    fail("NoSuchMethod", "bare call to '" + std::string(method) + "' outside a member", loc);
  }
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r = find_upward(chain, ctx.segment - 1, method, MemberClass::Outgoing,
                               visible_from(concept_at(ctx)));
  if (r.hit) return invoke_outgoing(ctx.reference, *r.hit, std::move(args), loc);
  fail(r.blocked ? "VisibilityViolation" : "NoSuchMethod",
       "no accessible outgoing '" + std::string(method) + "' in '" +
           chain[ctx.segment - 1]->name + "' or above",
       loc);
}

// ---------------------------------------------------------------------------
// Fields and properties

Value Interpreter::get_at(const ConceptValue& ref, std::size_t position,
                          const MemberDecl& prop, SourceLoc loc) {
  const std::string& owner = ref.segments[position].concept_name;
  if (is_auto_backed(prop)) {
    emit("GET", owner + "." + prop.name);
    std::optional<Value> stored =
        store_.load(serialize_reference(ref.prefix(position + 1)), prop.name);
    return stored ? *stored : default_value(prop, loc);
  }
  if (!prop.getter) fail("NoGetter", "property '" + prop.name + "' has no getter", loc);
  DepthGuard guard(*this, loc);
  emit("GET", owner + "." + prop.name);
  DispatchContext ctx;
  ctx.reference = ref;
  ctx.segment = position + 1;
  ctx.direction = Direction::Outgoing;
  ctx.return_type = &prop.type;
  exec_block(ctx, *prop.getter);
  return finish(ctx, prop.type, prop.loc);
}

void Interpreter::set_at(const ConceptValue& ref, std::size_t position,
                         const MemberDecl& prop, Value v, SourceLoc loc) {
  const std::string& owner = ref.segments[position].concept_name;
  if (!is_auto_backed(prop) && !prop.setter) {
    fail("NoSetter", "property '" + prop.name + "' has no setter", loc);
  }
  v = coerce(std::move(v), prop.type, loc);
  if (is_auto_backed(prop)) {
    emit("SET", owner + "." + prop.name);
    store_.save(serialize_reference(ref.prefix(position + 1)), prop.name, std::move(v));
    return;
  }
  DepthGuard guard(*this, loc);
  emit("SET", owner + "." + prop.name);
  DispatchContext ctx;
  ctx.reference = ref;
  ctx.segment = position + 1;
  ctx.direction = Direction::Outgoing;
  ctx.setter_value = std::move(v);
  TypeExpr void_type;
  ctx.return_type = &void_type;
  exec_block(ctx, *prop.setter);
}

Value Interpreter::property_get(const ConceptValue& ref, std::string_view prop,
                                const ConceptInfo* caller, SourceLoc loc) {
  auto chain = chain_for(ref, loc);
  LookupResult r = find_upward(chain, chain.size() - 1, prop, MemberClass::Property,
                               visible_from(caller));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchProperty",
         "no accessible property '" + std::string(prop) + "' in '" + ref.concept_name() + "'",
         loc);
  }
  return get_at(ref, r.hit->position, *r.hit->decl, loc);
}

void Interpreter::property_set(const ConceptValue& ref, std::string_view prop, Value v,
                               const ConceptInfo* caller, SourceLoc loc) {
  auto chain = chain_for(ref, loc);
  LookupResult r = find_upward(chain, chain.size() - 1, prop, MemberClass::Property,
                               visible_from(caller));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchProperty",
         "no accessible property '" + std::string(prop) + "' in '" + ref.concept_name() + "'",
         loc);
  }
  set_at(ref, r.hit->position, *r.hit->decl, std::move(v), loc);
}

Value Interpreter::property_get(DispatchContext& ctx, std::string_view prop,
                                SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r = find_upward(chain, ctx.segment - 1, prop, MemberClass::Property,
                               visible_from(concept_at(ctx)));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchProperty",
         "no accessible property '" + std::string(prop) + "'", loc);
  }
  return get_at(ctx.reference, r.hit->position, *r.hit->decl, loc);
}

void Interpreter::property_set(DispatchContext& ctx, std::string_view prop, Value v,
                               SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r = find_upward(chain, ctx.segment - 1, prop, MemberClass::Property,
                               visible_from(concept_at(ctx)));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchProperty",
         "no accessible property '" + std::string(prop) + "'", loc);
  }
  set_at(ctx.reference, r.hit->position, *r.hit->decl, std::move(v), loc);
}

Value Interpreter::read_reference_field(const ConceptValue& ref, std::string_view field,
                                        const ConceptInfo* caller, SourceLoc loc) {
  auto chain = chain_for(ref, loc);
  LookupResult r = find_upward(chain, chain.size() - 1, field, MemberClass::Field,
                               visible_from(caller));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchField",
         "no accessible field '" + std::string(field) + "' in '" + ref.concept_name() + "'",
         loc);
  }
  std::size_t idx = *r.hit->owner->field_index(field);
  return ref.segments[r.hit->position].fields[idx];
}

Value Interpreter::read_super_field(const DispatchContext& ctx, std::string_view field,
                                    SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r;
  if (ctx.segment > 1) {
    r = find_upward(chain, ctx.segment - 2, field, MemberClass::Field,
                    visible_from(concept_at(ctx)));
  }
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchField",
         "no accessible field '" + std::string(field) + "' above the current segment", loc);
  }
  std::size_t idx = *r.hit->owner->field_index(field);
  return ctx.reference.segments[r.hit->position].fields[idx];
}

Value Interpreter::read_in_prefix(DispatchContext& ctx, std::size_t upto,
                                  const std::string& name, SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r = find_upward(chain, upto, name, MemberClass::FieldOrProperty,
                               visible_from(concept_at(ctx)));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchField",
         "no accessible field or property '" + name + "'", loc);
  }
  if (r.hit->decl->kind == MemberKind::ReferenceField) {
    std::size_t idx = *r.hit->owner->field_index(name);
    return ctx.reference.segments[r.hit->position].fields[idx];
  }
  return get_at(ctx.reference, r.hit->position, *r.hit->decl, loc);
}

void Interpreter::assign_in_prefix(DispatchContext& ctx, std::size_t upto,
                                   const std::string& name, Value v, SourceLoc loc) {
  auto chain = chain_for(ctx.reference, loc);
  LookupResult r = find_upward(chain, upto, name, MemberClass::FieldOrProperty,
                               visible_from(concept_at(ctx)));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchField",
         "no accessible field or property '" + name + "'", loc);
  }
  const MemberDecl& d = *r.hit->decl;
  if (d.kind == MemberKind::ReferenceField) {
    std::size_t idx = *r.hit->owner->field_index(name);
    ctx.reference.segments[r.hit->position].fields[idx] = coerce(std::move(v), d.type, loc);
    return;
  }
  set_at(ctx.reference, r.hit->position, d, std::move(v), loc);
}

// ---------------------------------------------------------------------------
// Statements

Binding* Interpreter::find_local(DispatchContext& ctx, std::string_view name) const {
  for (auto it = ctx.scopes.rbegin(); it != ctx.scopes.rend(); ++it) {
    auto found = it->find(name);
    if (found != it->end()) return &found->second;
  }
  return nullptr;
}

void Interpreter::exec_block(DispatchContext& ctx, const Block& b) {
  ctx.scopes.emplace_back();
  for (const auto& s : b.stmts) {
    exec(ctx, *s);
    if (ctx.returned) break;
  }
  ctx.scopes.pop_back();
}

void Interpreter::exec(DispatchContext& ctx, const Stmt& s) {
  auto condition = [&](const Expr& e) {
    Value c = eval(ctx, e);
    if (!c.is_bool()) {
      fail("TypeMismatch", "condition must be 'bool', got '" + type_name(c) + "'", e.loc);
    }
    return c.as_bool();
  };
  auto nested = [&](const Stmt& inner) {
    ctx.scopes.emplace_back();
    exec(ctx, inner);
    ctx.scopes.pop_back();
  };
  std::visit(
      Overloaded{
          [&](const VarDecl& d) {
            Value v = coerce(eval(ctx, *d.init), d.type, s.loc);
            ctx.scopes.back()[d.name] = Binding{d.type, std::move(v)};
          },
          [&](const Assign& a) {
            Value v = eval(ctx, *a.value);
            assign(ctx, *a.target, std::move(v));
          },
          [&](const ExprStmt& e) { eval(ctx, *e.expr); },
          [&](const If& i) {
            if (condition(*i.cond)) {
              nested(*i.then_branch);
            } else if (i.else_branch) {
              nested(*i.else_branch);
            }
          },
          [&](const While& w) {
            while (!ctx.returned && condition(*w.cond)) nested(*w.body);
          },
          [&](const Return& r) {
            ctx.returned = r.value ? eval(ctx, *r.value) : Value();
          },
          [&](const Block& b) { exec_block(ctx, b); },
      },
      s.node);
}

Value* Interpreter::lvalue(DispatchContext& ctx, const Expr& e) {
  if (const auto* n = std::get_if<NameRef>(&e.node)) {
    if (Binding* b = find_local(ctx, n->name)) return &b->value;
    if (!ctx.in_member()) return nullptr;
    auto chain = chain_for(ctx.reference, e.loc);
    LookupResult r = find_upward(chain, ctx.segment - 1, n->name,
                                 MemberClass::FieldOrProperty,
                                 visible_from(concept_at(ctx)));
    if (!r.hit || r.hit->decl->kind != MemberKind::ReferenceField) return nullptr;
    return &ctx.reference.segments[r.hit->position]
                .fields[*r.hit->owner->field_index(n->name)];
  }
  if (const auto* m = std::get_if<MemberAccess>(&e.node)) {
    if (std::holds_alternative<ThisRef>(m->object->node)) {
      return lvalue(ctx, Expr{e.loc, NameRef{m->name}});
    }
    Value* base = lvalue(ctx, *m->object);
    if (!base || !base->is_concept()) return nullptr;
    auto chain = chain_for(base->as_concept(), e.loc);
    LookupResult r = find_upward(chain, chain.size() - 1, m->name,
                                 MemberClass::FieldOrProperty,
                                 visible_from(concept_at(ctx)));
    if (!r.hit || r.hit->decl->kind != MemberKind::ReferenceField) return nullptr;
    return &base->as_concept().segments[r.hit->position]
                .fields[*r.hit->owner->field_index(m->name)];
  }
  return nullptr;
}

void Interpreter::assign(DispatchContext& ctx, const Expr& target, Value v) {
  if (const auto* n = std::get_if<NameRef>(&target.node)) {
    if (Binding* b = find_local(ctx, n->name)) {
      b->value = coerce(std::move(v), b->type, target.loc);
      return;
    }
    if (!ctx.in_member()) fail("UnknownName", "unknown variable '" + n->name + "'", target.loc);
    assign_in_prefix(ctx, ctx.segment - 1, n->name, std::move(v), target.loc);
    return;
  }
  if (const auto* s = std::get_if<SuperAccess>(&target.node)) {
    if (!ctx.in_member() || ctx.segment < 2) fail("NoSuchField", "'super' has no segment above", target.loc);
    assign_in_prefix(ctx, ctx.segment - 2, s->name, std::move(v), target.loc);
    return;
  }
  const auto& m = std::get<MemberAccess>(target.node);
  if (std::holds_alternative<ThisRef>(m.object->node)) {
    if (!ctx.in_member()) fail("UnknownName", "'this' outside a member", target.loc);
    assign_in_prefix(ctx, ctx.segment - 1, m.name, std::move(v), target.loc);
    return;
  }
  Value* base = lvalue(ctx, *m.object);
  Value temp;
  if (!base) {
    temp = eval(ctx, *m.object);
    base = &temp;
  }
  if (!base->is_concept()) {
    fail("TypeMismatch", "'" + type_name(*base) + "' has no members", target.loc);
  }
  auto chain = chain_for(base->as_concept(), target.loc);
  LookupResult r = find_upward(chain, chain.size() - 1, m.name, MemberClass::FieldOrProperty,
                               visible_from(concept_at(ctx)));
  if (!r.hit) {
    fail(r.blocked ? "VisibilityViolation" : "NoSuchField",
         "no accessible field or property '" + m.name + "' in '" +
             base->as_concept().concept_name() + "'",
         target.loc);
  }
  const MemberDecl& d = *r.hit->decl;
  if (d.kind == MemberKind::ReferenceField) {
    if (base == &temp) {
      fail("InvalidAssignment", "cannot assign a field of a temporary reference", target.loc);
    }
    std::size_t idx = *r.hit->owner->field_index(m.name);
    base->as_concept().segments[r.hit->position].fields[idx] =
        coerce(std::move(v), d.type, target.loc);
    return;
  }
  ConceptValue ref = base->as_concept();
  set_at(ref, r.hit->position, d, std::move(v), target.loc);
}

// ---------------------------------------------------------------------------
// Expressions

std::vector<Value> Interpreter::eval_args(DispatchContext& ctx,
                                          const std::vector<ExprPtr>& args) {
  std::vector<Value> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(eval(ctx, *a));
  return out;
}

Value Interpreter::eval_call(DispatchContext& ctx, const Call& call, SourceLoc loc) {
  std::vector<Value> args = eval_args(ctx, call.args);
  if (is_builtin(call.callee)) return dispatch_bare(ctx, call.callee, std::move(args), loc);
  if (table_.find(call.callee)) return construct(call.callee, std::move(args), loc);
  if (ctx.in_member()) {
    auto chain = chain_for(ctx.reference, loc);
    LookupResult r = find_upward(chain, ctx.segment - 1, call.callee, MemberClass::Outgoing,
                                 visible_from(concept_at(ctx)));
    if (r.hit || r.blocked) return dispatch_bare(ctx, call.callee, std::move(args), loc);
  }
  if (const FuncDecl* f = table_.function(call.callee)) {
    return call_function(*f, std::move(args), loc);
  }
  fail("NoSuchMethod", "unknown function or method '" + call.callee + "'", loc);
}

Value Interpreter::eval(DispatchContext& ctx, const Expr& e) {
  return std::visit(
      Overloaded{
          [&](const IntLit& n) { return Value(n.value); },
          [&](const FloatLit& n) { return Value(n.value); },
          [&](const BoolLit& n) { return Value(n.value); },
          [&](const StringLit& n) { return Value(n.value); },
          [&](const NameRef& n) -> Value {
            if (Binding* b = find_local(ctx, n.name)) return b->value;
            if (!ctx.in_member()) fail("UnknownName", "unknown name '" + n.name + "'", e.loc);
            return read_in_prefix(ctx, ctx.segment - 1, n.name, e.loc);
          },
          [&](const ThisRef&) -> Value {
            if (!ctx.in_member()) fail("UnknownName", "'this' outside a member", e.loc);
            return Value(ctx.reference.prefix(ctx.segment));
          },
          [&](const ValueRef&) -> Value {
            if (!ctx.setter_value) fail("UnknownName", "'value' outside a setter", e.loc);
            return *ctx.setter_value;
          },
          [&](const MemberAccess& m) -> Value {
            if (std::holds_alternative<ThisRef>(m.object->node)) {
              if (!ctx.in_member()) fail("UnknownName", "'this' outside a member", e.loc);
              return read_in_prefix(ctx, ctx.segment - 1, m.name, e.loc);
            }
            Value obj = eval(ctx, *m.object);
            if (!obj.is_concept()) {
              fail("TypeMismatch", "'" + type_name(obj) + "' has no members", e.loc);
            }
            const ConceptValue& ref = obj.as_concept();
            auto chain = chain_for(ref, e.loc);
            LookupResult r = find_upward(chain, chain.size() - 1, m.name,
                                         MemberClass::FieldOrProperty,
                                         visible_from(concept_at(ctx)));
            if (!r.hit) {
              fail(r.blocked ? "VisibilityViolation" : "NoSuchField",
                   "no accessible field or property '" + m.name + "' in '" +
                       ref.concept_name() + "'",
                   e.loc);
            }
            if (r.hit->decl->kind == MemberKind::ReferenceField) {
              return ref.segments[r.hit->position]
                  .fields[*r.hit->owner->field_index(m.name)];
            }
            return get_at(ref, r.hit->position, *r.hit->decl, e.loc);
          },
          [&](const Call& c) { return eval_call(ctx, c, e.loc); },
          [&](const MethodCall& m) -> Value {
            if (std::holds_alternative<ThisRef>(m.object->node)) {
              if (!ctx.in_member()) fail("UnknownName", "'this' outside a member", e.loc);
              return dispatch_bare(ctx, m.name, eval_args(ctx, m.args), e.loc);
            }
            Value obj = eval(ctx, *m.object);
            if (!obj.is_concept()) {
              fail("TypeMismatch", "'" + type_name(obj) + "' has no methods", e.loc);
            }
            std::vector<Value> args = eval_args(ctx, m.args);
            return dispatch_external(obj.as_concept(), m.name, std::move(args),
                                     concept_at(ctx), e.loc);
          },
          [&](const SuperAccess& s) -> Value {
            if (s.is_call) return dispatch_super(ctx, s.name, eval_args(ctx, s.args), e.loc);
            if (ctx.segment < 2) fail("NoSuchField", "'super' has no segment above", e.loc);
            return read_in_prefix(ctx, ctx.segment - 2, s.name, e.loc);
          },
          [&](const SubCall& s) {
            return dispatch_sub(ctx, s.name, eval_args(ctx, s.args), e.loc);
          },
          [&](const Unary& u) { return eval_unary(u, eval(ctx, *u.operand), e.loc); },
          [&](const Binary& b) { return eval_binary(ctx, b, e.loc); },
      },
      e.node);
}

Value Interpreter::eval_unary(const Unary& u, Value operand, SourceLoc loc) const {
  if (u.op == UnaryOp::Not) {
    if (!operand.is_bool()) {
      fail("TypeMismatch", "'!' needs 'bool', got '" + type_name(operand) + "'", loc);
    }
    return Value(!operand.as_bool());
  }
  if (operand.is_int()) return Value(wrap(0u - static_cast<std::uint64_t>(operand.as_int())));
  if (operand.is_double()) return Value(-operand.as_double());
  fail("TypeMismatch", "'-' needs a number, got '" + type_name(operand) + "'", loc);
}

Value Interpreter::eval_binary(DispatchContext& ctx, const Binary& b, SourceLoc loc) {
  if (b.op == BinaryOp::And || b.op == BinaryOp::Or) {
    Value lhs = eval(ctx, *b.lhs);
    if (!lhs.is_bool()) {
      fail("TypeMismatch", "'" + std::string(to_string(b.op)) + "' needs 'bool'", loc);
    }
    bool short_circuit = b.op == BinaryOp::And ? !lhs.as_bool() : lhs.as_bool();
    if (short_circuit) return lhs;
    Value rhs = eval(ctx, *b.rhs);
    if (!rhs.is_bool()) {
      fail("TypeMismatch", "'" + std::string(to_string(b.op)) + "' needs 'bool'", loc);
    }
    return rhs;
  }

  Value lhs = eval(ctx, *b.lhs);
  Value rhs = eval(ctx, *b.rhs);
  auto mismatch = [&]() -> Value {
    fail("TypeMismatch",
         "operator '" + std::string(to_string(b.op)) + "' cannot combine '" +
             type_name(lhs) + "' and '" + type_name(rhs) + "'",
         loc);
  };

  switch (b.op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne: {
      bool same_kind = (lhs.is_text() && rhs.is_text()) ||
                       (lhs.data.index() == rhs.data.index() && !lhs.is_void());
      if (!same_kind) return mismatch();
      bool eq = lhs.is_double() ? lhs.as_double() == rhs.as_double() : lhs == rhs;
      return Value(b.op == BinaryOp::Eq ? eq : !eq);
    }
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: {
      int cmp = 0;
      if (lhs.is_int() && rhs.is_int()) {
        cmp = lhs.as_int() < rhs.as_int() ? -1 : (lhs.as_int() > rhs.as_int() ? 1 : 0);
      } else if (lhs.is_double() && rhs.is_double()) {
        double x = lhs.as_double();
        double y = rhs.as_double();
        if (std::isnan(x) || std::isnan(y)) return Value(false);
        cmp = x < y ? -1 : (x > y ? 1 : 0);
      } else if (lhs.is_text() && rhs.is_text()) {
        int c = lhs.as_text().compare(rhs.as_text());
        cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
      } else {
        return mismatch();
      }
      switch (b.op) {
        case BinaryOp::Lt: return Value(cmp < 0);
        case BinaryOp::Le: return Value(cmp <= 0);
        case BinaryOp::Gt: return Value(cmp > 0);
        default: return Value(cmp >= 0);
      }
    }
    default:
      break;
  }

  if (lhs.is_text() && rhs.is_text()) {
    if (b.op != BinaryOp::Add) return mismatch();
    return Value(lhs.as_text() + rhs.as_text());
  }
  if (lhs.is_int() && rhs.is_int()) {
    auto x = static_cast<std::uint64_t>(lhs.as_int());
    auto y = static_cast<std::uint64_t>(rhs.as_int());
    switch (b.op) {
      case BinaryOp::Add: return Value(wrap(x + y));
      case BinaryOp::Sub: return Value(wrap(x - y));
      case BinaryOp::Mul: return Value(wrap(x * y));
      case BinaryOp::Div:
      case BinaryOp::Mod: {
        std::int64_t n = lhs.as_int();
        std::int64_t d = rhs.as_int();
        if (d == 0) fail("DivisionByZero", "integer division by zero", loc);
        if (n == std::numeric_limits<std::int64_t>::min() && d == -1) {
          return Value(b.op == BinaryOp::Div ? n : std::int64_t{0});
        }
        return Value(b.op == BinaryOp::Div ? n / d : n % d);
      }
      default: break;
    }
  }
  if (lhs.is_double() && rhs.is_double()) {
    double x = lhs.as_double();
    double y = rhs.as_double();
    switch (b.op) {
      case BinaryOp::Add: return Value(x + y);
      case BinaryOp::Sub: return Value(x - y);
      case BinaryOp::Mul: return Value(x * y);
      case BinaryOp::Div: return Value(x / y);
      case BinaryOp::Mod: return Value(std::fmod(x, y));
      default: break;
    }
  }
  return mismatch();
}

// ---------------------------------------------------------------------------

int run_program(const ConceptTable& table, std::ostream& out, std::ostream& err,
                bool trace) {
  try {
    Interpreter interp(table, out, trace ? &err : nullptr);
    interp.run_main();
    out.flush();
    return 0;
  } catch (const CopError& e) {
    out.flush();
    err << format_runtime(e.diagnostic()) << '\n';
    return 1;
  }
}

}  // namespace cop
