#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cop/object_store.hpp"
#include "cop/resolve.hpp"
#include "cop/value.hpp"

namespace cop {

/// Maximum number of nested member/function activations.
inline constexpr int kMaxCallDepth = 256;

struct Binding {
  TypeExpr type;
  Value value;
};

/// State of one activation. For members, `segment` is the 1-based position of
/// the declaring concept within `reference`; free functions use segment 0 and
/// an empty reference.
struct DispatchContext {
  ConceptValue reference;
  std::size_t segment = 0;
  Direction direction = Direction::None;
  std::vector<std::map<std::string, Binding, std::less<>>> scopes;
  std::optional<Value> setter_value;

  const TypeExpr* return_type = nullptr;
  std::optional<Value> returned;

  bool in_member() const { return segment != 0; }
};

/// Tree-walking evaluator over a checked ConceptTable.
///
/// External calls run incoming methods outermost-first and fall back to
/// outgoing members innermost-first. `sub` walks further in through incoming
/// methods; `super` and bare calls walk out through outgoing ones. Every
/// executed member may be reported on the trace stream.
class Interpreter {
 public:
  /// `trace`, when set, receives one line per dispatch event.
  Interpreter(const ConceptTable& table, std::ostream& out,
              std::ostream* trace = nullptr);

  /// Calls `main`. Throws RuntimeError.
  void run_main();

  ConceptValue construct(std::string_view concept_name, std::vector<Value> args,
                         SourceLoc loc = {});

  /// Call from outside the reference's chain. `caller` is the concept whose
  /// code makes the call (null for free functions).
  Value dispatch_external(const ConceptValue& ref, std::string_view method,
                          std::vector<Value> args,
                          const ConceptInfo* caller = nullptr,
                          SourceLoc loc = {});
  Value dispatch_sub(DispatchContext& ctx, std::string_view method,
                     std::vector<Value> args, SourceLoc loc = {});
  Value dispatch_super(DispatchContext& ctx, std::string_view method,
                       std::vector<Value> args, SourceLoc loc = {});
  Value dispatch_bare(DispatchContext& ctx, std::string_view method,
                      std::vector<Value> args, SourceLoc loc = {});

  /// External property access: innermost declaration wins.
  Value property_get(const ConceptValue& ref, std::string_view prop,
                     const ConceptInfo* caller = nullptr, SourceLoc loc = {});
  void property_set(const ConceptValue& ref, std::string_view prop, Value v,
                    const ConceptInfo* caller = nullptr, SourceLoc loc = {});
  /// Internal property access over the context's prefix.
  Value property_get(DispatchContext& ctx, std::string_view prop,
                     SourceLoc loc = {});
  void property_set(DispatchContext& ctx, std::string_view prop, Value v,
                    SourceLoc loc = {});

  Value read_reference_field(const ConceptValue& ref, std::string_view field,
                             const ConceptInfo* caller = nullptr,
                             SourceLoc loc = {});
  /// `super.field` from inside a member: searches strictly above the current
  /// segment.
  Value read_super_field(const DispatchContext& ctx, std::string_view field,
                         SourceLoc loc = {});

  /// Context for code running in the member of `ref`'s concept at the given
  /// 1-based segment.
  DispatchContext member_context(const ConceptValue& ref, std::size_t segment,
                                 Direction direction) const;

  ObjectStore& store() { return store_; }
  const ConceptTable& table() const { return table_; }

 private:
  class DepthGuard;

  std::span<const ConceptInfo* const> chain_for(const ConceptValue& ref,
                                                SourceLoc loc) const;
  const ConceptInfo* concept_at(const DispatchContext& ctx) const;

  Value coerce(Value v, const TypeExpr& type, SourceLoc loc) const;
  Value default_value(const MemberDecl& prop, SourceLoc loc) const;
  void emit(std::string_view kind, std::string_view what);

  Value invoke_method(const ConceptValue& ref, std::size_t position,
                      const MemberDecl& method, std::vector<Value> args,
                      SourceLoc loc);
  Value invoke_outgoing(const ConceptValue& ref, const MemberHit& hit,
                        std::vector<Value> args, SourceLoc loc);
  Value call_function(const FuncDecl& f, std::vector<Value> args, SourceLoc loc);
  Value finish(DispatchContext& ctx, const TypeExpr& type, SourceLoc loc);

  Value get_at(const ConceptValue& ref, std::size_t position,
               const MemberDecl& prop, SourceLoc loc);
  void set_at(const ConceptValue& ref, std::size_t position,
              const MemberDecl& prop, Value v, SourceLoc loc);

  // Evaluation.
  void exec_block(DispatchContext& ctx, const Block& b);
  void exec(DispatchContext& ctx, const Stmt& s);
  void assign(DispatchContext& ctx, const Expr& target, Value v);
  void assign_in_prefix(DispatchContext& ctx, std::size_t upto,
                        const std::string& name, Value v, SourceLoc loc);
  Value eval(DispatchContext& ctx, const Expr& e);
  std::vector<Value> eval_args(DispatchContext& ctx,
                               const std::vector<ExprPtr>& args);
  Value eval_call(DispatchContext& ctx, const Call& call, SourceLoc loc);
  Value eval_unary(const Unary& u, Value operand, SourceLoc loc) const;
  Value eval_binary(DispatchContext& ctx, const Binary& b, SourceLoc loc);
  Value read_in_prefix(DispatchContext& ctx, std::size_t upto,
                       const std::string& name, SourceLoc loc);
  Value* lvalue(DispatchContext& ctx, const Expr& e);
  Binding* find_local(DispatchContext& ctx, std::string_view name) const;

  const ConceptTable& table_;
  std::ostream& out_;
  std::ostream* trace_;
  ObjectStore store_;
  int depth_ = 0;
};

/// Runs `main`. Runtime errors go to `err`; returns 0 on success, 1 on a
/// runtime error. With `trace`, dispatch events are also written to `err`.
int run_program(const ConceptTable& table, std::ostream& out, std::ostream& err,
                bool trace);

}  // namespace cop
