#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cop/ast.hpp"
#include "cop/diagnostic.hpp"

namespace cop {

/// Resolved view of one concept declaration. Member pointers refer into the
/// SyntaxTree owned by the enclosing ConceptTable.
struct ConceptInfo {
  std::string name;
  std::optional<std::string> parent;
  const ConceptDecl* decl = nullptr;

  /// Declared reference fields, in source order; these make up the segment.
  std::vector<const MemberDecl*> reference_fields;
  std::map<std::string, const MemberDecl*, std::less<>> incoming;
  std::map<std::string, const MemberDecl*, std::less<>> outgoing;
  /// Properties and object fields (auto-backed properties).
  std::map<std::string, const MemberDecl*, std::less<>> properties;

  /// Root-first ancestor chain ending with this concept; empty when the
  /// concept sits on an inclusion cycle or under an unknown parent.
  std::vector<const ConceptInfo*> chain;
  /// 0-based position in declaration order.
  std::size_t index = 0;

  const MemberDecl* incoming_method(std::string_view n) const;
  const MemberDecl* outgoing_method(std::string_view n) const;
  const MemberDecl* property(std::string_view n) const;
  const MemberDecl* reference_field(std::string_view n) const;
  std::optional<std::size_t> field_index(std::string_view n) const;
  /// Number of segments in values of this concept.
  std::size_t depth() const { return chain.size(); }
};

bool is_auto_backed(const MemberDecl& property);

/// Concept hierarchy plus dual member tables. Owns the tree it was built from.
class ConceptTable {
 public:
  ConceptTable() = default;
  explicit ConceptTable(std::shared_ptr<const SyntaxTree> tree);

  const SyntaxTree& tree() const { return *tree_; }
  const std::vector<std::unique_ptr<ConceptInfo>>& concepts() const {
    return concepts_;
  }
  const ConceptInfo* find(std::string_view name) const;
  const FuncDecl* function(std::string_view name) const;

  /// Root-first ancestor chain. Throws CopError UnknownConcept (or
  /// InclusionCycle for a concept on a cycle).
  std::vector<const ConceptInfo*> chain_of(std::string_view name) const;

  /// True when `inner` equals `outer` or is (transitively) included in it.
  static bool is_within(const ConceptInfo& inner, const ConceptInfo& outer);

  /// `declaring` owns a member with visibility `vis`; may code executing in
  /// `caller` (null for free functions) touch it?
  static bool accessible(Visibility vis, const ConceptInfo& declaring,
                         const ConceptInfo* caller);

  /// All concepts whose chain contains `c`, excluding `c`, in declaration
  /// order.
  std::vector<const ConceptInfo*> descendants(const ConceptInfo& c) const;

 private:
  friend struct TableBuilder;

  std::shared_ptr<const SyntaxTree> tree_;
  std::vector<std::unique_ptr<ConceptInfo>> concepts_;
  std::unordered_map<std::string, const ConceptInfo*> by_name_;
  std::unordered_map<std::string, const FuncDecl*> functions_;
};

enum class MemberClass {
  /// Reference fields and properties (member access without a call).
  FieldOrProperty,
  Field,
  Property,
  /// Outgoing methods and properties (a property answers a zero-arg call).
  Outgoing,
  Incoming,
};

struct MemberHit {
  /// 0-based position in the chain.
  std::size_t position = 0;
  const MemberDecl* decl = nullptr;
  const ConceptInfo* owner = nullptr;
};

struct LookupResult {
  std::optional<MemberHit> hit;
  /// A declaration was found but skipped because it was not visible.
  bool blocked = false;
};

using VisibilityFilter =
    std::function<bool(const MemberDecl&, const ConceptInfo& owner)>;

/// The declaration of `name` of the given class in one concept, if any.
const MemberDecl* member_of(const ConceptInfo& c, std::string_view name,
                            MemberClass cls);

/// Searches chain[0..=from] from `from` toward the root and returns the first
/// visible declaration (innermost wins).
LookupResult find_upward(std::span<const ConceptInfo* const> chain,
                         std::size_t from, std::string_view name,
                         MemberClass cls, const VisibilityFilter& visible);

/// Searches chain[from..] from `from` toward the innermost segment and returns
/// the first visible declaration (outermost wins).
LookupResult find_downward(std::span<const ConceptInfo* const> chain,
                           std::size_t from, std::string_view name,
                           MemberClass cls, const VisibilityFilter& visible);

/// Filter admitting members accessible from code running in `caller`.
VisibilityFilter visible_from(const ConceptInfo* caller);

struct TableResult {
  ConceptTable table;
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Builds the inclusion hierarchy and member tables. Errors are collected;
/// the table is usable for chain queries only when ok().
TableResult build_table(std::shared_ptr<const SyntaxTree> tree);

/// Static checks over every body: name resolution, arity, placement of
/// `sub`/`super`/`value`/`this`, return shape, and presence of `main`.
std::vector<Diagnostic> check_bodies(const ConceptTable& table);

/// Orders diagnostics by source position, keeping insertion order for ties.
void sort_diagnostics(std::vector<Diagnostic>& diags);

/// tokenize, parse, build_table, check_bodies. Throws LexError, ParseError
/// or StaticErrors.
ConceptTable load_program(std::string_view source);

}  // namespace cop
