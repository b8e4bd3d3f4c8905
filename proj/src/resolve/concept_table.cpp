#include "cop/resolve.hpp"

#include <algorithm>
#include <set>

#include "cop/parser.hpp"

namespace cop {

namespace {

template <class Map>
const MemberDecl* lookup(const Map& map, std::string_view name) {
  auto it = map.find(name);
  return it == map.end() ? nullptr : it->second;
}

}  // namespace

const MemberDecl* ConceptInfo::incoming_method(std::string_view n) const {
  return lookup(incoming, n);
}
const MemberDecl* ConceptInfo::outgoing_method(std::string_view n) const {
  return lookup(outgoing, n);
}
const MemberDecl* ConceptInfo::property(std::string_view n) const {
  return lookup(properties, n);
}
const MemberDecl* ConceptInfo::reference_field(std::string_view n) const {
  auto i = field_index(n);
  return i ? reference_fields[*i] : nullptr;
}
std::optional<std::size_t> ConceptInfo::field_index(std::string_view n) const {
  for (std::size_t i = 0; i < reference_fields.size(); ++i) {
    if (reference_fields[i]->name == n) return i;
  }
  return std::nullopt;
}

bool is_auto_backed(const MemberDecl& property) {
  return property.kind == MemberKind::ObjectField;
}

ConceptTable::ConceptTable(std::shared_ptr<const SyntaxTree> tree)
    : tree_(std::move(tree)) {}

const ConceptInfo* ConceptTable::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? nullptr : it->second;
}

const FuncDecl* ConceptTable::function(std::string_view name) const {
  auto it = functions_.find(std::string(name));
  return it == functions_.end() ? nullptr : it->second;
}

std::vector<const ConceptInfo*> ConceptTable::chain_of(
    std::string_view name) const {
  const ConceptInfo* c = find(name);
  if (!c) {
    throw CopError({"UnknownConcept", "unknown concept '" + std::string(name) + "'",
                    {}});
  }
  if (c->chain.empty()) {
    throw CopError({"InclusionCycle",
                    "concept '" + c->name + "' has no well-founded chain",
                    c->decl->loc});
  }
  return c->chain;
}

bool ConceptTable::is_within(const ConceptInfo& inner,
                             const ConceptInfo& outer) {
  return std::find(inner.chain.begin(), inner.chain.end(), &outer) !=
         inner.chain.end();
}

bool ConceptTable::accessible(Visibility vis, const ConceptInfo& declaring,
                              const ConceptInfo* caller) {
  switch (vis) {
    case Visibility::Public: return true;
    case Visibility::Protected:
      return caller != nullptr && is_within(*caller, declaring);
    case Visibility::Private: return caller == &declaring;
  }
  return false;
}

std::vector<const ConceptInfo*> ConceptTable::descendants(
    const ConceptInfo& c) const {
  std::vector<const ConceptInfo*> out;
  for (const auto& other : concepts_) {
    if (other.get() != &c && is_within(*other, c)) out.push_back(other.get());
  }
  return out;
}

const MemberDecl* member_of(const ConceptInfo& c, std::string_view name,
                            MemberClass cls) {
  switch (cls) {
    case MemberClass::FieldOrProperty: {
      if (const MemberDecl* f = c.reference_field(name)) return f;
      return c.property(name);
    }
    case MemberClass::Field: return c.reference_field(name);
    case MemberClass::Property: return c.property(name);
    case MemberClass::Outgoing: {
      if (const MemberDecl* m = c.outgoing_method(name)) return m;
      return c.property(name);
    }
    case MemberClass::Incoming: return c.incoming_method(name);
  }
  return nullptr;
}

LookupResult find_upward(std::span<const ConceptInfo* const> chain,
                         std::size_t from, std::string_view name,
                         MemberClass cls, const VisibilityFilter& visible) {
  LookupResult result;
  if (chain.empty()) return result;
  for (std::size_t j = std::min(from, chain.size() - 1) + 1; j-- > 0;) {
    const MemberDecl* d = member_of(*chain[j], name, cls);
    if (!d) continue;
    if (visible(*d, *chain[j])) {
      result.hit = MemberHit{j, d, chain[j]};
      return result;
    }
    result.blocked = true;
  }
  return result;
}

LookupResult find_downward(std::span<const ConceptInfo* const> chain,
                           std::size_t from, std::string_view name,
                           MemberClass cls, const VisibilityFilter& visible) {
  LookupResult result;
  for (std::size_t j = from; j < chain.size(); ++j) {
    const MemberDecl* d = member_of(*chain[j], name, cls);
    if (!d) continue;
    if (visible(*d, *chain[j])) {
      result.hit = MemberHit{j, d, chain[j]};
      return result;
    }
    result.blocked = true;
  }
  return result;
}

VisibilityFilter visible_from(const ConceptInfo* caller) {
  return [caller](const MemberDecl& d, const ConceptInfo& owner) {
    return ConceptTable::accessible(d.visibility, owner, caller);
  };
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::pair(a.loc.line, a.loc.column) <
                            std::pair(b.loc.line, b.loc.column);
                   });
}

struct TableBuilder {
  ConceptTable& table;
  std::vector<Diagnostic>& errors;

  void error(std::string code, std::string message, SourceLoc loc) {
    errors.push_back({std::move(code), std::move(message), loc});
  }

  void check_type(const TypeExpr& t, bool allow_void) {
    if (t.is_concept() && !table.find(t.concept_name)) {
      error("UnknownType", "unknown concept '" + t.concept_name + "'", t.loc);
    }
    if (t.is_void() && !allow_void) {
      error("InvalidType", "'void' is not a value type here", t.loc);
    }
  }

  void add_concepts() {
    const SyntaxTree& tree = *table.tree_;
    for (const auto& decl : tree.concepts) {
      if (table.by_name_.count(decl.name)) {
        error("DuplicateConcept", "concept '" + decl.name + "' is already declared",
              decl.loc);
        continue;
      }
      auto info = std::make_unique<ConceptInfo>();
      info->name = decl.name;
      info->parent = decl.parent;
      info->decl = &decl;
      info->index = table.concepts_.size();
      table.by_name_[decl.name] = info.get();
      table.concepts_.push_back(std::move(info));
    }
  }

  void link_parents() {
    for (const auto& info : table.concepts_) {
      const ConceptDecl& decl = *info->decl;
      if (decl.parent && !table.find(*decl.parent)) {
        error("UnknownParent", "concept '" + decl.name + "' is included in unknown concept '" +
                                   *decl.parent + "'",
              decl.parent_loc);
      }
    }

    std::set<const ConceptInfo*> reported;
    for (const auto& info : table.concepts_) {
      // Walk up; a repeat means a cycle, an unknown parent a dead end.
      std::vector<const ConceptInfo*> path;
      const ConceptInfo* cur = info.get();
      bool broken = false;
      while (cur) {
        auto seen = std::find(path.begin(), path.end(), cur);
        if (seen != path.end()) {
          broken = true;
          std::vector<const ConceptInfo*> cycle(seen, path.end());
          bool fresh = std::none_of(cycle.begin(), cycle.end(), [&](auto* c) {
            return reported.count(c) > 0;
          });
          if (fresh) {
            const ConceptInfo* first = *std::min_element(
                cycle.begin(), cycle.end(),
                [](auto* a, auto* b) { return a->index < b->index; });
            std::string names;
            for (auto* c : cycle) names += (names.empty() ? "" : " -> ") + c->name;
            error("InclusionCycle", "inclusion cycle: " + names + " -> " + cycle.front()->name,
                  first->decl->loc);
            reported.insert(cycle.begin(), cycle.end());
          }
          break;
        }
        path.push_back(cur);
        if (!cur->parent) break;
        cur = table.find(*cur->parent);
        if (!cur) broken = true;
      }
      if (!broken) {
        std::reverse(path.begin(), path.end());
        info->chain = std::move(path);
      }
    }
  }

  void add_members(ConceptInfo& info) {
    const ConceptDecl& decl = *info.decl;
    std::map<std::string, const MemberDecl*> methods_any;
    for (const MemberDecl& m : decl.members) {
      const std::string& n = m.name;
      switch (m.kind) {
        case MemberKind::ReferenceField:
          check_type(m.type, false);
          if (info.reference_field(n)) {
            error("DuplicateMember", "reference field '" + n + "' is declared twice in '" +
                                         info.name + "'",
                  m.loc);
          } else if (info.property(n)) {
            error("PropertyNameClash", "'" + n + "' names both a property and a reference field in '" +
                                           info.name + "'",
                  m.loc);
          } else {
            info.reference_fields.push_back(&m);
          }
          break;
        case MemberKind::ObjectField:
        case MemberKind::Property:
          check_type(m.type, false);
          if (m.direction != Direction::Outgoing) {
            error("ObjectFieldMustBeOutgoing",
                  "object field '" + n + "' must be declared 'out'", m.loc);
            break;
          }
          if (info.property(n)) {
            error("DuplicateMember", "property '" + n + "' is declared twice in '" +
                                         info.name + "'",
                  m.loc);
          } else if (info.reference_field(n) || methods_any.count(n)) {
            error("PropertyNameClash", "property '" + n + "' clashes with another member of '" +
                                           info.name + "'",
                  m.loc);
          } else {
            info.properties[n] = &m;
          }
          break;
        case MemberKind::Method: {
          check_type(m.type, true);
          for (const Param& p : m.params) check_type(p.type, false);
          auto& table_for = m.direction == Direction::Incoming ? info.incoming : info.outgoing;
          if (table_for.count(n)) {
            error("DuplicateMember",
                  std::string(m.direction == Direction::Incoming ? "incoming" : "outgoing") +
                      " method '" + n + "' is declared twice in '" + info.name + "'",
                  m.loc);
          } else if (info.property(n)) {
            error("PropertyNameClash", "method '" + n + "' clashes with property of '" +
                                           info.name + "'",
                  m.loc);
          } else {
            table_for[n] = &m;
            methods_any[n] = &m;
          }
          break;
        }
      }
    }
  }

  void add_functions() {
    for (const FuncDecl& f : table.tree_->functions) {
      check_type(f.return_type, true);
      for (const Param& p : f.params) check_type(p.type, false);
      if (table.functions_.count(f.name)) {
        error("DuplicateFunction", "function '" + f.name + "' is declared twice", f.loc);
      } else {
        table.functions_[f.name] = &f;
      }
    }
  }
};

TableResult build_table(std::shared_ptr<const SyntaxTree> tree) {
  TableResult result{ConceptTable(std::move(tree)), {}};
  TableBuilder b{result.table, result.errors};
  b.add_concepts();
  b.link_parents();
  for (const auto& info : result.table.concepts()) b.add_members(*info);
  b.add_functions();
  sort_diagnostics(result.errors);
  return result;
}

ConceptTable load_program(std::string_view source) {
  auto tree = std::make_shared<const SyntaxTree>(parse_source(source));
  TableResult built = build_table(std::move(tree));
  if (!built.ok()) throw StaticErrors(std::move(built.errors));
  std::vector<Diagnostic> errors = check_bodies(built.table);
  if (!errors.empty()) throw StaticErrors(std::move(errors));
  return std::move(built.table);
}

}  // namespace cop
