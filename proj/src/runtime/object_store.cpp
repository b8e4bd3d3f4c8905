#include "cop/object_store.hpp"

namespace cop {

std::optional<Value> ObjectStore::load(const std::string& reference,
                                       const std::string& field) const {
  auto it = cells_.find({reference, field});
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

void ObjectStore::save(const std::string& reference, const std::string& field,
                       Value v) {
  cells_.insert_or_assign({reference, field}, std::move(v));
}

}  // namespace cop
