#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "cop/value.hpp"

namespace cop {

/// Object fields as functions of references: the stored value depends only on
/// the (serialized reference, field name) key.
class ObjectStore {
 public:
  std::optional<Value> load(const std::string& reference,
                            const std::string& field) const;
  void save(const std::string& reference, const std::string& field, Value v);

  std::size_t size() const { return cells_.size(); }
  void clear() { cells_.clear(); }

 private:
  std::map<std::pair<std::string, std::string>, Value> cells_;
};

}  // namespace cop
