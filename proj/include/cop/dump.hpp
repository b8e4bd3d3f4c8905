#pragma once

#include <string>

#include "cop/ast.hpp"

namespace cop {

/// Compact JSON rendering of a syntax tree with a fixed key order. The output
/// is a pure function of the tree.
std::string dump_tree(const SyntaxTree& tree);

}  // namespace cop
