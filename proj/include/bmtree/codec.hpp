#pragma once

#include <string>

#include "bmtree/tree.hpp"

namespace bmtree {

// Canonical text form of a tree. Deterministic byte output: version,
// dims, bits_per_dim, then node records sorted by id with keys in the
// order {id, dim, split, children}; two-space indentation, trailing
// newline. Freed slots are not written.
std::string serialize_tree(const BMTree& tree);

// Inverse of serialize_tree. Throws ParseError naming the offending
// field, or StructureError if the decoded tree is malformed.
BMTree deserialize_tree(const std::string& text);

void save_tree(const BMTree& tree, const std::string& path);
BMTree load_tree(const std::string& path);

}  // namespace bmtree
