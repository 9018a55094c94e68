#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bmtree/bmp.hpp"
#include "bmtree/grid.hpp"
#include "bmtree/sfc_value.hpp"

namespace bmtree {

inline constexpr std::int32_t kNoNode = -1;
inline constexpr std::int8_t kUnfilled = -1;

struct TreeNode {
    std::int32_t id = 0;
    std::int8_t dim = kUnfilled;   // dimension whose next bit this node emits
    bool split = false;            // true: children branch on the emitted bit
    bool alive = true;             // false: slot freed by a prune, id never reused
    std::int32_t child[2] = {kNoNode, kNoNode};
    std::uint16_t depth = 1;       // 1-based; equals bits emitted on the path so far

    bool filled() const { return dim != kUnfilled; }

    bool operator==(const TreeNode&) const = default;
};

// One (dimension, split) assignment per frontier node, in frontier order.
struct LevelAction {
    std::vector<std::pair<std::uint8_t, bool>> assignments;

    bool operator==(const LevelAction&) const = default;
};

// Piecewise curve: a tree whose root-to-leaf paths are bit-merging
// patterns over recursively halved subspaces. Unfilled paths fall back to
// a fixed round-robin completion, so partial trees evaluate everywhere.
class BMTree {
  public:
    explicit BMTree(const GridConfig& cfg);

    const GridConfig& config() const { return cfg_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(std::int32_t id) const;
    const std::vector<std::int32_t>& frontier() const { return frontier_; }
    std::int32_t root_id() const { return 0; }
    bool complete() const { return frontier_.empty(); }
    std::size_t alive_count() const;

    // Legal dimensions for a node: those used fewer than m times by the
    // filled ancestors above it (ascending order).
    std::vector<std::uint8_t> legal_dims(std::int32_t id) const;

    SfcValue evaluate(const Point& p) const;

    // evaluate() plus the node ids visited, in path order.
    SfcValue evaluate_with_path(const Point& p, std::vector<std::int32_t>& path_out) const;

    void apply_level_action(const LevelAction& action);

    // Assign (dim, split) to one frontier node without creating children;
    // evaluation then default-completes below it. Used for greedy probing.
    void fill_node(std::int32_t id, std::uint8_t dim, bool split);

    // Revert a fill_node probe; the node rejoins the frontier.
    void unfill_node(std::int32_t id);

    // Named nodes become unfilled with no children; their descendants'
    // slots are freed. Ids of surviving nodes do not move.
    void prune_subtrees(const std::vector<std::int32_t>& ids);

    static BMTree from_single_bmp(const Bmp& bmp, const GridConfig& cfg);

    // Structural sanity: child ids in range, no sharing/cycles, depths and
    // per-path dimension budgets consistent. Throws StructureError.
    void validate_structure() const;

    bool operator==(const BMTree&) const = default;

    // --- internal hook for the codec ---
    static BMTree from_raw(const GridConfig& cfg, std::vector<TreeNode> nodes);

  private:
    BMTree() = default;
    void rebuild_frontier();
    void dims_used_above(std::int32_t id, std::array<int, kMaxDims>& used) const;
    void require_frontier_node(std::int32_t id) const;

    GridConfig cfg_;
    std::vector<TreeNode> nodes_;         // index == id; freed slots stay as tombstones
    std::vector<std::int32_t> frontier_;  // unfilled alive nodes, ascending id
};

// Dimension letter used in action strings and logs: X,Y,Z,W,V,U,T,S.
char dim_letter(int dim, bool split);

// One character per frontier node: uppercase letter = split, lowercase =
// chain. E.g. "Xy" assigns dim 0 split and dim 1 chain.
std::string action_to_string(const LevelAction& a);

}  // namespace bmtree
