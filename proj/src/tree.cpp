#include "bmtree/tree.hpp"

#include <algorithm>

#include "bmtree/errors.hpp"

namespace bmtree {

BMTree::BMTree(const GridConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    TreeNode root;
    root.id = 0;
    root.depth = 1;
    nodes_.push_back(root);
    frontier_.push_back(0);
}

const TreeNode& BMTree::node(std::int32_t id) const {
    if (id < 0 || id >= static_cast<std::int32_t>(nodes_.size()) || !nodes_[id].alive)
        throw StructureError("no such node: " + std::to_string(id));
    return nodes_[id];
}

std::size_t BMTree::alive_count() const {
    std::size_t c = 0;
    for (const TreeNode& n : nodes_)
        if (n.alive) ++c;
    return c;
}

void BMTree::dims_used_above(std::int32_t id, std::array<int, kMaxDims>& used) const {
    std::vector<std::int32_t> parent(nodes_.size(), kNoNode);
    for (const TreeNode& n : nodes_) {
        if (!n.alive) continue;
        for (int b = 0; b < 2; ++b)
            if (n.child[b] != kNoNode) parent[n.child[b]] = n.id;
    }
    used.fill(0);
    int hops = 0;
    for (std::int32_t cur = parent[id]; cur != kNoNode; cur = parent[cur]) {
        const TreeNode& n = nodes_[cur];
        if (n.filled()) ++used[n.dim];
        if (++hops > static_cast<int>(nodes_.size()))
            throw StructureError("cycle detected above node " + std::to_string(id));
    }
}

std::vector<std::uint8_t> BMTree::legal_dims(std::int32_t id) const {
    node(id);
    std::array<int, kMaxDims> used{};
    dims_used_above(id, used);
    std::vector<std::uint8_t> out;
    for (int d = 0; d < cfg_.dims; ++d)
        if (used[d] < cfg_.bits_per_dim) out.push_back(static_cast<std::uint8_t>(d));
    return out;
}

SfcValue BMTree::evaluate(const Point& p) const {
    validate_point(p, cfg_);
    const int m = cfg_.bits_per_dim;
    const int total = cfg_.total_bits();
    std::array<int, kMaxDims> used{};
    SfcValue v;
    int emitted = 0;
    std::int32_t cur = 0;
    while (cur != kNoNode && nodes_[cur].filled()) {
        if (emitted >= total) throw StructureError("path longer than key width");
        const TreeNode& n = nodes_[cur];
        int bit = coord_bit(p[n.dim], m, used[n.dim]++);
        v.push_bit(bit);
        ++emitted;
        cur = n.split ? n.child[bit] : n.child[0];
        if (cur != kNoNode && (cur >= static_cast<std::int32_t>(nodes_.size()) || !nodes_[cur].alive))
            throw StructureError("dangling child id " + std::to_string(cur));
    }
    // Round-robin completion over the not-yet-exhausted dimensions.
    while (emitted < total) {
        for (int d = 0; d < cfg_.dims && emitted < total; ++d) {
            if (used[d] >= m) continue;
            v.push_bit(coord_bit(p[d], m, used[d]++));
            ++emitted;
        }
    }
    return v;
}

SfcValue BMTree::evaluate_with_path(const Point& p, std::vector<std::int32_t>& path_out) const {
    validate_point(p, cfg_);
    path_out.clear();
    const int m = cfg_.bits_per_dim;
    const int total = cfg_.total_bits();
    std::array<int, kMaxDims> used{};
    SfcValue v;
    int emitted = 0;
    std::int32_t cur = 0;
    while (cur != kNoNode && nodes_[cur].filled()) {
        if (emitted >= total) throw StructureError("path longer than key width");
        const TreeNode& n = nodes_[cur];
        path_out.push_back(cur);
        int bit = coord_bit(p[n.dim], m, used[n.dim]++);
        v.push_bit(bit);
        ++emitted;
        cur = n.split ? n.child[bit] : n.child[0];
    }
    if (cur != kNoNode) path_out.push_back(cur);  // the unfilled node reached
    while (emitted < total) {
        for (int d = 0; d < cfg_.dims && emitted < total; ++d) {
            if (used[d] >= m) continue;
            v.push_bit(coord_bit(p[d], m, used[d]++));
            ++emitted;
        }
    }
    return v;
}

void BMTree::require_frontier_node(std::int32_t id) const {
    if (std::find(frontier_.begin(), frontier_.end(), id) == frontier_.end())
        throw ActionError("node " + std::to_string(id) + " is not on the frontier");
}

void BMTree::fill_node(std::int32_t id, std::uint8_t dim, bool split) {
    require_frontier_node(id);
    if (dim >= cfg_.dims) throw ActionError("bad dimension " + std::to_string(dim));
    std::array<int, kMaxDims> used{};
    dims_used_above(id, used);
    if (used[dim] >= cfg_.bits_per_dim)
        throw ActionError("dimension " + std::to_string(dim) + " exhausted at node " +
                          std::to_string(id));
    nodes_[id].dim = static_cast<std::int8_t>(dim);
    nodes_[id].split = split;
    frontier_.erase(std::find(frontier_.begin(), frontier_.end(), id));
}

void BMTree::unfill_node(std::int32_t id) {
    const TreeNode& n = node(id);
    if (!n.filled() || n.child[0] != kNoNode || n.child[1] != kNoNode)
        throw ActionError("node " + std::to_string(id) + " was not probe-filled");
    nodes_[id].dim = kUnfilled;
    nodes_[id].split = false;
    frontier_.insert(std::lower_bound(frontier_.begin(), frontier_.end(), id), id);
}

void BMTree::apply_level_action(const LevelAction& action) {
    if (action.assignments.size() != frontier_.size())
        throw ActionError("action length " + std::to_string(action.assignments.size()) +
                          " != frontier size " + std::to_string(frontier_.size()));
    const std::vector<std::int32_t> targets = frontier_;
    // Validate all assignments before mutating anything.
    for (size_t i = 0; i < targets.size(); ++i) {
        auto [dim, split] = action.assignments[i];
        (void)split;
        if (dim >= cfg_.dims)
            throw ActionError("bad dimension " + std::to_string(dim) + " for node " +
                              std::to_string(targets[i]));
        std::array<int, kMaxDims> used{};
        dims_used_above(targets[i], used);
        if (used[dim] >= cfg_.bits_per_dim)
            throw ActionError("dimension " + std::to_string(dim) + " exhausted at node " +
                              std::to_string(targets[i]));
    }
    std::vector<std::int32_t> next;
    for (size_t i = 0; i < targets.size(); ++i) {
        auto [dim, split] = action.assignments[i];
        std::int32_t id = targets[i];
        nodes_[id].dim = static_cast<std::int8_t>(dim);
        nodes_[id].split = split;
        if (nodes_[id].depth >= cfg_.total_bits()) continue;  // full path, no children
        int n_children = split ? 2 : 1;
        for (int b = 0; b < n_children; ++b) {
            TreeNode child;
            child.id = static_cast<std::int32_t>(nodes_.size());
            child.depth = static_cast<std::uint16_t>(nodes_[id].depth + 1);
            nodes_[id].child[b] = child.id;
            nodes_.push_back(child);
            next.push_back(child.id);
        }
    }
    frontier_ = std::move(next);
}

void BMTree::prune_subtrees(const std::vector<std::int32_t>& ids) {
    for (std::int32_t id : ids) node(id);
    std::vector<char> mark(nodes_.size(), 0);
    for (std::int32_t id : ids) {
        if (mark[id]) throw PreconditionError("duplicate prune target " + std::to_string(id));
        mark[id] = 1;
    }
    // Reject nested targets: no pruned node may sit under another.
    for (std::int32_t id : ids) {
        std::vector<std::int32_t> stack;
        for (int b = 0; b < 2; ++b)
            if (nodes_[id].child[b] != kNoNode) stack.push_back(nodes_[id].child[b]);
        while (!stack.empty()) {
            std::int32_t cur = stack.back();
            stack.pop_back();
            if (mark[cur])
                throw PreconditionError("prune targets " + std::to_string(id) + " and " +
                                        std::to_string(cur) + " are nested");
            for (int b = 0; b < 2; ++b)
                if (nodes_[cur].child[b] != kNoNode) stack.push_back(nodes_[cur].child[b]);
        }
    }
    for (std::int32_t id : ids) {
        std::vector<std::int32_t> stack;
        for (int b = 0; b < 2; ++b)
            if (nodes_[id].child[b] != kNoNode) stack.push_back(nodes_[id].child[b]);
        nodes_[id].dim = kUnfilled;
        nodes_[id].split = false;
        nodes_[id].child[0] = nodes_[id].child[1] = kNoNode;
        while (!stack.empty()) {
            std::int32_t cur = stack.back();
            stack.pop_back();
            for (int b = 0; b < 2; ++b)
                if (nodes_[cur].child[b] != kNoNode) stack.push_back(nodes_[cur].child[b]);
            nodes_[cur] = TreeNode{};
            nodes_[cur].id = cur;
            nodes_[cur].alive = false;
        }
    }
    rebuild_frontier();
}

void BMTree::rebuild_frontier() {
    frontier_.clear();
    for (const TreeNode& n : nodes_)
        if (n.alive && !n.filled()) frontier_.push_back(n.id);
}

BMTree BMTree::from_single_bmp(const Bmp& bmp, const GridConfig& cfg) {
    require_valid_bmp(bmp, cfg);
    BMTree t(cfg);
    for (std::uint8_t d : bmp.dims) {
        LevelAction a;
        a.assignments.emplace_back(d, false);
        t.apply_level_action(a);
    }
    return t;
}

BMTree BMTree::from_raw(const GridConfig& cfg, std::vector<TreeNode> nodes) {
    BMTree t;
    t.cfg_ = cfg;
    t.cfg_.validate();
    t.nodes_ = std::move(nodes);
    if (t.nodes_.empty()) {
        TreeNode root;
        root.id = 0;
        root.depth = 1;
        t.nodes_.push_back(root);
    }
    t.validate_structure();
    t.rebuild_frontier();
    return t;
}

void BMTree::validate_structure() const {
    const std::int32_t n = static_cast<std::int32_t>(nodes_.size());
    if (n == 0 || !nodes_[0].alive) throw StructureError("missing root node");
    std::vector<int> indeg(n, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        const TreeNode& nd = nodes_[i];
        if (nd.id != i)
            throw StructureError("node at index " + std::to_string(i) + " has id " +
                                 std::to_string(nd.id));
        if (!nd.alive) continue;
        int kids = 0;
        for (int b = 0; b < 2; ++b) {
            std::int32_t c = nd.child[b];
            if (c == kNoNode) continue;
            if (c < 0 || c >= n || !nodes_[c].alive)
                throw StructureError("dangling child id " + std::to_string(c));
            ++indeg[c];
            ++kids;
        }
        if (!nd.filled() && kids > 0)
            throw StructureError("unfilled node " + std::to_string(i) + " has children");
        if (nd.filled() && !nd.split && nd.child[1] != kNoNode)
            throw StructureError("chain node " + std::to_string(i) + " has a right child");
        if (nd.filled() && nd.split && kids == 1)
            throw StructureError("split node " + std::to_string(i) + " has one child");
    }
    if (indeg[0] != 0) throw StructureError("root has a parent");
    for (std::int32_t i = 1; i < n; ++i)
        if (nodes_[i].alive && indeg[i] != 1)
            throw StructureError("node " + std::to_string(i) + " has " +
                                 std::to_string(indeg[i]) + " parents");
    // Depth and per-path dimension budget, walked from the root.
    std::vector<std::int32_t> stack{0};
    std::vector<std::array<int, kMaxDims>> used_stack{{}};
    std::vector<char> seen(n, 0);
    while (!stack.empty()) {
        std::int32_t cur = stack.back();
        stack.pop_back();
        std::array<int, kMaxDims> used = used_stack.back();
        used_stack.pop_back();
        if (seen[cur]) throw StructureError("cycle through node " + std::to_string(cur));
        seen[cur] = 1;
        const TreeNode& nd = nodes_[cur];
        if (nd.depth < 1 || nd.depth > cfg_.total_bits())
            throw StructureError("node " + std::to_string(cur) + " depth out of range");
        if (nd.filled()) {
            if (nd.dim >= cfg_.dims)
                throw StructureError("node " + std::to_string(cur) + " has bad dimension");
            if (++used[nd.dim] > cfg_.bits_per_dim)
                throw StructureError("dimension budget exceeded at node " + std::to_string(cur));
        }
        for (int b = 0; b < 2; ++b) {
            if (nd.child[b] == kNoNode) continue;
            if (nodes_[nd.child[b]].depth != nd.depth + 1)
                throw StructureError("child depth mismatch at node " + std::to_string(cur));
            stack.push_back(nd.child[b]);
            used_stack.push_back(used);
        }
    }
    for (std::int32_t i = 0; i < n; ++i)
        if (nodes_[i].alive && !seen[i])
            throw StructureError("unreachable node " + std::to_string(i));
}

char dim_letter(int dim, bool split) {
    static const char upper[] = "XYZWVUTS";
    static const char lower[] = "xyzwvuts";
    return split ? upper[dim] : lower[dim];
}

std::string action_to_string(const LevelAction& a) {
    std::string s;
    s.reserve(a.assignments.size());
    for (auto [dim, split] : a.assignments) s.push_back(dim_letter(dim, split));
    return s;
}

}  // namespace bmtree
