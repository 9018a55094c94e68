#include "bmtree/codec.hpp"

#include <fstream>
#include <json.hpp>

#include "bmtree/errors.hpp"

namespace bmtree {

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string serialize_tree(const BMTree& tree) {
    ordered_json doc;
    doc["version"] = 1;
    doc["dims"] = tree.config().dims;
    doc["bits_per_dim"] = tree.config().bits_per_dim;
    ordered_json nodes = ordered_json::array();
    for (const TreeNode& n : tree.nodes()) {
        if (!n.alive) continue;
        ordered_json rec;
        rec["id"] = n.id;
        if (n.filled())
            rec["dim"] = static_cast<int>(n.dim);
        else
            rec["dim"] = nullptr;
        rec["split"] = n.split;
        ordered_json children = ordered_json::array();
        for (int b = 0; b < 2; ++b)
            if (n.child[b] != kNoNode) children.push_back(n.child[b]);
        rec["children"] = std::move(children);
        nodes.push_back(std::move(rec));
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

BMTree deserialize_tree(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("tree document: ") + e.what());
    }
    auto require = [&](const ordered_json& j, const char* field) -> const ordered_json& {
        if (!j.contains(field)) throw ParseError(std::string("tree document: missing field '") + field + "'");
        return j.at(field);
    };
    if (require(doc, "version").get<int>() != 1)
        throw ParseError("tree document: unsupported version");
    GridConfig cfg(require(doc, "dims").get<int>(), require(doc, "bits_per_dim").get<int>());
    const ordered_json& nodes_j = require(doc, "nodes");
    if (!nodes_j.is_array()) throw ParseError("tree document: field 'nodes' must be an array");

    std::int32_t max_id = -1;
    for (const auto& rec : nodes_j) {
        std::int32_t id = require(rec, "id").get<std::int32_t>();
        if (id < 0) throw ParseError("tree document: negative node id");
        max_id = std::max(max_id, id);
    }
    std::vector<TreeNode> nodes(static_cast<size_t>(max_id + 1));
    for (std::int32_t i = 0; i <= max_id; ++i) {
        nodes[i].id = i;
        nodes[i].alive = false;
    }
    for (const auto& rec : nodes_j) {
        std::int32_t id = require(rec, "id").get<std::int32_t>();
        TreeNode& n = nodes[id];
        if (n.alive) throw ParseError("tree document: duplicate node id " + std::to_string(id));
        n.alive = true;
        const ordered_json& dim_j = require(rec, "dim");
        n.dim = dim_j.is_null() ? kUnfilled : static_cast<std::int8_t>(dim_j.get<int>());
        n.split = require(rec, "split").get<bool>();
        const ordered_json& children = require(rec, "children");
        if (!children.is_array() || children.size() > 2)
            throw ParseError("tree document: bad 'children' at node " + std::to_string(id));
        for (size_t b = 0; b < children.size(); ++b) n.child[b] = children[b].get<std::int32_t>();
    }
    // Depths are derived, not stored.
    nodes[0].depth = 1;
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
        std::int32_t cur = stack.back();
        stack.pop_back();
        for (int b = 0; b < 2; ++b) {
            std::int32_t c = nodes[cur].child[b];
            if (c == kNoNode) continue;
            if (c < 0 || c > max_id || !nodes[c].alive)
                throw ParseError("tree document: dangling child " + std::to_string(c) +
                                 " at node " + std::to_string(cur));
            nodes[c].depth = static_cast<std::uint16_t>(nodes[cur].depth + 1);
            stack.push_back(c);
        }
    }
    return BMTree::from_raw(cfg, std::move(nodes));
}

void save_tree(const BMTree& tree, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << serialize_tree(tree);
    if (!out) throw ParseError("write failed: " + path);
}

BMTree load_tree(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_tree(text);
}

}  // namespace bmtree
