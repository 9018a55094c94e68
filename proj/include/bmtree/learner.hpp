#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bmtree/cost_model.hpp"
#include "bmtree/tree.hpp"

namespace bmtree {

struct MctsConfig {
    int rollouts = 10;            // simulations per level
    int max_depth = 10;           // levels built by the search
    double exploration = 1.0;     // UCT constant c
    double sample_rate = 0.05;
    std::size_t train_queries = 1000;  // workload truncated to this many queries (0 = all)
    int block_size = kDefaultBlockSize;
    std::uint64_t seed = 0;
    bool use_gas = true;          // greedy action in the candidate set
    double improve_eps = 1e-12;   // strict-improvement tolerance for early stop

    void validate(const GridConfig& cfg) const;
};

// depth, action string, reward of the tree after that level.
using LevelCallback = std::function<void(int, const std::string&, double)>;

// Greedy per-node assignment: frontier nodes are filled in order with the
// (dim, split) pair of minimum workload ScanRange, earlier picks kept and
// later nodes left to default completion. Ties break toward the lowest
// dimension, split first.
LevelAction gas_action(const BMTree& tree, const RewardContext& env);

// Child actions considered by the search: the greedy action (optional)
// followed by the 2n uniform actions (same pair on every frontier node,
// illegal nodes falling back to their lowest legal dimension), dedup'd.
std::vector<LevelAction> candidate_actions(const BMTree& tree, const RewardContext& env,
                                           bool use_gas);

double uct_score(double child_value, std::size_t child_visits, std::size_t parent_visits,
                 double exploration);

// Search-tree node: value is the maximum simulated reward seen through
// this state, visits the number of rollouts that passed it.
struct PolicyNode {
    LevelAction action;  // action leading here from the parent state
    double value;
    std::size_t visits = 0;
    bool expanded = false;
    std::vector<LevelAction> candidates;
    std::vector<std::unique_ptr<PolicyNode>> children;  // index-aligned with candidates

    PolicyNode();
};

// Level-wise construction driven by rollouts over a policy tree.
class MctsSearch {
  public:
    MctsSearch(BMTree start, RewardContext env, MctsConfig cfg);

    // One rollout (selection, expansion, simulation, backpropagation)
    // from the current state. Returns the simulated reward.
    double rollout();

    // Full loop: per level run the configured rollouts, commit the child
    // of maximum value, stop as soon as a level fails to strictly improve
    // the best tree so far. Returns the best tree.
    BMTree run(const LevelCallback& cb = nullptr);

    const PolicyNode& policy_root() const { return *root_node_; }
    const PolicyNode& current_node() const { return *cur_node_; }
    const BMTree& current_tree() const { return cur_tree_; }
    const RewardContext& env() const { return env_; }

  private:
    void ensure_candidates(PolicyNode& node, const BMTree& state);

    RewardContext env_;
    MctsConfig cfg_;
    std::unique_ptr<PolicyNode> root_node_;
    PolicyNode* cur_node_;
    BMTree cur_tree_;
    int levels_committed_ = 0;
};

// Samples the dataset, builds the Z-baselined reward environment, and
// runs the search from an empty tree. Deterministic for a fixed seed.
BMTree train(const std::vector<Point>& data, const std::vector<WindowQuery>& queries,
             const GridConfig& cfg, const MctsConfig& mcfg, const LevelCallback& cb = nullptr);

struct RetrainOutcome {
    BMTree tree;
    std::size_t baseline_sr = 0;  // pre-prune tree, restricted workload
    std::size_t final_sr = 0;
    double improvement = 0.0;     // (baseline - final) / baseline
    std::size_t restricted_queries = 0;
};

// Prunes the named subtrees and reruns the search with the frontier
// initialized to them. The reward baseline is the pre-prune tree's
// ScanRange on the queries whose centers fall in the retrained
// subspaces; if nothing beats it, the input tree is returned unchanged.
RetrainOutcome retrain_subspaces(const BMTree& tree, const std::vector<Point>& data_new,
                                 const std::vector<WindowQuery>& queries_new,
                                 const std::vector<std::int32_t>& retrain_nodes,
                                 const MctsConfig& mcfg, const LevelCallback& cb = nullptr);

Point query_center(const WindowQuery& q);

// True if the center of q is routed through node_id.
bool query_in_node(const BMTree& tree, const WindowQuery& q, std::int32_t node_id);

}  // namespace bmtree
