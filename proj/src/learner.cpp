#include "bmtree/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmtree/errors.hpp"
#include "bmtree/log.hpp"

namespace bmtree {

void MctsConfig::validate(const GridConfig& cfg) const {
    if (rollouts < 1) throw SpecError("rollouts must be at least 1");
    if (max_depth < 1 || max_depth > cfg.total_bits())
        throw SpecError("max depth must be in [1, " + std::to_string(cfg.total_bits()) +
                        "], got " + std::to_string(max_depth));
    if (sample_rate <= 0.0 || sample_rate > 1.0) throw SpecError("sample rate must be in (0, 1]");
    if (block_size < 1) throw SpecError("block size must be positive");
    if (exploration < 0.0) throw SpecError("exploration constant must be non-negative");
}

namespace {

std::size_t rank_to_block(std::size_t rank, std::size_t n, int block_size,
                          std::size_t block_count) {
    if (rank >= n) return block_count - 1;
    return rank / static_cast<std::size_t>(block_size);
}

// Incremental ScanRange evaluation used by the greedy pass: values of
// points outside the probed subtree are fixed, so ranks decompose into a
// search over the fixed values plus a search over the re-keyed subset.
struct SplitRank {
    const std::vector<SfcValue>* fixed;    // sorted
    const std::vector<SfcValue>* moved;    // sorted
    std::size_t n;
    int block_size;
    std::size_t block_count;

    std::size_t block_of(const SfcValue& v, std::size_t fixed_rank) const {
        std::size_t r = fixed_rank +
                        static_cast<std::size_t>(
                            std::lower_bound(moved->begin(), moved->end(), v) - moved->begin());
        return rank_to_block(r, n, block_size, block_count);
    }
};

}  // namespace

LevelAction gas_action(const BMTree& tree, const RewardContext& env) {
    if (tree.frontier().empty()) throw PreconditionError("greedy action needs a non-empty frontier");
    const std::vector<Point>& sample = env.sample().points;
    const std::vector<WindowQuery>& queries = env.queries();
    const std::size_t n = sample.size();
    const int bs = env.block_size();
    const std::size_t block_count = (n + bs - 1) / bs;

    BMTree work = tree;
    const std::vector<std::int32_t> frontier = tree.frontier();

    // Route every sample point and query corner to the frontier node that
    // terminates its walk (or none, for complete paths).
    std::vector<SfcValue> vals(n);
    std::vector<std::int32_t> point_at(n, kNoNode);
    std::vector<std::int32_t> path;
    auto route_point = [&](const Point& p, SfcValue& val_out) -> std::int32_t {
        val_out = work.evaluate_with_path(p, path);
        if (path.empty()) return kNoNode;
        std::int32_t last = path.back();
        return work.node(last).filled() ? kNoNode : last;
    };
    for (std::size_t i = 0; i < n; ++i) point_at[i] = route_point(sample[i], vals[i]);

    const std::size_t nq = queries.size();
    std::vector<SfcValue> vmin(nq), vmax(nq);
    std::vector<std::int32_t> min_at(nq), max_at(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        min_at[q] = route_point(queries[q].min_corner, vmin[q]);
        max_at[q] = route_point(queries[q].max_corner, vmax[q]);
    }

    LevelAction action;
    action.assignments.reserve(frontier.size());

    std::vector<std::size_t> changed;
    std::vector<SfcValue> moved_sorted;
    std::vector<SfcValue> fixed_sorted;
    fixed_sorted.reserve(n);

    for (std::int32_t f : frontier) {
        changed.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (point_at[i] == f) changed.push_back(i);
        fixed_sorted.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (point_at[i] != f) fixed_sorted.push_back(vals[i]);
        std::sort(fixed_sorted.begin(), fixed_sorted.end());

        // Corner ranks over the fixed values move only when the corner
        // itself is routed through f; cache the rest once.
        std::vector<std::size_t> fr_min(nq), fr_max(nq);
        for (std::size_t q = 0; q < nq; ++q) {
            if (min_at[q] != f)
                fr_min[q] = static_cast<std::size_t>(
                    std::lower_bound(fixed_sorted.begin(), fixed_sorted.end(), vmin[q]) -
                    fixed_sorted.begin());
            if (max_at[q] != f)
                fr_max[q] = static_cast<std::size_t>(
                    std::lower_bound(fixed_sorted.begin(), fixed_sorted.end(), vmax[q]) -
                    fixed_sorted.begin());
        }

        bool have_best = false;
        std::size_t best_total = 0;
        std::uint8_t best_dim = 0;
        bool best_split = true;

        for (std::uint8_t d : work.legal_dims(f)) {
            for (bool split : {true, false}) {
                work.fill_node(f, d, split);
                moved_sorted.resize(changed.size());
                for (std::size_t k = 0; k < changed.size(); ++k)
                    moved_sorted[k] = work.evaluate(sample[changed[k]]);
                std::sort(moved_sorted.begin(), moved_sorted.end());

                SplitRank ranks{&fixed_sorted, &moved_sorted, n, bs, block_count};
                std::size_t total = 0;
                for (std::size_t q = 0; q < nq; ++q) {
                    SfcValue lo_v = min_at[q] == f ? work.evaluate(queries[q].min_corner) : vmin[q];
                    SfcValue hi_v = max_at[q] == f ? work.evaluate(queries[q].max_corner) : vmax[q];
                    std::size_t fr_lo =
                        min_at[q] == f
                            ? static_cast<std::size_t>(
                                  std::lower_bound(fixed_sorted.begin(), fixed_sorted.end(), lo_v) -
                                  fixed_sorted.begin())
                            : fr_min[q];
                    std::size_t fr_hi =
                        max_at[q] == f
                            ? static_cast<std::size_t>(
                                  std::lower_bound(fixed_sorted.begin(), fixed_sorted.end(), hi_v) -
                                  fixed_sorted.begin())
                            : fr_max[q];
                    total += ranks.block_of(hi_v, fr_hi) - ranks.block_of(lo_v, fr_lo);
                }
                work.unfill_node(f);
                if (!have_best || total < best_total) {
                    have_best = true;
                    best_total = total;
                    best_dim = d;
                    best_split = split;
                }
            }
        }

        work.fill_node(f, best_dim, best_split);
        action.assignments.emplace_back(best_dim, best_split);
        // Refresh the keys and routing of everything that went through f.
        for (std::size_t i : changed) vals[i] = work.evaluate(sample[i]);
        for (std::size_t q = 0; q < nq; ++q) {
            if (min_at[q] == f) vmin[q] = work.evaluate(queries[q].min_corner);
            if (max_at[q] == f) vmax[q] = work.evaluate(queries[q].max_corner);
        }
    }
    return action;
}

std::vector<LevelAction> candidate_actions(const BMTree& tree, const RewardContext& env,
                                           bool use_gas) {
    if (tree.frontier().empty())
        throw PreconditionError("candidate actions need a non-empty frontier");
    std::vector<LevelAction> out;
    if (use_gas) out.push_back(gas_action(tree, env));

    std::vector<std::vector<std::uint8_t>> legal;
    legal.reserve(tree.frontier().size());
    for (std::int32_t id : tree.frontier()) legal.push_back(tree.legal_dims(id));

    for (int d = 0; d < tree.config().dims; ++d) {
        for (bool split : {true, false}) {
            LevelAction a;
            a.assignments.reserve(legal.size());
            for (const auto& dims : legal) {
                std::uint8_t pick =
                    std::find(dims.begin(), dims.end(), static_cast<std::uint8_t>(d)) != dims.end()
                        ? static_cast<std::uint8_t>(d)
                        : dims.front();
                a.assignments.emplace_back(pick, split);
            }
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
        }
    }
    return out;
}

double uct_score(double child_value, std::size_t child_visits, std::size_t parent_visits,
                 double exploration) {
    double exploit = child_value / static_cast<double>(child_visits);
    double explore = exploration * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                                             static_cast<double>(child_visits));
    return exploit + explore;
}

PolicyNode::PolicyNode() : value(-std::numeric_limits<double>::infinity()) {}

MctsSearch::MctsSearch(BMTree start, RewardContext env, MctsConfig cfg)
    : env_(std::move(env)), cfg_(cfg), root_node_(std::make_unique<PolicyNode>()),
      cur_node_(root_node_.get()), cur_tree_(std::move(start)) {
    cfg_.validate(cur_tree_.config());
}

void MctsSearch::ensure_candidates(PolicyNode& node, const BMTree& state) {
    if (node.expanded) return;
    node.candidates = candidate_actions(state, env_, cfg_.use_gas);
    node.children.resize(node.candidates.size());
    node.expanded = true;
}

double MctsSearch::rollout() {
    std::vector<PolicyNode*> path{cur_node_};
    BMTree tree = cur_tree_;
    int depth_left = cfg_.max_depth - levels_committed_;

    while (depth_left > 0 && !tree.complete()) {
        PolicyNode* node = path.back();
        ensure_candidates(*node, tree);
        if (node->candidates.empty()) break;

        std::size_t pick = node->candidates.size();
        for (std::size_t i = 0; i < node->candidates.size(); ++i) {
            if (!node->children[i]) {
                pick = i;
                break;
            }
        }
        bool fresh = pick != node->candidates.size();
        if (!fresh) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < node->children.size(); ++i) {
                const PolicyNode& ch = *node->children[i];
                double s = uct_score(ch.value, ch.visits, node->visits, cfg_.exploration);
                if (s > best) {
                    best = s;
                    pick = i;
                }
            }
        } else {
            node->children[pick] = std::make_unique<PolicyNode>();
            node->children[pick]->action = node->candidates[pick];
        }
        tree.apply_level_action(node->candidates[pick]);
        path.push_back(node->children[pick].get());
        --depth_left;
        if (fresh) break;  // an unobserved state ends the selection
    }

    double rew = env_.reward(tree);
    for (PolicyNode* n : path) {
        n->visits += 1;
        n->value = std::max(n->value, rew);
    }
    return rew;
}

BMTree MctsSearch::run(const LevelCallback& cb) {
    BMTree best = cur_tree_;
    double best_reward = env_.reward(best);
    for (int level = 1; level <= cfg_.max_depth && !cur_tree_.complete(); ++level) {
        for (int r = 0; r < cfg_.rollouts; ++r) rollout();

        ensure_candidates(*cur_node_, cur_tree_);
        std::size_t pick = cur_node_->children.size();
        double best_v = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cur_node_->children.size(); ++i) {
            if (!cur_node_->children[i]) continue;
            if (cur_node_->children[i]->value > best_v) {
                best_v = cur_node_->children[i]->value;
                pick = i;
            }
        }
        if (pick == cur_node_->children.size()) break;  // nothing simulated

        cur_tree_.apply_level_action(cur_node_->candidates[pick]);
        cur_node_ = cur_node_->children[pick].get();
        ++levels_committed_;

        double rew = env_.reward(cur_tree_);
        if (cb) cb(level, action_to_string(cur_node_->action), rew);
        log_debug("level " + std::to_string(level) + " action " +
                  action_to_string(cur_node_->action) + " reward " + std::to_string(rew));
        if (rew > best_reward + cfg_.improve_eps) {
            best = cur_tree_;
            best_reward = rew;
        } else {
            break;
        }
    }
    return best;
}

BMTree train(const std::vector<Point>& data, const std::vector<WindowQuery>& queries,
             const GridConfig& cfg, const MctsConfig& mcfg, const LevelCallback& cb) {
    mcfg.validate(cfg);
    if (data.empty()) throw PreconditionError("training needs a non-empty dataset");
    if (queries.empty()) throw PreconditionError("training needs a non-empty workload");
    Rng rng(mcfg.seed);
    SampleSet sample = make_sample(data, mcfg.sample_rate, rng);
    std::vector<WindowQuery> train_q = queries;
    if (mcfg.train_queries > 0 && train_q.size() > mcfg.train_queries)
        train_q.resize(mcfg.train_queries);
    RewardContext env(cfg, std::move(sample), std::move(train_q), mcfg.block_size);
    MctsSearch search(BMTree(cfg), std::move(env), mcfg);
    return search.run(cb);
}

Point query_center(const WindowQuery& q) {
    Point c(q.min_corner.size());
    for (std::size_t d = 0; d < c.size(); ++d)
        c[d] = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(q.min_corner[d]) + q.max_corner[d]) / 2);
    return c;
}

bool query_in_node(const BMTree& tree, const WindowQuery& q, std::int32_t node_id) {
    std::vector<std::int32_t> path;
    tree.evaluate_with_path(query_center(q), path);
    return std::find(path.begin(), path.end(), node_id) != path.end();
}

RetrainOutcome retrain_subspaces(const BMTree& tree, const std::vector<Point>& data_new,
                                 const std::vector<WindowQuery>& queries_new,
                                 const std::vector<std::int32_t>& retrain_nodes,
                                 const MctsConfig& mcfg, const LevelCallback& cb) {
    RetrainOutcome out{tree};
    if (retrain_nodes.empty()) return out;
    mcfg.validate(tree.config());
    if (data_new.empty()) throw PreconditionError("retraining needs a non-empty dataset");

    std::vector<WindowQuery> restricted;
    for (const WindowQuery& q : queries_new) {
        std::vector<std::int32_t> path;
        tree.evaluate_with_path(query_center(q), path);
        for (std::int32_t id : retrain_nodes) {
            if (std::find(path.begin(), path.end(), id) != path.end()) {
                restricted.push_back(q);
                break;
            }
        }
    }
    out.restricted_queries = restricted.size();
    if (restricted.empty()) {
        log_info("no queries fall in the retrained subspaces; tree kept unchanged");
        return out;
    }
    if (mcfg.train_queries > 0 && restricted.size() > mcfg.train_queries)
        restricted.resize(mcfg.train_queries);

    Rng rng(mcfg.seed);
    SampleSet sample = make_sample(data_new, mcfg.sample_rate, rng);
    RewardContext env(tree.config(), std::move(sample), std::move(restricted), mcfg.block_size);
    // The unchanged portion is fixed, so the pre-prune tree replaces the
    // Z-curve as the thing to beat.
    std::size_t baseline = env.total_sr(tree);
    env.set_baseline_total(baseline);
    out.baseline_sr = baseline;

    BMTree pruned = tree;
    pruned.prune_subtrees(retrain_nodes);
    MctsSearch search(std::move(pruned), std::move(env), mcfg);
    BMTree candidate = search.run(cb);

    std::size_t final_sr = search.env().total_sr(candidate);
    if (final_sr > baseline) {
        log_info("retraining found nothing better than the existing subtrees");
        out.tree = tree;
        out.final_sr = baseline;
        out.improvement = 0.0;
        return out;
    }
    out.tree = std::move(candidate);
    out.final_sr = final_sr;
    out.improvement = baseline == 0 ? 0.0
                                    : (static_cast<double>(baseline) -
                                       static_cast<double>(final_sr)) /
                                          static_cast<double>(baseline);
    return out;
}

}  // namespace bmtree
