#include "bmtree/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "bmtree/errors.hpp"
#include "bmtree/parallel.hpp"

namespace bmtree {

SampleSet make_sample(const std::vector<Point>& data, double rate, Rng& rng) {
    if (data.empty()) throw PreconditionError("cannot sample an empty dataset");
    if (rate <= 0.0 || rate > 1.0) throw PreconditionError("sampling rate must be in (0, 1]");
    std::size_t k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(data.size())));
    k = std::clamp<std::size_t>(k, 1, data.size());
    SampleSet s;
    s.source_size = data.size();
    s.rate = rate;
    auto idx = rng.sample_indices<std::size_t>(data.size(), k);
    s.points.reserve(k);
    for (std::size_t i : idx) s.points.push_back(data[i]);
    return s;
}

SampleSet full_sample(const std::vector<Point>& data) {
    if (data.empty()) throw PreconditionError("cannot sample an empty dataset");
    SampleSet s;
    s.points = data;
    s.source_size = data.size();
    s.rate = 1.0;
    return s;
}

void validate_query(const WindowQuery& q, const GridConfig& cfg) {
    validate_point(q.min_corner, cfg);
    validate_point(q.max_corner, cfg);
    for (int d = 0; d < cfg.dims; ++d)
        if (q.min_corner[d] > q.max_corner[d])
            throw DomainError("query min exceeds max in dimension " + std::to_string(d));
}

bool query_contains(const WindowQuery& q, const Point& p) {
    for (size_t d = 0; d < p.size(); ++d)
        if (p[d] < q.min_corner[d] || p[d] > q.max_corner[d]) return false;
    return true;
}

std::size_t BlockLayout::block_of(const SfcValue& v) const {
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end()) return block_count == 0 ? 0 : block_count - 1;
    return static_cast<std::size_t>(it - values.begin()) / static_cast<std::size_t>(block_size);
}

BlockLayout build_layout(const BMTree& tree, const SampleSet& sample, int block_size) {
    if (sample.points.empty()) throw PreconditionError("cannot build a layout from an empty sample");
    if (block_size < 1) throw PreconditionError("block size must be positive");
    const std::size_t n = sample.points.size();
    BlockLayout layout;
    layout.block_size = block_size;
    layout.block_count = (n + block_size - 1) / block_size;
    std::vector<SfcValue> vals(n);
    parallel_for(n, [&](std::size_t i) { vals[i] = tree.evaluate(sample.points[i]); });
    layout.order.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) layout.order[i] = i;
    std::stable_sort(layout.order.begin(), layout.order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return vals[a] < vals[b]; });
    layout.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) layout.values[k] = vals[layout.order[k]];
    return layout;
}

std::size_t scan_range(const BlockLayout& layout, const BMTree& tree, const WindowQuery& q) {
    validate_query(q, tree.config());
    std::size_t lo = layout.block_of(tree.evaluate(q.min_corner));
    std::size_t hi = layout.block_of(tree.evaluate(q.max_corner));
    return hi - lo;
}

std::size_t workload_sr(const BMTree& tree, const BlockLayout& layout,
                        const std::vector<WindowQuery>& queries) {
    if (queries.empty()) throw PreconditionError("empty query workload");
    std::size_t total = 0;
    for (const WindowQuery& q : queries) total += scan_range(layout, tree, q);
    return total;
}

RewardContext::RewardContext(const GridConfig& cfg, SampleSet sample,
                             std::vector<WindowQuery> queries, int block_size)
    : cfg_(cfg), sample_(std::move(sample)), queries_(std::move(queries)),
      block_size_(block_size) {
    if (sample_.points.empty()) throw PreconditionError("empty sample");
    if (queries_.empty()) throw PreconditionError("empty query workload");
    // An empty tree evaluates as the Z-curve via default completion.
    baseline_total_ = total_sr(BMTree(cfg_));
}

std::size_t RewardContext::total_sr(const BMTree& tree) const {
    BlockLayout layout = build_layout(tree, sample_, block_size_);
    return workload_sr(tree, layout, queries_);
}

void RewardContext::set_baseline_total(std::size_t total) { baseline_total_ = total; }

double RewardContext::reward_from_total(std::size_t total) const {
    if (baseline_total_ == 0) return 0.0;
    return (static_cast<double>(baseline_total_) - static_cast<double>(total)) /
           static_cast<double>(baseline_total_);
}

double RewardContext::reward(const BMTree& tree) const {
    return reward_from_total(total_sr(tree));
}

}  // namespace bmtree
