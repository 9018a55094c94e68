#pragma once

#include <cstdint>
#include <vector>

#include "bmtree/grid.hpp"
#include "bmtree/rng.hpp"
#include "bmtree/sfc_value.hpp"
#include "bmtree/tree.hpp"

namespace bmtree {

inline constexpr int kDefaultBlockSize = 100;

// Random sample of a dataset, kept with its provenance.
struct SampleSet {
    std::vector<Point> points;
    std::size_t source_size = 0;
    double rate = 1.0;
};

// Exact-count sample without replacement; |points| = round(rate * |data|),
// at least 1 for non-empty data.
SampleSet make_sample(const std::vector<Point>& data, double rate, Rng& rng);

SampleSet full_sample(const std::vector<Point>& data);

struct WindowQuery {
    Point min_corner;
    Point max_corner;
};

void validate_query(const WindowQuery& q, const GridConfig& cfg);
bool query_contains(const WindowQuery& q, const Point& p);

// Sample points sorted by key and cut into fixed-size blocks.
struct BlockLayout {
    std::vector<SfcValue> values;        // ascending; ties keep input order
    std::vector<std::uint32_t> order;    // values[k] belongs to sample point order[k]
    int block_size = kDefaultBlockSize;
    std::size_t block_count = 0;

    // Block of the first entry with value >= v; the last block when v
    // exceeds every entry.
    std::size_t block_of(const SfcValue& v) const;
};

BlockLayout build_layout(const BMTree& tree, const SampleSet& sample, int block_size);

// Block-id distance between the query's corner keys.
std::size_t scan_range(const BlockLayout& layout, const BMTree& tree, const WindowQuery& q);

std::size_t workload_sr(const BMTree& tree, const BlockLayout& layout,
                        const std::vector<WindowQuery>& queries);

// Reward environment: caches the baseline total ScanRange so each
// candidate tree costs one layout build. The training baseline is the
// Z-curve; retraining swaps in a fixed pre-computed baseline.
class RewardContext {
  public:
    RewardContext(const GridConfig& cfg, SampleSet sample, std::vector<WindowQuery> queries,
                  int block_size);

    // Replace the Z baseline by a fixed total (partial-retrain mode).
    void set_baseline_total(std::size_t total);

    std::size_t total_sr(const BMTree& tree) const;
    double reward(const BMTree& tree) const;
    double reward_from_total(std::size_t total) const;

    std::size_t baseline_total() const { return baseline_total_; }
    const SampleSet& sample() const { return sample_; }
    const std::vector<WindowQuery>& queries() const { return queries_; }
    int block_size() const { return block_size_; }

  private:
    GridConfig cfg_;
    SampleSet sample_;
    std::vector<WindowQuery> queries_;
    int block_size_;
    std::size_t baseline_total_ = 0;
};

}  // namespace bmtree
