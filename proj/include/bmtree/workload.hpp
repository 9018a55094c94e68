#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmtree/cost_model.hpp"
#include "bmtree/grid.hpp"

namespace bmtree {

enum class DataDist { UNI, GAU };
enum class QueryDist { UNI, GAU, SKE };

struct DataSpec {
    DataDist distribution = DataDist::UNI;
    std::size_t size = 0;
    GridConfig config;
    std::uint64_t seed = 0;
    double gau_sigma = 1.0 / 8.0;  // fraction of the domain width
};

struct QuerySpec {
    QueryDist distribution = QueryDist::UNI;
    std::size_t count = 0;
    // Areas are expressed on the reference 2^20-per-side grid and rescaled
    // by (2^m / 2^20)^2 for other m, so selectivity stays comparable.
    std::vector<double> area_log2 = {30, 32, 34};
    std::vector<double> ratios = {4.0, 1.0, 0.25};
    std::uint64_t seed = 0;
    int ske_clusters = 3;
};

std::vector<Point> gen_data(const DataSpec& spec);

std::vector<WindowQuery> gen_queries(const QuerySpec& spec, const GridConfig& cfg);

// Size-preserving mixture: round(pct*|old|) entries of `old`, chosen
// uniformly, are replaced by entries sampled without replacement from
// `fresh`. Shared element type for points and queries.
template <typename T>
std::vector<T> mix_shift(const std::vector<T>& old, const std::vector<T>& fresh, double pct,
                         std::uint64_t seed);

std::vector<Point> load_csv(const std::string& path, const GridConfig& cfg);

void save_points_csv(const std::vector<Point>& pts, const std::string& path, bool header,
                     const GridConfig& cfg);
std::vector<Point> load_points_csv_exact(const std::string& path, const GridConfig& cfg,
                                         bool header);

void save_queries_csv(const std::vector<WindowQuery>& qs, const std::string& path, bool header,
                      const GridConfig& cfg);
std::vector<WindowQuery> load_queries_csv(const std::string& path, const GridConfig& cfg,
                                          bool header);

}  // namespace bmtree
