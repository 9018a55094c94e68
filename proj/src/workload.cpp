#include "bmtree/workload.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "bmtree/errors.hpp"
#include "bmtree/rng.hpp"
#include "bmtree/tree.hpp"

namespace bmtree {

namespace {

std::uint32_t clamp_coord(long long v, const GridConfig& cfg) {
    if (v < 0) return 0;
    if (v > static_cast<long long>(cfg.max_coord())) return cfg.max_coord();
    return static_cast<std::uint32_t>(v);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    return v;
}

}  // namespace

std::vector<Point> gen_data(const DataSpec& spec) {
    spec.config.validate();
    if (spec.size < 1) throw SpecError("data size must be at least 1");
    Rng rng(spec.seed);
    const GridConfig& cfg = spec.config;
    const double domain = static_cast<double>(cfg.side());
    std::vector<Point> out;
    out.reserve(spec.size);
    for (std::size_t i = 0; i < spec.size; ++i) {
        Point p(cfg.dims);
        for (int d = 0; d < cfg.dims; ++d) {
            if (spec.distribution == DataDist::UNI) {
                p[d] = static_cast<std::uint32_t>(rng.below(cfg.side()));
            } else {
                double v = domain / 2.0 + rng.normal() * spec.gau_sigma * domain;
                p[d] = clamp_coord(std::llround(v), cfg);
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<WindowQuery> gen_queries(const QuerySpec& spec, const GridConfig& cfg) {
    cfg.validate();
    if (spec.count < 1) throw SpecError("query count must be at least 1");
    if (spec.area_log2.empty() || spec.ratios.empty())
        throw SpecError("query spec needs at least one area and one ratio");
    if (spec.distribution == QueryDist::SKE && spec.ske_clusters < 1)
        throw SpecError("skewed workload needs at least one cluster");

    Rng rng(spec.seed);
    const double domain = static_cast<double>(cfg.side());
    const int m = cfg.bits_per_dim;

    // Skewed workloads mix a few Gaussians with distinct centers.
    std::vector<Point> clusters;
    if (spec.distribution == QueryDist::SKE) {
        while (static_cast<int>(clusters.size()) < spec.ske_clusters) {
            Point c(cfg.dims);
            for (int d = 0; d < cfg.dims; ++d)
                c[d] = static_cast<std::uint32_t>(rng.below(cfg.side()));
            if (std::find(clusters.begin(), clusters.end(), c) == clusters.end())
                clusters.push_back(std::move(c));
        }
    }

    std::vector<WindowQuery> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        Point center(cfg.dims);
        switch (spec.distribution) {
            case QueryDist::UNI:
                for (int d = 0; d < cfg.dims; ++d)
                    center[d] = static_cast<std::uint32_t>(rng.below(cfg.side()));
                break;
            case QueryDist::GAU:
                for (int d = 0; d < cfg.dims; ++d) {
                    double v = domain / 2.0 + rng.normal() * domain / 8.0;
                    center[d] = clamp_coord(std::llround(v), cfg);
                }
                break;
            case QueryDist::SKE: {
                const Point& mu = clusters[rng.below(clusters.size())];
                for (int d = 0; d < cfg.dims; ++d) {
                    double v = static_cast<double>(mu[d]) + rng.normal() * domain / 20.0;
                    center[d] = clamp_coord(std::llround(v), cfg);
                }
                break;
            }
        }

        std::size_t pick = rng.below(spec.area_log2.size() * spec.ratios.size());
        double area_l2 = spec.area_log2[pick / spec.ratios.size()];
        double ratio = spec.ratios[pick % spec.ratios.size()];
        // Rescale the reference-grid area to this grid's granularity.
        double area = std::exp2(area_l2 + 2.0 * (m - 20));

        std::vector<long long> extent(cfg.dims);
        extent[0] = std::max<long long>(1, std::llround(std::sqrt(area * ratio)));
        if (cfg.dims > 1) extent[1] = std::max<long long>(1, std::llround(std::sqrt(area / ratio)));
        for (int d = 2; d < cfg.dims; ++d)
            extent[d] = std::max<long long>(1, std::llround(std::sqrt(area)));
        for (int d = 0; d < cfg.dims; ++d)
            if (extent[d] > static_cast<long long>(cfg.side()))
                throw SpecError("query area larger than the grid in dimension " +
                                std::to_string(d));

        WindowQuery q;
        q.min_corner.resize(cfg.dims);
        q.max_corner.resize(cfg.dims);
        for (int d = 0; d < cfg.dims; ++d) {
            long long lo = static_cast<long long>(center[d]) - extent[d] / 2;
            long long hi_limit = static_cast<long long>(cfg.max_coord()) - extent[d] + 1;
            if (lo < 0) lo = 0;
            if (lo > hi_limit) lo = hi_limit;
            q.min_corner[d] = static_cast<std::uint32_t>(lo);
            q.max_corner[d] = static_cast<std::uint32_t>(lo + extent[d] - 1);
        }
        out.push_back(std::move(q));
    }
    return out;
}

template <typename T>
std::vector<T> mix_shift(const std::vector<T>& old, const std::vector<T>& fresh, double pct,
                         std::uint64_t seed) {
    if (pct < 0.0 || pct > 1.0) throw SpecError("shift fraction must be in [0, 1]");
    std::size_t k = static_cast<std::size_t>(std::llround(pct * static_cast<double>(old.size())));
    if (fresh.size() < k) throw SpecError("replacement pool smaller than the shift size");
    std::vector<T> out = old;
    if (k == 0) return out;
    Rng rng(seed);
    auto targets = rng.sample_indices<std::size_t>(old.size(), k);
    auto donors = rng.sample_indices<std::size_t>(fresh.size(), k);
    for (std::size_t i = 0; i < k; ++i) out[targets[i]] = fresh[donors[i]];
    return out;
}

template std::vector<Point> mix_shift<Point>(const std::vector<Point>&, const std::vector<Point>&,
                                             double, std::uint64_t);
template std::vector<WindowQuery> mix_shift<WindowQuery>(const std::vector<WindowQuery>&,
                                                         const std::vector<WindowQuery>&, double,
                                                         std::uint64_t);

std::vector<Point> load_csv(const std::string& path, const GridConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_row(line);
        if (static_cast<int>(cells.size()) != cfg.dims)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cfg.dims) + " columns, got " +
                             std::to_string(cells.size()));
        std::vector<double> row(cfg.dims);
        for (int d = 0; d < cfg.dims; ++d) row[d] = parse_number(cells[d], line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return {};

    std::vector<double> lo(cfg.dims, rows[0][0]), hi(cfg.dims, rows[0][0]);
    for (int d = 0; d < cfg.dims; ++d) lo[d] = hi[d] = rows[0][d];
    for (const auto& row : rows)
        for (int d = 0; d < cfg.dims; ++d) {
            lo[d] = std::min(lo[d], row[d]);
            hi[d] = std::max(hi[d], row[d]);
        }

    const double side = static_cast<double>(cfg.side());
    std::vector<Point> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        Point p(cfg.dims);
        for (int d = 0; d < cfg.dims; ++d) {
            if (hi[d] == lo[d]) {
                p[d] = 0;
            } else {
                double q = std::floor((row[d] - lo[d]) / (hi[d] - lo[d]) * side);
                p[d] = clamp_coord(static_cast<long long>(q), cfg);
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

void save_points_csv(const std::vector<Point>& pts, const std::string& path, bool header,
                     const GridConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path);
    if (header) {
        for (int d = 0; d < cfg.dims; ++d) out << (d ? "," : "") << dim_letter(d, false);
        out << "\n";
    }
    for (const Point& p : pts) {
        for (int d = 0; d < cfg.dims; ++d) out << (d ? "," : "") << p[d];
        out << "\n";
    }
}

std::vector<Point> load_points_csv_exact(const std::string& path, const GridConfig& cfg,
                                         bool header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    std::vector<Point> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (header && line_no == 1) continue;
        auto cells = split_row(line);
        if (static_cast<int>(cells.size()) != cfg.dims)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cfg.dims) + " columns, got " +
                             std::to_string(cells.size()));
        Point p(cfg.dims);
        for (int d = 0; d < cfg.dims; ++d) {
            double v = parse_number(cells[d], line_no);
            if (v < 0 || v != std::floor(v) || v > static_cast<double>(cfg.max_coord()))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": coordinate not an in-grid integer: " + cells[d]);
            p[d] = static_cast<std::uint32_t>(v);
        }
        out.push_back(std::move(p));
    }
    return out;
}

void save_queries_csv(const std::vector<WindowQuery>& qs, const std::string& path, bool header,
                      const GridConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path);
    if (header) {
        for (int d = 0; d < cfg.dims; ++d) out << (d ? "," : "") << "min_" << dim_letter(d, false);
        for (int d = 0; d < cfg.dims; ++d) out << ",max_" << dim_letter(d, false);
        out << "\n";
    }
    for (const WindowQuery& q : qs) {
        for (int d = 0; d < cfg.dims; ++d) out << (d ? "," : "") << q.min_corner[d];
        for (int d = 0; d < cfg.dims; ++d) out << "," << q.max_corner[d];
        out << "\n";
    }
}

std::vector<WindowQuery> load_queries_csv(const std::string& path, const GridConfig& cfg,
                                          bool header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    std::vector<WindowQuery> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (header && line_no == 1) continue;
        auto cells = split_row(line);
        if (static_cast<int>(cells.size()) != 2 * cfg.dims)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(2 * cfg.dims) + " columns, got " +
                             std::to_string(cells.size()));
        WindowQuery q;
        q.min_corner.resize(cfg.dims);
        q.max_corner.resize(cfg.dims);
        for (int d = 0; d < 2 * cfg.dims; ++d) {
            double v = parse_number(cells[d], line_no);
            if (v < 0 || v != std::floor(v) || v > static_cast<double>(cfg.max_coord()))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": corner not an in-grid integer: " + cells[d]);
            if (d < cfg.dims)
                q.min_corner[d] = static_cast<std::uint32_t>(v);
            else
                q.max_corner[d - cfg.dims] = static_cast<std::uint32_t>(v);
        }
        validate_query(q, cfg);
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace bmtree
