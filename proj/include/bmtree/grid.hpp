#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmtree/errors.hpp"

namespace bmtree {

inline constexpr int kMaxDims = 8;
inline constexpr int kMaxBitsPerDim = 20;
inline constexpr int kMaxTotalBits = 160;

// Discrete grid: n dimensions, m bits per dimension. Every coordinate
// lives in [0, 2^m).
struct GridConfig {
    int dims = 2;
    int bits_per_dim = 20;

    GridConfig() = default;
    GridConfig(int n, int m) : dims(n), bits_per_dim(m) { validate(); }

    void validate() const {
        if (dims < 2 || dims > kMaxDims)
            throw DomainError("grid dims must be in [2, 8], got " + std::to_string(dims));
        if (bits_per_dim < 1 || bits_per_dim > kMaxBitsPerDim)
            throw DomainError("bits per dim must be in [1, 20], got " +
                              std::to_string(bits_per_dim));
        if (dims * bits_per_dim > kMaxTotalBits)
            throw DomainError("total key width exceeds 160 bits");
    }

    int total_bits() const { return dims * bits_per_dim; }
    std::uint32_t side() const { return std::uint32_t{1} << bits_per_dim; }
    std::uint32_t max_coord() const { return side() - 1; }

    bool operator==(const GridConfig&) const = default;
};

using Point = std::vector<std::uint32_t>;

inline void validate_point(const Point& p, const GridConfig& cfg) {
    if (static_cast<int>(p.size()) != cfg.dims)
        throw DomainError("point has " + std::to_string(p.size()) + " coords, grid has " +
                          std::to_string(cfg.dims) + " dims");
    for (int d = 0; d < cfg.dims; ++d) {
        if (p[d] > cfg.max_coord())
            throw DomainError("coordinate out of range in dimension " + std::to_string(d) +
                              ": " + std::to_string(p[d]));
    }
}

// Bit i of coordinate c, 0-indexed from the MSB of an m-bit string.
inline int coord_bit(std::uint32_t c, int m, int i) {
    return static_cast<int>((c >> (m - 1 - i)) & 1u);
}

}  // namespace bmtree
