#include "bmtree/bmp.hpp"

#include <array>
#include <string>

namespace bmtree {

std::vector<std::vector<std::uint8_t>> encode_point(const Point& p, const GridConfig& cfg) {
    validate_point(p, cfg);
    const int m = cfg.bits_per_dim;
    std::vector<std::vector<std::uint8_t>> out(cfg.dims);
    for (int d = 0; d < cfg.dims; ++d) {
        out[d].resize(m);
        for (int i = 0; i < m; ++i)
            out[d][i] = static_cast<std::uint8_t>(coord_bit(p[d], m, i));
    }
    return out;
}

bool validate_bmp(const Bmp& bmp, const GridConfig& cfg) {
    if (static_cast<int>(bmp.dims.size()) != cfg.total_bits()) return false;
    std::array<int, kMaxDims> count{};
    for (std::uint8_t d : bmp.dims) {
        if (d >= cfg.dims) return false;
        ++count[d];
    }
    for (int d = 0; d < cfg.dims; ++d)
        if (count[d] != cfg.bits_per_dim) return false;
    return true;
}

void require_valid_bmp(const Bmp& bmp, const GridConfig& cfg) {
    if (!validate_bmp(bmp, cfg))
        throw StructureError("invalid bit-merging pattern for " + std::to_string(cfg.dims) +
                             "x" + std::to_string(cfg.bits_per_dim) + " grid");
}

SfcValue bmp_value(const Bmp& bmp, const Point& p, const GridConfig& cfg) {
    require_valid_bmp(bmp, cfg);
    validate_point(p, cfg);
    const int m = cfg.bits_per_dim;
    std::array<int, kMaxDims> used{};
    SfcValue v;
    for (std::uint8_t d : bmp.dims) v.push_bit(coord_bit(p[d], m, used[d]++));
    return v;
}

Bmp classic_bmp(ClassicCurve kind, const GridConfig& cfg) {
    Bmp b;
    b.dims.reserve(cfg.total_bits());
    if (kind == ClassicCurve::Z) {
        for (int i = 0; i < cfg.bits_per_dim; ++i)
            for (int d = 0; d < cfg.dims; ++d) b.dims.push_back(static_cast<std::uint8_t>(d));
    } else {
        for (int d = 0; d < cfg.dims; ++d)
            for (int i = 0; i < cfg.bits_per_dim; ++i) b.dims.push_back(static_cast<std::uint8_t>(d));
    }
    return b;
}

}  // namespace bmtree
