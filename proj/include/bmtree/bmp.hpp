#pragma once

#include <cstdint>
#include <vector>

#include "bmtree/grid.hpp"
#include "bmtree/sfc_value.hpp"

namespace bmtree {

// Bit-merging pattern: an ordering of the n*m per-dimension bits. Entry l
// names the dimension whose next unconsumed bit fills output position l
// (positions run MSB-first). Each dimension appears exactly m times in a
// valid pattern.
struct Bmp {
    std::vector<std::uint8_t> dims;
};

enum class ClassicCurve { Z, C };

// Per-dimension bit strings of a point, MSB-first and zero-padded to m bits.
std::vector<std::vector<std::uint8_t>> encode_point(const Point& p, const GridConfig& cfg);

bool validate_bmp(const Bmp& bmp, const GridConfig& cfg);

// Throws StructureError if the pattern is not valid under cfg.
void require_valid_bmp(const Bmp& bmp, const GridConfig& cfg);

SfcValue bmp_value(const Bmp& bmp, const Point& p, const GridConfig& cfg);

// Z: dimensions cycle 0,1,...,n-1, m times. C: dimension 0's m bits, then
// dimension 1's, and so on.
Bmp classic_bmp(ClassicCurve kind, const GridConfig& cfg);

}  // namespace bmtree
