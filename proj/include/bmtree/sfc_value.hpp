#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace bmtree {

// Unsigned key of up to 192 bits (the grid caps keys at 160). Bits are
// appended MSB-first while walking a curve, so numeric order equals the
// order in which bit strings compare lexicographically.
class SfcValue {
  public:
    SfcValue() : words_{0, 0, 0} {}

    static SfcValue from_u64(std::uint64_t v) {
        SfcValue x;
        x.words_[0] = v;
        return x;
    }

    // value = value * 2 + bit
    void push_bit(int bit) {
        std::uint64_t c2 = words_[1] >> 63;
        std::uint64_t c1 = words_[0] >> 63;
        words_[2] = (words_[2] << 1) | c2;
        words_[1] = (words_[1] << 1) | c1;
        words_[0] = (words_[0] << 1) | static_cast<std::uint64_t>(bit);
    }

    // Bit at position `pos` counted 0-indexed from the MSB of a
    // `total_bits`-wide value.
    int bit_from_msb(int pos, int total_bits) const {
        int idx = total_bits - 1 - pos;
        return static_cast<int>((words_[idx >> 6] >> (idx & 63)) & 1u);
    }

    std::uint64_t low64() const { return words_[0]; }

    std::strong_ordering operator<=>(const SfcValue& o) const {
        for (int w = 2; w >= 0; --w) {
            if (words_[w] != o.words_[w])
                return words_[w] < o.words_[w] ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }
    bool operator==(const SfcValue& o) const { return words_ == o.words_; }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        bool leading = true;
        for (int w = 2; w >= 0; --w) {
            for (int nib = 15; nib >= 0; --nib) {
                int v = static_cast<int>((words_[w] >> (nib * 4)) & 0xf);
                if (leading && v == 0 && !(w == 0 && nib == 0)) continue;
                leading = false;
                s.push_back(digits[v]);
            }
        }
        return s;
    }

  private:
    std::array<std::uint64_t, 3> words_;  // little-endian: words_[0] = least significant
};

}  // namespace bmtree
