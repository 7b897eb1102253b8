#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qaa {

inline constexpr std::uint64_t dim_of(int n) { return std::uint64_t{1} << n; }

inline constexpr int bit_of(std::uint64_t z, int qubit) {
    return static_cast<int>((z >> qubit) & 1u);
}

/// Qubit i is bit i of the basis-state index; qubit 0 is the least
/// significant bit. Textual bit strings are written most-significant-first,
/// so qubit n-1 is the leftmost character.
inline std::string format_bits(std::uint64_t z, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
        if (bit_of(z, i)) out[static_cast<std::size_t>(n - 1 - i)] = '1';
    }
    return out;
}

inline std::uint64_t parse_bits(std::string_view text) {
    if (text.empty() || text.size() > 63)
        throw std::invalid_argument("bit string must have 1..63 characters");
    std::uint64_t z = 0;
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string may contain only '0' and '1'");
        z = (z << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return z;
}

} // namespace qaa
