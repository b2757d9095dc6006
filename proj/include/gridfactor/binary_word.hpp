#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace gridfactor {

// Binary words of length m are stored in a uint32_t with the first position
// as the most significant of the low m bits; numeric order then equals
// lexicographic order on the bit strings.

inline std::uint32_t reverse_word(std::uint32_t v, int m) {
    std::uint32_t r = 0;
    for (int i = 0; i < m; ++i) {
        r = (r << 1) | (v & 1u);
        v >>= 1;
    }
    return r;
}

inline bool is_palindrome_word(std::uint32_t v, int m) {
    return reverse_word(v, m) == v;
}

inline int ones_count(std::uint32_t v) { return std::popcount(v); }

inline std::string word_to_string(std::uint32_t v, int m) {
    std::string s(static_cast<size_t>(m), '0');
    for (int i = 0; i < m; ++i)
        if (v & (1u << (m - 1 - i))) s[static_cast<size_t>(i)] = '1';
    return s;
}

inline std::uint32_t word_from_string(const std::string& s) {
    std::uint32_t v = 0;
    for (char c : s) v = (v << 1) | (c == '1' ? 1u : 0u);
    return v;
}

}  // namespace gridfactor
