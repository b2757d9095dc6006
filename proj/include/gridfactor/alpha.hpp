#pragma once

// Six-letter vertex coding for 2-factors on grid strips.
//
// Every vertex of a 2-factor uses exactly two of its four incident edge
// slots (up, down, left, right).  The six admissible slot pairs are coded
// by the letters a..f; a column of the grid then reads as a word over that
// alphabet, and stacking/abutting constraints become letter compatibility.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridfactor {

enum EdgeSlot : unsigned {
    kUp = 1u,
    kDown = 2u,
    kLeft = 4u,
    kRight = 8u,
};

// a={right,down} b={up,down} c={up,right} d={left,down} e={left,right} f={up,left}
inline constexpr unsigned kLetterEdges[6] = {
    kRight | kDown,  // a
    kUp | kDown,     // b
    kUp | kRight,    // c
    kLeft | kDown,   // d
    kLeft | kRight,  // e
    kUp | kLeft,     // f
};

inline constexpr bool is_alpha_letter(char c) { return c >= 'a' && c <= 'f'; }

inline unsigned letter_edges(char c) { return kLetterEdges[c - 'a']; }

// x stacked directly above y: the shared vertical slot must agree.
inline bool ud_compatible(char x, char y) {
    return bool(letter_edges(x) & kDown) == bool(letter_edges(y) & kUp);
}

// x directly left of y: the shared horizontal slot must agree.
inline bool lr_compatible(char x, char y) {
    return bool(letter_edges(x) & kRight) == bool(letter_edges(y) & kLeft);
}

// Reflection across a horizontal axis: reverse the word, swap up/down roles.
inline char flip_ud(char c) {
    switch (c) {
        case 'a': return 'c';
        case 'c': return 'a';
        case 'd': return 'f';
        case 'f': return 'd';
        default: return c;  // b, e self-paired
    }
}

// Reflection across a vertical axis: keep order, swap left/right roles.
inline char flip_lr(char c) {
    switch (c) {
        case 'a': return 'd';
        case 'd': return 'a';
        case 'c': return 'f';
        case 'f': return 'c';
        default: return c;
    }
}

inline std::string horizontal_conversion(std::string_view w) {
    std::string r(w.size(), ' ');
    for (size_t i = 0; i < w.size(); ++i) r[w.size() - 1 - i] = flip_ud(w[i]);
    return r;
}

inline std::string vertical_conversion(std::string_view w) {
    std::string r(w.size(), ' ');
    for (size_t i = 0; i < w.size(); ++i) r[i] = flip_lr(w[i]);
    return r;
}

// Outlet word: per row, 1 iff an edge leaves to the right ({a,c,e}).
// Bit order: first letter is the most significant bit, so that the numeric
// value of a word orders the same way as the bit string.
inline std::uint32_t outlet_word(std::string_view w) {
    std::uint32_t v = 0;
    for (char c : w) v = (v << 1) | ((letter_edges(c) & kRight) ? 1u : 0u);
    return v;
}

// Inlet word: per row, 1 iff an edge enters from the left ({d,e,f}).
inline std::uint32_t inlet_word(std::string_view w) {
    std::uint32_t v = 0;
    for (char c : w) v = (v << 1) | ((letter_edges(c) & kLeft) ? 1u : 0u);
    return v;
}

// Column conditions: consecutive letters ud-compatible, the top letter has
// no up slot and the bottom letter has no down slot.
inline bool is_valid_column(std::string_view w) {
    if (w.empty()) return false;
    for (char c : w)
        if (!is_alpha_letter(c)) return false;
    if (letter_edges(w.front()) & kUp) return false;
    if (letter_edges(w.back()) & kDown) return false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (!ud_compatible(w[i], w[i + 1])) return false;
    return true;
}

namespace detail {
template <typename Fn>
void column_dfs(std::string& buf, int depth, int m, Fn& fn) {
    for (char c = 'a'; c <= 'f'; ++c) {
        bool ok = depth == 0 ? !(letter_edges(c) & kUp)
                             : ud_compatible(buf[depth - 1], c);
        if (!ok) continue;
        if (depth == m - 1 && (letter_edges(c) & kDown)) continue;
        buf[static_cast<size_t>(depth)] = c;
        if (depth == m - 1)
            fn(std::string_view(buf));
        else
            column_dfs(buf, depth + 1, m, fn);
    }
}
}  // namespace detail

// Enumerates all valid columns of height m in lexicographic order
// (a<b<...<f), invoking fn(word) for each.  There are (3^m + (-1)^m)/2
// of them; m = 1 yields the single column "e".
template <typename Fn>
void for_each_valid_column(int m, Fn&& fn) {
    if (m < 1) throw std::invalid_argument("column height must be >= 1");
    std::string buf(static_cast<size_t>(m), 'a');
    detail::column_dfs(buf, 0, m, fn);
}

inline std::vector<std::string> valid_columns(int m) {
    std::vector<std::string> out;
    for_each_valid_column(m, [&](std::string_view w) { out.emplace_back(w); });
    return out;
}

// (3^m + (-1)^m)/2, the number of valid columns of height m.
inline std::uint64_t valid_column_count(int m) {
    std::uint64_t p = 1;
    for (int i = 0; i < m; ++i) p *= 3;
    return (p + (m % 2 == 0 ? 1 : -1)) / 2;
}

}  // namespace gridfactor
