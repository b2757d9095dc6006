#pragma once

// Transfer digraph construction and structure analysis.
//
// Each valid column y contributes one arc inlet(y) -> outlet(y); the vertex
// set is the set of words that occur.  This builds the quotient digraph
// directly, without materializing the column-level digraph, whose arc count
// grows much too fast.  Column words themselves are only kept for the small
// reference digraph used in cross-checks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridfactor/alpha.hpp"
#include "gridfactor/binary_word.hpp"
#include "gridfactor/family.hpp"

namespace gridfactor {

inline constexpr int kDefaultMaxM = 14;

struct TransferDigraph {
    int m = 0;
    std::vector<std::uint32_t> verts;             // sorted outlet words
    std::vector<std::int32_t> index_of;           // word -> vertex index, -1 absent
    std::size_t row_words = 0;                    // 64-bit blocks per adjacency row
    std::vector<std::uint64_t> adj_bits;          // packed rows
    std::vector<std::vector<std::int32_t>> succ;  // successor lists

    // strongly connected components, ordered by size descending with ties
    // broken by the smallest contained vertex
    std::vector<std::vector<std::int32_t>> comps;
    std::vector<std::int32_t> comp_of;
    std::int32_t a_star = -1;                 // component of the all-ones word
    std::int32_t r_star = -1;                 // component of the all-zeros word
    std::vector<std::int32_t> b_components;   // all components except a_star
    std::vector<std::int8_t> color;           // 2-coloring within component, -1 if none
    std::vector<char> comp_bipartite;

    int vertex_count() const { return static_cast<int>(verts.size()); }

    int index(std::uint32_t word) const {
        return word < index_of.size() ? index_of[word] : -1;
    }

    bool arc(int i, int j) const {
        return adj_bits[static_cast<std::size_t>(i) * row_words +
                        static_cast<std::size_t>(j) / 64] >>
                   (j % 64) &
               1u;
    }

    std::uint64_t arc_count() const {  // ordered pairs, loops once
        std::uint64_t n = 0;
        for (auto& s : succ) n += s.size();
        return n;
    }

    // reversal involution on vertex indices
    int reversal_image(int i) const {
        int j = index(reverse_word(verts[static_cast<std::size_t>(i)], m));
        if (j < 0) throw std::logic_error("reversal left the vertex set");
        return j;
    }

    static TransferDigraph build(int m, int max_m = kDefaultMaxM);
};

inline TransferDigraph TransferDigraph::build(int m, int max_m) {
    if (m < 2) throw std::invalid_argument("transfer digraph needs m >= 2");
    if (m > max_m || m > 30)
        throw CapacityError("transfer digraph capacity exceeded: m = " +
                            std::to_string(m) + " > " + std::to_string(max_m));
    TransferDigraph d;
    d.m = m;
    const std::uint32_t space = 1u << m;

    std::vector<char> present(space, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(valid_column_count(m));
    for_each_valid_column(m, [&](std::string_view w) {
        std::uint32_t in = inlet_word(w), out = outlet_word(w);
        present[in] = present[out] = 1;
        arcs.emplace_back(in, out);
    });

    d.index_of.assign(space, -1);
    for (std::uint32_t v = 0; v < space; ++v)
        if (present[v]) {
            d.index_of[v] = static_cast<std::int32_t>(d.verts.size());
            d.verts.push_back(v);
        }

    const std::size_t n = d.verts.size();
    d.row_words = (n + 63) / 64;
    d.adj_bits.assign(n * d.row_words, 0);
    d.succ.assign(n, {});
    for (auto [in, out] : arcs) {
        int i = d.index_of[in], j = d.index_of[out];
        auto& blk = d.adj_bits[static_cast<std::size_t>(i) * d.row_words +
                               static_cast<std::size_t>(j) / 64];
        std::uint64_t bit = 1ull << (j % 64);
        if (blk & bit)
            throw std::logic_error("duplicate arc: the column/arc bijection failed");
        blk |= bit;
        d.succ[static_cast<std::size_t>(i)].push_back(j);
    }
    for (auto& s : d.succ) std::sort(s.begin(), s.end());

    // Tarjan SCC, iterative
    d.comp_of.assign(n, -1);
    {
        std::vector<std::int32_t> low(n, -1), num(n, -1), stk;
        std::vector<char> on_stack(n, 0);
        std::int32_t counter = 0, ncomp = 0;
        struct Frame {
            std::int32_t v;
            std::size_t next;
        };
        std::vector<Frame> call;
        for (std::size_t s0 = 0; s0 < n; ++s0) {
            if (num[s0] >= 0) continue;
            call.push_back({static_cast<std::int32_t>(s0), 0});
            while (!call.empty()) {
                auto& f = call.back();
                std::int32_t v = f.v;
                if (f.next == 0) {
                    num[v] = low[v] = counter++;
                    stk.push_back(v);
                    on_stack[v] = 1;
                }
                if (f.next < d.succ[static_cast<std::size_t>(v)].size()) {
                    std::int32_t w = d.succ[static_cast<std::size_t>(v)][f.next++];
                    if (num[w] < 0)
                        call.push_back({w, 0});
                    else if (on_stack[w])
                        low[v] = std::min(low[v], num[w]);
                } else {
                    if (low[v] == num[v]) {
                        while (true) {
                            std::int32_t w = stk.back();
                            stk.pop_back();
                            on_stack[w] = 0;
                            d.comp_of[static_cast<std::size_t>(w)] = ncomp;
                            if (w == v) break;
                        }
                        ++ncomp;
                    }
                    call.pop_back();
                    if (!call.empty()) {
                        std::int32_t p = call.back().v;
                        low[p] = std::min(low[p], low[v]);
                    }
                }
            }
        }
        std::vector<std::vector<std::int32_t>> raw(static_cast<std::size_t>(ncomp));
        for (std::size_t v = 0; v < n; ++v)
            raw[static_cast<std::size_t>(d.comp_of[v])].push_back(
                static_cast<std::int32_t>(v));
        for (auto& c : raw) std::sort(c.begin(), c.end());
        // no arc may leave its SCC: components of this digraph are strongly
        // connected, so SCCs and weak components coincide
        for (std::size_t v = 0; v < n; ++v)
            for (std::int32_t w : d.succ[v])
                if (d.comp_of[v] != d.comp_of[static_cast<std::size_t>(w)])
                    throw std::logic_error("arc crosses components");
        std::sort(raw.begin(), raw.end(), [](auto& a, auto& b) {
            if (a.size() != b.size()) return a.size() > b.size();
            return a.front() < b.front();  // members sorted; front is lex-min word
        });
        d.comps = std::move(raw);
        for (std::size_t c = 0; c < d.comps.size(); ++c)
            for (std::int32_t v : d.comps[c])
                d.comp_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(c);
    }
    d.a_star = d.comp_of[static_cast<std::size_t>(d.index_of[space - 1])];
    d.r_star = d.comp_of[static_cast<std::size_t>(d.index_of[0])];
    for (std::size_t c = 0; c < d.comps.size(); ++c)
        if (static_cast<std::int32_t>(c) != d.a_star)
            d.b_components.push_back(static_cast<std::int32_t>(c));

    // 2-color each component (arcs are symmetric; treat as undirected)
    d.color.assign(n, -1);
    d.comp_bipartite.assign(d.comps.size(), 1);
    for (std::size_t c = 0; c < d.comps.size(); ++c) {
        std::vector<std::int32_t> queue;
        std::int32_t root = d.comps[c].front();
        d.color[static_cast<std::size_t>(root)] = 0;
        queue.push_back(root);
        bool ok = true;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::int32_t v = queue[qi];
            for (std::int32_t w : d.succ[static_cast<std::size_t>(v)]) {
                if (d.color[static_cast<std::size_t>(w)] < 0) {
                    d.color[static_cast<std::size_t>(w)] =
                        static_cast<std::int8_t>(1 - d.color[static_cast<std::size_t>(v)]);
                    queue.push_back(w);
                } else if (d.color[static_cast<std::size_t>(w)] ==
                           d.color[static_cast<std::size_t>(v)]) {
                    ok = false;
                }
            }
        }
        d.comp_bipartite[c] = ok ? 1 : 0;
        if (!ok)
            for (std::int32_t v : d.comps[c]) d.color[static_cast<std::size_t>(v)] = -1;
    }
    return d;
}

// 2-coloring of one component viewed as an undirected graph; empty if the
// component is not bipartite.
inline std::vector<std::int8_t> bipartition(const TransferDigraph& d, int comp) {
    if (!d.comp_bipartite[static_cast<std::size_t>(comp)]) return {};
    std::vector<std::int8_t> out;
    out.reserve(d.comps[static_cast<std::size_t>(comp)].size());
    for (auto v : d.comps[static_cast<std::size_t>(comp)])
        out.push_back(d.color[static_cast<std::size_t>(v)]);
    return out;
}

// First/last column sets for the rectangle: columns over {a,b,c} running
// a..c, and over {b,d,f} running d..f.  Both have Fibonacci(m-1) members.
inline std::pair<std::vector<std::string>, std::vector<std::string>>
first_last_sets(int m) {
    if (m < 2) throw std::invalid_argument("first/last sets need m >= 2");
    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    auto gen = [&](const char* alphabet, char first, char last,
                   std::vector<std::string>& dst) {
        std::string buf(static_cast<size_t>(m), ' ');
        buf[0] = first;
        auto rec = [&](auto&& self, int depth) -> void {
            if (depth == m) {
                if (buf.back() == last) dst.push_back(buf);
                return;
            }
            for (const char* p = alphabet; *p; ++p)
                if (ud_compatible(buf[static_cast<size_t>(depth) - 1], *p)) {
                    buf[static_cast<size_t>(depth)] = *p;
                    self(self, depth + 1);
                }
        };
        rec(rec, 1);
        std::sort(dst.begin(), dst.end());
    };
    gen("abc", 'a', 'c', out.first);
    gen("bdf", 'd', 'f', out.second);
    return out;
}

inline std::uint64_t fibonacci(int k) {
    std::uint64_t a = 0, b = 1;
    for (int i = 0; i < k; ++i) {
        std::uint64_t t = a + b;
        a = b;
        b = t;
    }
    return a;  // fibonacci(0)=0, fibonacci(1)=1, ...
}

// Quotient of the zero-word component by the reversal symmetry.  Class 0 is
// the class of the all-zeros word; entry (X,Y) of the multiplicity matrix
// counts members of Y that succeed X's representative.
struct ReducedRectDigraph {
    int m = 0;
    // each class: {representative, partner}; partner == representative for
    // palindromic singletons
    std::vector<std::array<std::uint32_t, 2>> classes;
    std::vector<std::vector<std::uint8_t>> mat;

    int class_count() const { return static_cast<int>(classes.size()); }

    static ReducedRectDigraph build(const TransferDigraph& d) {
        ReducedRectDigraph r;
        r.m = d.m;
        std::vector<std::uint32_t> rverts;
        for (auto v : d.comps[static_cast<std::size_t>(d.r_star)])
            rverts.push_back(d.verts[static_cast<std::size_t>(v)]);
        std::sort(rverts.begin(), rverts.end());

        std::vector<char> used(1u << d.m, 0);
        for (auto w : rverts) {
            if (used[w]) continue;
            std::uint32_t rv = reverse_word(w, d.m);
            used[w] = 1;
            used[rv] = 1;
            r.classes.push_back({w, rv});
        }
        if (r.classes.empty() || r.classes.front()[0] != 0)
            throw std::logic_error("class of the zero word must come first");

        const std::size_t k = r.classes.size();
        std::vector<std::int32_t> class_of(1u << d.m, -1);
        for (std::size_t c = 0; c < k; ++c) {
            class_of[r.classes[c][0]] = static_cast<std::int32_t>(c);
            class_of[r.classes[c][1]] = static_cast<std::int32_t>(c);
        }
        r.mat.assign(k, std::vector<std::uint8_t>(k, 0));
        for (std::size_t c = 0; c < k; ++c) {
            int rep = d.index(r.classes[c][0]);
            for (std::int32_t s : d.succ[static_cast<std::size_t>(rep)]) {
                std::int32_t t = class_of[d.verts[static_cast<std::size_t>(s)]];
                if (t < 0) throw std::logic_error("successor fell outside the component");
                ++r.mat[c][static_cast<std::size_t>(t)];
            }
        }
        for (auto& row : r.mat)
            for (auto x : row)
                if (x > 2) throw std::logic_error("class multiplicity above 2");
        return r;
    }
};

// Column-level digraph, kept lazy: vertices are the column words, the arc
// predicate is evaluated on demand.  Only for small m (cross-checks).
struct ColumnDigraph {
    int m = 0;
    std::vector<std::string> columns;  // lexicographic

    static ColumnDigraph build(int m, int max_m = 8) {
        if (m < 2) throw std::invalid_argument("column digraph needs m >= 2");
        if (m > max_m)
            throw CapacityError("column digraph capacity exceeded: m = " +
                                std::to_string(m));
        ColumnDigraph g;
        g.m = m;
        g.columns = valid_columns(m);
        return g;
    }

    bool arc(std::size_t i, std::size_t j) const {
        const std::string &v = columns[i], &u = columns[j];
        for (int r = 0; r < m; ++r)
            if (!lr_compatible(v[static_cast<size_t>(r)], u[static_cast<size_t>(r)]))
                return false;
        return true;
    }
};

// Number of column words whose outlet word lies in the zero-word component;
// this is the vertex count of the rectangle-relevant column subdigraph.
inline std::uint64_t rect_column_component_size(const TransferDigraph& d) {
    std::uint64_t n = 0;
    for_each_valid_column(d.m, [&](std::string_view w) {
        int i = d.index(outlet_word(w));
        if (i >= 0 && d.comp_of[static_cast<std::size_t>(i)] == d.r_star) ++n;
    });
    return n;
}

struct PalindromeReport {
    bool pass = true;
    std::vector<std::uint32_t> counterexamples;
};

// For even m every palindromic vertex must lie in the all-ones component.
inline PalindromeReport check_palindrome_theorem(const TransferDigraph& d) {
    if (d.m % 2 != 0) throw std::invalid_argument("palindrome check needs even m");
    PalindromeReport rep;
    for (std::size_t i = 0; i < d.verts.size(); ++i)
        if (is_palindrome_word(d.verts[i], d.m) &&
            d.comp_of[i] != d.a_star) {
            rep.pass = false;
            rep.counterexamples.push_back(d.verts[i]);
        }
    return rep;
}

}  // namespace gridfactor
