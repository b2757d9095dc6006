#pragma once

// Brute-force ground truth: explicit small graphs, exhaustive 2-factor
// enumeration, and cycle classification by seam-crossing displacement.
// Deliberately independent of the transfer-digraph machinery.
//
// Graphs are multigraphs.  Gluing the last column to the first can create
// parallel edges (cylinder at n <= 2, moebius middle rows) and, at n = 1,
// seam loops; a loop fills both edge slots of its vertex.  Cycles lift to
// the unrolled plane: net horizontal displacement 0 marks a contractible
// cycle, +-n a non-contractible one (the moebius short cycle), +-2n the
// moebius long cycle.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridfactor/family.hpp"

namespace gridfactor {

inline constexpr int kOracleVertexCap = 30;

enum class CycleClass { Contractible, NonContractible, ShortNc, LongNc };

struct GridEdge {
    int r1, c1, r2, c2;
    enum Kind : std::uint8_t { Vert, Horiz, Seam } kind;
    bool loop() const { return r1 == r2 && c1 == c2; }
};

struct ExplicitGrid {
    Family family;
    int m = 0, n = 0;
    std::vector<GridEdge> edges;

    int vertex_id(int r, int c) const { return (r - 1) * n + (c - 1); }

    static ExplicitGrid build(Family f, int m, int n,
                              int vertex_cap = kOracleVertexCap) {
        if (m < 1 || n < 1) throw std::invalid_argument("grid needs m, n >= 1");
        if (m * n > vertex_cap)
            throw CapacityError("oracle capacity exceeded: " + std::to_string(m) +
                                "x" + std::to_string(n) + " > " +
                                std::to_string(vertex_cap) + " vertices");
        ExplicitGrid g;
        g.family = f;
        g.m = m;
        g.n = n;
        for (int c = 1; c <= n; ++c)
            for (int r = 1; r < m; ++r)
                g.edges.push_back({r, c, r + 1, c, GridEdge::Vert});
        for (int c = 1; c < n; ++c)
            for (int r = 1; r <= m; ++r)
                g.edges.push_back({r, c, r, c + 1, GridEdge::Horiz});
        if (f == Family::Cylinder)
            for (int r = 1; r <= m; ++r)
                g.edges.push_back({r, n, r, 1, GridEdge::Seam});
        else if (f == Family::Moebius)
            for (int r = 1; r <= m; ++r)
                g.edges.push_back({r, n, m + 1 - r, 1, GridEdge::Seam});
        // degree sanity; vertices with fewer than 2 slots (bare rectangle
        // paths at n = 1) simply admit no 2-factor
        std::vector<int> deg(static_cast<std::size_t>(m) * n, 0);
        for (auto& e : g.edges) {
            deg[static_cast<std::size_t>(g.vertex_id(e.r1, e.c1))] += e.loop() ? 2 : 1;
            if (!e.loop()) deg[static_cast<std::size_t>(g.vertex_id(e.r2, e.c2))] += 1;
        }
        for (int d : deg)
            if (d > 4) throw std::logic_error("grid vertex degree out of range");
        return g;
    }
};

// Exhaustive enumeration: process vertices in row-major order; at each
// vertex all edges toward earlier vertices are already decided, so pick the
// remaining edges (toward later vertices, loops included) to reach degree
// exactly 2.  fn receives the chosen edge indices, sorted.
template <typename Fn>
void for_each_two_factor(const ExplicitGrid& g, Fn&& fn) {
    const int nverts = g.m * g.n;
    std::vector<std::vector<int>> decide_at(static_cast<std::size_t>(nverts));
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        int a = g.vertex_id(e.r1, e.c1), b = g.vertex_id(e.r2, e.c2);
        decide_at[static_cast<std::size_t>(std::min(a, b))].push_back(
            static_cast<int>(ei));
    }
    std::vector<int> deg(static_cast<std::size_t>(nverts), 0);
    std::vector<int> chosen;

    auto other_end = [&](int ei, int v) {
        const auto& e = g.edges[static_cast<std::size_t>(ei)];
        int a = g.vertex_id(e.r1, e.c1), b = g.vertex_id(e.r2, e.c2);
        return a == v ? b : a;
    };

    auto rec = [&](auto&& self, int v) -> void {
        if (v == nverts) {
            fn(static_cast<const std::vector<int>&>(chosen));
            return;
        }
        int need = 2 - deg[static_cast<std::size_t>(v)];
        if (need < 0) return;
        const auto& cand = decide_at[static_cast<std::size_t>(v)];
        auto take = [&](std::initializer_list<int> picks) {
            for (int ei : picks) {
                const auto& e = g.edges[static_cast<std::size_t>(ei)];
                if (e.loop()) {
                    deg[static_cast<std::size_t>(v)] += 2;
                } else {
                    ++deg[static_cast<std::size_t>(g.vertex_id(e.r1, e.c1))];
                    ++deg[static_cast<std::size_t>(g.vertex_id(e.r2, e.c2))];
                }
                chosen.push_back(ei);
            }
            self(self, v + 1);
            for (auto it = picks.end(); it != picks.begin();) {
                int ei = *--it;
                const auto& e = g.edges[static_cast<std::size_t>(ei)];
                if (e.loop()) {
                    deg[static_cast<std::size_t>(v)] -= 2;
                } else {
                    --deg[static_cast<std::size_t>(g.vertex_id(e.r1, e.c1))];
                    --deg[static_cast<std::size_t>(g.vertex_id(e.r2, e.c2))];
                }
                chosen.pop_back();
            }
        };
        if (need == 0) {
            take({});
            return;
        }
        if (need == 1) {
            for (int ei : cand) {
                const auto& e = g.edges[static_cast<std::size_t>(ei)];
                if (e.loop()) continue;
                if (deg[static_cast<std::size_t>(other_end(ei, v))] >= 2) continue;
                take({ei});
            }
            return;
        }
        // need == 2: one loop, or two distinct plain edges
        for (std::size_t a = 0; a < cand.size(); ++a) {
            const auto& ea = g.edges[static_cast<std::size_t>(cand[a])];
            if (ea.loop()) {
                take({cand[a]});
                continue;
            }
            if (deg[static_cast<std::size_t>(other_end(cand[a], v))] >= 2) continue;
            for (std::size_t b = a + 1; b < cand.size(); ++b) {
                const auto& eb = g.edges[static_cast<std::size_t>(cand[b])];
                if (eb.loop()) continue;
                int oa = other_end(cand[a], v), ob = other_end(cand[b], v);
                if (deg[static_cast<std::size_t>(ob)] >= 2) continue;
                if (oa == ob && deg[static_cast<std::size_t>(oa)] >= 1) continue;
                take({cand[a], cand[b]});
            }
        }
    };
    rec(rec, 0);
}

namespace detail {

struct WalkTotals {
    long displacement = 0;
    long up = 0, down = 0, right = 0, left = 0;
    long start_row = 0;
};

// Walk one cycle in the unrolled plane.  State: plane row rho, cover column
// x, orientation sign s (moebius seam crossings flip it).  The fundamental
// row of the current vertex must equal rho when s = +1 and m+1-rho when
// s = -1; violations signal a bookkeeping bug.
inline WalkTotals walk_cycle(const ExplicitGrid& g, const std::vector<int>& cyc,
                             std::pair<int, int> start, int orientation) {
    const int m = g.m, n = g.n;
    // local incidence
    struct Inc {
        int e[2];
        int cnt = 0;
    };
    std::vector<std::pair<std::pair<int, int>, Inc>> inc;
    auto slot = [&](std::pair<int, int> v) -> Inc& {
        for (auto& kv : inc)
            if (kv.first == v) return kv.second;
        inc.push_back({v, {}});
        return inc.back().second;
    };
    for (int ei : cyc) {
        const auto& e = g.edges[static_cast<std::size_t>(ei)];
        auto& a = slot({e.r1, e.c1});
        a.e[a.cnt++] = ei;
        auto& b = slot({e.r2, e.c2});
        b.e[b.cnt++] = ei;
    }
    WalkTotals t;
    t.start_row = start.first;
    auto cur = start;
    Inc& first = slot(start);
    if (first.cnt != 2) throw std::logic_error("cycle start has bad degree");
    int e = first.e[orientation];
    long rho = start.first, x = start.second;
    int s = 1;
    while (true) {
        const auto& ed = g.edges[static_cast<std::size_t>(e)];
        std::pair<int, int> u{ed.r1, ed.c1}, v{ed.r2, ed.c2};
        std::pair<int, int> nxt = (cur == u) ? v : u;
        switch (ed.kind) {
            case GridEdge::Vert: {
                int dirn = (nxt.first == cur.first + 1) ? s : -s;
                rho += dirn;
                (dirn > 0 ? t.down : t.up) += 1;
                break;
            }
            case GridEdge::Horiz: {
                if (nxt.second == cur.second + 1) {
                    ++x;
                    ++t.right;
                } else {
                    --x;
                    ++t.left;
                }
                break;
            }
            case GridEdge::Seam: {
                bool rightward = (n > 1) ? (cur.second == n) : (cur == u);
                if (rightward) {
                    ++x;
                    ++t.right;
                } else {
                    --x;
                    ++t.left;
                }
                if (g.family == Family::Moebius) s = -s;
                break;
            }
        }
        if (nxt.first != (s == 1 ? rho : m + 1 - rho))
            throw std::logic_error("cycle walk left the surface lattice");
        cur = nxt;
        if (cur == start) break;
        Inc& at = slot(cur);
        if (at.cnt != 2) throw std::logic_error("cycle vertex has bad degree");
        e = (at.e[0] == e) ? at.e[1] : at.e[0];
    }
    t.displacement = x - start.second;
    return t;
}

}  // namespace detail

// Splits a 2-factor into cycles and classifies each one.  The applicable
// direction-count identity is asserted for every cycle.
inline std::vector<CycleClass> classify(const ExplicitGrid& g,
                                        const std::vector<int>& chosen) {
    const int m = g.m, n = g.n;
    std::vector<char> used(g.edges.size(), 0);
    std::vector<std::vector<int>> vert_edges(static_cast<std::size_t>(m * n));
    for (int ei : chosen) {
        const auto& e = g.edges[static_cast<std::size_t>(ei)];
        vert_edges[static_cast<std::size_t>(g.vertex_id(e.r1, e.c1))].push_back(ei);
        if (!e.loop())
            vert_edges[static_cast<std::size_t>(g.vertex_id(e.r2, e.c2))].push_back(ei);
    }
    std::vector<CycleClass> out;
    for (int e0 : chosen) {
        if (used[static_cast<std::size_t>(e0)]) continue;
        const auto& first = g.edges[static_cast<std::size_t>(e0)];
        // collect the cycle containing e0
        std::vector<int> cyc;
        if (first.loop()) {
            cyc.push_back(e0);
        } else {
            std::pair<int, int> home{first.r1, first.c1};
            std::pair<int, int> cur = home;
            int e = e0;
            while (true) {
                cyc.push_back(e);
                const auto& ed = g.edges[static_cast<std::size_t>(e)];
                std::pair<int, int> u{ed.r1, ed.c1}, v{ed.r2, ed.c2};
                std::pair<int, int> nxt = (cur == u) ? v : u;
                if (nxt == home) break;
                const auto& at =
                    vert_edges[static_cast<std::size_t>(g.vertex_id(nxt.first, nxt.second))];
                e = (at[0] == e) ? at[1] : at[0];
                cur = nxt;
            }
        }
        for (int ei : cyc) used[static_cast<std::size_t>(ei)] = 1;

        // loop cycles cross the seam once by definition
        if (first.loop()) {
            out.push_back(g.family == Family::Moebius ? CycleClass::ShortNc
                                                      : CycleClass::NonContractible);
            continue;
        }

        // choose the start: minimal-row first-column endpoint of the cycle's
        // seam edges, else any endpoint
        std::pair<int, int> start{first.r1, first.c1};
        bool crosses = false;
        int best_row = m + 1;
        for (int ei : cyc) {
            const auto& ed = g.edges[static_cast<std::size_t>(ei)];
            if (ed.kind != GridEdge::Seam) continue;
            crosses = true;
            if (ed.c2 == 1) best_row = std::min(best_row, ed.r2);
            if (ed.c1 == 1) best_row = std::min(best_row, ed.r1);
        }
        if (crosses) start = {best_row, 1};

        auto t = detail::walk_cycle(g, cyc, start, 0);
        if (t.displacement < 0) t = detail::walk_cycle(g, cyc, start, 1);
        if (t.displacement < 0) throw std::logic_error("no orientation goes rightward");

        long D = t.displacement;
        if (D == 0) {
            if (t.up != t.down || t.right != t.left)
                throw std::logic_error("contractible cycle with unbalanced steps");
            out.push_back(CycleClass::Contractible);
        } else if (g.family == Family::Cylinder && D == n) {
            if (t.up != t.down || t.right - t.left != n)
                throw std::logic_error("cylinder cycle identity failed");
            out.push_back(CycleClass::NonContractible);
        } else if (g.family == Family::Moebius && D == n) {
            if (t.right - t.left != n || t.down - t.up != m + 1 - 2 * t.start_row)
                throw std::logic_error("short-cycle identity failed");
            out.push_back(CycleClass::ShortNc);
        } else if (g.family == Family::Moebius && D == 2 * n) {
            if (t.up != t.down || t.right - t.left != 2 * n)
                throw std::logic_error("long-cycle identity failed");
            out.push_back(CycleClass::LongNc);
        } else {
            throw std::logic_error("cycle displacement " + std::to_string(D) +
                                   " is not one of the admissible values");
        }
    }
    return out;
}

struct OracleCounts {
    std::uint64_t total = 0;
    std::uint64_t even_class = 0;  // cylinder: even # of nc cycles; moebius: no short
    std::uint64_t odd_class = 0;
    bool degenerate = false;  // n = 1: seam identifications collapse edges
};

inline OracleCounts oracle_counts(Family f, int m, int n,
                                  int vertex_cap = kOracleVertexCap) {
    ExplicitGrid g = ExplicitGrid::build(f, m, n, vertex_cap);
    OracleCounts oc;
    oc.degenerate = (n == 1) && f != Family::Rect;
    for_each_two_factor(g, [&](const std::vector<int>& chosen) {
        ++oc.total;
        if (f == Family::Rect) {
            for (auto cls : classify(g, chosen))
                if (cls != CycleClass::Contractible)
                    throw std::logic_error("rectangle cycle not contractible");
            ++oc.even_class;
            return;
        }
        auto classes = classify(g, chosen);
        if (f == Family::Cylinder) {
            int ncs = 0;
            for (auto c : classes)
                if (c == CycleClass::NonContractible) ++ncs;
            (ncs % 2 ? oc.odd_class : oc.even_class) += 1;
        } else {
            int shorts = 0;
            for (auto c : classes)
                if (c == CycleClass::ShortNc) ++shorts;
            if (shorts > 1) throw std::logic_error("two short cycles in one 2-factor");
            (shorts ? oc.odd_class : oc.even_class) += 1;
        }
    });
    return oc;
}

}  // namespace gridfactor
