#pragma once

// Exact 2-factor counts through walk counting in the transfer digraph.
//
//   rectangle:  entry (0,0) of the n-th power of the reduced digraph matrix
//   cylinder:   trace of the n-th power of the transfer matrix
//   moebius:    trace of (reversal pairing) * (n-th power)
//
// Cylinder/moebius traces split by the parity of the vertex 1-count; arcs
// preserve that parity, so each component contributes to one class only.
// The odd class counts cylinder 2-factors with an odd number of
// non-contractible cycles, and moebius 2-factors containing the short
// non-contractible cycle (validated against the brute-force oracle).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridfactor/family.hpp"
#include "gridfactor/transfer_digraph.hpp"

namespace gridfactor {

using BigInt = mpz_class;

struct ParitySplit {
    BigInt even;  // vertices with an even number of 1s
    BigInt odd;
    BigInt total() const { return even + odd; }
};

struct WalkCounts {
    ParitySplit cylinder;  // diagonal sum
    ParitySplit moebius;   // reversal-pairing sum
};

namespace detail {

struct LocalComponent {
    int k = 0;
    std::vector<std::vector<std::int32_t>> succ;  // local indices
    // local reversal image; -1 when the reversed word lies in another
    // component (the matrix power is block-diagonal, so those pairing
    // entries are zero -- reversal staying inside its component is only an
    // observed property, never relied on)
    std::vector<std::int32_t> rev;
    std::vector<std::int8_t> parity;  // 1-count parity per vertex

    LocalComponent(const TransferDigraph& d, int comp) {
        const auto& members = d.comps[static_cast<std::size_t>(comp)];
        k = static_cast<int>(members.size());
        std::vector<std::int32_t> local(d.verts.size(), -1);
        for (int i = 0; i < k; ++i)
            local[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] = i;
        succ.resize(static_cast<std::size_t>(k));
        rev.resize(static_cast<std::size_t>(k));
        parity.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            std::int32_t g = members[static_cast<std::size_t>(i)];
            for (std::int32_t w : d.succ[static_cast<std::size_t>(g)]) {
                std::int32_t lw = local[static_cast<std::size_t>(w)];
                if (lw < 0) throw std::logic_error("arc crosses components");
                succ[static_cast<std::size_t>(i)].push_back(lw);
            }
            rev[static_cast<std::size_t>(i)] =
                local[static_cast<std::size_t>(d.reversal_image(g))];
            parity[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(
                ones_count(d.verts[static_cast<std::size_t>(g)]) & 1);
        }
    }
};

using Dense = std::vector<BigInt>;  // k*k row-major

inline void mat_mul(const Dense& a, const Dense& b, Dense& out, int k) {
    out.assign(static_cast<std::size_t>(k) * k, BigInt(0));
    for (int i = 0; i < k; ++i)
        for (int t = 0; t < k; ++t) {
            const BigInt& x = a[static_cast<std::size_t>(i) * k + t];
            if (x == 0) continue;
            const BigInt* brow = &b[static_cast<std::size_t>(t) * k];
            BigInt* orow = &out[static_cast<std::size_t>(i) * k];
            for (int j = 0; j < k; ++j)
                if (brow[j] != 0)
                    mpz_addmul(orow[j].get_mpz_t(), x.get_mpz_t(), brow[j].get_mpz_t());
        }
}

inline Dense mat_power(const LocalComponent& c, long n) {
    const int k = c.k;
    Dense base(static_cast<std::size_t>(k) * k, BigInt(0));
    for (int i = 0; i < k; ++i)
        for (auto j : c.succ[static_cast<std::size_t>(i)])
            base[static_cast<std::size_t>(i) * k + j] = 1;
    Dense result(static_cast<std::size_t>(k) * k, BigInt(0));
    for (int i = 0; i < k; ++i) result[static_cast<std::size_t>(i) * k + i] = 1;
    Dense tmp;
    while (n > 0) {
        if (n & 1) {
            mat_mul(result, base, tmp, k);
            result.swap(tmp);
        }
        n >>= 1;
        if (n) {
            mat_mul(base, base, tmp, k);
            base.swap(tmp);
        }
    }
    return result;
}

// one sparse step M <- A*M, using (A*M)[i] = sum of rows M[t], t in succ(i)
inline void sparse_step(const LocalComponent& c, const Dense& m, Dense& out) {
    const int k = c.k;
    out.assign(static_cast<std::size_t>(k) * k, BigInt(0));
    for (int i = 0; i < k; ++i) {
        BigInt* orow = &out[static_cast<std::size_t>(i) * k];
        for (auto t : c.succ[static_cast<std::size_t>(i)]) {
            const BigInt* mrow = &m[static_cast<std::size_t>(t) * k];
            for (int j = 0; j < k; ++j)
                if (mpz_sgn(mrow[j].get_mpz_t()) != 0)
                    mpz_add(orow[j].get_mpz_t(), orow[j].get_mpz_t(),
                            mrow[j].get_mpz_t());
        }
    }
}

}  // namespace detail

inline void require_n(long n) {
    if (n < 1)
        throw std::invalid_argument("n must be >= 1 (count sequences start at n = 1)");
}

// Diagonal and pairing sums of the n-th matrix power, split by 1-parity,
// computed per component with repeated squaring.
inline WalkCounts walk_counts(const TransferDigraph& d, long n) {
    require_n(n);
    WalkCounts w;
    for (std::size_t comp = 0; comp < d.comps.size(); ++comp) {
        detail::LocalComponent c(d, static_cast<int>(comp));
        detail::Dense p = detail::mat_power(c, n);
        for (int i = 0; i < c.k; ++i) {
            const BigInt& diag = p[static_cast<std::size_t>(i) * c.k + i];
            std::int32_t ri = c.rev[static_cast<std::size_t>(i)];
            if (c.parity[static_cast<std::size_t>(i)]) {
                w.cylinder.odd += diag;
                if (ri >= 0) w.moebius.odd += p[static_cast<std::size_t>(ri) * c.k + i];
            } else {
                w.cylinder.even += diag;
                if (ri >= 0) w.moebius.even += p[static_cast<std::size_t>(ri) * c.k + i];
            }
        }
    }
    return w;
}

inline BigInt cylinder_count(const TransferDigraph& d, long n) {
    return walk_counts(d, n).cylinder.total();
}

inline BigInt moebius_count(const TransferDigraph& d, long n) {
    return walk_counts(d, n).moebius.total();
}

inline ParitySplit cylinder_split(const TransferDigraph& d, long n) {
    return walk_counts(d, n).cylinder;
}

inline ParitySplit moebius_split(const TransferDigraph& d, long n) {
    return walk_counts(d, n).moebius;
}

// Same sums for every n = 1..n_max (one sparse multiply per step).
struct TraceSeries {
    int n_max = 0;
    std::vector<ParitySplit> cylinder;  // [n-1]
    std::vector<ParitySplit> moebius;

    std::vector<BigInt> cylinder_totals() const {
        std::vector<BigInt> out;
        out.reserve(cylinder.size());
        for (auto& s : cylinder) out.push_back(s.total());
        return out;
    }
    std::vector<BigInt> moebius_totals() const {
        std::vector<BigInt> out;
        out.reserve(moebius.size());
        for (auto& s : moebius) out.push_back(s.total());
        return out;
    }
};

inline TraceSeries trace_series(const TransferDigraph& d, int n_max) {
    require_n(n_max);
    TraceSeries ts;
    ts.n_max = n_max;
    ts.cylinder.assign(static_cast<std::size_t>(n_max), {});
    ts.moebius.assign(static_cast<std::size_t>(n_max), {});
    for (std::size_t comp = 0; comp < d.comps.size(); ++comp) {
        detail::LocalComponent c(d, static_cast<int>(comp));
        const int k = c.k;
        detail::Dense m(static_cast<std::size_t>(k) * k, BigInt(0)), next;
        for (int i = 0; i < k; ++i) m[static_cast<std::size_t>(i) * k + i] = 1;
        for (int n = 1; n <= n_max; ++n) {
            detail::sparse_step(c, m, next);
            m.swap(next);
            auto& cyl = ts.cylinder[static_cast<std::size_t>(n - 1)];
            auto& moe = ts.moebius[static_cast<std::size_t>(n - 1)];
            for (int i = 0; i < k; ++i) {
                const BigInt& diag = m[static_cast<std::size_t>(i) * k + i];
                std::int32_t ri = c.rev[static_cast<std::size_t>(i)];
                if (c.parity[static_cast<std::size_t>(i)]) {
                    cyl.odd += diag;
                    if (ri >= 0) moe.odd += m[static_cast<std::size_t>(ri) * k + i];
                } else {
                    cyl.even += diag;
                    if (ri >= 0) moe.even += m[static_cast<std::size_t>(ri) * k + i];
                }
            }
        }
    }
    return ts;
}

// Rectangle count: walks from the zero-word class back to itself in the
// reduced digraph, by successive vector-matrix products.
inline BigInt rect_count(const ReducedRectDigraph& r, long n) {
    require_n(n);
    const int k = r.class_count();
    std::vector<BigInt> vec(static_cast<std::size_t>(k), BigInt(0)), next;
    vec[0] = 1;
    for (long step = 0; step < n; ++step) {
        next.assign(static_cast<std::size_t>(k), BigInt(0));
        for (int i = 0; i < k; ++i) {
            if (vec[static_cast<std::size_t>(i)] == 0) continue;
            const auto& row = r.mat[static_cast<std::size_t>(i)];
            for (int j = 0; j < k; ++j)
                for (int t = 0; t < row[static_cast<std::size_t>(j)]; ++t)
                    next[static_cast<std::size_t>(j)] += vec[static_cast<std::size_t>(i)];
        }
        vec.swap(next);
    }
    return vec[0];
}

inline std::vector<BigInt> rect_series(const ReducedRectDigraph& r, int n_max) {
    require_n(n_max);
    const int k = r.class_count();
    std::vector<BigInt> vec(static_cast<std::size_t>(k), BigInt(0)), next;
    std::vector<BigInt> out;
    out.reserve(static_cast<std::size_t>(n_max));
    vec[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        next.assign(static_cast<std::size_t>(k), BigInt(0));
        for (int i = 0; i < k; ++i) {
            if (vec[static_cast<std::size_t>(i)] == 0) continue;
            const auto& row = r.mat[static_cast<std::size_t>(i)];
            for (int j = 0; j < k; ++j)
                for (int t = 0; t < row[static_cast<std::size_t>(j)]; ++t)
                    next[static_cast<std::size_t>(j)] += vec[static_cast<std::size_t>(i)];
        }
        vec.swap(next);
        out.push_back(vec[0]);
    }
    return out;
}

// Cross-check route on the column-level digraph: walks of length n-1 from
// the first-column set to the last-column set.  Small m only.
inline BigInt rect_count_reference(const ColumnDigraph& g, long n,
                                   int max_m = 6) {
    require_n(n);
    if (g.m > max_m)
        throw CapacityError("reference count capacity exceeded: m = " +
                            std::to_string(g.m));
    auto [first_set, last_set] = first_last_sets(g.m);
    const std::size_t k = g.columns.size();
    std::vector<BigInt> vec(k, BigInt(0)), next;
    for (const auto& w : first_set) {
        auto it = std::lower_bound(g.columns.begin(), g.columns.end(), w);
        vec[static_cast<std::size_t>(it - g.columns.begin())] = 1;
    }
    for (long step = 0; step < n - 1; ++step) {
        next.assign(k, BigInt(0));
        for (std::size_t i = 0; i < k; ++i) {
            if (vec[i] == 0) continue;
            for (std::size_t j = 0; j < k; ++j)
                if (g.arc(i, j)) next[j] += vec[i];
        }
        vec.swap(next);
    }
    BigInt total = 0;
    for (const auto& w : last_set) {
        auto it = std::lower_bound(g.columns.begin(), g.columns.end(), w);
        total += vec[static_cast<std::size_t>(it - g.columns.begin())];
    }
    return total;
}

enum class CountClass { Total, EvenClass, OddClass };

// Forced-zero pattern.  Rectangle: m,n >= 2.  The even/odd classes are the
// parity splits (cylinder: number of non-contractible cycles; moebius:
// absence/presence of the short cycle).
inline bool forced_zero(Family f, CountClass c, int m, int n) {
    const bool mo = m % 2 == 1, no = n % 2 == 1;
    switch (f) {
        case Family::Rect:
            return c == CountClass::Total && mo && no;
        case Family::Cylinder:
            if (c == CountClass::EvenClass) return mo && no;
            if (c == CountClass::OddClass) return !mo && no;
            return false;
        case Family::Moebius:
            if (c == CountClass::EvenClass) return mo && no;
            if (c == CountClass::OddClass) return !mo && !no;
            return false;
    }
    return false;
}

}  // namespace gridfactor
