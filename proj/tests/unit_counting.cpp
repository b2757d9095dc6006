#include <catch2/catch_amalgamated.hpp>

#include <future>
#include <map>
#include <vector>

#include "gridfactor/counting.hpp"
#include "gridfactor/transfer_digraph.hpp"

using namespace gridfactor;

namespace {

struct Built {
    TransferDigraph d;
    ReducedRectDigraph r;
};

const Built& built(int m) {
    static std::map<int, Built> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        auto d = TransferDigraph::build(m);
        auto r = ReducedRectDigraph::build(d);
        it = cache.emplace(m, Built{std::move(d), std::move(r)}).first;
    }
    return it->second;
}

// whole-matrix trace of the n-th power, one dense iterate; independent of
// the per-component route
BigInt whole_matrix_trace(const TransferDigraph& d, int n) {
    const int k = d.vertex_count();
    std::vector<BigInt> m(static_cast<size_t>(k) * k, 0), next;
    for (int i = 0; i < k; ++i) m[static_cast<size_t>(i) * k + i] = 1;
    for (int step = 0; step < n; ++step) {
        next.assign(static_cast<size_t>(k) * k, 0);
        for (int i = 0; i < k; ++i)
            for (auto t : d.succ[static_cast<size_t>(i)])
                for (int j = 0; j < k; ++j)
                    next[static_cast<size_t>(i) * k + j] +=
                        m[static_cast<size_t>(t) * k + j];
        m.swap(next);
    }
    BigInt tr = 0;
    for (int i = 0; i < k; ++i) tr += m[static_cast<size_t>(i) * k + i];
    return tr;
}

// walk counts on the column-level digraph, for the alternate rectangle
// formulas
std::vector<std::vector<BigInt>> column_power(const ColumnDigraph& g, int n) {
    const size_t k = g.columns.size();
    std::vector<std::vector<BigInt>> m(k, std::vector<BigInt>(k, 0)), next;
    for (size_t i = 0; i < k; ++i) m[i][i] = 1;
    for (int step = 0; step < n; ++step) {
        next.assign(k, std::vector<BigInt>(k, 0));
        for (size_t i = 0; i < k; ++i)
            for (size_t t = 0; t < k; ++t)
                if (g.arc(i, t))
                    for (size_t j = 0; j < k; ++j) next[i][j] += m[t][j];
        m.swap(next);
    }
    return m;
}

}  // namespace

TEST_CASE("rectangle counts") {
    CHECK(rect_count(built(2).r, 4) == 2);
    CHECK(rect_count(built(3).r, 3) == 0);
    CHECK(rect_count(built(4).r, 7) == 779);
}

TEST_CASE("cylinder counts") {
    CHECK(cylinder_count(built(2).d, 2) == 5);
    CHECK(cylinder_count(built(3).d, 2) == 13);
    CHECK(cylinder_count(built(4).d, 1) == 1);
}

TEST_CASE("moebius counts") {
    CHECK(moebius_count(built(2).d, 1) == 3);
    CHECK(moebius_count(built(4).d, 2) == 17);
    CHECK(moebius_count(built(3).d, 4) == 51);
}

TEST_CASE("parity splits") {
    auto s = cylinder_split(built(2).d, 3);
    CHECK(s.total() == 4);
    CHECK(s.odd == 0);  // m even, n odd: no 2-factor has an odd nc count
    auto ms = moebius_split(built(2).d, 2);
    CHECK(ms.total() == 3);
    CHECK(ms.odd == 0);  // m, n both even: the short cycle cannot occur
    CHECK(ms.even == 3);
    auto ms21 = moebius_split(built(2).d, 1);
    CHECK(ms21.total() == 3);
    CHECK(ms21.odd == 2);  // two of the three use the seam once
    for (int m = 2; m <= 5; ++m)
        for (int n = 1; n <= 8; ++n) {
            auto c = cylinder_split(built(m).d, n);
            CHECK(c.even + c.odd == cylinder_count(built(m).d, n));
            auto mm = moebius_split(built(m).d, n);
            CHECK(mm.even + mm.odd == moebius_count(built(m).d, n));
        }
}

TEST_CASE("forced zero pattern") {
    CHECK(forced_zero(Family::Rect, CountClass::Total, 3, 5));
    CHECK(forced_zero(Family::Cylinder, CountClass::OddClass, 4, 3));
    CHECK_FALSE(forced_zero(Family::Moebius, CountClass::OddClass, 3, 3));

    for (int m = 2; m <= 6; ++m) {
        for (int n = 1; n <= 10; ++n) {
            if (n >= 2)
                CHECK((rect_count(built(m).r, n) == 0) ==
                      forced_zero(Family::Rect, CountClass::Total, m, n));
            auto c = cylinder_split(built(m).d, n);
            CHECK((c.even == 0) ==
                  forced_zero(Family::Cylinder, CountClass::EvenClass, m, n));
            CHECK((c.odd == 0) ==
                  forced_zero(Family::Cylinder, CountClass::OddClass, m, n));
            auto ms = moebius_split(built(m).d, n);
            CHECK((ms.even == 0) ==
                  forced_zero(Family::Moebius, CountClass::EvenClass, m, n));
            CHECK((ms.odd == 0) ==
                  forced_zero(Family::Moebius, CountClass::OddClass, m, n));
        }
    }
}

TEST_CASE("rectangle reference route") {
    CHECK(rect_count_reference(ColumnDigraph::build(4), 3) == 3);
    CHECK(rect_count_reference(ColumnDigraph::build(2), 2) == 1);
    CHECK(rect_count_reference(ColumnDigraph::build(5), 4) == 54);
    for (int m = 2; m <= 5; ++m) {
        auto g = ColumnDigraph::build(m);
        for (int n = 1; n <= 10; ++n)
            CHECK(rect_count_reference(g, n) == rect_count(built(m).r, n));
    }
    CHECK_THROWS_AS(rect_count_reference(ColumnDigraph::build(7, 8), 2), CapacityError);
}

TEST_CASE("rectangle closed-walk and corner-entry routes") {
    // the closed-walk route (sum over first-column starts) and the single
    // corner entry of the (n+1)-st power both count the same rectangles
    for (int m = 2; m <= 4; ++m) {
        auto g = ColumnDigraph::build(m);
        auto [fs, ls] = first_last_sets(m);
        std::map<std::string, size_t> idx;
        for (size_t i = 0; i < g.columns.size(); ++i) idx[g.columns[i]] = i;
        std::string v1 = "d" + std::string(static_cast<size_t>(m - 2), 'b') + "f";
        std::string v2 = "a" + std::string(static_cast<size_t>(m - 2), 'b') + "c";
        for (int n = 1; n <= 6; ++n) {
            auto want = rect_count(built(m).r, n);
            auto pw = column_power(g, n);
            BigInt closed = 0;
            for (auto& w : fs) closed += pw[idx[w]][idx[w]];
            CHECK(closed == want);
            auto pw1 = column_power(g, n + 1);
            CHECK(pw1[idx[v1]][idx[v2]] == want);
        }
    }
}

TEST_CASE("trace identity per component vs whole matrix") {
    for (int m = 2; m <= 8; ++m) {
        auto& d = built(m).d;
        for (int n : {1, 2, 3, 5, 8, 13, 20})
            CHECK(cylinder_count(d, n) == whole_matrix_trace(d, n));
    }
}

TEST_CASE("cylinder growth in n") {
    for (int m = 2; m <= 6; ++m) {
        auto series = trace_series(built(m).d, 22);
        for (int n = 1; n + 2 <= 22; ++n)
            CHECK(series.cylinder[static_cast<size_t>(n + 1)].total() >=
                  series.cylinder[static_cast<size_t>(n - 1)].total());
    }
}

TEST_CASE("series agree with single-n counts") {
    for (int m = 2; m <= 6; ++m) {
        auto& b = built(m);
        auto ts = trace_series(b.d, 12);
        auto rs = rect_series(b.r, 12);
        for (int n : {1, 2, 3, 7, 12}) {
            CHECK(ts.cylinder[static_cast<size_t>(n - 1)].total() ==
                  cylinder_count(b.d, n));
            CHECK(ts.moebius[static_cast<size_t>(n - 1)].total() ==
                  moebius_count(b.d, n));
            auto cs = cylinder_split(b.d, n);
            CHECK(ts.cylinder[static_cast<size_t>(n - 1)].even == cs.even);
            CHECK(ts.cylinder[static_cast<size_t>(n - 1)].odd == cs.odd);
            auto mss = moebius_split(b.d, n);
            CHECK(ts.moebius[static_cast<size_t>(n - 1)].even == mss.even);
            CHECK(ts.moebius[static_cast<size_t>(n - 1)].odd == mss.odd);
            CHECK(rs[static_cast<size_t>(n - 1)] == rect_count(b.r, n));
        }
    }
}

TEST_CASE("concurrent counting is deterministic") {
    auto& b = built(5);
    BigInt serial_c = cylinder_count(b.d, 24);
    BigInt serial_m = moebius_count(b.d, 24);
    BigInt serial_r = rect_count(b.r, 24);
    std::vector<std::future<BigInt>> jobs;
    for (int rep = 0; rep < 4; ++rep) {
        jobs.push_back(std::async(std::launch::async,
                                  [&] { return cylinder_count(b.d, 24); }));
        jobs.push_back(std::async(std::launch::async,
                                  [&] { return moebius_count(b.d, 24); }));
        jobs.push_back(std::async(std::launch::async,
                                  [&] { return rect_count(b.r, 24); }));
    }
    for (size_t j = 0; j < jobs.size(); j += 3) {
        CHECK(jobs[j].get() == serial_c);
        CHECK(jobs[j + 1].get() == serial_m);
        CHECK(jobs[j + 2].get() == serial_r);
    }
}

TEST_CASE("n must be positive") {
    CHECK_THROWS_AS(rect_count(built(2).r, 0), std::invalid_argument);
    CHECK_THROWS_AS(cylinder_count(built(2).d, 0), std::invalid_argument);
    CHECK_THROWS_AS(moebius_count(built(2).d, -3), std::invalid_argument);
}
