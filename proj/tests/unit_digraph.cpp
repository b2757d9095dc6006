#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "gridfactor/digraph_cache.hpp"
#include "gridfactor/transfer_digraph.hpp"

using namespace gridfactor;

namespace {

// independent quotient construction: materialize the column-level arcs
// (lr-compatible pairs) and project them onto outlet words
std::set<std::pair<std::uint32_t, std::uint32_t>> quotient_arcs(int m) {
    auto cols = valid_columns(m);
    std::set<std::pair<std::uint32_t, std::uint32_t>> arcs;
    for (const auto& v : cols)
        for (const auto& u : cols) {
            bool ok = true;
            for (int i = 0; i < m && ok; ++i)
                ok = lr_compatible(v[static_cast<size_t>(i)], u[static_cast<size_t>(i)]);
            if (ok) arcs.insert({outlet_word(v), outlet_word(u)});
        }
    return arcs;
}

}  // namespace

TEST_CASE("transfer digraph vertex sets") {
    CHECK(TransferDigraph::build(2).vertex_count() == 4);
    CHECK(TransferDigraph::build(5).vertex_count() == 31);
    auto d3 = TransferDigraph::build(3);
    CHECK(d3.vertex_count() == 7);
    CHECK(d3.index(word_from_string("010")) == -1);  // the one absent word
    CHECK(d3.arc(d3.index(word_from_string("101")), d3.index(word_from_string("011"))));
    CHECK(d3.arc(d3.index(word_from_string("011")), d3.index(word_from_string("101"))));
    int ones = d3.index(word_from_string("111"));
    CHECK(d3.arc(ones, ones));
}

TEST_CASE("transfer digraph arcs equal the projected column arcs") {
    for (int m : {2, 3, 4, 5}) {
        auto d = TransferDigraph::build(m);
        auto want = quotient_arcs(m);
        std::set<std::pair<std::uint32_t, std::uint32_t>> got;
        for (int i = 0; i < d.vertex_count(); ++i)
            for (auto j : d.succ[static_cast<size_t>(i)])
                got.insert({d.verts[static_cast<size_t>(i)],
                            d.verts[static_cast<size_t>(j)]});
        CHECK(got == want);
    }
}

TEST_CASE("component decomposition") {
    auto d4 = TransferDigraph::build(4);
    REQUIRE(d4.comps.size() == 3);
    CHECK(d4.comps[static_cast<size_t>(d4.a_star)].size() == 6);
    CHECK(d4.a_star == d4.r_star);
    std::vector<size_t> b_sizes;
    for (auto c : d4.b_components) b_sizes.push_back(d4.comps[static_cast<size_t>(c)].size());
    CHECK(b_sizes == std::vector<size_t>{8, 2});

    auto d3 = TransferDigraph::build(3);
    REQUIRE(d3.comps.size() == 2);
    CHECK(d3.comps[static_cast<size_t>(d3.a_star)].size() == 3);
    CHECK(d3.a_star != d3.r_star);
    CHECK(d3.comps[static_cast<size_t>(d3.r_star)].size() == 4);

    auto d12 = TransferDigraph::build(12);
    REQUIRE(d12.comps.size() == 7);
    std::multiset<size_t> sizes;
    for (auto& c : d12.comps) sizes.insert(c.size());
    CHECK(sizes == std::multiset<size_t>{924, 1584, 990, 440, 132, 24, 2});
}

TEST_CASE("bipartition") {
    auto d5 = TransferDigraph::build(5);
    CHECK_FALSE(bipartition(d5, d5.r_star).empty());

    auto d4 = TransferDigraph::build(4);
    CHECK(bipartition(d4, d4.a_star).empty());  // loop at 1111

    auto d6 = TransferDigraph::build(6);
    for (auto c : d6.b_components) CHECK_FALSE(bipartition(d6, c).empty());
}

TEST_CASE("first and last column sets") {
    auto [f2, l2] = first_last_sets(2);
    CHECK(f2 == std::vector<std::string>{"ac"});
    auto [f3, l3] = first_last_sets(3);
    CHECK(f3 == std::vector<std::string>{"abc"});
    for (int m = 2; m <= 13; ++m) {
        auto [fs, ls] = first_last_sets(m);
        CHECK(fs.size() == fibonacci(m - 1));
        CHECK(ls.size() == fibonacci(m - 1));
        for (auto& w : fs) {
            CHECK(w.front() == 'a');
            CHECK(w.back() == 'c');
            CHECK(w.find_first_not_of("abc") == std::string::npos);
        }
        for (auto& w : ls) {
            CHECK(w.front() == 'd');
            CHECK(w.back() == 'f');
            CHECK(w.find_first_not_of("bdf") == std::string::npos);
        }
    }
    // fibonacci(12) = 144: the m = 13 sets stay in lockstep with the
    // recurrence, one shy of the 233 sometimes quoted for this row
    auto [f13, l13] = first_last_sets(13);
    CHECK(f13.size() == 144);
}

TEST_CASE("reduced rect digraph") {
    auto r5 = ReducedRectDigraph::build(TransferDigraph::build(5));
    CHECK(r5.class_count() == 9);

    auto r4 = ReducedRectDigraph::build(TransferDigraph::build(4));
    CHECK(r4.class_count() == 5);
    // contracting {1100, 0011} creates a loop
    int c = -1;
    for (int i = 0; i < r4.class_count(); ++i)
        if (r4.classes[static_cast<size_t>(i)][0] == word_from_string("0011")) c = i;
    REQUIRE(c >= 0);
    CHECK(r4.classes[static_cast<size_t>(c)][1] == word_from_string("1100"));
    CHECK(r4.mat[static_cast<size_t>(c)][static_cast<size_t>(c)] >= 1);

    auto r2 = ReducedRectDigraph::build(TransferDigraph::build(2));
    CHECK(r2.class_count() == 2);

    for (int m : {3, 5, 7}) {  // odd m: no loops survive the contraction
        auto r = ReducedRectDigraph::build(TransferDigraph::build(m));
        CHECK(r.classes[0][0] == 0u);
        for (int i = 0; i < r.class_count(); ++i)
            CHECK(r.mat[static_cast<size_t>(i)][static_cast<size_t>(i)] == 0);
    }
}

TEST_CASE("reversal pairing") {
    auto d3 = TransferDigraph::build(3);
    int i101 = d3.index(word_from_string("101"));
    CHECK(d3.reversal_image(i101) == i101);
    int i110 = d3.index(word_from_string("110"));
    CHECK(d3.reversal_image(i110) == d3.index(word_from_string("011")));

    auto d4 = TransferDigraph::build(4);
    int fixed = 0;
    for (int i = 0; i < d4.vertex_count(); ++i)
        if (d4.reversal_image(i) == i) ++fixed;
    CHECK(fixed == 4);  // 0000, 0110, 1001, 1111
    for (int i = 0; i < d4.vertex_count(); ++i)
        CHECK(d4.reversal_image(d4.reversal_image(i)) == i);
}

TEST_CASE("palindrome membership") {
    for (int m : {2, 4, 6}) {
        auto rep = check_palindrome_theorem(TransferDigraph::build(m));
        CHECK(rep.pass);
        CHECK(rep.counterexamples.empty());
    }
}

TEST_CASE("near-capacity build") {
    auto d13 = TransferDigraph::build(13);
    CHECK(d13.vertex_count() == (1 << 13) - 1);
    CHECK(d13.arc_count() == valid_column_count(13));
    CHECK(d13.comps.size() == 7);
    CHECK(d13.a_star != d13.r_star);
}

TEST_CASE("capacity and parameter errors") {
    CHECK_THROWS_AS(TransferDigraph::build(1), std::invalid_argument);
    CHECK_THROWS_AS(TransferDigraph::build(15), CapacityError);
    CHECK_THROWS_AS(TransferDigraph::build(13, 12), CapacityError);
}

TEST_CASE("digraph cache round trip") {
    CacheOptions opt;
    opt.dir = (std::filesystem::temp_directory_path() / "gridfactor-test-cache").string();
    std::filesystem::remove_all(opt.dir);
    auto fresh = TransferDigraph::build(5);
    REQUIRE(save_digraph(fresh, opt));
    auto loaded = load_digraph(5, opt);
    REQUIRE(loaded.has_value());
    CHECK(loaded->verts == fresh.verts);
    CHECK(loaded->adj_bits == fresh.adj_bits);
    CHECK(loaded->comps == fresh.comps);
    CHECK(loaded->a_star == fresh.a_star);
    CHECK(loaded->r_star == fresh.r_star);
    CHECK(loaded->succ == fresh.succ);
    CHECK(loaded->comp_bipartite == fresh.comp_bipartite);

    // corrupt one payload byte: the checksum must reject the file
    auto path = cache_file(opt, 5);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(24);
        char b = 0x5a;
        f.write(&b, 1);
    }
    CHECK_FALSE(load_digraph(5, opt).has_value());

    bool hit = true;
    auto rebuilt = load_or_build(5, opt, kDefaultMaxM, &hit);
    CHECK_FALSE(hit);  // corrupted file forces a rebuild
    CHECK(rebuilt.verts == fresh.verts);
    hit = false;
    auto again = load_or_build(5, opt, kDefaultMaxM, &hit);
    CHECK(hit);
    CHECK(again.adj_bits == fresh.adj_bits);
    std::filesystem::remove_all(opt.dir);
}
