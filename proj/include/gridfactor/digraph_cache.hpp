#pragma once

// On-disk cache for built transfer digraphs, one file per m.
//
// Layout (little-endian): magic "GFDG", format version, m, vertex count,
// vertex words, packed adjacency rows, component metadata, then an FNV-1a
// checksum of everything before it.  A reader that finds a mismatched
// magic, version, m, count or checksum rebuilds from scratch.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "gridfactor/transfer_digraph.hpp"

namespace gridfactor {

struct CacheOptions {
    bool enabled = true;
    std::string dir;  // empty: GRIDFACTOR_CACHE_DIR or .cache/gridfactor
};

inline std::filesystem::path cache_directory(const CacheOptions& opt) {
    if (!opt.dir.empty()) return opt.dir;
    if (const char* env = std::getenv("GRIDFACTOR_CACHE_DIR"); env && *env)
        return env;
    return std::filesystem::path(".cache") / "gridfactor";
}

namespace detail {

inline constexpr std::uint32_t kCacheMagic = 0x47464447;  // "GFDG"
inline constexpr std::uint32_t kCacheVersion = 1;

struct Fnv1a {
    std::uint64_t h = 1469598103934665603ull;
    void add(const void* data, std::size_t len) {
        auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    }
};

template <typename T>
void put(std::ofstream& out, Fnv1a& sum, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
    sum.add(&v, sizeof v);
}

template <typename T>
bool get(std::ifstream& in, Fnv1a& sum, T& v) {
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) return false;
    sum.add(&v, sizeof v);
    return true;
}

}  // namespace detail

inline std::filesystem::path cache_file(const CacheOptions& opt, int m) {
    return cache_directory(opt) / ("dstar-m" + std::to_string(m) + ".bin");
}

inline bool save_digraph(const TransferDigraph& d, const CacheOptions& opt) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cache_directory(opt), ec);
    if (ec) return false;
    std::ofstream out(cache_file(opt, d.m), std::ios::binary | std::ios::trunc);
    if (!out) return false;
    detail::Fnv1a sum;
    detail::put(out, sum, detail::kCacheMagic);
    detail::put(out, sum, detail::kCacheVersion);
    detail::put(out, sum, static_cast<std::uint32_t>(d.m));
    detail::put(out, sum, static_cast<std::uint64_t>(d.verts.size()));
    for (auto v : d.verts) detail::put(out, sum, v);
    for (auto w : d.adj_bits) detail::put(out, sum, w);
    detail::put(out, sum, static_cast<std::uint32_t>(d.comps.size()));
    for (auto& c : d.comps) {
        detail::put(out, sum, static_cast<std::uint32_t>(c.size()));
        for (auto v : c) detail::put(out, sum, v);
    }
    detail::put(out, sum, d.a_star);
    detail::put(out, sum, d.r_star);
    std::uint64_t digest = sum.h;
    out.write(reinterpret_cast<const char*>(&digest), sizeof digest);
    return bool(out);
}

inline std::optional<TransferDigraph> load_digraph(int m, const CacheOptions& opt) {
    std::ifstream in(cache_file(opt, m), std::ios::binary);
    if (!in) return std::nullopt;
    detail::Fnv1a sum;
    std::uint32_t magic = 0, version = 0, fm = 0;
    std::uint64_t count = 0;
    if (!detail::get(in, sum, magic) || magic != detail::kCacheMagic) return std::nullopt;
    if (!detail::get(in, sum, version) || version != detail::kCacheVersion)
        return std::nullopt;
    if (!detail::get(in, sum, fm) || fm != static_cast<std::uint32_t>(m))
        return std::nullopt;
    if (!detail::get(in, sum, count)) return std::nullopt;
    std::uint64_t expect = (m % 2 == 0) ? (1ull << m) : (1ull << m) - 1;
    if (count != expect) return std::nullopt;

    TransferDigraph d;
    d.m = m;
    d.verts.resize(count);
    for (auto& v : d.verts)
        if (!detail::get(in, sum, v)) return std::nullopt;
    d.row_words = (count + 63) / 64;
    d.adj_bits.resize(count * d.row_words);
    for (auto& w : d.adj_bits)
        if (!detail::get(in, sum, w)) return std::nullopt;
    std::uint32_t ncomp = 0;
    if (!detail::get(in, sum, ncomp)) return std::nullopt;
    d.comps.resize(ncomp);
    for (auto& c : d.comps) {
        std::uint32_t len = 0;
        if (!detail::get(in, sum, len)) return std::nullopt;
        if (len == 0 || len > count) return std::nullopt;
        c.resize(len);
        for (auto& v : c)
            if (!detail::get(in, sum, v)) return std::nullopt;
    }
    if (!detail::get(in, sum, d.a_star)) return std::nullopt;
    if (!detail::get(in, sum, d.r_star)) return std::nullopt;
    std::uint64_t digest = 0, want = sum.h;
    if (!in.read(reinterpret_cast<char*>(&digest), sizeof digest)) return std::nullopt;
    if (digest != want) return std::nullopt;

    // rebuild derived lookups
    d.index_of.assign(1u << m, -1);
    for (std::size_t i = 0; i < d.verts.size(); ++i)
        d.index_of[d.verts[i]] = static_cast<std::int32_t>(i);
    d.succ.assign(count, {});
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t b = 0; b < d.row_words; ++b) {
            std::uint64_t w = d.adj_bits[i * d.row_words + b];
            while (w) {
                int t = std::countr_zero(w);
                d.succ[i].push_back(static_cast<std::int32_t>(b * 64 + t));
                w &= w - 1;
            }
        }
    d.comp_of.assign(count, -1);
    for (std::size_t c = 0; c < d.comps.size(); ++c)
        for (auto v : d.comps[c]) {
            if (v < 0 || static_cast<std::uint64_t>(v) >= count) return std::nullopt;
            d.comp_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(c);
        }
    for (auto c : d.comp_of)
        if (c < 0) return std::nullopt;
    if (d.a_star < 0 || d.a_star >= static_cast<std::int32_t>(ncomp)) return std::nullopt;
    if (d.r_star < 0 || d.r_star >= static_cast<std::int32_t>(ncomp)) return std::nullopt;
    for (std::size_t c = 0; c < d.comps.size(); ++c)
        if (static_cast<std::int32_t>(c) != d.a_star)
            d.b_components.push_back(static_cast<std::int32_t>(c));
    // recolor
    d.color.assign(count, -1);
    d.comp_bipartite.assign(d.comps.size(), 1);
    for (std::size_t c = 0; c < d.comps.size(); ++c) {
        std::vector<std::int32_t> queue{d.comps[c].front()};
        d.color[static_cast<std::size_t>(queue[0])] = 0;
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
            for (auto v : d.comps[c]) d.color[static_cast<std::size_t>(v)] = -1;
    }
    return d;
}

// Cached build: try the cache, fall back to a fresh build and store it.
inline TransferDigraph load_or_build(int m, const CacheOptions& opt = {},
                                     int max_m = kDefaultMaxM,
                                     bool* cache_hit = nullptr) {
    if (opt.enabled && m >= 2 && m <= max_m) {
        if (auto d = load_digraph(m, opt)) {
            if (cache_hit) *cache_hit = true;
            return std::move(*d);
        }
    }
    if (cache_hit) *cache_hit = false;
    TransferDigraph d = TransferDigraph::build(m, max_m);
    if (opt.enabled) save_digraph(d, opt);
    return d;
}

}  // namespace gridfactor
