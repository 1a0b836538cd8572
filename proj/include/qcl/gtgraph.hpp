#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "qcl/signature.hpp"

namespace qcl {

inline constexpr long kDefaultPathCap = 1'000'000;

// Edge condition of the Gelfand-Tsetlin graph:
// nu_1 >= mu_1 >= nu_2 >= ... >= mu_N >= nu_{N+1}.
// The root interlaces every level-1 signature.
inline bool interlaces(const Signature& mu, const Signature& nu) {
    if (nu.level() != mu.level() + 1)
        throw std::invalid_argument("interlaces: levels must be consecutive");
    if (mu.is_root()) return true;
    for (int i = 0; i < mu.level(); ++i)
        if (!(nu[static_cast<size_t>(i)] >= mu[static_cast<size_t>(i)] &&
              mu[static_cast<size_t>(i)] >= nu[static_cast<size_t>(i) + 1]))
            return false;
    return true;
}

// Graph edge. The multiplicity slot exists for branching graphs whose
// restrictions are not multiplicity-free; every edge of this graph has
// multiplicity 1, so paths can stay plain signature chains.
struct Edge {
    Signature source;
    int multiplicity = 1;
    Signature target;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// All mu one level below nu with mu interlacing nu, in lexicographically
// decreasing order. The coordinates range independently: mu_i in
// [nu_{i+1}, nu_i].
inline std::vector<Signature> predecessors(const Signature& nu) {
    if (nu.level() < 1) throw std::invalid_argument("predecessors: level must be >= 1");
    const int m = nu.level() - 1;
    if (m == 0) return {Signature::root()};
    std::vector<long long> cur(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) cur[static_cast<size_t>(i)] = nu[static_cast<size_t>(i)];
    std::vector<Signature> out;
    while (true) {
        out.emplace_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == nu[static_cast<size_t>(i) + 1]) --i;
        if (i < 0) break;
        --cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < m; ++j) cur[static_cast<size_t>(j)] = nu[static_cast<size_t>(j)];
    }
    return out;
}

namespace detail {

struct PathCountCache {
    std::shared_mutex mtx;
    std::map<std::pair<Signature, Signature>, Integer> table;
};

inline PathCountCache& path_count_cache() {
    static PathCountCache cache;
    return cache;
}

}  // namespace detail

// |Omega(mu, nu)|: number of interlacing chains from mu up to nu, by
// level-by-level DP downward from nu. Returns 0 when no chain exists.
inline Integer count_paths(const Signature& mu, const Signature& nu) {
    if (mu.level() >= nu.level())
        throw std::invalid_argument("count_paths: level(mu) must be below level(nu)");
    auto& cache = detail::path_count_cache();
    const std::pair<Signature, Signature> key(mu, nu);
    {
        std::shared_lock lock(cache.mtx);
        auto it = cache.table.find(key);
        if (it != cache.table.end()) return it->second;
    }
    std::map<Signature, Integer> layer;
    layer.emplace(nu, 1);
    for (int level = nu.level(); level > mu.level() + 1; --level) {
        std::map<Signature, Integer> next;
        for (const auto& [sig, cnt] : layer)
            for (const Signature& p : predecessors(sig)) next[p] += cnt;
        layer = std::move(next);
    }
    Integer total = 0;
    for (const auto& [sig, cnt] : layer)
        if (interlaces(mu, sig)) total += cnt;
    {
        std::unique_lock lock(cache.mtx);
        cache.table.emplace(key, total);
    }
    return total;
}

inline Integer dimension(const Signature& nu) {
    if (nu.is_root()) return 1;
    return count_paths(Signature::root(), nu);
}

inline std::vector<Edge> edges_into(const Signature& nu) {
    std::vector<Edge> out;
    for (Signature& mu : predecessors(nu)) out.push_back(Edge{std::move(mu), 1, nu});
    return out;
}

// Every level-`level` signature with entries in [lo, hi], in decreasing
// lexicographic order.
inline std::vector<Signature> signatures_with_entries(int level, long long lo, long long hi) {
    if (level < 0 || lo > hi) throw std::invalid_argument("signatures_with_entries: empty box");
    if (level == 0) return {Signature::root()};
    std::vector<Signature> out;
    std::vector<long long> cur(static_cast<size_t>(level), hi);
    while (true) {
        out.emplace_back(cur);
        int i = level - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == lo) --i;
        if (i < 0) break;
        --cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < level; ++j)
            cur[static_cast<size_t>(j)] = std::min(cur[static_cast<size_t>(i)], hi);
    }
    return out;
}

namespace detail {

// `above` holds the chain built so far, top vertex first.
inline void collect_paths(const Signature& mu, std::vector<Signature>& above,
                          std::vector<GTPath>& out) {
    const Signature cur = above.back();
    if (cur.level() == mu.level() + 1) {
        if (!interlaces(mu, cur)) return;
        std::vector<Signature> chain;
        chain.reserve(above.size() + 1);
        chain.push_back(mu);
        for (auto it = above.rbegin(); it != above.rend(); ++it) chain.push_back(*it);
        out.emplace_back(std::move(chain));
        return;
    }
    for (const Signature& p : predecessors(cur)) {
        above.push_back(p);
        collect_paths(mu, above, out);
        above.pop_back();
    }
}

}  // namespace detail

// All paths in Omega(mu, nu), sorted in the canonical order: lexicographic
// on the signature chain read from the bottom. Refuses to materialize more
// than `cap` paths.
inline std::vector<GTPath> enumerate_paths(const Signature& mu, const Signature& nu,
                                           long cap = kDefaultPathCap) {
    const Integer n = count_paths(mu, nu);
    if (n > cap)
        throw resource_error("enumerate_paths: " + n.get_str() + " paths exceed cap " +
                             std::to_string(cap));
    std::vector<GTPath> out;
    if (n.fits_ulong_p()) out.reserve(n.get_ui());
    std::vector<Signature> above{nu};
    detail::collect_paths(mu, above, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qcl
