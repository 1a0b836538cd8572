#pragma once

#include <cmath>
#include <iostream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <vector>

#include "qcl/gtgraph.hpp"
#include "qcl/scalar.hpp"
#include "qcl/signature.hpp"
#include "qcl/symfunc.hpp"

namespace qcl {

enum class WeightKind { SchurQ, MacdonaldQT };

// Edge-weight parameters. q (and t for the two-parameter scheme) must be
// positive rationals != 1; values outside (0,1) are accepted with a warning
// since every formula stays well defined there.
struct WeightScheme {
    WeightKind kind = WeightKind::SchurQ;
    Rational q;
    Rational t;  // ignored by SchurQ

    static WeightScheme schur(const Rational& q) {
        validate_param(q, "q");
        return WeightScheme{WeightKind::SchurQ, q, Rational(1)};
    }

    static WeightScheme macdonald(const Rational& q, const Rational& t) {
        validate_param(q, "q");
        validate_param(t, "t");
        return WeightScheme{WeightKind::MacdonaldQT, q, t};
    }

    friend bool operator==(const WeightScheme& a, const WeightScheme& b) {
        return a.kind == b.kind && a.q == b.q && (a.kind == WeightKind::SchurQ || a.t == b.t);
    }

private:
    static void validate_param(const Rational& v, const char* name) {
        if (sgn(v) <= 0)
            throw std::invalid_argument(std::string("weight parameter ") + name +
                                        " must be positive");
        if (v == 1)
            throw std::invalid_argument(std::string("weight parameter ") + name +
                                        " must differ from 1");
        if (v > 1)
            std::cerr << "warning: weight parameter " << name << " = " << to_string(v)
                      << " lies outside (0,1)\n";
    }
};

// w((mu,nu)) = q^{N|mu|-(N-1)|nu|} with N = level(nu); the (q,t) scheme
// multiplies in the Macdonald branching coefficient psi_{nu/mu}(q, t^2) and
// uses t in the exponential part.
inline Rational edge_weight(const WeightScheme& scheme, const Signature& mu,
                            const Signature& nu) {
    if (!interlaces(mu, nu)) throw std::invalid_argument("edge_weight: pair must interlace");
    const long long n = nu.level();
    const long long exponent = n * mu.box_sum() - (n - 1) * nu.box_sum();
    if (scheme.kind == WeightKind::SchurQ) return pow_int(scheme.q, exponent);
    Rational w = macdonald_psi(mu, nu, scheme.q, Rational(scheme.t * scheme.t));
    w *= pow_int(scheme.t, exponent);
    return w;
}

inline Rational path_weight(const WeightScheme& scheme, const GTPath& path) {
    Rational w(1);
    const auto& chain = path.chain();
    for (size_t i = 1; i < chain.size(); ++i) w *= edge_weight(scheme, chain[i - 1], chain[i]);
    return w;
}

namespace detail {

struct WdimKey {
    WeightKind kind;
    Rational q;
    Rational t;
    Signature sig;
};

struct WdimKeyLess {
    bool operator()(const WdimKey& a, const WdimKey& b) const {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (int c = cmp(a.q, b.q); c != 0) return c < 0;
        if (int c = cmp(a.t, b.t); c != 0) return c < 0;
        return a.sig < b.sig;
    }
};

inline constexpr size_t kWdimCacheCap = 1u << 20;

struct WdimCache {
    std::shared_mutex mtx;
    std::map<WdimKey, Rational, WdimKeyLess> table;
};

inline WdimCache& wdim_cache() {
    static WdimCache cache;
    return cache;
}

inline WdimKey wdim_key(const WeightScheme& scheme, const Signature& sig) {
    return WdimKey{scheme.kind, scheme.q,
                   scheme.kind == WeightKind::MacdonaldQT ? scheme.t : Rational(0), sig};
}

}  // namespace detail

// w-dim(nu) = sum of path weights over Omega(*, nu), computed by the
// one-level recursion w-dim(nu) = sum_{mu < nu} w(mu,nu) w-dim(mu) with a
// shared, size-capped memo table.
inline Rational weighted_dim(const WeightScheme& scheme, const Signature& nu) {
    if (nu.is_root()) return Rational(1);
    auto& cache = detail::wdim_cache();
    const detail::WdimKey key = detail::wdim_key(scheme, nu);
    {
        std::shared_lock lock(cache.mtx);
        if (auto it = cache.table.find(key); it != cache.table.end()) return it->second;
    }
    Rational sum(0);
    for (const Signature& mu : predecessors(nu)) sum += edge_weight(scheme, mu, nu) * weighted_dim(scheme, mu);
    {
        std::unique_lock lock(cache.mtx);
        if (cache.table.size() >= detail::kWdimCacheCap) cache.table.clear();
        cache.table.emplace(key, sum);
    }
    return sum;
}

// Relative weighted dimensions w-dim(mu, nu) for every mu at level K at
// once, by descending the layers below nu.
inline std::map<Signature, Rational> relative_weighted_dims_at(const WeightScheme& scheme,
                                                               const Signature& nu, int k) {
    if (k >= nu.level() || k < 0)
        throw std::invalid_argument("relative_weighted_dims_at: need 0 <= K < level(nu)");
    std::map<Signature, Rational> layer;
    layer.emplace(nu, Rational(1));
    for (int level = nu.level(); level > k; --level) {
        std::map<Signature, Rational> next;
        for (const auto& [sig, w] : layer)
            for (const Signature& mu : predecessors(sig)) {
                Rational add = edge_weight(scheme, mu, sig) * w;
                auto [it, inserted] = next.emplace(mu, add);
                if (!inserted) it->second += add;
            }
        layer = std::move(next);
    }
    return layer;
}

// w-dim(mu, nu) = sum of path weights over Omega(mu, nu); 0 when empty.
inline Rational relative_weighted_dim(const WeightScheme& scheme, const Signature& mu,
                                      const Signature& nu) {
    if (mu.level() >= nu.level())
        throw std::invalid_argument("relative_weighted_dim: level(mu) must be below level(nu)");
    const auto layer = relative_weighted_dims_at(scheme, nu, mu.level());
    auto it = layer.find(mu);
    return it == layer.end() ? Rational(0) : it->second;
}

// ---- float mode (timing only; never used by exact checks) ----

namespace detail {

inline double psi_double(const Signature& mu, const Signature& nu, double q, double t2) {
    // same arm/leg product as macdonald_psi, in binary64
    const int n = nu.level();
    const long long shift = nu[static_cast<size_t>(n) - 1];
    std::vector<long long> lam, m;
    for (int i = 0; i < n; ++i)
        if (nu[static_cast<size_t>(i)] - shift > 0) lam.push_back(nu[static_cast<size_t>(i)] - shift);
    for (int i = 0; i + 1 < n; ++i)
        if (mu[static_cast<size_t>(i)] - shift > 0) m.push_back(mu[static_cast<size_t>(i)] - shift);
    const auto lam_conj = conjugate_partition(lam);
    const auto m_conj = conjugate_partition(m);
    auto b = [&](const std::vector<long long>& kappa, const std::vector<long long>& conj,
                 long long i, long long j) {
        const double arm = static_cast<double>(kappa[static_cast<size_t>(i - 1)] - j);
        const double leg = static_cast<double>(conj[static_cast<size_t>(j - 1)] - i);
        return (1.0 - std::pow(q, arm) * std::pow(t2, leg + 1)) /
               (1.0 - std::pow(q, arm + 1) * std::pow(t2, leg));
    };
    double psi = 1.0;
    for (long long i = 1; i <= static_cast<long long>(m.size()); ++i) {
        const long long lam_i =
            i <= static_cast<long long>(lam.size()) ? lam[static_cast<size_t>(i - 1)] : 0;
        if (lam_i <= m[static_cast<size_t>(i - 1)]) continue;
        for (long long j = 1; j <= m[static_cast<size_t>(i - 1)]; ++j) {
            const long long lam_col =
                j <= static_cast<long long>(lam_conj.size()) ? lam_conj[static_cast<size_t>(j - 1)] : 0;
            if (lam_col != m_conj[static_cast<size_t>(j - 1)]) continue;
            psi *= b(m, m_conj, i, j) / b(lam, lam_conj, i, j);
        }
    }
    return psi;
}

}  // namespace detail

inline double edge_weight_double(const WeightScheme& scheme, const Signature& mu,
                                 const Signature& nu) {
    if (!interlaces(mu, nu)) throw std::invalid_argument("edge_weight: pair must interlace");
    const double n = static_cast<double>(nu.level());
    const double exponent =
        n * static_cast<double>(mu.box_sum()) - (n - 1) * static_cast<double>(nu.box_sum());
    const double base = to_double(scheme.kind == WeightKind::SchurQ ? scheme.q : scheme.t);
    double w = std::pow(base, exponent);
    if (scheme.kind == WeightKind::MacdonaldQT) {
        const double t = to_double(scheme.t);
        w *= detail::psi_double(mu, nu, to_double(scheme.q), t * t);
    }
    return w;
}

inline double weighted_dim_double(const WeightScheme& scheme, const Signature& nu) {
    std::map<Signature, double> memo;
    auto rec = [&](auto&& self, const Signature& sig) -> double {
        if (sig.is_root()) return 1.0;
        if (auto it = memo.find(sig); it != memo.end()) return it->second;
        double sum = 0.0;
        for (const Signature& mu : predecessors(sig))
            sum += edge_weight_double(scheme, mu, sig) * self(self, mu);
        memo.emplace(sig, sum);
        return sum;
    };
    return rec(rec, nu);
}

// ---- memo persistence (used by the CLI when QCL_CACHE_DIR is set) ----

inline constexpr const char* kWdimCacheHeader = "qcl-wdim-cache 1";

inline void save_wdim_cache(std::ostream& os) {
    auto& cache = detail::wdim_cache();
    std::shared_lock lock(cache.mtx);
    os << kWdimCacheHeader << "\n";
    for (const auto& [key, value] : cache.table)
        os << static_cast<int>(key.kind) << " " << to_string(key.q) << " " << to_string(key.t)
           << " " << key.sig.str() << " " << to_string(value) << "\n";
}

// Returns the number of entries loaded; 0 (and no effect) on a header or
// format mismatch.
inline size_t load_wdim_cache(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != kWdimCacheHeader) return 0;
    std::vector<std::pair<detail::WdimKey, Rational>> entries;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int kind = 0;
        std::string qs, ts, sigs, vals;
        if (!(ls >> kind >> qs >> ts >> sigs >> vals)) return 0;
        try {
            entries.emplace_back(
                detail::WdimKey{static_cast<WeightKind>(kind), parse_rational(qs),
                                parse_rational(ts), parse_signature(sigs)},
                parse_rational(vals));
        } catch (const std::exception&) {
            return 0;
        }
    }
    auto& cache = detail::wdim_cache();
    std::unique_lock lock(cache.mtx);
    for (auto& [k, v] : entries) {
        if (cache.table.size() >= detail::kWdimCacheCap) break;
        cache.table.emplace(std::move(k), std::move(v));
    }
    return entries.size();
}

}  // namespace qcl
