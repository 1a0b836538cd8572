#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "qcl/gtgraph.hpp"
#include "qcl/scalar.hpp"
#include "qcl/signature.hpp"
#include "qcl/weights.hpp"

namespace qcl {

// Finitely supported probability measure on the signatures of one level.
// Masses are exact, nonnegative, and sum to 1; zero atoms are not stored.
struct LevelMeasure {
    int level = 0;
    std::map<Signature, Rational> atoms;

    static LevelMeasure delta(const Signature& nu) {
        LevelMeasure m;
        m.level = nu.level();
        m.atoms.emplace(nu, Rational(1));
        return m;
    }

    Rational mass(const Signature& nu) const {
        auto it = atoms.find(nu);
        return it == atoms.end() ? Rational(0) : it->second;
    }

    friend bool operator==(const LevelMeasure&, const LevelMeasure&) = default;
};

inline LevelMeasure make_level_measure(int level, std::map<Signature, Rational> atoms) {
    LevelMeasure m;
    m.level = level;
    Rational total(0);
    for (auto& [sig, mass] : atoms) {
        if (sig.level() != level)
            throw std::invalid_argument("measure atom at wrong level: " + sig.str());
        if (sgn(mass) < 0)
            throw std::invalid_argument("negative mass at " + sig.str());
        if (sgn(mass) == 0) continue;
        total += mass;
        m.atoms.emplace(sig, mass);
    }
    if (total != 1) throw std::invalid_argument("masses must sum to 1, got " + to_string(total));
    return m;
}

// One-level-down conditional law of a w-central measure:
// mu |-> w(mu,nu) w-dim(mu) / w-dim(nu). Masses sum to 1 exactly.
inline std::map<Signature, Rational> cotransition_kernel(const WeightScheme& scheme,
                                                         const Signature& nu) {
    if (nu.level() < 1) throw std::invalid_argument("cotransition_kernel: level must be >= 1");
    const Rational total = weighted_dim(scheme, nu);
    std::map<Signature, Rational> out;
    for (const Signature& mu : predecessors(nu))
        out.emplace(mu, Rational(edge_weight(scheme, mu, nu) * weighted_dim(scheme, mu) / total));
    return out;
}

// The unique level-N measure cohering below pN1:
// P_N(v) = sum_{v'} w(v,v') (w-dim(v)/w-dim(v')) P_{N+1}(v').
inline LevelMeasure induce_down(const LevelMeasure& pN1, const WeightScheme& scheme) {
    if (pN1.level < 1) throw std::invalid_argument("induce_down: level must be >= 1");
    std::map<Signature, Rational> atoms;
    for (const auto& [nu, mass] : pN1.atoms)
        for (const auto& [mu, p] : cotransition_kernel(scheme, nu)) {
            Rational add = p * mass;
            auto [it, inserted] = atoms.emplace(mu, add);
            if (!inserted) it->second += add;
        }
    return make_level_measure(pN1.level - 1, std::move(atoms));
}

struct CoherenceReport {
    struct Violation {
        Signature vertex;
        Rational lhs;  // P_N(v)
        Rational rhs;  // the coherence sum
    };
    bool ok = true;
    Rational worst_residual = Rational(0);
    std::vector<Violation> violations;
};

// Exact per-vertex check of the coherence relation between consecutive
// levels; vertices range over supp(pN) together with everything reachable
// one step below supp(pN1).
inline CoherenceReport check_coherence(const LevelMeasure& pN, const LevelMeasure& pN1,
                                       const WeightScheme& scheme) {
    if (pN1.level != pN.level + 1)
        throw std::invalid_argument("check_coherence: levels must be consecutive");
    const LevelMeasure induced = induce_down(pN1, scheme);
    std::map<Signature, std::pair<Rational, Rational>> sides;
    for (const auto& [v, mass] : pN.atoms) sides[v].first = mass;
    for (const auto& [v, mass] : induced.atoms) sides[v].second = mass;
    CoherenceReport report;
    for (const auto& [v, lr] : sides) {
        if (lr.first == lr.second) continue;
        report.ok = false;
        Rational residual = abs(Rational(lr.first - lr.second));
        if (residual > report.worst_residual) report.worst_residual = residual;
        report.violations.push_back({v, lr.first, lr.second});
    }
    return report;
}

// Level-indexed tower P_1, ..., P_{N_max} with every consecutive pair
// coherent; construction validates this exactly.
class CoherentSystem {
public:
    CoherentSystem(WeightScheme scheme, std::vector<LevelMeasure> levels)
        : scheme_(std::move(scheme)), levels_(std::move(levels)) {
        if (levels_.empty()) throw std::invalid_argument("coherent system needs >= 1 level");
        for (size_t i = 0; i < levels_.size(); ++i) {
            if (levels_[i].level != static_cast<int>(i) + 1)
                throw std::invalid_argument("coherent system levels must be 1..N_max");
            if (i + 1 < levels_.size() &&
                !check_coherence(levels_[i], levels_[i + 1], scheme_).ok)
                throw std::invalid_argument("coherence fails between levels " +
                                            std::to_string(i + 1) + " and " +
                                            std::to_string(i + 2));
        }
    }

    // Tower generated downward from a single top measure.
    static CoherentSystem from_top(const WeightScheme& scheme, const LevelMeasure& top) {
        std::vector<LevelMeasure> levels(static_cast<size_t>(top.level));
        levels[static_cast<size_t>(top.level) - 1] = top;
        for (int n = top.level - 1; n >= 1; --n)
            levels[static_cast<size_t>(n) - 1] =
                induce_down(levels[static_cast<size_t>(n)], scheme);
        return CoherentSystem(scheme, std::move(levels));
    }

    int max_level() const { return static_cast<int>(levels_.size()); }
    const WeightScheme& scheme() const { return scheme_; }

    const LevelMeasure& level(int n) const {
        if (n < 1 || n > max_level()) throw std::invalid_argument("level out of range");
        return levels_[static_cast<size_t>(n) - 1];
    }

private:
    WeightScheme scheme_;
    std::vector<LevelMeasure> levels_;
};

// P(C_t) = w(t) P(X_N = v) / w-dim(v) for a finite path t from the root
// into the vertex v at level N.
inline Rational cylinder_probability(const CoherentSystem& system, const GTPath& path,
                                     const WeightScheme& scheme) {
    if (!path.bottom().is_root())
        throw std::invalid_argument("cylinder_probability: path must start at the root");
    const int n = path.top_level();
    if (n < 1 || n > system.max_level())
        throw std::invalid_argument("cylinder_probability: terminal level outside system");
    const Rational mass = system.level(n).mass(path.top());
    if (is_zero(mass)) return Rational(0);
    return Rational(path_weight(scheme, path) * mass / weighted_dim(scheme, path.top()));
}

// Level-K measure of the state pulled back from the block at nu:
// P_K(pi) = w-dim(pi) w-dim(pi, nu) / w-dim(nu).
inline LevelMeasure pullback_measure(const WeightScheme& scheme, const Signature& nu, int k) {
    if (k < 1 || k >= nu.level())
        throw std::invalid_argument("pullback_measure: need 1 <= K < level(nu)");
    const Rational total = weighted_dim(scheme, nu);
    std::map<Signature, Rational> atoms;
    for (const auto& [pi, rel] : relative_weighted_dims_at(scheme, nu, k))
        atoms.emplace(pi, Rational(weighted_dim(scheme, pi) * rel / total));
    return make_level_measure(k, std::move(atoms));
}

namespace detail {

// One uniform draw from [0,1) as an exact dyadic rational (64 bits).
inline Rational unit_draw(std::mt19937_64& rng) {
    static const Integer two64 = Integer(1) << 64;
    const std::uint64_t r = rng();
    return Rational(Integer(static_cast<unsigned long>(r)), two64);
}

}  // namespace detail

// Draws a terminal vertex from pN, then descends through the cotransition
// kernels. Bit-reproducible: the generator is mt19937_64 seeded with `seed`;
// the first draw selects the vertex by inverse CDF over the atoms in
// canonical signature order, then one draw per descent step selects the
// predecessor by inverse CDF in canonical (lexicographically decreasing)
// predecessor order. Returns the upward-oriented path from the root.
inline GTPath sample_path(const WeightScheme& scheme, const LevelMeasure& pN,
                          std::uint64_t seed) {
    if (pN.atoms.empty()) throw std::invalid_argument("sample_path: empty support");
    std::mt19937_64 rng(seed);

    Rational u = detail::unit_draw(rng);
    Rational acc(0);
    const Signature* chosen = nullptr;
    for (const auto& [sig, mass] : pN.atoms) {
        acc += mass;
        if (u < acc) {
            chosen = &sig;
            break;
        }
    }
    if (chosen == nullptr) chosen = &pN.atoms.rbegin()->first;

    std::vector<Signature> chain_down{*chosen};
    Signature current = *chosen;
    for (int level = pN.level; level >= 2; --level) {
        const Rational total = weighted_dim(scheme, current);
        Rational v = detail::unit_draw(rng);
        Rational cum(0);
        Signature next;
        bool picked = false;
        for (const Signature& mu : predecessors(current)) {
            cum += edge_weight(scheme, mu, current) * weighted_dim(scheme, mu) / total;
            if (v < cum) {
                next = mu;
                picked = true;
                break;
            }
        }
        if (!picked) next = predecessors(current).back();
        chain_down.push_back(next);
        current = next;
    }
    chain_down.push_back(Signature::root());
    std::vector<Signature> chain(chain_down.rbegin(), chain_down.rend());
    return GTPath(std::move(chain));
}

// Z_N = w-dim(v, nu_N) / w-dim(nu_N) along a chain of signatures with
// strictly increasing levels; the chain need not interlace.
inline std::vector<Rational> ergodic_ratios(const WeightScheme& scheme, const Signature& v,
                                            const std::vector<Signature>& chain) {
    std::vector<Rational> out;
    out.reserve(chain.size());
    int prev_level = v.level();
    for (const Signature& nu : chain) {
        if (nu.level() <= prev_level)
            throw std::invalid_argument("ergodic_ratios: levels must increase strictly");
        prev_level = nu.level();
        out.push_back(Rational(relative_weighted_dim(scheme, v, nu) / weighted_dim(scheme, nu)));
    }
    return out;
}

struct BoundaryTheta {
    std::vector<long long> theta;  // certified prefix, theta_1 .. theta_{stable_upto}
    int stable_upto = 0;
};

// Empirical tail-coordinate stabilization: theta_i is certified when
// nu^{(N)}_{N-i+1} is constant over the last `window` levels where it
// exists; only the stable prefix is reported.
inline BoundaryTheta boundary_theta(const std::vector<Signature>& chain, int window = 5) {
    if (window < 2) throw std::invalid_argument("boundary_theta: window must be >= 2");
    const int n_max = static_cast<int>(chain.size());
    for (int i = 0; i < n_max; ++i)
        if (chain[static_cast<size_t>(i)].level() != i + 1)
            throw std::invalid_argument("boundary_theta: chain must carry levels 1..N_max");
    BoundaryTheta out;
    for (int i = 1; i <= n_max - window + 1; ++i) {
        bool stable = true;
        const long long value =
            chain[static_cast<size_t>(n_max) - 1][static_cast<size_t>(n_max - i)];
        for (int n = n_max - window + 1; n < n_max; ++n) {
            if (chain[static_cast<size_t>(n) - 1][static_cast<size_t>(n - i)] != value) {
                stable = false;
                break;
            }
        }
        if (!stable) break;
        out.theta.push_back(value);
        out.stable_upto = i;
    }
    return out;
}

}  // namespace qcl
