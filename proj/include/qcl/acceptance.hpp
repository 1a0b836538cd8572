#pragma once

#include <chrono>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/genfunc.hpp"
#include "qcl/measures.hpp"
#include "qcl/opalg.hpp"
#include "qcl/qcl.hpp"

namespace qcl::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;  // first failure, empty on pass
};

namespace detail {

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::function<std::string()>& describe) {
        if (!ok || condition) return;
        ok = false;
        detail = describe();
    }
};

inline Matrix random_matrix(std::mt19937_64& rng, size_t side) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    Matrix m(side, side);
    for (size_t i = 0; i < side; ++i)
        for (size_t j = 0; j < side; ++j) m.at(i, j) = make_rational(num(rng), den(rng));
    return m;
}

inline BlockOperator random_operator(std::mt19937_64& rng, int level,
                                     const std::vector<Signature>& pool, size_t max_blocks) {
    std::map<Signature, Matrix> blocks;
    const size_t count = 1 + rng() % max_blocks;
    for (size_t k = 0; k < count; ++k) {
        const Signature& nu = pool[rng() % pool.size()];
        blocks.insert_or_assign(
            nu, random_matrix(rng, static_cast<size_t>(dimension(nu).get_ui())));
    }
    return make_block_operator(level, std::move(blocks));
}

inline LevelMeasure random_measure(std::mt19937_64& rng, int level,
                                   const std::vector<Signature>& pool) {
    std::map<Signature, Rational> atoms;
    const size_t count = 1 + rng() % 3;
    std::vector<std::pair<Signature, long>> picks;
    long total = 0;
    for (size_t k = 0; k < count; ++k) {
        const long w = 1 + static_cast<long>(rng() % 9);
        picks.emplace_back(pool[rng() % pool.size()], w);
        total += w;
    }
    for (const auto& [nu, w] : picks) {
        Rational add = make_rational(w, total);
        auto [it, inserted] = atoms.emplace(nu, add);
        if (!inserted) it->second += add;
    }
    return make_level_measure(level, std::move(atoms));
}

// 1. Tr(F_nu) = w-dim(nu) = s_nu at the principal point, N <= 4,
//    entries in [-2,2], q in {1/2, 2/3, 3/5}.
inline Checker criterion_trace_triangle() {
    Checker c;
    for (const Rational& q :
         {make_rational(1, 2), make_rational(2, 3), make_rational(3, 5)}) {
        const WeightScheme s = WeightScheme::schur(q);
        for (int level = 1; level <= 4; ++level)
            for (const Signature& nu : signatures_with_entries(level, -2, 2)) {
                Rational trace(0);
                for (const Rational& v : density_diag(s, nu)) trace += v;
                const Rational wdim = weighted_dim(s, nu);
                const Rational schur = schur_eval(nu, principal_point(level, q));
                c.require(trace == wdim && wdim == schur, [&] {
                    return "mismatch at nu=" + nu.str() + " q=" + to_string(q) + ": Tr=" +
                           to_string(trace) + " wdim=" + to_string(wdim) +
                           " schur=" + to_string(schur);
                });
                if (!c.ok) return c;
            }
    }
    return c;
}

// 2. Density branching reconstruction, both schemes, N <= 4.
inline Checker criterion_density_branching() {
    Checker c;
    for (const WeightScheme& s :
         {WeightScheme::schur(make_rational(1, 2)),
          WeightScheme::macdonald(make_rational(1, 3), make_rational(1, 2))}) {
        for (int level = 2; level <= 4; ++level)
            for (const Signature& nu : signatures_with_entries(level, -2, 2)) {
                c.require(verify_density_branching(s, nu), [&] {
                    return "branching reconstruction fails at " + nu.str();
                });
                if (!c.ok) return c;
            }
    }
    return c;
}

// 3. KMS condition on randomized operator pairs against characters from
//    randomized coherent towers, 100 pairs per level, N <= 3.
inline Checker criterion_kms() {
    Checker c;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    const WeightScheme s = WeightScheme::schur(make_rational(1, 2));
    const auto pool3 = signatures_with_entries(3, -2, 2);
    std::vector<CoherentSystem> towers;
    for (int i = 0; i < 5; ++i)
        towers.push_back(CoherentSystem::from_top(s, random_measure(rng, 3, pool3)));
    for (int level = 1; level <= 3; ++level) {
        for (int trial = 0; trial < 100; ++trial) {
            const CoherentSystem& tower = towers[static_cast<size_t>(trial) % towers.size()];
            const LevelMeasure& m = tower.level(level);
            const QuantizedCharacterLevel chi = character_at(s, m);
            std::vector<Signature> support;
            for (const auto& [v, mass] : m.atoms) support.push_back(v);
            const BlockOperator x = random_operator(rng, level, support, 2);
            const BlockOperator y = random_operator(rng, level, support, 2);
            const KmsReport r = kms_check(chi, x, y, s);
            c.require(r.ok, [&] {
                return "KMS fails at level " + std::to_string(level) + " trial " +
                       std::to_string(trial) + ": lhs=" + to_string(r.lhs) +
                       " rhs=" + to_string(r.rhs);
            });
            if (!c.ok) return c;
        }
    }
    return c;
}

// 4. Embedding laws: homomorphism, transitivity, and commutation with the
//    analytic flow, randomized, N <= 3.
inline Checker criterion_embedding_laws() {
    Checker c;
    std::mt19937_64 rng(0xdeadbeefcafef00dull);
    const WeightScheme schur = WeightScheme::schur(make_rational(1, 2));
    const WeightScheme mac =
        WeightScheme::macdonald(make_rational(1, 3), make_rational(2, 5));
    for (int trial = 0; trial < 25; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 2);
        const auto pool = signatures_with_entries(k, -1, 1);
        const BlockOperator x = random_operator(rng, k, pool, 2);
        const BlockOperator y = random_operator(rng, k, pool, 2);
        const int n = (k == 2) ? 3 : 2 + static_cast<int>(rng() % 2);

        std::vector<Signature> targets;
        for (const Signature& nu : signatures_with_entries(n, -2, 2)) {
            bool reachable = false;
            for (const auto& [rho, m] : x.blocks)
                if (count_paths(rho, nu) > 0) reachable = true;
            for (const auto& [rho, m] : y.blocks)
                if (count_paths(rho, nu) > 0) reachable = true;
            if (reachable) targets.push_back(nu);
            if (targets.size() == 6) break;
        }
        if (targets.empty()) continue;

        const BlockOperator ex = embed(x, n, targets);
        const BlockOperator ey = embed(y, n, targets);
        c.require(block_equal(embed(x * y, n, targets), ex * ey),
                  [&] { return "homomorphism fails at trial " + std::to_string(trial); });
        c.require(block_equal(embed(x.adjoint(), n, targets), ex.adjoint()),
                  [&] { return "adjoint fails at trial " + std::to_string(trial); });
        for (const WeightScheme& s : {schur, mac}) {
            c.require(block_equal(embed(scaling_flow_analytic(x, s, 1), n, targets),
                                  scaling_flow_analytic(ex, s, 1)),
                      [&] { return "flow commutation fails at trial " + std::to_string(trial); });
        }
        if (k == 1 && n == 3) {
            std::vector<Signature> mid;
            for (const Signature& nu : signatures_with_entries(2, -2, 2)) {
                for (const auto& [rho, m] : x.blocks)
                    if (count_paths(rho, nu) > 0) {
                        mid.push_back(nu);
                        break;
                    }
            }
            c.require(block_equal(embed(embed(x, 2, mid), 3, targets), ex),
                      [&] { return "transitivity fails at trial " + std::to_string(trial); });
        }
        if (!c.ok) return c;
    }
    return c;
}

// 5. check_coherence agrees with the generating-function stability test:
//    exhaustive deltas plus 20 randomized mixtures, N <= 3.
inline Checker criterion_coherence_vs_stability() {
    Checker c;
    const Rational q = make_rational(2, 3);
    const WeightScheme s = WeightScheme::schur(q);
    std::mt19937_64 rng(0x5bd1e995u);
    auto agree = [&](const LevelMeasure& below, const LevelMeasure& top) {
        const bool coherent = check_coherence(below, top, s).ok;
        const bool stable = stability_check(below, top, q);
        c.require(coherent == stable, [&] {
            std::ostringstream os;
            os << "disagreement at level " << top.level << ": coherence=" << coherent
               << " stability=" << stable;
            return os.str();
        });
    };
    for (int upper = 2; upper <= 3 && c.ok; ++upper)
        for (const Signature& nu : signatures_with_entries(upper, -1, 1)) {
            const LevelMeasure top = LevelMeasure::delta(nu);
            agree(induce_down(top, s), top);
            for (const Signature& mu : signatures_with_entries(upper - 1, -1, 1)) {
                agree(LevelMeasure::delta(mu), top);
                if (!c.ok) return c;
            }
        }
    const auto pool3 = signatures_with_entries(3, -1, 1);
    const auto pool2 = signatures_with_entries(2, -1, 1);
    for (int trial = 0; trial < 20 && c.ok; ++trial) {
        const LevelMeasure top = random_measure(rng, 3, pool3);
        const LevelMeasure below =
            (trial % 2 == 0) ? induce_down(top, s) : random_measure(rng, 2, pool2);
        agree(below, top);
    }
    return c;
}

// 6. Backward-martingale identity E[Z_N | level N+1] = Z_{N+1} by exact
//    enumeration over towers generated from deltas at level L <= 4.
inline Checker criterion_backward_martingale() {
    Checker c;
    const WeightScheme s = WeightScheme::schur(make_rational(1, 2));
    for (int top_level = 3; top_level <= 4; ++top_level) {
        for (const Signature& top : signatures_with_entries(top_level, -2, 2)) {
            const CoherentSystem system = CoherentSystem::from_top(s, LevelMeasure::delta(top));
            for (int k = 1; k + 2 <= top_level; ++k)
                for (int n = k + 1; n + 1 <= top_level; ++n) {
                    // relative dimensions down to level k, per vertex
                    std::map<Signature, std::map<Signature, Rational>> to_k;
                    for (const auto& [sigma, mass] : system.level(n).atoms)
                        to_k.emplace(sigma, relative_weighted_dims_at(s, sigma, k));
                    for (const auto& [u, umass] : system.level(n + 1).atoms) {
                        const auto u_to_k = relative_weighted_dims_at(s, u, k);
                        const auto kernel = cotransition_kernel(s, u);
                        for (const auto& [v, vmass] : system.level(k).atoms) {
                            Rational expectation(0);
                            for (const auto& [sigma, p] : kernel) {
                                const auto& layer = to_k.at(sigma);
                                auto it = layer.find(v);
                                if (it == layer.end()) continue;
                                expectation += p * it->second / weighted_dim(s, sigma);
                            }
                            auto it = u_to_k.find(v);
                            const Rational z_next =
                                it == u_to_k.end()
                                    ? Rational(0)
                                    : Rational(it->second / weighted_dim(s, u));
                            c.require(expectation == z_next, [&] {
                                return "martingale fails: top=" + top.str() + " v=" + v.str() +
                                       " u=" + u.str();
                            });
                            if (!c.ok) return c;
                        }
                    }
                }
        }
    }
    return c;
}

// 7. Sampler fidelity at P_2 = delta_{(1,0)}, q = 1/2: 10^5 seeded draws,
//    empirical frequency within 5 sigma of 4/5, and every sampled path's
//    cylinder probability is the frozen exact value.
inline Checker criterion_sampler() {
    Checker c;
    const WeightScheme s = WeightScheme::schur(make_rational(1, 2));
    const Signature nu({1, 0});
    const LevelMeasure top = LevelMeasure::delta(nu);
    const CoherentSystem system = CoherentSystem::from_top(s, top);
    const GTPath via0({Signature::root(), Signature({std::vector<long long>{0}}), nu});
    const GTPath via1({Signature::root(), Signature({std::vector<long long>{1}}), nu});
    const std::map<GTPath, Rational> expected{{via0, make_rational(4, 5)},
                                              {via1, make_rational(1, 5)}};
    long hits = 0;
    const long n = 100000;
    for (long seed = 1; seed <= n && c.ok; ++seed) {
        const GTPath p = sample_path(s, top, static_cast<std::uint64_t>(seed));
        auto it = expected.find(p);
        c.require(it != expected.end(), [&] { return "unexpected sampled path"; });
        if (!c.ok) break;
        c.require(cylinder_probability(system, p, s) == it->second,
                  [&] { return "cylinder probability mismatch"; });
        if (p == via0) ++hits;
    }
    if (c.ok) {
        // |hits - 80000| <= 5 sqrt(100000 * 4/25), squared to stay integral
        const long dev = hits - 80000;
        c.require(dev * dev <= 25 * 16000, [&] {
            return "empirical frequency " + std::to_string(hits) + "/100000 outside 5 sigma";
        });
    }
    return c;
}

// 8. The q = t^2 degeneration reproduces the one-parameter scheme exactly.
inline Checker criterion_degeneration() {
    Checker c;
    for (const Rational& t : {make_rational(1, 2), make_rational(3, 5)}) {
        const WeightScheme mac = WeightScheme::macdonald(Rational(t * t), t);
        const WeightScheme schur = WeightScheme::schur(t);
        for (int level = 1; level <= 3 && c.ok; ++level)
            for (const Signature& nu : signatures_with_entries(level, -2, 2)) {
                for (const Signature& mu : predecessors(nu)) {
                    c.require(edge_weight(mac, mu, nu) == edge_weight(schur, mu, nu), [&] {
                        return "edge weight differs at " + mu.str() + " -> " + nu.str();
                    });
                    if (!c.ok) return c;
                }
                c.require(weighted_dim(mac, nu) == weighted_dim(schur, nu),
                          [&] { return "weighted dimension differs at " + nu.str(); });
                c.require(density_diag(mac, nu) == density_diag(schur, nu),
                          [&] { return "density matrix differs at " + nu.str(); });
                if (!c.ok) return c;
            }
    }
    return c;
}

// 9. Boundary detection on the two reference chains, N <= 12, window 5.
inline Checker criterion_boundary() {
    Checker c;
    std::vector<Signature> hook, ones;
    for (int n = 1; n <= 12; ++n) {
        std::vector<long long> e(static_cast<size_t>(n), 0);
        e[0] = 1;
        hook.emplace_back(e);
        ones.push_back(Signature::constant(n, 1));
    }
    const BoundaryTheta th = boundary_theta(hook, 5);
    c.require(th.stable_upto == 7, [&] {
        return "hook chain certified " + std::to_string(th.stable_upto) + " coordinates";
    });
    for (long long v : th.theta)
        c.require(v == 0, [&] { return "hook chain theta not identically 0"; });
    const BoundaryTheta to = boundary_theta(ones, 5);
    c.require(to.stable_upto == 8, [&] {
        return "ones chain certified " + std::to_string(to.stable_upto) + " coordinates";
    });
    for (long long v : to.theta)
        c.require(v == 1, [&] { return "ones chain theta not identically 1"; });
    return c;
}

}  // namespace detail

inline std::vector<CriterionResult> run_all() {
    using Clock = std::chrono::steady_clock;
    const std::vector<std::pair<std::string, std::function<detail::Checker()>>> criteria{
        {"trace/dimension triangle", detail::criterion_trace_triangle},
        {"density branching", detail::criterion_density_branching},
        {"KMS condition", detail::criterion_kms},
        {"embedding laws", detail::criterion_embedding_laws},
        {"coherence = generating-function stability", detail::criterion_coherence_vs_stability},
        {"backward-martingale identity", detail::criterion_backward_martingale},
        {"sampler fidelity", detail::criterion_sampler},
        {"q = t^2 degeneration", detail::criterion_degeneration},
        {"boundary detection", detail::criterion_boundary},
    };
    std::vector<CriterionResult> results;
    int id = 1;
    for (const auto& [name, run] : criteria) {
        const auto start = Clock::now();
        detail::Checker c;
        try {
            c = run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - start)
                .count();
        results.push_back({id++, name, c.ok, seconds, c.detail});
    }
    return results;
}

inline bool report(const std::vector<CriterionResult>& results, std::ostream& os) {
    bool all_ok = true;
    for (const CriterionResult& r : results) {
        os << "[" << r.id << "] " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  ("
           << std::fixed << std::setprecision(2) << r.seconds << "s)";
        if (!r.pass) os << "  -- " << r.detail;
        os << "\n";
        all_ok = all_ok && r.pass;
    }
    os << (all_ok ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
    return all_ok;
}

}  // namespace qcl::acceptance
