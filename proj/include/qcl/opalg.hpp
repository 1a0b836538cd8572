#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "qcl/gtgraph.hpp"
#include "qcl/matrix.hpp"
#include "qcl/measures.hpp"
#include "qcl/scalar.hpp"
#include "qcl/signature.hpp"
#include "qcl/weights.hpp"

namespace qcl {

// Blocks with more paths than this are refused.
inline constexpr long kBlockPathCap = 10'000;

namespace detail {

inline void check_block_cap(const Signature& nu) {
    const Integer n = dimension(nu);
    if (n > kBlockPathCap)
        throw resource_error("block " + nu.str() + " has " + n.get_str() +
                             " paths, above the cap " + std::to_string(kBlockPathCap));
}

}  // namespace detail

// Finitely supported element of the level-N truncated algebra: one square
// rational matrix per signature, rows/columns indexed by the canonical path
// order of that block.
struct BlockOperator {
    int level = 0;
    std::map<Signature, Matrix> blocks;

    friend BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
        if (a.level != b.level) throw std::invalid_argument("block operator level mismatch");
        BlockOperator out = a;
        for (const auto& [sig, m] : b.blocks) {
            auto [it, inserted] = out.blocks.emplace(sig, m);
            if (!inserted) it->second += m;
        }
        return out;
    }

    friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
        if (a.level != b.level) throw std::invalid_argument("block operator level mismatch");
        BlockOperator out;
        out.level = a.level;
        for (const auto& [sig, m] : a.blocks) {
            auto it = b.blocks.find(sig);
            if (it == b.blocks.end()) continue;
            out.blocks.emplace(sig, m * it->second);
        }
        return out;
    }

    BlockOperator adjoint() const {
        BlockOperator out;
        out.level = level;
        for (const auto& [sig, m] : blocks) out.blocks.emplace(sig, m.adjoint());
        return out;
    }

    BlockOperator& scale(const Rational& c) {
        for (auto& [sig, m] : blocks) m.scale(c);
        return *this;
    }
};

inline BlockOperator make_block_operator(int level, std::map<Signature, Matrix> blocks) {
    BlockOperator out;
    out.level = level;
    for (auto& [sig, m] : blocks) {
        if (sig.level() != level)
            throw std::invalid_argument("block " + sig.str() + " at wrong level");
        detail::check_block_cap(sig);
        const Integer side = dimension(sig);
        if (m.rows() != m.cols() || Integer(static_cast<unsigned long>(m.rows())) != side)
            throw std::invalid_argument("block " + sig.str() + " must be square of side " +
                                        side.get_str());
        out.blocks.emplace(sig, std::move(m));
    }
    return out;
}

// Equality as elements of the direct sum: absent blocks count as zero.
inline bool block_equal(const BlockOperator& a, const BlockOperator& b) {
    if (a.level != b.level) return false;
    for (const auto& [sig, m] : a.blocks) {
        auto it = b.blocks.find(sig);
        if (it == b.blocks.end()) {
            if (!m.is_zero()) return false;
        } else if (!(m == it->second)) {
            return false;
        }
    }
    for (const auto& [sig, m] : b.blocks)
        if (a.blocks.find(sig) == a.blocks.end() && !m.is_zero()) return false;
    return true;
}

inline BlockOperator identity_on(std::span<const Signature> sigs) {
    if (sigs.empty()) throw std::invalid_argument("identity_on: empty signature list");
    BlockOperator out;
    out.level = sigs.front().level();
    for (const Signature& sig : sigs) {
        if (sig.level() != out.level)
            throw std::invalid_argument("identity_on: mixed levels");
        detail::check_block_cap(sig);
        out.blocks.emplace(sig, Matrix::identity(static_cast<size_t>(dimension(sig).get_ui())));
    }
    return out;
}

// Matrix unit e_{ij} on a single block, path indices in canonical order.
inline BlockOperator block_unit(const Signature& nu, size_t i, size_t j) {
    detail::check_block_cap(nu);
    const size_t side = static_cast<size_t>(dimension(nu).get_ui());
    if (i >= side || j >= side) throw std::invalid_argument("block_unit: index out of range");
    Matrix m(side, side);
    m.at(i, j) = 1;
    BlockOperator out;
    out.level = nu.level();
    out.blocks.emplace(nu, std::move(m));
    return out;
}

// Diagonal of the block density matrix in canonical path order. For the
// one-parameter scheme the entries are evaluated through the closed form
// q^{-(N-1)|nu| + 2 sum |r(t_n)|}; the two-parameter entries are the path
// weights. The reconstruction check below ties the two together.
inline std::vector<Rational> density_diag(const WeightScheme& scheme, const Signature& nu) {
    if (nu.level() < 1) throw std::invalid_argument("density_diag: level must be >= 1");
    detail::check_block_cap(nu);
    const auto paths = enumerate_paths(Signature::root(), nu, kBlockPathCap);
    std::vector<Rational> diag;
    diag.reserve(paths.size());
    for (const GTPath& t : paths) {
        if (scheme.kind == WeightKind::SchurQ) {
            const long long n = nu.level();
            long long exponent = -(n - 1) * nu.box_sum();
            for (int k = 1; k < n; ++k) exponent += 2 * t.at_level(k).box_sum();
            diag.push_back(pow_int(scheme.q, exponent));
        } else {
            diag.push_back(path_weight(scheme, t));
        }
    }
    return diag;
}

// Diagonal blocks of the density matrix over a set of same-level vertices.
struct DensityMatrix {
    int level = 0;
    std::map<Signature, std::vector<Rational>> diag;

    static DensityMatrix over(const WeightScheme& scheme, std::span<const Signature> sigs) {
        if (sigs.empty()) throw std::invalid_argument("density matrix needs >= 1 block");
        DensityMatrix out;
        out.level = sigs.front().level();
        for (const Signature& sig : sigs) {
            if (sig.level() != out.level)
                throw std::invalid_argument("density matrix blocks must share one level");
            out.diag.emplace(sig, density_diag(scheme, sig));
        }
        return out;
    }
};

// Normalized quantized-character restriction at one level: the mixture
// coefficients together with the scheme that defines the blockwise states
// Tr(F_pi .)/Tr(F_pi).
struct QuantizedCharacterLevel {
    WeightScheme scheme;
    int level = 0;
    LevelMeasure coeffs;
};

inline QuantizedCharacterLevel character_at(const WeightScheme& scheme,
                                            const LevelMeasure& measure) {
    return QuantizedCharacterLevel{scheme, measure.level, measure};
}

// chi(x) = sum_pi coeffs(pi) Tr(F_pi x_pi) / w-dim(pi), exact.
inline Rational chi_eval(const QuantizedCharacterLevel& chi, const BlockOperator& x) {
    if (chi.level != x.level) throw std::invalid_argument("chi_eval: level mismatch");
    Rational value(0);
    for (const auto& [sig, mass] : chi.coeffs.atoms) {
        auto it = x.blocks.find(sig);
        if (it == x.blocks.end()) continue;
        const std::vector<Rational> f = density_diag(chi.scheme, sig);
        Rational tr(0);
        for (size_t i = 0; i < f.size(); ++i) tr += f[i] * it->second.at(i, i);
        value += mass * tr / weighted_dim(chi.scheme, sig);
    }
    return value;
}

// Blockwise F^s x F^{-s} for integer s (the analytic continuation of the
// modular-type flow to t = -s i; rational powers of F leave the rationals
// only at non-integer s).
inline BlockOperator scaling_flow_analytic(const BlockOperator& x, const WeightScheme& scheme,
                                           long s) {
    if (s == 0) return x;
    BlockOperator out;
    out.level = x.level;
    for (const auto& [sig, m] : x.blocks) {
        const std::vector<Rational> f = density_diag(scheme, sig);
        Matrix block(m.rows(), m.cols());
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j) {
                if (is_zero(m.at(i, j))) continue;
                block.at(i, j) = m.at(i, j) * pow_int(Rational(f[i] / f[j]), s);
            }
        out.blocks.emplace(sig, std::move(block));
    }
    return out;
}

// Unitary one-parameter flow at real time (float mode): entries pick up the
// phase (w_t / w_u)^{i s} = exp(i s log(w_t / w_u)).
inline std::map<Signature, std::vector<std::vector<std::complex<double>>>>
scaling_flow_unitary(const BlockOperator& x, const WeightScheme& scheme, double time) {
    std::map<Signature, std::vector<std::vector<std::complex<double>>>> out;
    for (const auto& [sig, m] : x.blocks) {
        const std::vector<Rational> f = density_diag(scheme, sig);
        std::vector<std::vector<std::complex<double>>> block(
            m.rows(), std::vector<std::complex<double>>(m.cols()));
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j) {
                const double ratio = to_double(f[i]) / to_double(f[j]);
                const std::complex<double> phase =
                    std::exp(std::complex<double>(0.0, time * std::log(ratio)));
                block[i][j] = phase * to_double(m.at(i, j));
            }
        out.emplace(sig, std::move(block));
    }
    return out;
}

// The embedding into a higher level, materialized on an explicit finite set
// of target blocks (the image of a finitely supported operator touches
// infinitely many blocks, so callers must say which ones they need). Entry
// (t, u) of the target block is [x_rho]_{t', u'} when t and u share their
// whole sub-chain above level K and truncate to t', u' ending at rho;
// otherwise zero. This is the matrix-unit calculus of the branching
// intertwiners, no intertwiner matrices are ever formed.
inline BlockOperator embed(const BlockOperator& x, int target_level,
                           std::span<const Signature> targets) {
    if (target_level <= x.level)
        throw std::invalid_argument("embed: target level must exceed the operator level");
    const int k = x.level;

    std::map<Signature, std::map<std::vector<Signature>, size_t>> source_index;
    for (const auto& [rho, m] : x.blocks) {
        auto& index = source_index[rho];
        const auto paths = enumerate_paths(Signature::root(), rho, kBlockPathCap);
        for (size_t i = 0; i < paths.size(); ++i) index.emplace(paths[i].chain(), i);
    }

    BlockOperator out;
    out.level = target_level;
    for (const Signature& nu : targets) {
        if (nu.level() != target_level)
            throw std::invalid_argument("embed: target " + nu.str() + " at wrong level");
        detail::check_block_cap(nu);
        const auto paths = enumerate_paths(Signature::root(), nu, kBlockPathCap);
        Matrix block(paths.size(), paths.size());
        std::vector<const std::map<std::vector<Signature>, size_t>*> index_of(paths.size(),
                                                                              nullptr);
        std::vector<size_t> trunc_of(paths.size(), 0);
        std::vector<std::vector<Signature>> suffix_of(paths.size());
        for (size_t i = 0; i < paths.size(); ++i) {
            const Signature& rho = k == 0 ? Signature::root() : paths[i].at_level(k);
            auto it = source_index.find(rho);
            if (it == source_index.end()) continue;
            const auto trunc = paths[i].prefix_to(k).chain();
            index_of[i] = &it->second;
            trunc_of[i] = it->second.at(trunc);
            suffix_of[i] = paths[i].suffix_from(k);
        }
        for (size_t i = 0; i < paths.size(); ++i) {
            if (index_of[i] == nullptr) continue;
            const Matrix& src = x.blocks.at(paths[i].at_level(k));
            for (size_t j = 0; j < paths.size(); ++j) {
                if (index_of[j] != index_of[i]) continue;  // different source block
                if (suffix_of[i] != suffix_of[j]) continue;
                block.at(i, j) = src.at(trunc_of[i], trunc_of[j]);
            }
        }
        out.blocks.emplace(nu, std::move(block));
    }
    return out;
}

// Checks the one-step reconstruction of the block density matrix from the
// level below: the diagonal entry at a path t must equal
// w(last edge) * [F_{mu}]_{t'} with t' the truncation of t.
inline bool verify_density_branching(const WeightScheme& scheme, const Signature& nu) {
    if (nu.level() < 2)
        throw std::invalid_argument("verify_density_branching: level must be >= 2");
    const auto paths = enumerate_paths(Signature::root(), nu, kBlockPathCap);
    const std::vector<Rational> target = density_diag(scheme, nu);

    std::map<Signature, std::map<std::vector<Signature>, Rational>> lower;
    for (const Signature& mu : predecessors(nu)) {
        auto& table = lower[mu];
        const auto mu_paths = enumerate_paths(Signature::root(), mu, kBlockPathCap);
        const std::vector<Rational> f = density_diag(scheme, mu);
        for (size_t i = 0; i < mu_paths.size(); ++i) table.emplace(mu_paths[i].chain(), f[i]);
    }

    for (size_t i = 0; i < paths.size(); ++i) {
        const Signature& mu = paths[i].at_level(nu.level() - 1);
        const Rational reconstructed =
            edge_weight(scheme, mu, nu) *
            lower.at(mu).at(paths[i].prefix_to(nu.level() - 1).chain());
        if (!(reconstructed == target[i])) return false;
    }
    return true;
}

struct KmsReport {
    bool ok = false;
    Rational lhs;  // chi(x sigma_{-i}(y))
    Rational rhs;  // chi(y x)
};

// KMS condition at inverse temperature -1 for the analytic point:
// chi(x F y F^{-1}) = chi(y x), exact.
inline KmsReport kms_check(const QuantizedCharacterLevel& chi, const BlockOperator& x,
                           const BlockOperator& y, const WeightScheme& scheme) {
    if (x.level != y.level || x.level != chi.level)
        throw std::invalid_argument("kms_check: level mismatch");
    KmsReport report;
    report.lhs = chi_eval(chi, x * scaling_flow_analytic(y, scheme, 1));
    report.rhs = chi_eval(chi, y * x);
    report.ok = report.lhs == report.rhs;
    return report;
}

// chi_N(embed(x)) = chi_K(x) when the two levels carry the measures of one
// coherent tower.
inline bool restriction_consistency(const WeightScheme& scheme, const CoherentSystem& system,
                                    const BlockOperator& x, int target_level) {
    if (x.level < 1 || target_level <= x.level || target_level > system.max_level())
        throw std::invalid_argument("restriction_consistency: need K < N <= N_max");
    const LevelMeasure& top = system.level(target_level);
    std::vector<Signature> targets;
    targets.reserve(top.atoms.size());
    for (const auto& [sig, mass] : top.atoms) targets.push_back(sig);
    const Rational lhs = chi_eval(character_at(scheme, top), embed(x, target_level, targets));
    const Rational rhs = chi_eval(character_at(scheme, system.level(x.level)), x);
    return lhs == rhs;
}

}  // namespace qcl
