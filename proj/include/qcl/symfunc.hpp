#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "qcl/gtgraph.hpp"
#include "qcl/scalar.hpp"
#include "qcl/signature.hpp"

namespace qcl {

// Principal geometric point (q^{N-1}, q^{N-3}, ..., q^{-N+1}).
inline std::vector<Rational> principal_point(int n, const Rational& q) {
    std::vector<Rational> pt;
    pt.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) pt.push_back(pow_int(q, n + 1 - 2 * i));
    return pt;
}

namespace detail {

// det by fraction-preserving Gaussian elimination; exact.
inline Rational det_rational(std::vector<std::vector<Rational>> m) {
    const size_t n = m.size();
    Rational det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && is_zero(m[pivot][col])) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rational inv_pivot = Rational(1) / m[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (is_zero(m[row][col])) continue;
            Rational f = m[row][col] * inv_pivot;
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

inline Rational schur_branching(const Signature& nu, std::span<const Rational> point,
                                std::vector<std::map<Signature, Rational>>& memo) {
    const int n = nu.level();
    if (n == 0) return Rational(1);
    auto& level_memo = memo[static_cast<size_t>(n)];
    if (auto it = level_memo.find(nu); it != level_memo.end()) return it->second;
    Rational sum(0);
    const long long total = nu.box_sum();
    for (const Signature& mu : predecessors(nu)) {
        Rational term = pow_int(point[static_cast<size_t>(n) - 1], total - mu.box_sum());
        term *= schur_branching(mu, point, memo);
        sum += term;
    }
    level_memo.emplace(nu, sum);
    return sum;
}

}  // namespace detail

// Rational Schur polynomial s_nu at an exact point. Pairwise distinct
// coordinates go through the bialternant determinant over the Vandermonde;
// repeated coordinates fall back to the branching recursion
// s_nu(x_1..x_N) = sum_{mu < nu} x_N^{|nu|-|mu|} s_mu(x_1..x_{N-1}).
inline Rational schur_eval(const Signature& nu, std::span<const Rational> point) {
    const int n = nu.level();
    if (static_cast<int>(point.size()) != n)
        throw std::invalid_argument("schur_eval: point length must equal level");
    if (n == 0) return Rational(1);

    const long long shift = nu[static_cast<size_t>(n) - 1];
    bool has_zero = false, distinct = true;
    for (size_t i = 0; i < point.size(); ++i) {
        if (is_zero(point[i])) has_zero = true;
        for (size_t j = i + 1; j < point.size(); ++j)
            if (point[i] == point[j]) distinct = false;
    }
    if (has_zero && shift < 0)
        throw std::domain_error("schur_eval: zero coordinate with negative last part");

    if (!distinct) {
        std::vector<std::map<Signature, Rational>> memo(static_cast<size_t>(n) + 1);
        return detail::schur_branching(nu, point, memo);
    }

    // Normalize to a partition: s_nu = (prod x_i)^{nu_N} s_{nu - nu_N}.
    Rational prefactor(1);
    for (const Rational& x : point) prefactor *= x;
    prefactor = pow_int(prefactor, shift);

    std::vector<std::vector<Rational>> num(static_cast<size_t>(n),
                                           std::vector<Rational>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const long long e = nu[static_cast<size_t>(j)] - shift + n - 1 - j;
            num[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                pow_int(point[static_cast<size_t>(i)], e);
        }
    Rational vandermonde(1);
    for (size_t i = 0; i < point.size(); ++i)
        for (size_t j = i + 1; j < point.size(); ++j)
            vandermonde *= point[i] - point[j];
    Rational value = detail::det_rational(std::move(num));
    value /= vandermonde;
    return Rational(prefactor * value);
}

inline Rational schur_eval(const Signature& nu, const std::vector<Rational>& point) {
    return schur_eval(nu, std::span<const Rational>(point.data(), point.size()));
}

// Branching-recursion route, usable at any point (also the repeated-point
// fallback of schur_eval); kept public so the two routes can be checked
// against each other.
inline Rational schur_eval_branching(const Signature& nu, std::span<const Rational> point) {
    if (static_cast<int>(point.size()) != nu.level())
        throw std::invalid_argument("schur_eval_branching: point length must equal level");
    std::vector<std::map<Signature, Rational>> memo(static_cast<size_t>(nu.level()) + 1);
    return detail::schur_branching(nu, point, memo);
}

inline Rational schur_eval_branching(const Signature& nu, const std::vector<Rational>& point) {
    return schur_eval_branching(nu, std::span<const Rational>(point.data(), point.size()));
}

// One branching step: mu |-> last^{|nu|-|mu|} over the predecessors of nu.
inline std::map<Signature, Rational> schur_branch_expand(const Signature& nu,
                                                         const Rational& last) {
    if (nu.level() < 1) throw std::invalid_argument("schur_branch_expand: level must be >= 1");
    if (is_zero(last)) throw std::invalid_argument("schur_branch_expand: last value must be nonzero");
    std::map<Signature, Rational> out;
    const long long total = nu.box_sum();
    for (const Signature& mu : predecessors(nu))
        out.emplace(mu, pow_int(last, total - mu.box_sum()));
    return out;
}

namespace detail {

inline std::vector<long long> conjugate_partition(const std::vector<long long>& kappa) {
    std::vector<long long> conj;
    if (kappa.empty()) return conj;
    conj.resize(static_cast<size_t>(kappa[0]), 0);
    for (long long part : kappa)
        for (long long j = 0; j < part; ++j) ++conj[static_cast<size_t>(j)];
    return conj;
}

// b_kappa(s) = (1 - q^arm t^{leg+1}) / (1 - q^{arm+1} t^{leg}) at s = (i, j),
// 1-based row/column.
inline Rational b_factor(const std::vector<long long>& kappa,
                         const std::vector<long long>& conj, long long i, long long j,
                         const Rational& q, const Rational& t) {
    const long long arm = kappa[static_cast<size_t>(i - 1)] - j;
    const long long leg = conj[static_cast<size_t>(j - 1)] - i;
    Rational den = Rational(1) - pow_int(q, arm + 1) * pow_int(t, leg);
    if (is_zero(den))
        throw std::domain_error("macdonald branching factor: vanishing denominator");
    Rational numr = Rational(1) - pow_int(q, arm) * pow_int(t, leg + 1);
    return Rational(numr / den);
}

}  // namespace detail

// Macdonald branching coefficient psi_{nu/mu}(q, t) for interlacing
// signatures, via the arm/leg product over the squares of mu lying in a row
// that meets the skew strip but in no column that does. Signatures are
// shifted by the last part of nu first; psi is translation-invariant.
inline Rational macdonald_psi(const Signature& mu, const Signature& nu, const Rational& q,
                              const Rational& t) {
    if (!interlaces(mu, nu)) throw std::invalid_argument("macdonald_psi: pair must interlace");
    if (sgn(q) <= 0 || sgn(t) <= 0)
        throw std::invalid_argument("macdonald_psi: parameters must be positive");
    const int n = nu.level();
    const long long shift = nu[static_cast<size_t>(n) - 1];

    std::vector<long long> lam, m;
    for (int i = 0; i < n; ++i)
        if (nu[static_cast<size_t>(i)] - shift > 0) lam.push_back(nu[static_cast<size_t>(i)] - shift);
    for (int i = 0; i + 1 < n; ++i)
        if (mu[static_cast<size_t>(i)] - shift > 0) m.push_back(mu[static_cast<size_t>(i)] - shift);

    const auto lam_conj = detail::conjugate_partition(lam);
    const auto m_conj = detail::conjugate_partition(m);

    Rational psi(1);
    for (long long i = 1; i <= static_cast<long long>(m.size()); ++i) {
        const long long lam_i = i <= static_cast<long long>(lam.size())
                                    ? lam[static_cast<size_t>(i - 1)]
                                    : 0;
        if (lam_i <= m[static_cast<size_t>(i - 1)]) continue;  // row misses the strip
        for (long long j = 1; j <= m[static_cast<size_t>(i - 1)]; ++j) {
            const long long lam_col = j <= static_cast<long long>(lam_conj.size())
                                          ? lam_conj[static_cast<size_t>(j - 1)]
                                          : 0;
            if (lam_col != m_conj[static_cast<size_t>(j - 1)]) continue;  // column meets the strip
            psi *= detail::b_factor(m, m_conj, i, j, q, t);
            psi /= detail::b_factor(lam, lam_conj, i, j, q, t);
        }
    }
    return psi;
}

namespace detail {

inline Rational macdonald_branch_eval(const Signature& nu, std::span<const Rational> point,
                                      const Rational& q, const Rational& t,
                                      std::vector<std::map<Signature, Rational>>& memo) {
    const int n = nu.level();
    if (n == 0) return Rational(1);
    auto& level_memo = memo[static_cast<size_t>(n)];
    if (auto it = level_memo.find(nu); it != level_memo.end()) return it->second;
    Rational sum(0);
    const long long total = nu.box_sum();
    for (const Signature& mu : predecessors(nu)) {
        Rational term = macdonald_psi(mu, nu, q, t);
        term *= pow_int(point[static_cast<size_t>(n) - 1], total - mu.box_sum());
        term *= macdonald_branch_eval(mu, point, q, t, memo);
        sum += term;
    }
    level_memo.emplace(nu, sum);
    return sum;
}

}  // namespace detail

// Macdonald polynomial P_nu evaluated at an exact point via the branching
// rule P_nu(x_1..x_N) = sum_{mu < nu} psi_{nu/mu}(q,t) x_N^{|nu|-|mu|} P_mu.
inline Rational macdonald_eval(const Signature& nu, std::span<const Rational> point,
                               const Rational& q, const Rational& t) {
    if (static_cast<int>(point.size()) != nu.level())
        throw std::invalid_argument("macdonald_eval: point length must equal level");
    std::vector<std::map<Signature, Rational>> memo(static_cast<size_t>(nu.level()) + 1);
    return detail::macdonald_branch_eval(nu, point, q, t, memo);
}

inline Rational macdonald_eval(const Signature& nu, const std::vector<Rational>& point,
                               const Rational& q, const Rational& t) {
    return macdonald_eval(nu, std::span<const Rational>(point.data(), point.size()), q, t);
}

// P_nu(t^{N-1}, t^{N-3}, ..., t^{-N+1}; q, t^2): the principal value whose
// branching weights match the (q,t) edge weights.
inline Rational macdonald_principal(const Signature& nu, const Rational& q, const Rational& t) {
    if (sgn(q) <= 0 || sgn(t) <= 0)
        throw std::invalid_argument("macdonald_principal: parameters must be positive");
    return macdonald_eval(nu, principal_point(nu.level(), t), q, Rational(t * t));
}

// Float-mode Schur evaluation (branching route, binary64).
inline double schur_eval_double(const Signature& nu, const std::vector<double>& point) {
    if (static_cast<int>(point.size()) != nu.level())
        throw std::invalid_argument("schur_eval_double: point length must equal level");
    std::vector<std::map<Signature, double>> memo(static_cast<size_t>(nu.level()) + 1);
    auto rec = [&](auto&& self, const Signature& sig) -> double {
        const int n = sig.level();
        if (n == 0) return 1.0;
        auto& level_memo = memo[static_cast<size_t>(n)];
        if (auto it = level_memo.find(sig); it != level_memo.end()) return it->second;
        double sum = 0.0;
        for (const Signature& mu : predecessors(sig))
            sum += std::pow(point[static_cast<size_t>(n) - 1],
                            static_cast<double>(sig.box_sum() - mu.box_sum())) *
                   self(self, mu);
        level_memo.emplace(sig, sum);
        return sum;
    };
    return rec(rec, nu);
}

// Float-mode Schur evaluation at complex points (torus arguments).
inline std::complex<double> schur_eval_complex(const Signature& nu,
                                               const std::vector<std::complex<double>>& point) {
    if (static_cast<int>(point.size()) != nu.level())
        throw std::invalid_argument("schur_eval_complex: point length must equal level");
    std::vector<std::map<Signature, std::complex<double>>> memo(
        static_cast<size_t>(nu.level()) + 1);
    auto rec = [&](auto&& self, const Signature& sig) -> std::complex<double> {
        const int n = sig.level();
        if (n == 0) return 1.0;
        auto& level_memo = memo[static_cast<size_t>(n)];
        if (auto it = level_memo.find(sig); it != level_memo.end()) return it->second;
        std::complex<double> sum = 0.0;
        for (const Signature& mu : predecessors(sig))
            sum += std::pow(point[static_cast<size_t>(n) - 1],
                            static_cast<double>(sig.box_sum() - mu.box_sum())) *
                   self(self, mu);
        level_memo.emplace(sig, sum);
        return sum;
    };
    return rec(rec, nu);
}

}  // namespace qcl
