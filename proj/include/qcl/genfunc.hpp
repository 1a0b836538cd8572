#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qcl/gtgraph.hpp"
#include "qcl/laurent.hpp"
#include "qcl/measures.hpp"
#include "qcl/scalar.hpp"
#include "qcl/symfunc.hpp"

namespace qcl {

inline constexpr long kDefaultExpandCap = 1'000'000;

// Point (1, q^{-2}, ..., q^{-2(N-1)}) that normalizes every Schur ratio.
inline std::vector<Rational> torus_base_point(int n, const Rational& q) {
    std::vector<Rational> pt;
    pt.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pt.push_back(pow_int(q, -2 * i));
    return pt;
}

// Generating function of a level measure as an exact Laurent polynomial in
// z_1..z_N:
//   Phi(z) = sum_nu P(nu) s_nu(z_1, q^{-2} z_2, ..., q^{-2(N-1)} z_N)
//                      / s_nu(1, q^{-2}, ..., q^{-2(N-1)}).
// The numerator is expanded monomial-by-monomial over the paths into nu, so
// the total expansion size is capped.
inline LaurentPoly gen_function(const LevelMeasure& pN, const Rational& q,
                                long cap = kDefaultExpandCap) {
    const int n = pN.level;
    if (n < 1) throw std::invalid_argument("gen_function: level must be >= 1");
    LaurentPoly out(n);
    const std::vector<Rational> base = torus_base_point(n, q);
    Integer budget(cap);
    for (const auto& [nu, mass] : pN.atoms) {
        const Integer npaths = dimension(nu);
        budget -= npaths;
        if (budget < 0)
            throw resource_error("gen_function: monomial expansion exceeds cap " +
                                 std::to_string(cap));
        const Rational denom = schur_eval(nu, base);
        const Rational scale = Rational(mass / denom);
        for (const GTPath& t : enumerate_paths(Signature::root(), nu, cap)) {
            LaurentPoly::ExponentVec e(static_cast<size_t>(n));
            Rational coeff = scale;
            long long prev = 0;
            for (int i = 1; i <= n; ++i) {
                const long long d = t.at_level(i).box_sum() - prev;
                prev = t.at_level(i).box_sum();
                e[static_cast<size_t>(i) - 1] = d;
                coeff *= pow_int(base[static_cast<size_t>(i) - 1], d);
            }
            out.add_term(std::move(e), coeff);
        }
    }
    return out;
}

// Exact pointwise evaluation of the generating function (no expansion):
// used when the monomial expansion would be too large.
inline Rational gen_function_eval(const LevelMeasure& pN, const Rational& q,
                                  const std::vector<Rational>& z) {
    const int n = pN.level;
    if (static_cast<int>(z.size()) != n)
        throw std::invalid_argument("gen_function_eval: point length mismatch");
    const std::vector<Rational> base = torus_base_point(n, q);
    std::vector<Rational> scaled(z.size());
    for (size_t i = 0; i < z.size(); ++i) scaled[i] = base[i] * z[i];
    Rational value(0);
    for (const auto& [nu, mass] : pN.atoms)
        value += mass * schur_eval(nu, scaled) / schur_eval(nu, base);
    return value;
}

inline double gen_function_eval_double(const LevelMeasure& pN, double q,
                                       const std::vector<double>& z) {
    const int n = pN.level;
    if (static_cast<int>(z.size()) != n)
        throw std::invalid_argument("gen_function_eval_double: point length mismatch");
    std::vector<double> base(static_cast<size_t>(n)), scaled(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        base[static_cast<size_t>(i)] = std::pow(q, -2.0 * i);
        scaled[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
    }
    double value = 0.0;
    for (const auto& [nu, mass] : pN.atoms)
        value += to_double(mass) * schur_eval_double(nu, scaled) / schur_eval_double(nu, base);
    return value;
}

// Float-mode evaluation at torus arguments |z_i| = 1 (the exact layer never
// leaves rational points, so circle values live here).
inline std::complex<double> gen_function_eval_complex(const LevelMeasure& pN, double q,
                                                      const std::vector<std::complex<double>>& z) {
    const int n = pN.level;
    if (static_cast<int>(z.size()) != n)
        throw std::invalid_argument("gen_function_eval_complex: point length mismatch");
    std::vector<double> base(static_cast<size_t>(n));
    std::vector<std::complex<double>> scaled(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        base[static_cast<size_t>(i)] = std::pow(q, -2.0 * i);
        scaled[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
    }
    std::complex<double> value = 0.0;
    for (const auto& [nu, mass] : pN.atoms) {
        std::vector<std::complex<double>> base_c(base.begin(), base.end());
        value += to_double(mass) * schur_eval_complex(nu, scaled) / schur_eval_complex(nu, base_c);
    }
    return value;
}

// k-th roots of unity e^{2 pi i j / k}, the grid used to probe the torus.
inline std::vector<std::complex<double>> roots_of_unity(int k) {
    if (k < 1) throw std::invalid_argument("roots_of_unity: k must be >= 1");
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        const double angle = 2.0 * std::acos(-1.0) * j / k;
        out.emplace_back(std::cos(angle), std::sin(angle));
    }
    return out;
}

// Coherence in generating-function form: setting the last variable to 1 in
// the level-(N+1) function must reproduce the level-N function exactly.
inline bool stability_check(const LevelMeasure& pN, const LevelMeasure& pN1, const Rational& q,
                            long cap = kDefaultExpandCap) {
    if (pN1.level != pN.level + 1)
        throw std::invalid_argument("stability_check: levels must be consecutive");
    return gen_function(pN1, q, cap).substitute_last(Rational(1)) == gen_function(pN, q, cap);
}

// Finite-level approximants of the extremal generating function along a
// chain: the L-th term is the Schur ratio with z_{N+1} = ... = z_L = 1,
//   s_nu(L)(z_1, q^{-2} z_2, ..., q^{-2(N-1)} z_N, q^{-2N}, ..., q^{-2(L-1)})
//   / s_nu(L)(1, q^{-2}, ..., q^{-2(L-1)}).
inline std::vector<Rational> extremal_genfunc_approx(const std::vector<Signature>& chain,
                                                     const Rational& q, int n,
                                                     const std::vector<Rational>& eval_point) {
    if (n < 1 || static_cast<int>(eval_point.size()) != n)
        throw std::invalid_argument("extremal_genfunc_approx: point length must equal N");
    std::vector<Rational> out;
    out.reserve(chain.size());
    for (const Signature& nu : chain) {
        const int l = nu.level();
        if (l < n)
            throw std::invalid_argument("extremal_genfunc_approx: chain level below N");
        std::vector<Rational> base = torus_base_point(l, q);
        std::vector<Rational> num = base;
        for (int i = 0; i < n; ++i) num[static_cast<size_t>(i)] *= eval_point[static_cast<size_t>(i)];
        out.push_back(Rational(schur_eval(nu, num) / schur_eval(nu, base)));
    }
    return out;
}

}  // namespace qcl
