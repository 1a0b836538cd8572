#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcl {

// Exact arithmetic everywhere: rationals are GMP-backed and always kept in
// canonical form (coprime numerator/denominator, positive denominator).
using Integer = mpz_class;
using Rational = mpq_class;

// Resource caps (path counts, block sizes, expansion sizes) raise this,
// argument/domain violations use the std exceptions.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q" with optional leading '-'.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("malformed rational literal: " + text);
    if (r.get_den() == 0)
        throw std::domain_error("rational with zero denominator: " + text);
    r.canonicalize();
    return r;
}

// Canonical GMP form: "5", "-3/7".
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

// r^e for integer e; negative e inverts (r must be nonzero), 0^0 = 1.
inline Rational pow_int(const Rational& base, long long e) {
    if (e == 0) return Rational(1);
    if (is_zero(base)) {
        if (e < 0) throw std::domain_error("zero raised to a negative power");
        return Rational(0);
    }
    const unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), k);
    Rational r;
    if (e > 0) {
        r = Rational(num, den);
    } else {
        if (sgn(num) < 0) { num = -num; den = -den; }
        r = Rational(den, num);
    }
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace qcl
