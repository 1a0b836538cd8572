#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcl/scalar.hpp"

namespace qcl {

// Sparse multivariate Laurent polynomial with exact rational coefficients.
// Exponent vectors all share the same length (the variable count) and no
// zero coefficient is ever stored.
class LaurentPoly {
public:
    using ExponentVec = std::vector<long long>;
    using TermMap = std::map<ExponentVec, Rational>;

    explicit LaurentPoly(int nvars = 0) : nvars_(check_nvars(nvars)) {}

    static LaurentPoly constant(int nvars, const Rational& c) {
        LaurentPoly p(nvars);
        p.add_term(ExponentVec(static_cast<size_t>(nvars), 0), c);
        return p;
    }

    static LaurentPoly monomial(ExponentVec exps, const Rational& c) {
        LaurentPoly p(static_cast<int>(exps.size()));
        p.add_term(std::move(exps), c);
        return p;
    }

    // Variable z_i (1-based) among nvars variables.
    static LaurentPoly variable(int nvars, int i) {
        if (i < 1 || i > nvars) throw std::invalid_argument("variable index out of range");
        ExponentVec e(static_cast<size_t>(nvars), 0);
        e[static_cast<size_t>(i - 1)] = 1;
        return monomial(std::move(e), Rational(1));
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(ExponentVec exps, const Rational& c) {
        if (static_cast<int>(exps.size()) != nvars_)
            throw std::invalid_argument("exponent vector length mismatch");
        if (qcl::is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(std::move(exps), c);
        if (!inserted) {
            it->second += c;
            if (qcl::is_zero(it->second)) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        require_same_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    LaurentPoly& operator-=(const LaurentPoly& o) {
        require_same_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        a.require_same_vars(b);
        LaurentPoly out(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                ExponentVec e = ea;
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(std::move(e), Rational(ca * cb));
            }
        return out;
    }

    LaurentPoly& scale(const Rational& c) {
        if (qcl::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    // Exact evaluation; a zero coordinate meeting a negative exponent is a
    // domain error, otherwise 0^0 counts as 1.
    Rational eval(std::span<const Rational> point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("evaluation point length mismatch");
        Rational sum(0);
        for (const auto& [e, c] : terms_) {
            Rational term = c;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (qcl::is_zero(point[i]) && e[i] < 0)
                    throw std::domain_error("zero coordinate with negative exponent");
                term *= pow_int(point[i], e[i]);
            }
            sum += term;
        }
        return sum;
    }

    Rational eval(const std::vector<Rational>& point) const {
        return eval(std::span<const Rational>(point.data(), point.size()));
    }

    // Substitutes the last variable by a nonzero value; the result has one
    // variable slot fewer.
    LaurentPoly substitute_last(const Rational& value) const {
        if (nvars_ < 1) throw std::invalid_argument("substitute_last on 0-variable polynomial");
        if (qcl::is_zero(value)) throw std::invalid_argument("substitute_last with zero value");
        LaurentPoly out(nvars_ - 1);
        for (const auto& [e, c] : terms_) {
            ExponentVec head(e.begin(), e.end() - 1);
            out.add_term(std::move(head), Rational(c * pow_int(value, e.back())));
        }
        return out;
    }

private:
    static int check_nvars(int n) {
        if (n < 0) throw std::invalid_argument("negative variable count");
        return n;
    }

    void require_same_vars(const LaurentPoly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("variable count mismatch");
    }

    int nvars_;
    TermMap terms_;
};

}  // namespace qcl
