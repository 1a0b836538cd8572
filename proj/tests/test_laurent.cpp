#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcl/laurent.hpp"

using namespace qcl;

namespace {

LaurentPoly random_poly(std::mt19937_64& rng, int nvars) {
    std::uniform_int_distribution<int> nterms(0, 4);
    std::uniform_int_distribution<long long> expo(-3, 3);
    std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
    LaurentPoly p(nvars);
    const int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        LaurentPoly::ExponentVec e(static_cast<size_t>(nvars));
        for (auto& x : e) x = expo(rng);
        p.add_term(std::move(e), make_rational(num(rng), den(rng)));
    }
    return p;
}

std::vector<Rational> random_point(std::mt19937_64& rng, int nvars) {
    std::uniform_int_distribution<long> num(1, 6), den(1, 6);
    std::uniform_int_distribution<int> sign(0, 1);
    std::vector<Rational> pt;
    for (int i = 0; i < nvars; ++i)
        pt.push_back(make_rational(sign(rng) ? num(rng) : -num(rng), den(rng)));
    return pt;
}

}  // namespace

TEST_CASE("evaluation of simple polynomials", "[laurent]") {
    // z1 + z2 at (2,3)
    LaurentPoly p = LaurentPoly::variable(2, 1) + LaurentPoly::variable(2, 2);
    CHECK(p.eval({Rational(2), Rational(3)}) == 5);

    // z1^{-1} at 1/2
    LaurentPoly inv = LaurentPoly::monomial({-1}, Rational(1));
    CHECK(inv.eval({make_rational(1, 2)}) == 2);

    // the empty-exponent constant
    LaurentPoly one = LaurentPoly::constant(0, Rational(1));
    CHECK(one.eval(std::vector<Rational>{}) == 1);
}

TEST_CASE("evaluation domain errors", "[laurent]") {
    LaurentPoly inv = LaurentPoly::monomial({-1}, Rational(1));
    CHECK_THROWS_AS(inv.eval({Rational(0)}), std::domain_error);
    LaurentPoly p = LaurentPoly::variable(2, 1);
    CHECK_THROWS_AS(p.eval({Rational(1)}), std::invalid_argument);
    // zero coordinate with only nonnegative exponents is fine
    CHECK(p.eval({Rational(0), Rational(9)}) == 0);
}

TEST_CASE("substitute_last", "[laurent]") {
    LaurentPoly p = LaurentPoly::variable(2, 1) + LaurentPoly::variable(2, 2);
    LaurentPoly expect = LaurentPoly::variable(1, 1) + LaurentPoly::constant(1, Rational(1));
    CHECK(p.substitute_last(Rational(1)) == expect);

    LaurentPoly q = LaurentPoly::monomial({1, -1}, Rational(1));
    CHECK(q.substitute_last(make_rational(1, 4)) ==
          LaurentPoly::monomial({1}, Rational(4)));

    // z1 + q^{-2} z2 at q = 1/2, last value 1
    LaurentPoly r = LaurentPoly::variable(2, 1);
    r += LaurentPoly::monomial({0, 1}, pow_int(make_rational(1, 2), -2));
    CHECK(r.substitute_last(Rational(1)) ==
          LaurentPoly::variable(1, 1) + LaurentPoly::constant(1, Rational(4)));

    CHECK_THROWS_AS(p.substitute_last(Rational(0)), std::invalid_argument);
}

TEST_CASE("ring laws on randomized polynomials", "[laurent]") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        const int nvars = 1 + static_cast<int>(rng() % 3);
        LaurentPoly a = random_poly(rng, nvars);
        LaurentPoly b = random_poly(rng, nvars);
        LaurentPoly c = random_poly(rng, nvars);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a - a == LaurentPoly(nvars));
    }
}

TEST_CASE("eval commutes with substitute_last", "[laurent]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const int nvars = 1 + static_cast<int>(rng() % 3);
        LaurentPoly p = random_poly(rng, nvars);
        std::vector<Rational> pt = random_point(rng, nvars);
        const Rational last = pt.back();
        std::vector<Rational> head(pt.begin(), pt.end() - 1);
        CHECK(p.substitute_last(last).eval(head) == p.eval(pt));
    }
}
