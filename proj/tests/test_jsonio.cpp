#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcl/json_io.hpp"

using namespace qcl;

namespace {
Signature sig(std::vector<long long> v) { return Signature(std::move(v)); }
}

TEST_CASE("rationals serialize as strings", "[jsonio]") {
    CHECK(to_json(make_rational(-3, 7)) == Json("-3/7"));
    CHECK(to_json(Rational(5)) == Json("5"));
    CHECK(rational_from_json(Json("4/6")) == make_rational(2, 3));
    CHECK(rational_from_json(Json(3)) == 3);
    CHECK_THROWS_AS(rational_from_json(Json(1.5)), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_json(Json("x")), std::invalid_argument);
}

TEST_CASE("signatures and paths round-trip", "[jsonio]") {
    const Signature nu = sig({2, 0, -1});
    CHECK(signature_from_json(to_json(nu)) == nu);
    CHECK(to_json(nu).dump() == "[2,0,-1]");
    CHECK(signature_from_json(Json::parse("[]")) == Signature::root());
    CHECK_THROWS_AS(signature_from_json(Json::parse("[0,1]")), std::invalid_argument);

    const GTPath path({Signature::root(), sig({1}), sig({1, 0})});
    CHECK(path_from_json(to_json(path)) == path);
}

TEST_CASE("measures round-trip and validate", "[jsonio]") {
    const LevelMeasure m = make_level_measure(
        2, {{sig({1, 0}), make_rational(1, 3)}, {sig({1, 1}), make_rational(2, 3)}});
    CHECK(measure_from_json(to_json(m)) == m);

    const Json bad = Json::parse(R"({"level": 1, "atoms": [{"sig": [0], "mass": "1/2"}]})");
    CHECK_THROWS_AS(measure_from_json(bad), std::invalid_argument);

    const Json parsed = Json::parse(
        R"({"level": 1, "atoms": [{"sig": [0], "mass": "4/5"}, {"sig": [1], "mass": "1/5"}]})");
    CHECK(measure_from_json(parsed).mass(sig({0})) == make_rational(4, 5));
}

TEST_CASE("laurent polynomials round-trip", "[jsonio]") {
    LaurentPoly p(2);
    p.add_term({1, 0}, make_rational(1, 5));
    p.add_term({0, -2}, make_rational(-4, 5));
    CHECK(laurent_from_json(to_json(p)) == p);
    CHECK(laurent_from_json(Json::array(), 3) == LaurentPoly(3));
}

TEST_CASE("block operators round-trip", "[jsonio]") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    std::map<Signature, Matrix> blocks;
    for (const Signature& nu : {sig({1, 0}), sig({2, 0})}) {
        const size_t side = static_cast<size_t>(dimension(nu).get_ui());
        Matrix m(side, side);
        for (size_t i = 0; i < side; ++i)
            for (size_t j = 0; j < side; ++j) m.at(i, j) = make_rational(num(rng), den(rng));
        blocks.emplace(nu, std::move(m));
    }
    const BlockOperator x = make_block_operator(2, std::move(blocks));
    const BlockOperator back = blockop_from_json(to_json(x));
    CHECK(block_equal(back, x));

    const Json ragged = Json::parse(
        R"({"level": 2, "blocks": [{"sig": [1,0], "matrix": [["1","0"],["0"]]}]})");
    CHECK_THROWS_AS(blockop_from_json(ragged), std::invalid_argument);
}

TEST_CASE("serialized output is deterministic", "[jsonio]") {
    const LevelMeasure m = make_level_measure(
        1, {{sig({0}), make_rational(4, 5)}, {sig({1}), make_rational(1, 5)}});
    CHECK(to_json(m).dump() ==
          R"({"level":1,"atoms":[{"sig":[0],"mass":"4/5"},{"sig":[1],"mass":"1/5"}]})");
}
