#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcl/opalg.hpp"

using namespace qcl;

namespace {

Signature sig(std::vector<long long> v) { return Signature(std::move(v)); }

const Rational kHalf = make_rational(1, 2);

std::vector<Signature> all_signatures(int level, long long lo, long long hi) {
    if (level == 0) return {Signature::root()};
    std::vector<Signature> out;
    std::vector<long long> cur(static_cast<size_t>(level), hi);
    while (true) {
        out.emplace_back(cur);
        int i = level - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == lo) --i;
        if (i < 0) break;
        --cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < level; ++j)
            cur[static_cast<size_t>(j)] = std::min(cur[static_cast<size_t>(i)], hi);
    }
    return out;
}

Matrix random_matrix(std::mt19937_64& rng, size_t side) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    Matrix m(side, side);
    for (size_t i = 0; i < side; ++i)
        for (size_t j = 0; j < side; ++j) m.at(i, j) = make_rational(num(rng), den(rng));
    return m;
}

BlockOperator random_operator(std::mt19937_64& rng, int level,
                              const std::vector<Signature>& pool, size_t max_blocks) {
    std::map<Signature, Matrix> blocks;
    const size_t count = 1 + rng() % max_blocks;
    for (size_t k = 0; k < count; ++k) {
        const Signature& nu = pool[rng() % pool.size()];
        blocks.insert_or_assign(nu,
                                random_matrix(rng, static_cast<size_t>(dimension(nu).get_ui())));
    }
    return make_block_operator(level, std::move(blocks));
}

LevelMeasure random_measure(std::mt19937_64& rng, int level,
                            const std::vector<Signature>& pool) {
    std::map<Signature, Rational> atoms;
    const size_t count = 1 + rng() % 3;
    std::vector<long> numerators;
    std::vector<Signature> chosen;
    long total = 0;
    for (size_t k = 0; k < count; ++k) {
        const long w = 1 + static_cast<long>(rng() % 9);
        chosen.push_back(pool[rng() % pool.size()]);
        numerators.push_back(w);
        total += w;
    }
    for (size_t k = 0; k < chosen.size(); ++k) {
        Rational add = make_rational(numerators[k], total);
        auto [it, inserted] = atoms.emplace(chosen[k], add);
        if (!inserted) it->second += add;
    }
    return make_level_measure(level, std::move(atoms));
}

// level-N signatures within the entry box reachable from at least one block
std::vector<Signature> reachable_targets(const BlockOperator& x, int level, long long lo,
                                         long long hi) {
    std::vector<Signature> out;
    for (const Signature& nu : all_signatures(level, lo, hi)) {
        for (const auto& [rho, m] : x.blocks)
            if (count_paths(rho, nu) > 0) {
                out.push_back(nu);
                break;
            }
    }
    return out;
}

}  // namespace

TEST_CASE("density matrix diagonals", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    const auto d10 = density_diag(s, sig({1, 0}));
    REQUIRE(d10.size() == 2);
    CHECK(d10[0] == 2);            // path via (0): q^{-1}
    CHECK(d10[1] == kHalf);        // path via (1): q
    CHECK(density_diag(s, sig({0, 0, 0})) == std::vector<Rational>{Rational(1)});
    const auto d20 = density_diag(s, sig({2, 0}));
    CHECK(d20 == std::vector<Rational>{Rational(4), Rational(1), make_rational(1, 4)});
}

TEST_CASE("closed-form density entries are the path weights", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(make_rational(2, 3));
    for (int level = 1; level <= 3; ++level)
        for (const Signature& nu : all_signatures(level, -2, 2)) {
            const auto diag = density_diag(s, nu);
            const auto paths = enumerate_paths(Signature::root(), nu);
            REQUIRE(diag.size() == paths.size());
            for (size_t i = 0; i < paths.size(); ++i)
                CHECK(diag[i] == path_weight(s, paths[i]));
        }
}

TEST_CASE("density trace is the weighted dimension", "[opalg]") {
    for (const WeightScheme& s :
         {WeightScheme::schur(make_rational(3, 5)),
          WeightScheme::macdonald(make_rational(1, 3), kHalf)}) {
        for (int level = 1; level <= 3; ++level)
            for (const Signature& nu : all_signatures(level, -2, 2)) {
                Rational tr(0);
                for (const Rational& v : density_diag(s, nu)) tr += v;
                CHECK(tr == weighted_dim(s, nu));
            }
    }
}

TEST_CASE("level-wide density blocks", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    const std::vector<Signature> sigs{sig({1, 0}), sig({1, 1}), sig({2, 0})};
    const DensityMatrix f = DensityMatrix::over(s, sigs);
    CHECK(f.level == 2);
    for (const auto& [nu, diag] : f.diag) {
        CHECK(Integer(static_cast<unsigned long>(diag.size())) == dimension(nu));
        for (const Rational& v : diag) CHECK(sgn(v) > 0);
        Rational tr(0);
        for (const Rational& v : diag) tr += v;
        CHECK(tr == weighted_dim(s, nu));
    }
    CHECK_THROWS_AS(DensityMatrix::over(s, std::vector<Signature>{sig({1}), sig({1, 0})}),
                    std::invalid_argument);
}

TEST_CASE("density branching reconstruction", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    CHECK(verify_density_branching(s, sig({1, 0})));
    CHECK(verify_density_branching(s, sig({0, 0})));
    const WeightScheme m = WeightScheme::macdonald(make_rational(1, 3), kHalf);
    for (int level = 2; level <= 3; ++level)
        for (const Signature& nu : all_signatures(level, -2, 2)) {
            CHECK(verify_density_branching(s, nu));
            CHECK(verify_density_branching(m, nu));
        }
    CHECK_THROWS_AS(verify_density_branching(s, sig({1})), std::invalid_argument);
}

TEST_CASE("block operator construction", "[opalg]") {
    std::map<Signature, Matrix> blocks;
    blocks.emplace(sig({1, 0}), Matrix::identity(2));
    CHECK_NOTHROW(make_block_operator(2, std::move(blocks)));

    std::map<Signature, Matrix> wrong;
    wrong.emplace(sig({1, 0}), Matrix::identity(3));
    CHECK_THROWS_AS(make_block_operator(2, std::move(wrong)), std::invalid_argument);

    std::map<Signature, Matrix> wrong_level;
    wrong_level.emplace(sig({1}), Matrix::identity(1));
    CHECK_THROWS_AS(make_block_operator(2, std::move(wrong_level)), std::invalid_argument);
}

TEST_CASE("character evaluation", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    const QuantizedCharacterLevel chi =
        character_at(s, LevelMeasure::delta(sig({1, 0})));

    std::vector<Signature> support{sig({1, 0})};
    CHECK(chi_eval(chi, identity_on(support)) == 1);

    // e_{tt} for the path through (1): q^2/(1+q^2) = 1/5 at q = 1/2
    CHECK(chi_eval(chi, block_unit(sig({1, 0}), 1, 1)) == make_rational(1, 5));
    CHECK(chi_eval(chi, block_unit(sig({1, 0}), 0, 0)) == make_rational(4, 5));

    CHECK(chi_eval(chi, block_unit(sig({2, 0}), 0, 0)) == 0);

    const QuantizedCharacterLevel chi1 = character_at(s, LevelMeasure::delta(sig({1})));
    CHECK_THROWS_AS(chi_eval(chi1, identity_on(support)), std::invalid_argument);
}

TEST_CASE("analytic scaling flow", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    const BlockOperator e01 = block_unit(sig({1, 0}), 0, 1);
    const BlockOperator e10 = block_unit(sig({1, 0}), 1, 0);

    CHECK(block_equal(scaling_flow_analytic(e01, s, 0), e01));

    // F = diag(q^{-1}, q): conjugation scales e01 by q^{-2} = 4
    BlockOperator expected = e01;
    expected.scale(Rational(4));
    CHECK(block_equal(scaling_flow_analytic(e01, s, 1), expected));

    BlockOperator diag = block_unit(sig({1, 0}), 0, 0) + block_unit(sig({1, 0}), 1, 1);
    diag.blocks.at(sig({1, 0})).at(1, 1) = make_rational(7, 3);
    for (long t : {-2L, 1L, 3L}) CHECK(block_equal(scaling_flow_analytic(diag, s, t), diag));

    // group law F^2 (F^{-1} x F) F^{-2} = F x F^{-1} ... composition adds
    CHECK(block_equal(scaling_flow_analytic(scaling_flow_analytic(e10, s, 2), s, -1),
                      scaling_flow_analytic(e10, s, 1)));
}

TEST_CASE("unitary flow at real time preserves moduli", "[opalg][float]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    BlockOperator x = block_unit(sig({1, 0}), 0, 1) + block_unit(sig({1, 0}), 1, 1);
    const auto flowed = scaling_flow_unitary(x, s, 0.7);
    const auto& block = flowed.at(sig({1, 0}));
    CHECK(std::abs(block[0][1]) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(block[1][1] - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(block[0][0]) < 1e-12);
}

TEST_CASE("kms condition on the worked example", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    const QuantizedCharacterLevel chi = character_at(s, LevelMeasure::delta(sig({1, 0})));
    const BlockOperator e01 = block_unit(sig({1, 0}), 0, 1);
    const BlockOperator e10 = block_unit(sig({1, 0}), 1, 0);

    const KmsReport r = kms_check(chi, e01, e10, s);
    CHECK(r.ok);
    CHECK(r.lhs == make_rational(1, 5));  // q/(q+q^{-1}) at q = 1/2

    std::vector<Signature> support{sig({1, 0})};
    CHECK(kms_check(chi, identity_on(support), identity_on(support), s).ok);
}

TEST_CASE("kms condition on randomized operators and towers", "[opalg]") {
    std::mt19937_64 rng(20250301);
    for (const WeightScheme& s :
         {WeightScheme::schur(make_rational(2, 3)),
          WeightScheme::macdonald(make_rational(1, 3), kHalf)}) {
        for (int level = 1; level <= 3; ++level) {
            const auto pool = all_signatures(level, -2, 2);
            for (int trial = 0; trial < 12; ++trial) {
                const LevelMeasure top = random_measure(rng, level, pool);
                const QuantizedCharacterLevel chi = character_at(s, top);
                std::vector<Signature> support;
                for (const auto& [v, mass] : top.atoms) support.push_back(v);
                const BlockOperator x = random_operator(rng, level, support, 2);
                const BlockOperator y = random_operator(rng, level, support, 2);
                const KmsReport r = kms_check(chi, x, y, s);
                INFO("level " << level << " trial " << trial);
                CHECK(r.ok);
            }
        }
    }
}

TEST_CASE("embedding identities and matrix units", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);

    std::vector<Signature> level1{sig({0}), sig({1})};
    const BlockOperator id1 = identity_on(level1);
    // blocks all of whose predecessors lie in the support embed to identities
    std::vector<Signature> covered{sig({0, 0}), sig({1, 0}), sig({1, 1})};
    const BlockOperator embedded = embed(id1, 2, covered);
    for (const Signature& nu : covered) {
        INFO(nu.str());
        CHECK(embedded.blocks.at(nu) ==
              Matrix::identity(static_cast<size_t>(dimension(nu).get_ui())));
    }
    // a block with an outside predecessor only receives a projection
    const BlockOperator partial = embed(id1, 2, std::vector<Signature>{sig({2, 0})});
    CHECK(partial.blocks.at(sig({2, 0})).trace() == 2);

    // unit of the one-dimensional block (0) lands as diag(1,0) on (1,0)
    const BlockOperator e0 = block_unit(sig({0}), 0, 0);
    const BlockOperator p = embed(e0, 2, std::vector<Signature>{sig({1, 0})});
    Matrix expected(2, 2);
    expected.at(0, 0) = 1;
    CHECK(p.blocks.at(sig({1, 0})) == expected);

    // embedded density blocks divide the higher density diagonally and positively
    std::vector<Signature> level1_full{sig({0}), sig({1}), sig({2})};
    std::vector<Signature> targets{sig({1, 0}), sig({1, 1}), sig({2, 0})};
    std::map<Signature, Matrix> fblocks;
    for (const Signature& mu : level1_full)
        fblocks.emplace(mu, Matrix::diagonal(density_diag(s, mu)));
    const BlockOperator f1 = make_block_operator(1, std::move(fblocks));
    const BlockOperator f1_up = embed(f1, 2, targets);
    for (const Signature& nu : targets) {
        const auto f_nu = density_diag(s, nu);
        const Matrix& up = f1_up.blocks.at(nu);
        for (size_t i = 0; i < f_nu.size(); ++i) {
            for (size_t j = 0; j < f_nu.size(); ++j)
                if (i != j) CHECK(is_zero(up.at(i, j)));
            CHECK(sgn(Rational(f_nu[i] / up.at(i, i))) > 0);
        }
    }
}

TEST_CASE("embedding is a homomorphism and commutes with the flow", "[opalg]") {
    std::mt19937_64 rng(777);
    for (const WeightScheme& s :
         {WeightScheme::schur(kHalf),
          WeightScheme::macdonald(make_rational(1, 3), make_rational(2, 5))}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int k = 1 + static_cast<int>(rng() % 2);
            const auto pool = all_signatures(k, -1, 1);
            const BlockOperator x = random_operator(rng, k, pool, 2);
            const BlockOperator y = random_operator(rng, k, pool, 2);
            const int n = k + 1 + static_cast<int>(rng() % (3 - k));
            auto targets = reachable_targets(x + y, n, -2, 2);
            if (targets.size() > 6) targets.resize(6);
            if (targets.empty()) continue;

            const BlockOperator ex = embed(x, n, targets);
            const BlockOperator ey = embed(y, n, targets);
            CHECK(block_equal(embed(x * y, n, targets), ex * ey));
            CHECK(block_equal(embed(x + y, n, targets), ex + ey));
            CHECK(block_equal(embed(x.adjoint(), n, targets), ex.adjoint()));
            CHECK(block_equal(embed(scaling_flow_analytic(x, s, 1), n, targets),
                              scaling_flow_analytic(ex, s, 1)));
        }
    }
}

TEST_CASE("embedding is transitive", "[opalg]") {
    std::mt19937_64 rng(31337);
    const auto pool = all_signatures(1, -1, 1);
    for (int trial = 0; trial < 8; ++trial) {
        const BlockOperator x = random_operator(rng, 1, pool, 2);
        auto mid_targets = reachable_targets(x, 2, -2, 2);
        auto top_targets = reachable_targets(x, 3, -2, 2);
        if (top_targets.size() > 5) top_targets.resize(5);
        const BlockOperator direct = embed(x, 3, top_targets);
        const BlockOperator stepped = embed(embed(x, 2, mid_targets), 3, top_targets);
        CHECK(block_equal(direct, stepped));
    }
}

TEST_CASE("restriction consistency along a tower", "[opalg]") {
    const WeightScheme s = WeightScheme::schur(kHalf);
    const CoherentSystem system = CoherentSystem::from_top(s, LevelMeasure::delta(sig({1, 0})));

    const BlockOperator e0 = block_unit(sig({0}), 0, 0);
    CHECK(restriction_consistency(s, system, e0, 2));
    CHECK(chi_eval(character_at(s, system.level(1)), e0) == make_rational(4, 5));

    std::vector<Signature> support;
    for (const auto& [v, mass] : system.level(1).atoms) support.push_back(v);
    CHECK(restriction_consistency(s, system, identity_on(support), 2));

    const CoherentSystem zeros =
        CoherentSystem::from_top(s, LevelMeasure::delta(sig({0, 0, 0})));
    const BlockOperator z = block_unit(sig({0}), 0, 0);
    CHECK(restriction_consistency(s, zeros, z, 2));
    CHECK(restriction_consistency(s, zeros, z, 3));
}

TEST_CASE("restriction consistency on random towers", "[opalg]") {
    std::mt19937_64 rng(160);
    for (const WeightScheme& s :
         {WeightScheme::schur(make_rational(3, 5)),
          WeightScheme::macdonald(make_rational(1, 2), make_rational(1, 3))}) {
        for (int trial = 0; trial < 6; ++trial) {
            const auto pool3 = all_signatures(3, -1, 1);
            const CoherentSystem system =
                CoherentSystem::from_top(s, random_measure(rng, 3, pool3));
            for (int k = 1; k <= 2; ++k) {
                std::vector<Signature> support;
                for (const auto& [v, mass] : system.level(k).atoms) support.push_back(v);
                const BlockOperator x = random_operator(rng, k, support, 2);
                for (int n = k + 1; n <= 3; ++n) CHECK(restriction_consistency(s, system, x, n));
            }
        }
    }
}

TEST_CASE("block caps are enforced", "[opalg]") {
    // (8,0,-8) at level 3 already carries 17^2 = 289 paths; push far beyond the cap
    CHECK_THROWS_AS(density_diag(WeightScheme::schur(kHalf), sig({600, 0, -600})),
                    resource_error);
}
