#include <random>

#include <gtest/gtest.h>

#include "hypstruct/angles.hpp"
#include "hypstruct/shapes.hpp"
#include "hypstruct/twobridge.hpp"
#include "oracles.hpp"

using namespace hyp;

namespace {

long crossings(const CFCode& cf) {
    long c = 0;
    for (long x : cf.a) c += std::labs(x);
    return c;
}

// Components of the 2-bridge link with fraction p/q: one if p is odd.
int components(const CFCode& cf) { return oracle::cf_fraction(cf.a).num % 2 == 0 ? 2 : 1; }

std::vector<std::vector<long>> sample_codes() {
    return {{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {2, 1, 2}, {3, 1, 2}, {4, 3}, {2, 1, 1, 2}, {5, 2}, {3, 2, 3}, {-2, -3}};
}

}  // namespace

TEST(NormalizeCF, AlreadyNormal) { EXPECT_EQ(normalize_cf({2, 2}).a, (std::vector<long>{2, 2})); }

TEST(NormalizeCF, PreservesValue) {
    const auto a = normalize_cf({3, 1, 2});
    const auto f = oracle::cf_fraction({3, 1, 2}), g = oracle::cf_fraction(a.a);
    EXPECT_EQ(f.num, g.num);
    EXPECT_EQ(f.den, g.den);
    // mixed signs: 3 - 1/2 = 5/2 is the figure-8 code
    EXPECT_EQ(normalize_cf({3, -2}).a, (std::vector<long>{2, 2}));
    EXPECT_EQ(normalize_cf({-3, 2}).a, (std::vector<long>{-2, -2}));
}

TEST(NormalizeCF, RandomCodes) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> entry(-5, 5), len(2, 5);
    int checked = 0;
    for (int k = 0; k < 500; ++k) {
        std::vector<long> raw(len(rng));
        for (auto& x : raw) x = entry(rng);
        CFCode cf;
        try {
            cf = normalize_cf(raw);
        } catch (const NotHyperbolic&) {
            continue;
        }
        ++checked;
        ASSERT_GE(cf.a.size(), 2u);
        for (long x : cf.a) EXPECT_EQ(x > 0, cf.a[0] > 0);
        EXPECT_GE(std::labs(cf.a.front()), 2);
        EXPECT_GE(std::labs(cf.a.back()), 2);
        // same link: numerators agree up to sign
        const auto f = oracle::cf_fraction(raw), g = oracle::cf_fraction(cf.a);
        EXPECT_EQ(std::llabs(f.num) + std::llabs(f.den) > 0, true);
        if (std::llabs(f.num) > f.den) EXPECT_EQ(std::llabs(f.num), std::llabs(g.num));
    }
    EXPECT_GT(checked, 50);
}

TEST(NormalizeCF, Rejects) {
    EXPECT_THROW(normalize_cf({1}), NotHyperbolic);
    EXPECT_THROW(normalize_cf({3}), NotHyperbolic);
    EXPECT_THROW(normalize_cf({1, 2}), NotHyperbolic);  // trefoil
    EXPECT_THROW(normalize_cf({2, 0, -2}), NotHyperbolic);
}

TEST(RLWord, BlockCounts) {
    EXPECT_EQ(rl_word(CFCode{{2, 2}}).letters, "RL");
    EXPECT_EQ(rl_word(CFCode{{2, 3}}).letters, "RRL");
    const auto w = rl_word(CFCode{{4, 1, 3}});
    EXPECT_EQ(w.letters.size(), 8u - 2u);
    // blocks of lengths a_1 - 1, a_2, a_3 - 1 from the end of the code
    EXPECT_EQ(w.letters, "LLRLLL");
    EXPECT_EQ(w.hinges, (std::vector<int>{3, 4}));
}

TEST(Build, TetCountAndInvariants) {
    for (const auto& code : sample_codes()) {
        const CFCode cf{code};
        const auto tb = build(cf);
        EXPECT_EQ(tb.tri.size(), 2 * (crossings(cf) - 3));
        EXPECT_TRUE(validate(tb.tri).empty());
        EXPECT_EQ(edge_classes(tb.tri).size(), static_cast<size_t>(tb.tri.size()));
        const auto cs = cusps(tb.tri);
        EXPECT_EQ(static_cast<int>(cs.size()), components(cf));
        for (const auto& c : cs) EXPECT_EQ(c.euler_characteristic(), 0);
        const auto h = homology(tb.tri);
        EXPECT_EQ(h.rank, components(cf));
        EXPECT_TRUE(h.torsion.empty());
        for (int s : tb.meridian_segments) EXPECT_TRUE(s == 1 || s == 3);
        ASSERT_EQ(tb.tri.peripheral.size(), cs.size());
        for (const auto& pc : tb.tri.peripheral) {
            CuspHomology ch(cs[pc.cusp]);
            EXPECT_EQ(ch.intersection(pc.meridian, pc.longitude), 1);
        }
    }
}

TEST(Build, TwoFacesOnEachLevel) {
    const auto tb = build(CFCode{{3, 2, 3}});
    for (int t = 0; t < tb.tri.size(); ++t) {
        const int i = tb.layer[t];
        int below = 0, above = 0;
        for (const auto& g : tb.tri.tets[t].gluings) {
            const int j = tb.layer[g.tet];
            if (j == i - 1) ++below;
            if (j == i + 1) ++above;
        }
        const int first = 2, last = tb.crossings - 2;
        if (i > first) {
            EXPECT_EQ(below, 2);
        }
        if (i < last) {
            EXPECT_EQ(above, 2);
        }
    }
}

TEST(Build, KnownVolumes) {
    // SnapPy reference volumes
    const std::vector<std::pair<std::vector<long>, double>> known{
        {{2, 2}, 2.029883212819307}, {{2, 3}, 2.828122088330783}, {{2, 1, 2}, 3.663862376708876},
        {{3, 1, 2}, 4.400832516123046}, {{2, 1, 1, 2}, 5.693021091281301}};
    for (const auto& [code, vol] : known) {
        const auto tb = build(CFCode{code});
        const auto sol = newton_solve(complete_system(tb.tri), default_start(tb.tri.size()));
        EXPECT_NEAR(sol.report.volume, vol, 1e-9);
        EXPECT_TRUE(sol.report.geometric);
    }
}

TEST(Build, NegativeCodeIsTheMirror) {
    const auto pos = build(CFCode{{2, 3}}).tri, neg = build(CFCode{{-2, -3}}).tri;
    EXPECT_TRUE(find_isomorphism(mirrored(pos), neg).has_value());
    EXPECT_FALSE(find_isomorphism(pos, neg).has_value());
}

TEST(Build, Figure8MatchesFixture) {
    const auto fixture = load(std::string(HYPSTRUCT_DATA_DIR) + "/figure8.tri");
    EXPECT_TRUE(find_isomorphism(build(CFCode{{2, 2}}).tri, fixture).has_value());
}

TEST(Build, RejectsInvalidCodes) {
    EXPECT_THROW(build(CFCode{{2}}), NotHyperbolic);
    EXPECT_THROW(build(CFCode{{1, 2}}), NotHyperbolic);
    EXPECT_THROW(build(CFCode{{2, -2}}), NotHyperbolic);
}

TEST(InitialAngles, ZSequence) {
    for (const auto& code : sample_codes()) {
        const auto tb = build(CFCode{code});
        const auto z = z_sequence(tb.word, tb.crossings);
        const int C = tb.crossings;
        ASSERT_EQ(static_cast<int>(z.size()), C - 1);
        EXPECT_EQ(z.front(), 0);
        EXPECT_EQ(z.back(), 0);
        auto zi = [&](int i) { return z[i - 1]; };
        for (int i = 2; i <= C - 2; ++i) {
            const bool hinge = std::find(tb.word.hinges.begin(), tb.word.hinges.end(), i) != tb.word.hinges.end();
            if (hinge) {
                EXPECT_EQ(zi(i), kPi / 3);
                EXPECT_LT(std::abs(zi(i + 1) - zi(i - 1)), kPi - zi(i));
            } else {
                EXPECT_LT(2 * zi(i), zi(i - 1) + zi(i + 1));
            }
            EXPECT_GT(zi(i), 0);
            EXPECT_LT(zi(i), kPi);
        }
    }
}

TEST(InitialAngles, InteriorPoint) {
    for (const auto& code : sample_codes()) {
        const auto tb = build(CFCode{code});
        const auto a = initial_angles(tb);
        const auto pol = polytope(tb.tri);
        EXPECT_LT(equality_residual(pol, a), 1e-12);
        EXPECT_GT(a.minCoeff(), 0);
        EXPECT_LT(a.maxCoeff(), kPi);
    }
}

TEST(InitialAngles, Figure8ByHand) {
    const auto a = initial_angles(CFCode{{2, 2}});
    ASSERT_EQ(a.size(), 6);
    // both tets regular; tet sums pi and the two edges carry 2 pi
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(a[k], kPi / 3, 1e-15);
}
