#include "fixpt/reidemeister.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fixpt;

namespace {

const IntMatrix kRotation{{0, -1}, {1, 0}};

AbelianVector vec(std::vector<Int> v) { return AbelianVector{std::move(v)}; }

FiniteGroup klein_four() { return FiniteGroup::cyclic(2).product(FiniteGroup::cyclic(2)); }

} // namespace

// ---------------------------------------------------------------- models

TEST(FiniteGroup, RejectsInvalidTables) {
    EXPECT_THROW(FiniteGroup({{0, 1}, {1, 1}}), InvalidGroupData);
    EXPECT_THROW(FiniteGroup({{1, 0}, {0, 1}}), InvalidGroupData);
    // Latin square with identity 0 that is not associative
    std::vector<std::vector<std::size_t>> quasi{
        {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
    EXPECT_THROW(FiniteGroup{quasi}, InvalidGroupData);
    EXPECT_NO_THROW(FiniteGroup::symmetric(3));
    EXPECT_EQ(FiniteGroup::symmetric(3).order(), 6u);
    EXPECT_FALSE(FiniteGroup::symmetric(3).is_cyclic());
    EXPECT_TRUE(FiniteGroup::cyclic(6).is_cyclic());
}

TEST(FreeWords, ReductionAndText) {
    EXPECT_EQ(free_reduce({1, 2, -2, -1, 1}).letters, (std::vector<int>{1}));
    EXPECT_EQ(format_free_word(parse_free_word("abBA", 2)), "1");
    EXPECT_EQ(format_free_word(parse_free_word("aBc", 3)), "aBc");
    EXPECT_THROW(parse_free_word("c", 2), InvalidGroupData);
    EXPECT_TRUE(shortlex_less(parse_free_word("b", 2), parse_free_word("aa", 2)));
    EXPECT_TRUE(shortlex_less(parse_free_word("a", 2), parse_free_word("A", 2)));
}

TEST(GroupModel, RejectsMismatchedWordsAndEndomorphisms) {
    GroupModel z2 = GroupModel::free_abelian(2);
    EXPECT_THROW(z2.check_word(vec({1})), ModelMismatch);
    EXPECT_THROW(z2.check_word(FiniteElement{0}), ModelMismatch);
    EXPECT_THROW(z2.check_endomorphism(MatrixEndo{IntMatrix::identity(3)}), ModelMismatch);
    GroupModel c3 = GroupModel::finite(FiniteGroup::cyclic(3));
    EXPECT_THROW(c3.check_endomorphism(IndexMapEndo{{0, 1, 1}}), InvalidGroupData);
    EXPECT_NO_THROW(c3.check_endomorphism(IndexMapEndo{{0, 2, 1}}));
    GroupModel f2 = GroupModel::free(2, 2);
    EXPECT_THROW(f2.check_word(FreeWord{{1, -1}}), ModelMismatch);
    EXPECT_THROW(GroupModel::free(2, 0), InvalidGroupData);
}

// ---------------------------------------------------------------- twisted_conjugate

TEST(TwistedConjugate, RotationExample) {
    GroupModel m = GroupModel::free_abelian(2);
    auto r = twisted_conjugate(m, vec({1, 0}), vec({0, 0}), MatrixEndo{kRotation});
    EXPECT_EQ(std::get<AbelianVector>(r), vec({1, -1}));
}

TEST(TwistedConjugate, IdentityConjugatorLeavesBeta) {
    GroupModel ab = GroupModel::free_abelian(3);
    Endomorphism phi = MatrixEndo{IntMatrix{{1, 2, 0}, {0, 1, 3}, {4, 0, 1}}};
    EXPECT_EQ(twisted_conjugate(ab, ab.identity(), vec({3, -1, 2}), phi), GroupWord(vec({3, -1, 2})));

    GroupModel s3 = GroupModel::finite(FiniteGroup::symmetric(3));
    Endomorphism id = s3.identity_endomorphism();
    EXPECT_EQ(twisted_conjugate(s3, s3.identity(), FiniteElement{4}, id), GroupWord(FiniteElement{4}));

    GroupModel f2 = GroupModel::free(2, 2);
    Endomorphism swap = GeneratorImagesEndo{{parse_free_word("b", 2), parse_free_word("a", 2)}};
    EXPECT_EQ(twisted_conjugate(f2, f2.identity(), parse_free_word("aB", 2), swap), GroupWord(parse_free_word("aB", 2)));
}

TEST(TwistedConjugate, AbelianIdentityEndomorphismFixesBeta) {
    GroupModel c3 = GroupModel::finite(FiniteGroup::cyclic(3));
    auto r = twisted_conjugate(c3, FiniteElement{1}, FiniteElement{0}, c3.identity_endomorphism());
    EXPECT_EQ(std::get<FiniteElement>(r).index, 0u);
}

TEST(TwistedConjugate, ModelMismatchThrows) {
    GroupModel m = GroupModel::free_abelian(2);
    EXPECT_THROW(twisted_conjugate(m, FiniteElement{0}, vec({0, 0}), MatrixEndo{kRotation}), ModelMismatch);
    EXPECT_THROW(twisted_conjugate(m, vec({0, 0}), vec({0, 0}), IndexMapEndo{{0}}), ModelMismatch);
}

TEST(TwistedConjugate, ActionLawFreeAbelian) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Int> e(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + trial % 3;
        GroupModel m = GroupModel::free_abelian(n);
        Endomorphism phi = MatrixEndo{oracle::random_matrix(rng, n, n, -3, 3)};
        auto rv = [&] {
            std::vector<Int> v(n);
            for (auto& x : v)
                x = e(rng);
            return GroupWord(vec(v));
        };
        GroupWord a1 = rv(), a2 = rv(), b = rv();
        EXPECT_EQ(twisted_conjugate(m, a2, twisted_conjugate(m, a1, b, phi), phi),
                  twisted_conjugate(m, m.multiply(a2, a1), b, phi));
    }
}

TEST(TwistedConjugate, ActionLawFiniteAndFree) {
    GroupModel s3 = GroupModel::finite(FiniteGroup::symmetric(3));
    // conjugation by a transposition is an automorphism of S3
    const FiniteGroup& g = s3.finite_group();
    IndexMapEndo inner;
    for (std::size_t x = 0; x < 6; ++x)
        inner.images.push_back(g.mul(g.mul(1, x), g.inverse(1)));
    Endomorphism phi = inner;
    for (std::size_t a1 = 0; a1 < 6; ++a1)
        for (std::size_t a2 = 0; a2 < 6; ++a2)
            for (std::size_t b = 0; b < 6; ++b)
                EXPECT_EQ(twisted_conjugate(s3, FiniteElement{a2},
                                            twisted_conjugate(s3, FiniteElement{a1}, FiniteElement{b}, phi), phi),
                          twisted_conjugate(s3, FiniteElement{g.mul(a2, a1)}, FiniteElement{b}, phi));

    GroupModel f2 = GroupModel::free(2, 2);
    Endomorphism psi = GeneratorImagesEndo{{parse_free_word("ab", 2), parse_free_word("bA", 2)}};
    for (const char* a1 : {"a", "bA", "aab"})
        for (const char* a2 : {"B", "ab", "1"})
            for (const char* b : {"a", "Ba"}) {
                GroupWord w1 = parse_free_word(a1, 2), w2 = parse_free_word(a2, 2), wb = parse_free_word(b, 2);
                EXPECT_EQ(twisted_conjugate(f2, w2, twisted_conjugate(f2, w1, wb, psi), psi),
                          twisted_conjugate(f2, f2.multiply(w2, w1), wb, psi));
            }
}

// ---------------------------------------------------------------- reidemeister_classes

TEST(ReidemeisterClasses, RotationHasTwoClasses) {
    ReidemeisterClassSet set(GroupModel::free_abelian(2), MatrixEndo{kRotation});
    ASSERT_TRUE(set.class_count());
    EXPECT_EQ(*set.class_count(), 2u);
    // independent: component count of the bounded orbit merge
    EXPECT_EQ(oracle::quotient_class_count(kRotation), 2u);
}

TEST(ReidemeisterClasses, IdentityEndomorphismIsInfinite) {
    for (std::size_t n = 1; n <= 4; ++n) {
        ReidemeisterClassSet set(GroupModel::free_abelian(n), MatrixEndo{IntMatrix::identity(n)});
        auto* inf = std::get_if<InfiniteWithStructure>(&set.structure());
        ASSERT_NE(inf, nullptr);
        EXPECT_EQ(inf->free_rank, n);
        EXPECT_TRUE(inf->invariant_factors.empty());
        EXPECT_FALSE(set.class_count());
    }
}

TEST(ReidemeisterClasses, MixedTorsionAndFreePart) {
    // I - phi = diag(0, 3): Z plus Z/3
    ReidemeisterClassSet set(GroupModel::free_abelian(2), MatrixEndo{IntMatrix{{1, 0}, {0, -2}}});
    auto* inf = std::get_if<InfiniteWithStructure>(&set.structure());
    ASSERT_NE(inf, nullptr);
    EXPECT_EQ(inf->free_rank, 1u);
    EXPECT_EQ(inf->invariant_factors, (std::vector<Int>{3}));
    EXPECT_EQ(set.same_class(vec({5, 1}), vec({5, 4})), std::optional<bool>(true));
    EXPECT_EQ(set.same_class(vec({5, 1}), vec({6, 1})), std::optional<bool>(false));
}

TEST(ReidemeisterClasses, CyclicIdentityHasOneClassPerElement) {
    ReidemeisterClassSet set(GroupModel::finite(FiniteGroup::cyclic(4)), IndexMapEndo{{0, 1, 2, 3}});
    EXPECT_EQ(set.class_count(), std::optional<std::size_t>(4));
}

TEST(ReidemeisterClasses, SymmetricGroupOrdinaryConjugacy) {
    GroupModel s3 = GroupModel::finite(FiniteGroup::symmetric(3));
    ReidemeisterClassSet set(s3, s3.identity_endomorphism());
    EXPECT_EQ(set.class_count(), std::optional<std::size_t>(3));
}

TEST(ReidemeisterClasses, CountMatchesDeterminantForRandomMatrices) {
    std::mt19937_64 rng(99);
    int checked = 0;
    while (checked < 150) {
        std::size_t n = 1 + checked % 3;
        IntMatrix phi = oracle::random_matrix(rng, n, n, -3, 3);
        auto d = oracle::determinant(oracle::one_minus(phi));
        if (d == 0)
            continue;
        ReidemeisterClassSet set(GroupModel::free_abelian(n), MatrixEndo{phi});
        ASSERT_TRUE(set.class_count());
        EXPECT_EQ(oracle::BigInt(*set.class_count()), abs(d)) << phi;
        std::size_t prod = 1;
        for (Int f : set.smith().diagonal())
            prod *= static_cast<std::size_t>(f);
        EXPECT_EQ(prod, *set.class_count());
        ++checked;
    }
}

TEST(ReidemeisterClasses, SmallDeterminantAgreesWithQuotientClosure) {
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 40) {
        IntMatrix phi = oracle::random_matrix(rng, 2, 2, -2, 2);
        auto d = oracle::determinant(oracle::one_minus(phi));
        if (d == 0 || abs(d) > 30)
            continue;
        ReidemeisterClassSet set(GroupModel::free_abelian(2), MatrixEndo{phi});
        EXPECT_EQ(*set.class_count(), oracle::quotient_class_count(phi)) << phi;
        ++checked;
    }
}

TEST(ReidemeisterClasses, FreeGroupSemiDecision) {
    GroupModel f2 = GroupModel::free(2, 3);
    ReidemeisterClassSet set(f2, f2.identity_endomorphism());
    EXPECT_TRUE(set.is_semi_decided());
    // conjugates merge, distinct cyclic words do not
    EXPECT_EQ(set.class_of(parse_free_word("a", 2)), set.class_of(parse_free_word("baB", 2)));
    EXPECT_NE(set.class_of(parse_free_word("a", 2)), set.class_of(parse_free_word("b", 2)));
    EXPECT_NE(set.class_of(parse_free_word("a", 2)), set.class_of(parse_free_word("aa", 2)));
    // long word with no conjugate of length <= 3 inside the ball
    EXPECT_FALSE(set.class_of(parse_free_word("aabbab", 2)).has_value());
    EXPECT_EQ(set.same_class(parse_free_word("a", 2), parse_free_word("b", 2)), std::nullopt);
}

TEST(ReidemeisterClasses, RhoOrbitQuotientFiniteAndAbelian) {
    // Z/3 with phi = id, rho = negation: classes {0}, {1,2}
    GroupModel c3 = GroupModel::finite(FiniteGroup::cyclic(3));
    ReidemeisterClassSet fin(c3, c3.identity_endomorphism(), ExtraRelations::TwistedAndRhoOrbit,
                             IndexMapEndo{{0, 2, 1}});
    EXPECT_EQ(fin.class_count(), std::optional<std::size_t>(2));
    EXPECT_EQ(fin.class_of(FiniteElement{1}), fin.class_of(FiniteElement{2}));

    // Z with phi = 4 (coker Z/3), rho = 2: same partition
    ReidemeisterClassSet ab(GroupModel::free_abelian(1), MatrixEndo{IntMatrix{{4}}}, ExtraRelations::TwistedAndRhoOrbit,
                            MatrixEndo{IntMatrix{{2}}});
    EXPECT_EQ(ab.class_count(), std::optional<std::size_t>(2));
    EXPECT_EQ(ab.class_of(vec({1})), ab.class_of(vec({2})));
    EXPECT_NE(ab.class_of(vec({0})), ab.class_of(vec({1})));

    // infinite cokernel: rho = -1 on Z (phi = id) pairs v with -v
    ReidemeisterClassSet inf(GroupModel::free_abelian(1), MatrixEndo{IntMatrix{{1}}}, ExtraRelations::TwistedAndRhoOrbit,
                             MatrixEndo{IntMatrix{{-1}}});
    EXPECT_EQ(inf.class_of(vec({5})), inf.class_of(vec({-5})));
    EXPECT_NE(inf.class_of(vec({5})), inf.class_of(vec({4})));
    // rho = 2 on Z never cycles: undecided
    ReidemeisterClassSet grow(GroupModel::free_abelian(1), MatrixEndo{IntMatrix{{1}}}, ExtraRelations::TwistedAndRhoOrbit,
                              MatrixEndo{IntMatrix{{2}}});
    EXPECT_FALSE(grow.class_of(vec({1})).has_value());
    EXPECT_THROW(ReidemeisterClassSet(GroupModel::free_abelian(1), MatrixEndo{IntMatrix{{1}}},
                                      ExtraRelations::TwistedAndRhoOrbit),
                 std::invalid_argument);
}

// ---------------------------------------------------------------- class_of

TEST(ClassOf, RotationExamples) {
    ReidemeisterClassSet set(GroupModel::free_abelian(2), MatrixEndo{kRotation});
    EXPECT_EQ(set.class_of(vec({0, 0})), set.class_of(vec({1, -1})));
    EXPECT_NE(set.class_of(vec({0, 0})), set.class_of(vec({1, 0})));
    // independent check: (1,0) is not in the image of I - phi, (1,-1) is
    IntMatrix step = oracle::one_minus(kRotation);
    EXPECT_FALSE(oracle::in_image_bounded(step, {1, 0}, 6));
    EXPECT_TRUE(oracle::in_image_bounded(step, {1, -1}, 6));
}

TEST(ClassOf, IdentityWordIsTrivialClass) {
    ReidemeisterClassSet ab(GroupModel::free_abelian(2), MatrixEndo{kRotation});
    EXPECT_EQ(ab.class_of(vec({0, 0}))->key, (std::vector<Int>{0, 0}));
    GroupModel s3 = GroupModel::finite(FiniteGroup::symmetric(3));
    ReidemeisterClassSet fin(s3, s3.identity_endomorphism());
    EXPECT_EQ(fin.class_of(FiniteElement{0})->key, (std::vector<Int>{0}));
    GroupModel f2 = GroupModel::free(2, 2);
    ReidemeisterClassSet fr(f2, f2.identity_endomorphism());
    EXPECT_TRUE(fr.class_of(FreeWord{})->key.empty());
}

TEST(ClassOf, RepresentativeRoundTrips) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix phi = oracle::random_matrix(rng, 3, 3, -2, 2);
        if (oracle::determinant(oracle::one_minus(phi)) == 0)
            continue;
        ReidemeisterClassSet set(GroupModel::free_abelian(3), MatrixEndo{phi});
        for (const auto& c : set.known_classes())
            EXPECT_EQ(set.class_of(set.representative(c)), c);
    }
}

TEST(ClassOf, ConstantOnTwistedOrbits) {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<Int> e(-6, 6);
    // free abelian
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n = 1 + trial % 3;
        IntMatrix phi = oracle::random_matrix(rng, n, n, -3, 3);
        GroupModel m = GroupModel::free_abelian(n);
        ReidemeisterClassSet set(m, MatrixEndo{phi}, ExtraRelations::TwistedOnly, std::nullopt, 1u << 16);
        std::vector<Int> a(n), b(n);
        for (auto& x : a)
            x = e(rng);
        for (auto& x : b)
            x = e(rng);
        EXPECT_EQ(set.class_of(vec(b)), set.class_of(twisted_conjugate(m, vec(a), vec(b), MatrixEndo{phi})));
    }
    // finite: dihedral-like S3 and Z2 x Z2 with random endomorphisms
    for (const FiniteGroup& g : {FiniteGroup::symmetric(3), klein_four(), FiniteGroup::cyclic(6)}) {
        GroupModel m = GroupModel::finite(g);
        std::vector<IndexMapEndo> endos;
        // all endomorphisms by brute force over image tuples of small groups
        std::vector<std::size_t> img(g.order(), 0);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == g.order()) {
                if (g.is_endomorphism(img))
                    endos.push_back(IndexMapEndo{img});
                return;
            }
            for (std::size_t v = 0; v < g.order(); ++v) {
                img[i] = v;
                rec(i + 1);
            }
        };
        if (g.order() <= 6)
            rec(0);
        ASSERT_FALSE(endos.empty());
        std::uniform_int_distribution<std::size_t> pick(0, endos.size() - 1), el(0, g.order() - 1);
        for (int trial = 0; trial < 170; ++trial) {
            Endomorphism phi = endos[pick(rng)];
            ReidemeisterClassSet set(m, phi);
            FiniteElement a{el(rng)}, b{el(rng)};
            EXPECT_EQ(set.class_of(b), set.class_of(twisted_conjugate(m, a, b, phi)));
        }
    }
}

TEST(ClassOf, FiniteClassesPartitionAllElements) {
    GroupModel s3 = GroupModel::finite(FiniteGroup::symmetric(3));
    const FiniteGroup& g = s3.finite_group();
    IndexMapEndo inner;
    for (std::size_t x = 0; x < 6; ++x)
        inner.images.push_back(g.mul(g.mul(3, x), g.inverse(3)));
    ReidemeisterClassSet set(s3, inner);
    // brute-force orbit partition of beta -> a beta phi(a)^-1
    std::set<std::set<std::size_t>> orbits;
    for (std::size_t b = 0; b < 6; ++b) {
        std::set<std::size_t> o;
        for (std::size_t a = 0; a < 6; ++a)
            o.insert(g.mul(g.mul(a, b), g.inverse(inner.images[a])));
        orbits.insert(o);
    }
    EXPECT_EQ(set.class_count(), std::optional<std::size_t>(orbits.size()));
    for (const auto& o : orbits)
        for (auto x : o)
            EXPECT_EQ(set.class_of(FiniteElement{x}), set.class_of(FiniteElement{*o.begin()}));
}
