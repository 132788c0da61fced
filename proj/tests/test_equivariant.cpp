#include "fixpt/equivariant.hpp"
#include "fixpt/periodic.hpp"
#include "fixpt/random_cases.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fixpt;

namespace {

std::vector<std::size_t> weyl_orders(const std::vector<SubgroupClass>& cls) {
    std::vector<std::size_t> out;
    for (const auto& c : cls)
        out.push_back(c.weyl.order());
    return out;
}

std::vector<std::vector<std::size_t>> table_of(const FiniteGroup& g) {
    std::vector<std::vector<std::size_t>> t(g.order(), std::vector<std::size_t>(g.order()));
    for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = 0; b < g.order(); ++b)
            t[a][b] = g.mul(a, b);
    return t;
}

// f^2 data of the four-holed sphere example, carried by the trivial subgroup
// of Z/2 whose Weyl group Z/2 swaps the two halves.
FixedComponentInput surface_component(const FiniteGroup& weyl) {
    GroupModel f2 = GroupModel::free(2, 4);
    Endomorphism swap = GeneratorImagesEndo{{parse_free_word("b", 2), parse_free_word("a", 2)}};
    auto classes = std::make_shared<const ReidemeisterClassSet>(f2, f2.identity_endomorphism());
    auto base = ClassAction::from_endomorphism(classes, swap, 2);
    ClassAction action(weyl, [base](std::size_t g, const ClassId& c) { return base.apply(g, c); });
    return FixedComponentInput{"M", classes,
                               {{"x", 1, parse_free_word("a", 2), {}},
                                {"f(x)", 1, parse_free_word("b", 2), {}},
                                {"x'", 1, parse_free_word("aa", 2), {}},
                                {"f(x')", 1, parse_free_word("bb", 2), {}}},
                               action};
}

} // namespace

TEST(SubgroupClasses, CyclicFour) {
    auto cls = subgroup_conjugacy_classes(FiniteGroup::cyclic(4));
    ASSERT_EQ(cls.size(), 3u);
    EXPECT_EQ(cls[0].representative, (std::vector<std::size_t>{0}));
    EXPECT_EQ(cls[1].representative, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(cls[2].representative, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(weyl_orders(cls), (std::vector<std::size_t>{4, 2, 1}));
}

TEST(SubgroupClasses, TrivialGroup) {
    auto cls = subgroup_conjugacy_classes(FiniteGroup::cyclic(1));
    ASSERT_EQ(cls.size(), 1u);
    EXPECT_EQ(cls[0].weyl.order(), 1u);
}

TEST(SubgroupClasses, SymmetricThree) {
    auto cls = subgroup_conjugacy_classes(FiniteGroup::symmetric(3));
    ASSERT_EQ(cls.size(), 4u);
    EXPECT_EQ(weyl_orders(cls), (std::vector<std::size_t>{6, 1, 2, 1}));
    EXPECT_EQ(cls[1].conjugates.size(), 3u);
    EXPECT_EQ(cls[2].conjugates.size(), 1u);
    EXPECT_EQ(cls[1].order(), 2u);
    EXPECT_EQ(cls[2].order(), 3u);
}

TEST(SubgroupClasses, OrderBound) {
    EXPECT_THROW(subgroup_conjugacy_classes(FiniteGroup::cyclic(65)), CapacityExceeded);
    EXPECT_THROW(subgroup_conjugacy_classes(FiniteGroup::cyclic(8), 4), CapacityExceeded);
}

TEST(SubgroupClasses, AgreeWithSubsetScan) {
    std::vector<FiniteGroup> groups{FiniteGroup::cyclic(1), FiniteGroup::cyclic(6), FiniteGroup::cyclic(8),
                                    FiniteGroup::symmetric(3),
                                    FiniteGroup::cyclic(2).product(FiniteGroup::cyclic(2)),
                                    FiniteGroup::cyclic(2).product(FiniteGroup::cyclic(4)),
                                    FiniteGroup::cyclic(2).product(FiniteGroup::cyclic(2)).product(FiniteGroup::cyclic(2))};
    for (const auto& g : groups) {
        auto brute = oracle::subset_scan_subgroups(table_of(g));
        auto subs = all_subgroups(g);
        std::set<std::vector<std::size_t>> a(brute.begin(), brute.end()), b(subs.begin(), subs.end());
        EXPECT_EQ(a, b);
        auto cls = subgroup_conjugacy_classes(g);
        std::size_t covered = 0;
        for (const auto& c : cls) {
            covered += c.conjugates.size();
            EXPECT_EQ(g.order() % c.order(), 0u);
            EXPECT_EQ(c.weyl.order() * c.order(), c.normalizer.size());
            for (const auto& k : c.conjugates) {
                EXPECT_TRUE(is_subgroup(g, k));
                EXPECT_EQ(k.size(), c.order());
            }
            // normalizer by brute force
            std::vector<std::size_t> norm;
            for (std::size_t x = 0; x < g.order(); ++x) {
                std::set<std::size_t> conj;
                for (auto h : c.representative)
                    conj.insert(g.mul(g.mul(x, h), g.inverse(x)));
                if (conj == std::set<std::size_t>(c.representative.begin(), c.representative.end()))
                    norm.push_back(x);
            }
            EXPECT_EQ(c.normalizer, norm);
        }
        EXPECT_EQ(covered, subs.size());
    }
}

TEST(SubgroupClasses, CyclicGroupsMatchDivisors) {
    for (std::size_t n = 1; n <= 12; ++n) {
        auto cls = subgroup_conjugacy_classes(FiniteGroup::cyclic(n));
        auto divs = divisors(n);
        ASSERT_EQ(cls.size(), divs.size());
        for (std::size_t i = 0; i < cls.size(); ++i) {
            EXPECT_EQ(cls[i].order(), divs[i]);
            EXPECT_EQ(cls[i].weyl.order(), n / divs[i]);
            EXPECT_TRUE(cls[i].weyl.is_cyclic());
        }
    }
}

TEST(Assembly, EmptyDataIsZero) {
    auto inv = assemble_equivariant_invariant(FiniteGroup::symmetric(3), {});
    ASSERT_EQ(inv.summands.size(), 4u);
    auto v = invariant_vanishes(inv);
    EXPECT_TRUE(v.vanishes);
    EXPECT_EQ(v.per_class_nielsen, (std::vector<std::size_t>(4, 0)));
}

TEST(Assembly, SurfaceExampleOnFreeStratum) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    auto cls = subgroup_conjugacy_classes(z2);
    auto inv = assemble_equivariant_invariant(z2, {{{0}, {surface_component(cls[0].weyl)}}});
    ASSERT_EQ(inv.summands.size(), 2u);
    EXPECT_EQ(inv.summands[0].components.at(0).reduced.nonzero_terms(), 2u);
    EXPECT_TRUE(inv.summands[1].components.empty());
    auto v = invariant_vanishes(inv);
    EXPECT_FALSE(v.vanishes);
    EXPECT_EQ(v.per_class_nielsen, (std::vector<std::size_t>{4, 0}));
}

TEST(Assembly, TrivialWeylKeepsAllTerms) {
    // on the whole group the Weyl group is trivial and nothing merges
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    auto cls = subgroup_conjugacy_classes(z2);
    auto comp = surface_component(FiniteGroup::cyclic(2));
    comp.action = ClassAction::trivial(cls[1].weyl);
    auto inv = assemble_equivariant_invariant(z2, {{{0, 1}, {comp}}});
    EXPECT_EQ(inv.summands[1].components.at(0).reduced.nonzero_terms(), 4u);
}

TEST(Assembly, MixedClassesDoNotVanish) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    auto cls = subgroup_conjugacy_classes(z2);
    auto zero = surface_component(cls[1].weyl);
    zero.records.clear();
    zero.action = ClassAction::trivial(cls[1].weyl);
    auto inv = assemble_equivariant_invariant(z2, {{{0}, {surface_component(cls[0].weyl)}}, {{0, 1}, {zero}}});
    auto v = invariant_vanishes(inv);
    EXPECT_FALSE(v.vanishes);
    EXPECT_EQ(v.per_class_nielsen, (std::vector<std::size_t>{4, 0}));
}

TEST(Assembly, RejectsBadData) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    auto cls = subgroup_conjugacy_classes(z2);
    // indices differ inside a Weyl orbit
    auto bad = surface_component(cls[0].weyl);
    bad.records[1].index = -1;
    EXPECT_THROW(assemble_equivariant_invariant(z2, {{{0}, {bad}}}), OrbitIndexInconsistency);
    // action by a group of the wrong order
    auto wrong = surface_component(cls[0].weyl);
    wrong.action = ClassAction::trivial(FiniteGroup::cyclic(3));
    EXPECT_THROW(assemble_equivariant_invariant(z2, {{{0}, {wrong}}}), std::invalid_argument);
    // not a subgroup
    EXPECT_THROW(assemble_equivariant_invariant(FiniteGroup::cyclic(4), {{{0, 1}, {}}}), std::invalid_argument);
    // same class twice
    EXPECT_THROW(assemble_equivariant_invariant(z2, {{{0}, {}}, {{0}, {}}}), std::invalid_argument);
}

TEST(Assembly, VanishingAgreesWithUnreducedTraces) {
    random_cases::Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        FiniteGroup g = random_cases::small_group(rng);
        auto cls = subgroup_conjugacy_classes(g);
        std::vector<SubgroupInput> data;
        bool all_zero = true;
        for (const auto& c : cls) {
            if (random_cases::uniform(rng, 0, 1) == 0)
                continue;
            auto set = random_cases::finite_class_set(rng);
            auto action = random_cases::random_action(rng, c.weyl, set->known_classes());
            Trace t = random_cases::orbit_constant_trace(rng, action, set->known_classes());
            std::vector<FixedPointRecord> recs;
            std::size_t i = 0;
            for (const auto& [id, v] : t.coefficients()) {
                // coefficient v as |v| records of sign v
                for (Int j = 0; j < (v < 0 ? -v : v); ++j)
                    recs.push_back({"p" + std::to_string(i++), v < 0 ? -1 : 1, set->representative(id), {}});
            }
            all_zero &= t.is_zero();
            data.push_back({c.representative, {{"C", set, recs, action}}});
        }
        auto v = invariant_vanishes(assemble_equivariant_invariant(g, data));
        EXPECT_EQ(v.vanishes, all_zero);
    }
}

TEST(GapReport, FullerDimThree) {
    auto [strata, inc] = fuller_strata(3, 4);
    ASSERT_EQ(strata.size(), 3u);
    EXPECT_EQ(strata[0].dim, 12);
    EXPECT_EQ(strata[1].dim, 6);
    EXPECT_EQ(strata[2].dim, 3);
    auto rep = gap_condition_report(strata, inc);
    EXPECT_TRUE(rep.pass());
}

TEST(GapReport, FullerDimTwoFailsAtDeepestStratum) {
    auto [strata, inc] = fuller_strata(2, 2);
    auto rep = gap_condition_report(strata, inc);
    EXPECT_FALSE(rep.pass());
    EXPECT_TRUE(rep.strata[0].min_dim);
    EXPECT_FALSE(rep.strata[1].min_dim);
    ASSERT_EQ(rep.strata[1].codim.size(), 1u);
    EXPECT_TRUE(rep.strata[1].codim[0].ok);
}

TEST(GapReport, SingleStratumAndCodimFailure) {
    EXPECT_TRUE(gap_condition_report({{"H", 5}}, {}).pass());
    auto rep = gap_condition_report({{"K", 5}, {"H", 4}}, {{"K", "H"}});
    EXPECT_FALSE(rep.pass());
    EXPECT_FALSE(rep.strata[1].codim[0].ok);
    EXPECT_THROW(gap_condition_report({{"K", 5}}, {{"K", "H"}}), std::invalid_argument);
    EXPECT_THROW(gap_condition_report({{"K", 5}, {"K", 4}}, {}), std::invalid_argument);
}
