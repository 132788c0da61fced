#include "fixpt/random_cases.hpp"
#include "fixpt/trace.hpp"

#include <gtest/gtest.h>

using namespace fixpt;

namespace {

// f^2 data of the doubled four-holed sphere: the fundamental group is
// modelled as free of rank 2 with phi = id, and the four fixed points of
// f^2 sit in the classes of a, b, aa, bb. The swap a <-> b generates the
// Z/2 action pairing x with f(x) and x' with f(x').
struct SurfaceExample {
    GroupModel model = GroupModel::free(2, 4);
    std::shared_ptr<const ReidemeisterClassSet> classes =
        std::make_shared<const ReidemeisterClassSet>(model, model.identity_endomorphism());
    Endomorphism swap = GeneratorImagesEndo{{parse_free_word("b", 2), parse_free_word("a", 2)}};
    std::vector<FixedPointRecord> records{
        {"x", 1, parse_free_word("a", 2), {}},
        {"f(x)", 1, parse_free_word("b", 2), {}},
        {"x'", 1, parse_free_word("aa", 2), {}},
        {"f(x')", 1, parse_free_word("bb", 2), {}},
    };
    ClassAction action = ClassAction::from_endomorphism(classes, swap, 2);
};

ClassId id(Int v) { return ClassId{{v}}; }

} // namespace

TEST(ReidemeisterTrace, SurfaceExampleHasFourTerms) {
    SurfaceExample ex;
    Trace t = reidemeister_trace(ex.records, *ex.classes);
    EXPECT_TRUE(t.conclusive());
    EXPECT_EQ(nielsen_number(t), 4u);
    for (const auto& [c, v] : t.coefficients())
        EXPECT_EQ(v, 1);
}

TEST(ReidemeisterTrace, EmptyRecordsGiveZeroTrace) {
    SurfaceExample ex;
    Trace t = reidemeister_trace({}, *ex.classes);
    EXPECT_TRUE(t.is_zero());
    EXPECT_EQ(nielsen_number(t), 0u);
}

TEST(ReidemeisterTrace, OppositeIndicesInOneClassCancel) {
    ReidemeisterClassSet set(GroupModel::free_abelian(2), MatrixEndo{IntMatrix{{0, -1}, {1, 0}}});
    std::vector<FixedPointRecord> recs{{"p", 1, AbelianVector{{0, 0}}, {}}, {"q", -1, AbelianVector{{1, -1}}, {}}};
    EXPECT_TRUE(reidemeister_trace(recs, set).is_zero());
}

TEST(ReidemeisterTrace, UndecidedRecordsAreReportedNotDropped) {
    GroupModel f2 = GroupModel::free(2, 2);
    ReidemeisterClassSet set(f2, f2.identity_endomorphism());
    std::vector<FixedPointRecord> recs{{"near", 1, parse_free_word("a", 2), {}},
                                       {"far", 1, parse_free_word("aabbab", 2), {}}};
    Trace t = reidemeister_trace(recs, set);
    EXPECT_FALSE(t.conclusive());
    EXPECT_EQ(t.unresolved(), (std::vector<std::string>{"far"}));
    EXPECT_EQ(nielsen_number(t), 1u);
}

TEST(ReidemeisterTrace, ModelMismatchPropagates) {
    ReidemeisterClassSet set(GroupModel::free_abelian(2), MatrixEndo{IntMatrix::identity(2)});
    std::vector<FixedPointRecord> recs{{"p", 1, FiniteElement{0}, {}}};
    EXPECT_THROW(reidemeister_trace(recs, set), ModelMismatch);
}

TEST(NielsenNumber, CountsNonzeroTerms) {
    Trace t;
    EXPECT_EQ(nielsen_number(t), 0u);
    t.add(id(1), -1);
    t.add(id(2), 3);
    EXPECT_EQ(nielsen_number(t), 2u);
    t.add(id(2), -3);
    EXPECT_EQ(nielsen_number(t), 1u);
}

TEST(ClassAction, LawsHoldForGeneratedActions) {
    SurfaceExample ex;
    EXPECT_TRUE(ex.action.satisfies_laws(ex.classes->known_classes()));
    random_cases::Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        auto set = random_cases::finite_class_set(rng);
        auto group = random_cases::small_group(rng);
        auto action = random_cases::random_action(rng, group, set->known_classes());
        EXPECT_TRUE(action.satisfies_laws(set->known_classes()));
    }
}

TEST(ClassAction, LawViolationDetected) {
    // generator of order 3 presented as a Z/2 action
    auto bad = ClassAction::cyclic(2, [](const ClassId& c) { return ClassId{{(c.key[0] + 1) % 3}}; });
    EXPECT_FALSE(bad.satisfies_laws({id(0)}));
}

TEST(OrbitIndexConstancy, Examples) {
    SurfaceExample ex;
    EXPECT_TRUE(check_orbit_index_constancy(ex.records, *ex.classes, ex.action));
    Trace t;
    t.add(id(0), 2);
    EXPECT_TRUE(check_orbit_index_constancy(t, ClassAction::trivial()));
    auto swap01 = ClassAction::cyclic(2, [](const ClassId& c) { return ClassId{{1 - c.key[0]}}; });
    t.add(id(1), -1);
    EXPECT_FALSE(check_orbit_index_constancy(t, swap01));
}

TEST(ReduceTrace, TrivialActionKeepsCoefficients) {
    Trace t;
    t.add(id(3), 2);
    t.add(id(5), -1);
    auto r = reduce_trace(t, ClassAction::trivial(FiniteGroup::cyclic(3)));
    EXPECT_EQ(r.orbit_coefficients, t.coefficients());
    for (const auto& [c, s] : r.orbit_sizes)
        EXPECT_EQ(s, 1u);
}

TEST(ReduceTrace, SurfaceExampleHasTwoOrbitTerms) {
    SurfaceExample ex;
    auto r = reduce_trace(reidemeister_trace(ex.records, *ex.classes), ex.action);
    EXPECT_EQ(r.nonzero_terms(), 2u);
    for (const auto& [c, v] : r.orbit_coefficients) {
        EXPECT_EQ(r.orbit_sizes.at(c), 2u);
        EXPECT_EQ(v, 2); // |orbit| * index
    }
}

TEST(ReduceTrace, ZeroTraceReducesToZero) {
    EXPECT_TRUE(reduce_trace(Trace{}, ClassAction::trivial(FiniteGroup::symmetric(3))).is_zero());
}

TEST(ReduceTrace, AdditiveAndOrbitFormula) {
    random_cases::Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        auto set = random_cases::finite_class_set(rng);
        auto action = random_cases::random_action(rng, random_cases::small_group(rng), set->known_classes());
        Trace t1 = random_cases::orbit_constant_trace(rng, action, set->known_classes());
        Trace t2 = random_cases::orbit_constant_trace(rng, action, set->known_classes());
        EXPECT_EQ(reduce_trace(t1 + t2, action), reduce_trace(t1, action) + reduce_trace(t2, action));
        auto r = reduce_trace(t1, action);
        for (const auto& [orbit_id, v] : r.orbit_coefficients)
            EXPECT_EQ(v, static_cast<Int>(action.orbit(orbit_id).size()) * t1.coefficient(orbit_id));
        // every nonzero class lands in a nonzero orbit term
        for (const auto& [c, v] : t1.coefficients())
            EXPECT_TRUE(r.orbit_coefficients.count(*action.orbit(c).begin()));
    }
}

TEST(VanishingEquivalence, Examples) {
    EXPECT_TRUE(vanishing_equivalence(Trace{}, ClassAction::trivial(FiniteGroup::cyclic(4))));
    SurfaceExample ex;
    Trace t = reidemeister_trace(ex.records, *ex.classes);
    EXPECT_FALSE(t.is_zero());
    EXPECT_TRUE(vanishing_equivalence(t, ex.action));
}

TEST(VanishingEquivalence, RandomOrbitConstantTraces) {
    random_cases::Rng rng(500);
    int zero_traces = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto set = random_cases::finite_class_set(rng);
        auto action = random_cases::random_action(rng, random_cases::small_group(rng), set->known_classes());
        Trace t = random_cases::orbit_constant_trace(rng, action, set->known_classes());
        ASSERT_TRUE(check_orbit_index_constancy(t, action));
        EXPECT_TRUE(vanishing_equivalence(t, action));
        EXPECT_EQ(nielsen_number(t) == 0, reduce_trace(t, action).is_zero());
        zero_traces += t.is_zero();
    }
    EXPECT_GT(zero_traces, 0);
}

TEST(VanishingEquivalence, FailsWithoutOrbitConstancy) {
    // coinvariants can cancel when indices differ inside an orbit
    auto swap01 = ClassAction::cyclic(2, [](const ClassId& c) { return ClassId{{1 - c.key[0]}}; });
    Trace t;
    t.add(id(0), 1);
    t.add(id(1), -1);
    EXPECT_FALSE(vanishing_equivalence(t, swap01));
}
