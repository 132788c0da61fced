#pragma once

// Seeded property suites. Each suite draws its cases from one mt19937_64
// stream, so a (suite, trials, seed) triple always replays the same cases.

#include "fixpt/equivariant.hpp"
#include "fixpt/index.hpp"
#include "fixpt/periodic.hpp"
#include "fixpt/random_cases.hpp"

#include "json.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace fixpt::verify {

using Json = nlohmann::json;

struct SuiteResult {
    std::string suite;
    std::size_t trials = 0;
    std::size_t failures = 0;
    Json counterexample; // first failing case, null when none
    Json stats = Json::object();

    bool ok() const { return failures == 0; }
    Json to_json() const {
        return Json{{"suite", suite}, {"trials", trials}, {"failures", failures}, {"pass", ok()},
                    {"counterexample", counterexample}, {"stats", stats}};
    }
};

namespace detail {

inline std::string show(const IntMatrix& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

inline void fail(SuiteResult& r, Json c) {
    if (r.failures++ == 0)
        r.counterexample = std::move(c);
}

} // namespace detail

/// Block Jacobian determinant equals det(I - chain product), and the index
/// of the iterate is the same from every starting point of the orbit.
inline SuiteResult fuller_identity(std::size_t trials, std::uint64_t seed) {
    SuiteResult r{"fuller-identity"};
    random_cases::Rng rng(seed);
    while (r.trials < trials) {
        auto chain = random_cases::jacobian_chain(rng, 3, 5, -3, 3);
        auto id = fuller_determinant_identity(chain);
        if (id.rhs == 0)
            continue; // degenerate periodic point
        ++r.trials;
        if (!id.equal || !iterate_index_invariance(chain)) {
            Json blocks = Json::array();
            for (const auto& b : chain.blocks())
                blocks.push_back(detail::show(b));
            detail::fail(r, Json{{"blocks", blocks}, {"lhs", id.lhs}, {"rhs", id.rhs}});
        }
    }
    return r;
}

/// Fixed points, twisted classes, Nielsen number and |det(I - A)| agree, and
/// the point-to-class map is a bijection.
inline SuiteResult torus_bijection(std::size_t trials, std::uint64_t seed) {
    SuiteResult r{"torus-bijection"};
    random_cases::Rng rng(seed);
    for (; r.trials < trials; ++r.trials) {
        TorusMap f = random_cases::generic_torus_map(rng, 3, -3, 3);
        auto fp = torus_fixed_points(f);
        auto tt = torus_trace(f);
        const Int d = fp.lefschetz < 0 ? -fp.lefschetz : fp.lefschetz;
        const auto ud = static_cast<std::size_t>(d);
        bool ok = fp.points.size() == ud && tt.nielsen == ud && tt.classes->class_count() == std::optional(ud) &&
                  torus_class_bijection_check(f);
        if (!ok)
            detail::fail(r, Json{{"matrix", detail::show(f.matrix)},
                                 {"det", d},
                                 {"points", fp.points.size()},
                                 {"nielsen", tt.nielsen}});
    }
    return r;
}

/// For orbit-constant traces, the reduced trace vanishes exactly when the
/// trace does, and each orbit coefficient is |orbit| times the common index.
inline SuiteResult reduce_vanishing(std::size_t trials, std::uint64_t seed) {
    SuiteResult r{"reduce-vanishing"};
    random_cases::Rng rng(seed);
    std::size_t abelian = 0, finite = 0, zero = 0;
    for (; r.trials < trials; ++r.trials) {
        auto set = random_cases::finite_class_set(rng);
        (set->model().is_finite() ? finite : abelian) += 1;
        FiniteGroup g = random_cases::small_group(rng);
        auto action = random_cases::random_action(rng, g, set->known_classes());
        Trace t = random_cases::orbit_constant_trace(rng, action, set->known_classes());
        zero += t.is_zero();
        auto red = reduce_trace(t, action);
        bool ok = check_orbit_index_constancy(t, action) && vanishing_equivalence(t, action) &&
                  (nielsen_number(t) == 0) == red.is_zero();
        for (const auto& [c, v] : red.orbit_coefficients)
            ok &= v == static_cast<Int>(action.orbit(c).size()) * t.coefficient(c) &&
                  red.orbit_sizes.at(c) == action.orbit(c).size();
        if (!ok)
            detail::fail(r, Json{{"model", set->model().kind_name()},
                                 {"group_order", g.order()},
                                 {"nielsen", nielsen_number(t)},
                                 {"reduced_terms", red.nonzero_terms()}});
    }
    r.stats = Json{{"free_abelian", abelian}, {"finite", finite}, {"zero_traces", zero}};
    return r;
}

/// For every n <= 6 and every l | n: the number of nonzero orbit terms
/// vanishes iff N(f^l) = |det(I - A^l)| does. A map counts as a case when
/// its first iterate is usable; values of n with a non-generic iterate, or
/// one with more than kConjectureFixedPointCap fixed points, are skipped.
inline constexpr std::size_t kConjectureFixedPointCap = 5000;
inline constexpr std::size_t kConjectureMaxN = 6;

inline SuiteResult conjecture_biconditional(std::size_t trials, std::uint64_t seed) {
    SuiteResult r{"conjecture-biconditional"};
    random_cases::Rng rng(seed);
    std::size_t gaps = 0, pairs = 0, skipped = 0;
    Json example;
    while (r.trials < trials) {
        TorusMap f = random_cases::generic_torus_map(rng, 3, -3, 3);
        if (!random_cases::iterates_generic_within(f, 1, kConjectureFixedPointCap))
            continue;
        ++r.trials;
        for (std::size_t n = 1; n <= kConjectureMaxN; ++n) {
            if (!random_cases::iterates_generic_within(f, n, kConjectureFixedPointCap)) {
                ++skipped;
                continue;
            }
            ++pairs;
            auto rep = conjecture_comparison(periodic_obstruction_torus(f, n), torus_iterate_nielsen_numbers(f, n));
            if (!rep.biconditional_holds())
                detail::fail(r, Json{{"matrix", detail::show(f.matrix)}, {"n", n}});
            for (const auto& row : rep.rows)
                if (row.reduced_count < row.nielsen) {
                    ++gaps;
                    if (example.is_null())
                        example = Json{{"matrix", detail::show(f.matrix)}, {"n", n}, {"l", row.l},
                                       {"count", row.reduced_count}, {"nielsen", row.nielsen}};
                }
        }
    }
    r.stats = Json{{"map_n_pairs", pairs}, {"skipped_pairs", skipped}, {"strict_gaps", gaps}, {"gap_example", example}};
    return r;
}

/// Cyclic groups: one class per divisor k with Weyl order n/k. S3: Weyl
/// orders 6, 1, 2, 1. Deterministic.
inline SuiteResult subgroup_lattice(std::size_t max_n = 12) {
    SuiteResult r{"subgroup-lattice"};
    for (std::size_t n = 1; n <= max_n; ++n, ++r.trials) {
        auto cls = subgroup_conjugacy_classes(FiniteGroup::cyclic(n));
        std::vector<std::size_t> orders, weyl, expected_weyl;
        for (const auto& c : cls) {
            orders.push_back(c.order());
            weyl.push_back(c.weyl.order());
        }
        for (std::size_t k : divisors(n))
            expected_weyl.push_back(n / k);
        if (orders != divisors(n) || weyl != expected_weyl)
            detail::fail(r, Json{{"n", n}, {"orders", orders}, {"weyl", weyl}});
    }
    auto s3 = subgroup_conjugacy_classes(FiniteGroup::symmetric(3));
    std::vector<std::size_t> weyl;
    for (const auto& c : s3)
        weyl.push_back(c.weyl.order());
    ++r.trials;
    if (weyl != std::vector<std::size_t>{6, 1, 2, 1})
        detail::fail(r, Json{{"group", "S3"}, {"weyl", weyl}});
    r.stats = Json{{"s3_weyl_orders", weyl}};
    return r;
}

/// Gap conditions for the Z/n action on M^n: dim M = 3 passes for every
/// n, dim M = 2 fails for every n (M itself is below dimension 3).
inline SuiteResult gap_fuller(std::size_t max_n = 12) {
    SuiteResult r{"gap-fuller"};
    for (std::size_t n = 1; n <= max_n; ++n, ++r.trials) {
        auto [s3, i3] = fuller_strata(3, n);
        auto [s2, i2] = fuller_strata(2, n);
        const bool three = gap_condition_report(s3, i3).pass();
        const bool two = gap_condition_report(s2, i2).pass();
        if (!three || two)
            detail::fail(r, Json{{"n", n}, {"dim3", three}, {"dim2", two}});
    }
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"fuller-identity", "torus-bijection", "reduce-vanishing",
                                                "conjecture-biconditional", "subgroup-lattice", "gap-fuller"};
    return names;
}

/// Runs a named suite. The lattice and gap suites are exhaustive and ignore
/// `trials` and `seed`. Throws std::invalid_argument for an unknown name.
inline SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
    if (name == "fuller-identity")
        return fuller_identity(trials, seed);
    if (name == "torus-bijection")
        return torus_bijection(trials, seed);
    if (name == "reduce-vanishing")
        return reduce_vanishing(trials, seed);
    if (name == "conjecture-biconditional")
        return conjecture_biconditional(trials, seed);
    if (name == "subgroup-lattice")
        return subgroup_lattice();
    if (name == "gap-fuller")
        return gap_fuller();
    throw std::invalid_argument("unknown suite \"" + name + "\"");
}

} // namespace fixpt::verify
