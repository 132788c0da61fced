#pragma once

// Seeded generators of random inputs for the property suites: Jacobian
// chains, torus maps, class sets, finite group actions on classes, and
// orbit-constant traces.

#include "fixpt/equivariant.hpp"
#include "fixpt/index.hpp"
#include "fixpt/torus.hpp"

#include <algorithm>
#include <memory>
#include <random>

namespace fixpt::random_cases {

using Rng = std::mt19937_64;

inline Int uniform(Rng& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

inline IntMatrix matrix(Rng& rng, std::size_t n, Int lo, Int hi) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = uniform(rng, lo, hi);
    return m;
}

inline JacobianChain jacobian_chain(Rng& rng, std::size_t max_dim, std::size_t max_len, Int lo, Int hi) {
    std::size_t m = static_cast<std::size_t>(uniform(rng, 1, static_cast<Int>(max_dim)));
    std::size_t l = static_cast<std::size_t>(uniform(rng, 1, static_cast<Int>(max_len)));
    std::vector<IntMatrix> blocks;
    for (std::size_t i = 0; i < l; ++i)
        blocks.push_back(matrix(rng, m, lo, hi));
    return JacobianChain(std::move(blocks));
}

/// Torus map with det(I - A) != 0.
inline TorusMap generic_torus_map(Rng& rng, std::size_t max_dim, Int lo, Int hi) {
    for (;;) {
        std::size_t m = static_cast<std::size_t>(uniform(rng, 1, static_cast<Int>(max_dim)));
        IntMatrix a = matrix(rng, m, lo, hi);
        if (determinant(identity_minus(a)) != 0)
            return TorusMap(std::move(a));
    }
}

/// Whether every iterate A^l, l | n, is generic with at most `cap` fixed points.
inline bool iterates_generic_within(const TorusMap& f, std::size_t n, std::size_t cap) {
    for (std::size_t l = 1; l <= n; ++l) {
        if (n % l != 0)
            continue;
        Int d;
        try {
            d = determinant(identity_minus(matrix_power(f.matrix, static_cast<unsigned>(l))));
        } catch (const OverflowError&) {
            return false;
        }
        if (d == 0 || static_cast<std::size_t>(d < 0 ? -d : d) > cap)
            return false;
    }
    return true;
}

inline FiniteGroup small_group(Rng& rng) {
    switch (uniform(rng, 0, 4)) {
    case 0:
        return FiniteGroup::symmetric(3);
    case 1:
        return FiniteGroup::cyclic(2).product(FiniteGroup::cyclic(2));
    default:
        return FiniteGroup::cyclic(static_cast<std::size_t>(uniform(rng, 1, 6)));
    }
}

/// A finite class set drawn from free abelian (|det(I - phi)| <= 40) or
/// finite models.
inline std::shared_ptr<const ReidemeisterClassSet> finite_class_set(Rng& rng) {
    if (uniform(rng, 0, 1) == 0) {
        for (;;) {
            std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
            IntMatrix phi = matrix(rng, n, -2, 2);
            Int d = determinant(identity_minus(phi));
            if (d != 0 && d <= 40 && d >= -40)
                return std::make_shared<const ReidemeisterClassSet>(GroupModel::free_abelian(n), MatrixEndo{phi});
        }
    }
    FiniteGroup g = uniform(rng, 0, 2) == 0 ? FiniteGroup::symmetric(3)
                                             : FiniteGroup::cyclic(static_cast<std::size_t>(uniform(rng, 1, 12)));
    std::vector<IndexMapEndo> endos;
    if (g.order() == 6 && !g.is_cyclic()) {
        // inner automorphisms and the trivial endomorphism
        for (std::size_t c = 0; c < 6; ++c) {
            IndexMapEndo e;
            for (std::size_t x = 0; x < 6; ++x)
                e.images.push_back(g.mul(g.mul(c, x), g.inverse(c)));
            endos.push_back(e);
        }
        endos.push_back(IndexMapEndo{std::vector<std::size_t>(6, 0)});
    } else {
        for (std::size_t k = 0; k < g.order(); ++k) {
            IndexMapEndo e;
            for (std::size_t x = 0; x < g.order(); ++x)
                e.images.push_back((k * x) % g.order());
            endos.push_back(e);
        }
    }
    auto phi = endos[static_cast<std::size_t>(uniform(rng, 0, static_cast<Int>(endos.size()) - 1))];
    return std::make_shared<const ReidemeisterClassSet>(GroupModel::finite(g), phi);
}

/// Random action of `group` on `classes`: the classes are shuffled and cut
/// into coset spaces G/K for random subgroups K; leftovers are fixed.
inline ClassAction random_action(Rng& rng, const FiniteGroup& group, std::vector<ClassId> classes) {
    std::shuffle(classes.begin(), classes.end(), rng);
    auto subgroups = all_subgroups(group);
    std::vector<std::map<ClassId, ClassId>> maps(group.order());
    std::size_t pos = 0;
    while (pos < classes.size()) {
        const auto& k = subgroups[static_cast<std::size_t>(uniform(rng, 0, static_cast<Int>(subgroups.size()) - 1))];
        const std::size_t index = group.order() / k.size();
        if (pos + index > classes.size()) {
            ++pos; // fixed point of the action
            continue;
        }
        // left cosets gK, identified by their sorted element lists
        std::vector<std::vector<std::size_t>> cosets;
        for (std::size_t g = 0; g < group.order(); ++g) {
            std::vector<std::size_t> c;
            for (auto x : k)
                c.push_back(group.mul(g, x));
            std::sort(c.begin(), c.end());
            if (std::find(cosets.begin(), cosets.end(), c) == cosets.end())
                cosets.push_back(c);
        }
        auto coset_of = [&](std::size_t g) {
            for (std::size_t i = 0; i < cosets.size(); ++i)
                if (std::binary_search(cosets[i].begin(), cosets[i].end(), g))
                    return i;
            return cosets.size();
        };
        for (std::size_t g = 0; g < group.order(); ++g)
            for (std::size_t i = 0; i < cosets.size(); ++i)
                maps[g][classes[pos + i]] = classes[pos + coset_of(group.mul(g, cosets[i].front()))];
        pos += index;
    }
    return ClassAction::from_permutations(group, std::move(maps));
}

/// Trace whose coefficient is constant on each orbit (possibly zero).
inline Trace orbit_constant_trace(Rng& rng, const ClassAction& action, const std::vector<ClassId>& classes) {
    Trace t;
    std::set<ClassId> done;
    for (const auto& c : classes) {
        if (done.count(c))
            continue;
        Int v = uniform(rng, 0, 2) == 0 ? 0 : uniform(rng, -3, 3);
        for (const auto& o : action.orbit(c)) {
            done.insert(o);
            t.add(o, v);
        }
    }
    return t;
}

} // namespace fixpt::random_cases
