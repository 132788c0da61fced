#pragma once

// Finite group actions: conjugacy classes of subgroups with their normalizers
// and Weyl groups, the equivariant invariant as a direct sum over subgroup
// classes of reduced traces, and the dimension gap report.

#include "fixpt/trace.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fixpt {

inline constexpr std::size_t kMaxSubgroupSearchOrder = 64;

class OrbitIndexInconsistency : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SubgroupClass {
    std::vector<std::size_t> representative; // sorted element indices
    std::vector<std::vector<std::size_t>> conjugates;
    std::vector<std::size_t> normalizer;
    FiniteGroup weyl;
    std::vector<std::size_t> weyl_lifts; // normalizer element lifting each Weyl element

    std::size_t order() const { return representative.size(); }
};

namespace detail {

using ElementMask = std::uint64_t;

inline ElementMask bit(std::size_t g) { return ElementMask{1} << g; }

inline std::vector<std::size_t> mask_elements(ElementMask m) {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; m; ++g, m >>= 1)
        if (m & 1u)
            out.push_back(g);
    return out;
}

inline ElementMask closure(const FiniteGroup& G, ElementMask m) {
    m |= bit(0);
    for (;;) {
        ElementMask next = m;
        auto els = mask_elements(m);
        for (auto a : els)
            for (auto b : els)
                next |= bit(G.mul(a, b));
        if (next == m)
            return m;
        m = next;
    }
}

inline ElementMask conjugate(const FiniteGroup& G, ElementMask h, std::size_t g) {
    ElementMask out = 0;
    for (auto x : mask_elements(h))
        out |= bit(G.mul(G.mul(g, x), G.inverse(g)));
    return out;
}

inline bool mask_less(ElementMask a, ElementMask b) {
    auto pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb)
        return pa < pb;
    return mask_elements(a) < mask_elements(b);
}

} // namespace detail

/// Every subgroup of the group, as sorted element lists ordered by size.
inline std::vector<std::vector<std::size_t>> all_subgroups(const FiniteGroup& G,
                                                           std::size_t max_order = kMaxSubgroupSearchOrder) {
    if (G.order() > max_order || G.order() > 64)
        throw CapacityExceeded("subgroup enumeration bounded at order " + std::to_string(std::min<std::size_t>(max_order, 64)));
    using detail::ElementMask;
    std::set<ElementMask> found{detail::bit(0)};
    std::vector<ElementMask> todo{detail::bit(0)};
    while (!todo.empty()) {
        ElementMask h = todo.back();
        todo.pop_back();
        for (std::size_t g = 0; g < G.order(); ++g) {
            if (h & detail::bit(g))
                continue;
            ElementMask k = detail::closure(G, h | detail::bit(g));
            if (found.insert(k).second)
                todo.push_back(k);
        }
    }
    std::vector<ElementMask> sorted(found.begin(), found.end());
    std::sort(sorted.begin(), sorted.end(), detail::mask_less);
    std::vector<std::vector<std::size_t>> out;
    for (auto m : sorted)
        out.push_back(detail::mask_elements(m));
    return out;
}

inline bool is_subgroup(const FiniteGroup& G, const std::vector<std::size_t>& elements) {
    if (elements.empty())
        return false;
    detail::ElementMask m = 0;
    for (auto e : elements) {
        if (e >= G.order() || e >= 64)
            return false;
        m |= detail::bit(e);
    }
    return detail::closure(G, m) == m && (m & detail::bit(0));
}

/// Conjugacy classes of subgroups with normalizers and Weyl groups.
inline std::vector<SubgroupClass> subgroup_conjugacy_classes(const FiniteGroup& G,
                                                             std::size_t max_order = kMaxSubgroupSearchOrder) {
    using detail::ElementMask;
    auto subs = all_subgroups(G, max_order);
    std::set<ElementMask> assigned;
    std::vector<SubgroupClass> out;
    for (const auto& s : subs) {
        ElementMask h = 0;
        for (auto e : s)
            h |= detail::bit(e);
        if (assigned.count(h))
            continue;
        SubgroupClass c;
        c.representative = s;
        std::set<ElementMask> conj;
        ElementMask normalizer = 0;
        for (std::size_t g = 0; g < G.order(); ++g) {
            ElementMask k = detail::conjugate(G, h, g);
            conj.insert(k);
            if (k == h)
                normalizer |= detail::bit(g);
        }
        std::vector<ElementMask> conj_sorted(conj.begin(), conj.end());
        std::sort(conj_sorted.begin(), conj_sorted.end(), detail::mask_less);
        for (auto k : conj_sorted) {
            assigned.insert(k);
            c.conjugates.push_back(detail::mask_elements(k));
        }
        c.normalizer = detail::mask_elements(normalizer);

        // cosets nH in N(H), the coset of the identity first
        std::vector<ElementMask> cosets;
        for (auto n : c.normalizer) {
            ElementMask coset = 0;
            for (auto x : s)
                coset |= detail::bit(G.mul(n, x));
            if (std::find(cosets.begin(), cosets.end(), coset) == cosets.end()) {
                cosets.push_back(coset);
                c.weyl_lifts.push_back(n);
            }
        }
        auto coset_of = [&](std::size_t g) {
            for (std::size_t i = 0; i < cosets.size(); ++i)
                if (cosets[i] & detail::bit(g))
                    return i;
            throw std::logic_error("element outside the normalizer");
        };
        std::vector<std::vector<std::size_t>> table(cosets.size(), std::vector<std::size_t>(cosets.size()));
        std::vector<std::string> names;
        for (std::size_t a = 0; a < cosets.size(); ++a) {
            names.push_back(G.names()[c.weyl_lifts[a]] + "H");
            for (std::size_t b = 0; b < cosets.size(); ++b)
                table[a][b] = coset_of(G.mul(c.weyl_lifts[a], c.weyl_lifts[b]));
        }
        c.weyl = FiniteGroup(std::move(table), std::move(names));
        out.push_back(std::move(c));
    }
    return out;
}

/// Index of the conjugacy class containing the given subgroup.
inline std::optional<std::size_t> find_subgroup_class(const std::vector<SubgroupClass>& classes,
                                                      std::vector<std::size_t> subgroup) {
    std::sort(subgroup.begin(), subgroup.end());
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (const auto& c : classes[i].conjugates)
            if (c == subgroup)
                return i;
    return std::nullopt;
}

// ---------------------------------------------------------------- assembly

/// Data of one connected component of the H-fixed submanifold.
struct FixedComponentInput {
    std::string name;
    std::shared_ptr<const ReidemeisterClassSet> classes;
    std::vector<FixedPointRecord> records;
    ClassAction action; // by the Weyl group of H
};

struct SubgroupInput {
    std::vector<std::size_t> subgroup;
    std::vector<FixedComponentInput> components;
};

struct ComponentSummand {
    std::string name;
    Trace trace;
    ReducedTrace reduced;
    std::size_t nielsen = 0;
};

struct SubgroupSummand {
    SubgroupClass subgroup;
    std::vector<ComponentSummand> components;

    std::size_t nielsen() const {
        std::size_t n = 0;
        for (const auto& c : components)
            n += c.nielsen;
        return n;
    }
    bool reduced_zero() const {
        for (const auto& c : components)
            if (!c.reduced.is_zero())
                return false;
        return true;
    }
};

struct EquivariantInvariant {
    std::vector<SubgroupSummand> summands; // one per conjugacy class, lattice order
};

inline EquivariantInvariant assemble_equivariant_invariant(const FiniteGroup& G, const std::vector<SubgroupInput>& data) {
    auto classes = subgroup_conjugacy_classes(G);
    EquivariantInvariant inv;
    for (const auto& c : classes)
        inv.summands.push_back(SubgroupSummand{c, {}});
    std::set<std::size_t> seen;
    for (const auto& in : data) {
        if (!is_subgroup(G, in.subgroup))
            throw std::invalid_argument("supplied element set is not a subgroup");
        auto idx = find_subgroup_class(classes, in.subgroup);
        if (!seen.insert(*idx).second)
            throw std::invalid_argument("subgroup class supplied twice");
        auto& summand = inv.summands[*idx];
        const std::size_t weyl_order = summand.subgroup.weyl.order();
        for (const auto& comp : in.components) {
            if (comp.action.group().order() != weyl_order)
                throw std::invalid_argument("action on component " + comp.name + " must be by the Weyl group (order " +
                                            std::to_string(weyl_order) + ")");
            ComponentSummand s;
            s.name = comp.name;
            s.trace = reidemeister_trace(comp.records, *comp.classes);
            std::vector<ClassId> support;
            for (const auto& [id, v] : s.trace.coefficients())
                support.push_back(id);
            if (!comp.action.satisfies_laws(support))
                throw std::invalid_argument("Weyl action on component " + comp.name + " violates the action laws");
            if (!check_orbit_index_constancy(s.trace, comp.action))
                throw OrbitIndexInconsistency("indices differ within a Weyl orbit on component " + comp.name);
            s.reduced = reduce_trace(s.trace, comp.action);
            s.nielsen = nielsen_number(s.trace);
            summand.components.push_back(std::move(s));
        }
    }
    return inv;
}

struct VanishingVerdict {
    bool vanishes = true;
    std::vector<std::size_t> per_class_nielsen; // aligned with summands
};

inline VanishingVerdict invariant_vanishes(const EquivariantInvariant& inv) {
    VanishingVerdict v;
    bool unreduced_zero = true;
    for (const auto& s : inv.summands) {
        v.per_class_nielsen.push_back(s.nielsen());
        if (!s.reduced_zero())
            v.vanishes = false;
        if (s.nielsen() != 0)
            unreduced_zero = false;
    }
    if (v.vanishes != unreduced_zero)
        throw std::logic_error("reduced and unreduced vanishing disagree");
    return v;
}

// ---------------------------------------------------------------- gap report

struct Stratum {
    std::string name;
    Int dim = 0;
    friend bool operator==(const Stratum&, const Stratum&) = default;
};

/// smaller subgroup K contained in larger H, so M^H lies inside M^K
struct Inclusion {
    std::string smaller;
    std::string larger;
    friend bool operator==(const Inclusion&, const Inclusion&) = default;
};

struct CodimCheck {
    std::string smaller;
    Int dim_smaller = 0;
    bool ok = false; // dim M^H <= dim M^K - 2
};

struct StratumVerdict {
    std::string name;
    Int dim = 0;
    bool min_dim = false; // dim M^H >= 3
    std::vector<CodimCheck> codim;
};

struct GapReport {
    std::vector<StratumVerdict> strata;

    bool pass() const {
        for (const auto& s : strata) {
            if (!s.min_dim)
                return false;
            for (const auto& c : s.codim)
                if (!c.ok)
                    return false;
        }
        return true;
    }
};

inline GapReport gap_condition_report(const std::vector<Stratum>& strata, const std::vector<Inclusion>& inclusions) {
    std::map<std::string, Int> dims;
    for (const auto& s : strata)
        if (!dims.emplace(s.name, s.dim).second)
            throw std::invalid_argument("duplicate stratum " + s.name);
    GapReport rep;
    for (const auto& s : strata) {
        StratumVerdict v{s.name, s.dim, s.dim >= 3, {}};
        for (const auto& inc : inclusions) {
            if (!dims.count(inc.smaller) || !dims.count(inc.larger))
                throw std::invalid_argument("inclusion names an unknown stratum");
            if (inc.smaller == inc.larger)
                throw std::invalid_argument("inclusion must be proper: " + inc.smaller);
            if (inc.larger != s.name)
                continue;
            Int dk = dims.at(inc.smaller);
            v.codim.push_back(CodimCheck{inc.smaller, dk, s.dim <= dk - 2});
        }
        rep.strata.push_back(std::move(v));
    }
    return rep;
}

/// Strata of Z/n acting on M^n by cyclic shift: the Z/k-fixed set is
/// M^{n/k}, so its dimension is (n / k) * dim M.
inline std::pair<std::vector<Stratum>, std::vector<Inclusion>> fuller_strata(Int dim_m, std::size_t n) {
    std::vector<Stratum> strata;
    std::vector<Inclusion> inc;
    auto name = [](std::size_t k) { return "Z" + std::to_string(k); };
    const auto divs = [n] {
        std::vector<std::size_t> d;
        for (std::size_t k = 1; k <= n; ++k)
            if (n % k == 0)
                d.push_back(k);
        return d;
    }();
    for (auto k : divs)
        strata.push_back(Stratum{name(k), checked_mul(static_cast<Int>(n / k), dim_m)});
    for (auto k : divs)
        for (auto k2 : divs)
            if (k != k2 && k2 % k == 0)
                inc.push_back(Inclusion{name(k), name(k2)});
    return {strata, inc};
}

} // namespace fixpt
