#pragma once

// Periodic points through the cyclic product (Fuller) map. The n-periodic
// obstruction splits into one component per divisor k of n; with l = n / k
// the component is the Reidemeister trace of f^l, reduced by the Z/l action
// class -> rho(class). Its number of nonzero terms is compared with N(f^l).

#include "fixpt/torus.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fixpt {

/// Bad or incomplete per-divisor input.
class MalformedInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::vector<std::size_t> divisors(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("divisors of 0");
    std::vector<std::size_t> small, large;
    for (std::size_t d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d)
                large.push_back(n / d);
        }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/// Relabels fixed point records of f^l as fixed points of the cyclic product
/// map; classes and indices carry over unchanged.
inline std::vector<FixedPointRecord> fuller_class_correspondence(const std::vector<FixedPointRecord>& records,
                                                                 std::size_t l) {
    std::vector<FixedPointRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        FixedPointRecord p = r;
        if (l > 1) {
            std::string s = "(";
            for (std::size_t i = 0; i < l; ++i) {
                if (i)
                    s += ",";
                if (r.orbit_labels.size() == l)
                    s += r.orbit_labels[i];
                else if (i == 0)
                    s += r.id;
                else
                    s += (i == 1 ? std::string("f(") : "f^" + std::to_string(i) + "(") + r.id + ")";
            }
            p.id = s + ")";
        }
        out.push_back(std::move(p));
    }
    return out;
}

struct FullerComponent {
    std::size_t k = 1;
    std::size_t l = 1;
    std::shared_ptr<const ReidemeisterClassSet> classes;       // twisted classes of f^l
    std::shared_ptr<const ReidemeisterClassSet> orbit_classes; // further modulo rho, when available
    std::vector<FixedPointRecord> records;                     // relabeled for the product map
    Trace trace;
    ReducedTrace reduced;
    bool orbit_constant = true;
    std::size_t count = 0; // nonzero terms of the reduced trace

    std::size_t nielsen() const { return nielsen_number(trace); }
};

struct PeriodicObstruction {
    std::size_t n = 1;
    std::vector<FullerComponent> components; // ascending l

    bool vanishes() const {
        for (const auto& c : components)
            if (!c.reduced.is_zero())
                return false;
        return true;
    }
    const FullerComponent& component(std::size_t l) const {
        for (const auto& c : components)
            if (c.l == l)
                return c;
        throw std::out_of_range("no component for l = " + std::to_string(l));
    }
};

inline FullerComponent make_component(std::size_t n, std::size_t l,
                                      std::shared_ptr<const ReidemeisterClassSet> classes,
                                      const std::vector<FixedPointRecord>& records, const ClassAction& action) {
    if (action.group().order() != l)
        throw MalformedInput("action for l = " + std::to_string(l) + " must be by a group of order " +
                             std::to_string(l));
    FullerComponent c;
    c.l = l;
    c.k = n / l;
    c.classes = std::move(classes);
    c.records = fuller_class_correspondence(records, l);
    c.trace = reidemeister_trace(c.records, *c.classes);
    std::vector<ClassId> support;
    for (const auto& [id, v] : c.trace.coefficients())
        support.push_back(id);
    if (!action.satisfies_laws(support))
        throw MalformedInput("class action for l = " + std::to_string(l) + " violates the group action laws");
    c.orbit_constant = check_orbit_index_constancy(c.trace, action);
    c.reduced = reduce_trace(c.trace, action);
    c.count = c.reduced.nonzero_terms();
    return c;
}

/// Periodic obstruction of a torus map, every iterate A^l (l | n) generic.
inline PeriodicObstruction periodic_obstruction_torus(const TorusMap& f, std::size_t n) {
    PeriodicObstruction ob;
    ob.n = n;
    for (std::size_t l : divisors(n)) {
        TorusMap fl = torus_iterate(f, static_cast<unsigned>(l));
        if (determinant(identity_minus(fl.matrix)) == 0)
            throw Degenerate("iterate l = " + std::to_string(l) + " has det(I - A^l) = 0");
        TorusTrace tt = torus_trace(fl);
        auto action = ClassAction::from_endomorphism(tt.classes, f.induced(), l);
        FullerComponent c = make_component(n, l, tt.classes, tt.records, action);
        c.orbit_classes = std::make_shared<const ReidemeisterClassSet>(
            f.fundamental_group(), fl.induced(), ExtraRelations::TwistedAndRhoOrbit, f.induced());
        ob.components.push_back(std::move(c));
    }
    return ob;
}

/// Per-divisor input for a presentation-level obstruction.
struct PeriodicComponentInput {
    std::size_t l = 1;
    std::shared_ptr<const ReidemeisterClassSet> classes;
    std::vector<FixedPointRecord> records; // fixed points of f^l
    ClassAction action;
};

inline PeriodicObstruction periodic_obstruction_presentation(std::size_t n,
                                                             const std::vector<PeriodicComponentInput>& inputs) {
    std::map<std::size_t, const PeriodicComponentInput*> by_l;
    for (const auto& in : inputs) {
        if (in.l == 0 || n % in.l != 0)
            throw MalformedInput("component l = " + std::to_string(in.l) + " does not divide n = " + std::to_string(n));
        if (!by_l.emplace(in.l, &in).second)
            throw MalformedInput("duplicate component for divisor l = " + std::to_string(in.l));
    }
    PeriodicObstruction ob;
    ob.n = n;
    for (std::size_t l : divisors(n)) {
        auto it = by_l.find(l);
        if (it == by_l.end())
            throw MalformedInput("missing component for divisor l = " + std::to_string(l));
        const auto& in = *it->second;
        FullerComponent c = make_component(n, l, in.classes, in.records, in.action);
        if (in.classes->rho())
            c.orbit_classes = in.classes;
        ob.components.push_back(std::move(c));
    }
    return ob;
}

struct ConjectureRow {
    std::size_t l = 1;
    std::size_t k = 1;
    std::size_t reduced_count = 0; // terms of the l-component
    std::size_t nielsen = 0;       // N(f^l)
    bool equal = false;
    bool biconditional = false; // (reduced_count == 0) iff (nielsen == 0)
};

struct ConjectureReport {
    std::vector<ConjectureRow> rows;

    bool biconditional_holds() const {
        for (const auto& r : rows)
            if (!r.biconditional)
                return false;
        return true;
    }
    bool any_strict_gap() const {
        for (const auto& r : rows)
            if (r.reduced_count < r.nielsen)
                return true;
        return false;
    }
};

inline ConjectureReport conjecture_comparison(const PeriodicObstruction& ob,
                                              const std::map<std::size_t, std::size_t>& nielsen_by_l) {
    if (nielsen_by_l.size() != ob.components.size())
        throw MalformedInput("Nielsen numbers and obstruction components cover different divisors");
    ConjectureReport rep;
    for (const auto& c : ob.components) {
        auto it = nielsen_by_l.find(c.l);
        if (it == nielsen_by_l.end())
            throw MalformedInput("no Nielsen number supplied for l = " + std::to_string(c.l));
        ConjectureRow r;
        r.l = c.l;
        r.k = c.k;
        r.reduced_count = c.count;
        r.nielsen = it->second;
        r.equal = r.reduced_count == r.nielsen;
        r.biconditional = (r.reduced_count == 0) == (r.nielsen == 0);
        rep.rows.push_back(r);
    }
    return rep;
}

/// N(f^l) = |det(I - A^l)| for each l | n, straight from the matrix.
inline std::map<std::size_t, std::size_t> torus_iterate_nielsen_numbers(const TorusMap& f, std::size_t n) {
    std::map<std::size_t, std::size_t> out;
    for (std::size_t l : divisors(n)) {
        Int d = determinant(identity_minus(matrix_power(f.matrix, static_cast<unsigned>(l))));
        out[l] = static_cast<std::size_t>(d < 0 ? -d : d);
    }
    return out;
}

} // namespace fixpt
