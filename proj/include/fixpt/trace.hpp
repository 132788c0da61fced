#pragma once

// Reidemeister traces as sparse integer combinations of classes, Nielsen
// numbers, finite group actions on classes, and reduced (orbit) traces.

#include "fixpt/reidemeister.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace fixpt {

/// One fixed point: its label, integer index, and the group word locating
/// its fixed point class.
struct FixedPointRecord {
    std::string id;
    Int index = 0;
    GroupWord class_word;
    /// Labels of x, f(x), ..., f^{l-1}(x) when the record belongs to an
    /// iterate f^l; optional, used only for display.
    std::vector<std::string> orbit_labels;

    friend bool operator==(const FixedPointRecord&, const FixedPointRecord&) = default;
};

/// Sparse formal combination of classes. Zero coefficients are never
/// stored, so the Nielsen number is the size of the map.
class Trace {
public:
    Trace() = default;

    void add(const ClassId& c, Int coefficient) {
        if (coefficient == 0)
            return;
        Int v = checked_add(coefficients_[c], coefficient);
        if (v == 0)
            coefficients_.erase(c);
        else
            coefficients_[c] = v;
    }

    Int coefficient(const ClassId& c) const {
        auto it = coefficients_.find(c);
        return it == coefficients_.end() ? 0 : it->second;
    }

    const std::map<ClassId, Int>& coefficients() const { return coefficients_; }
    bool is_zero() const { return coefficients_.empty(); }

    /// Records whose class the bounded search could not decide.
    const std::vector<std::string>& unresolved() const { return unresolved_; }
    bool conclusive() const { return unresolved_.empty(); }
    void mark_unresolved(std::string id) { unresolved_.push_back(std::move(id)); }

    friend Trace operator+(const Trace& a, const Trace& b) {
        Trace r = a;
        for (const auto& [c, v] : b.coefficients_)
            r.add(c, v);
        r.unresolved_.insert(r.unresolved_.end(), b.unresolved_.begin(), b.unresolved_.end());
        return r;
    }

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    std::map<ClassId, Int> coefficients_;
    std::vector<std::string> unresolved_;
};

/// Sum of record indices per class. Records the class set cannot place are
/// listed in Trace::unresolved instead of being guessed.
inline Trace reidemeister_trace(const std::vector<FixedPointRecord>& records, const ReidemeisterClassSet& classes) {
    Trace t;
    for (const auto& r : records) {
        auto c = classes.class_of(r.class_word);
        if (!c) {
            t.mark_unresolved(r.id);
            continue;
        }
        t.add(*c, r.index);
    }
    return t;
}

inline std::size_t nielsen_number(const Trace& t) { return t.coefficients().size(); }

/// Action of a finite group on class ids.
class ClassAction {
public:
    using ActFn = std::function<ClassId(std::size_t, const ClassId&)>;

    ClassAction(FiniteGroup group, ActFn act) : group_(std::move(group)), act_(std::move(act)) {}

    static ClassAction trivial(FiniteGroup group = FiniteGroup{}) {
        return ClassAction(std::move(group), [](std::size_t, const ClassId& c) { return c; });
    }

    /// Z/order acting by powers of a generator map.
    static ClassAction cyclic(std::size_t order, std::function<ClassId(const ClassId&)> generator) {
        auto fn = [generator = std::move(generator)](std::size_t g, const ClassId& c) {
            ClassId r = c;
            for (std::size_t i = 0; i < g; ++i)
                r = generator(r);
            return r;
        };
        return ClassAction(FiniteGroup::cyclic(order), std::move(fn));
    }

    /// Explicit permutation per group element; unlisted classes are fixed.
    static ClassAction from_permutations(FiniteGroup group, std::vector<std::map<ClassId, ClassId>> maps) {
        if (maps.size() != group.order())
            throw std::invalid_argument("action needs one map per group element");
        auto fn = [maps = std::move(maps)](std::size_t g, const ClassId& c) {
            const auto& m = maps.at(g);
            auto it = m.find(c);
            return it == m.end() ? c : it->second;
        };
        return ClassAction(std::move(group), std::move(fn));
    }

    /// Z/order generated by class -> class_of(rho(representative)).
    static ClassAction from_endomorphism(std::shared_ptr<const ReidemeisterClassSet> classes,
                                         const Endomorphism& rho, std::size_t order) {
        classes->model().check_endomorphism(rho);
        auto gen = [classes = std::move(classes), rho](const ClassId& c) {
            auto img = classes->class_of(classes->model().apply(rho, classes->representative(c)));
            if (!img)
                throw std::runtime_error("class action image of " + format_class_id(c) +
                                         " not decided within the search radius");
            return *img;
        };
        return cyclic(order, gen);
    }

    const FiniteGroup& group() const { return group_; }
    ClassId apply(std::size_t g, const ClassId& c) const { return act_(g, c); }

    std::set<ClassId> orbit(const ClassId& c) const {
        std::set<ClassId> o;
        for (std::size_t g = 0; g < group_.order(); ++g)
            o.insert(act_(g, c));
        return o;
    }

    /// Identity and compatibility laws on the closure of the domain under
    /// the action.
    bool satisfies_laws(const std::vector<ClassId>& domain) const {
        std::set<ClassId> closure(domain.begin(), domain.end());
        std::vector<ClassId> todo(domain.begin(), domain.end());
        while (!todo.empty()) {
            ClassId c = todo.back();
            todo.pop_back();
            for (std::size_t g = 0; g < group_.order(); ++g) {
                ClassId img = act_(g, c);
                if (closure.insert(img).second)
                    todo.push_back(img);
            }
        }
        for (const auto& c : closure) {
            if (act_(0, c) != c)
                return false;
            for (std::size_t g = 0; g < group_.order(); ++g)
                for (std::size_t h = 0; h < group_.order(); ++h)
                    if (act_(group_.mul(g, h), c) != act_(g, act_(h, c)))
                        return false;
        }
        return true;
    }

private:
    FiniteGroup group_;
    ActFn act_;
};

/// Coinvariant image of a trace: orbits are identified by their least class.
struct ReducedTrace {
    std::map<ClassId, Int> orbit_coefficients;
    std::map<ClassId, std::size_t> orbit_sizes;

    bool is_zero() const { return orbit_coefficients.empty(); }
    std::size_t nonzero_terms() const { return orbit_coefficients.size(); }

    friend bool operator==(const ReducedTrace&, const ReducedTrace&) = default;
};

inline ReducedTrace reduce_trace(const Trace& t, const ClassAction& action) {
    ReducedTrace r;
    for (const auto& [c, v] : t.coefficients()) {
        auto orbit = action.orbit(c);
        const ClassId& id = *orbit.begin();
        Int s = checked_add(r.orbit_coefficients[id], v);
        r.orbit_sizes[id] = orbit.size();
        r.orbit_coefficients[id] = s;
    }
    for (auto it = r.orbit_coefficients.begin(); it != r.orbit_coefficients.end();) {
        if (it->second == 0) {
            r.orbit_sizes.erase(it->first);
            it = r.orbit_coefficients.erase(it);
        } else {
            ++it;
        }
    }
    return r;
}

inline ReducedTrace operator+(const ReducedTrace& a, const ReducedTrace& b) {
    ReducedTrace r = a;
    for (const auto& [c, v] : b.orbit_coefficients) {
        r.orbit_sizes[c] = b.orbit_sizes.at(c);
        Int s = checked_add(r.orbit_coefficients[c], v);
        if (s == 0) {
            r.orbit_coefficients.erase(c);
            r.orbit_sizes.erase(c);
        } else {
            r.orbit_coefficients[c] = s;
        }
    }
    return r;
}

/// Whether all classes in each action orbit carry one coefficient.
inline bool check_orbit_index_constancy(const Trace& t, const ClassAction& action) {
    for (const auto& [c, v] : t.coefficients())
        for (const auto& other : action.orbit(c))
            if (t.coefficient(other) != v)
                return false;
    return true;
}

inline bool check_orbit_index_constancy(const std::vector<FixedPointRecord>& records,
                                        const ReidemeisterClassSet& classes, const ClassAction& action) {
    return check_orbit_index_constancy(reidemeister_trace(records, classes), action);
}

/// (trace = 0) iff (reduced trace = 0).
inline bool vanishing_equivalence(const Trace& t, const ClassAction& action) {
    return t.is_zero() == reduce_trace(t, action).is_zero();
}

} // namespace fixpt
