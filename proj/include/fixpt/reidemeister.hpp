#pragma once

// Reidemeister class sets: a group modulo twisted conjugacy
// beta ~ alpha * beta * phi(alpha)^-1, optionally further identified along
// an auxiliary endomorphism rho (beta ~ rho(beta)).
//
// Free abelian groups are handled exactly through the Smith form of I - phi,
// finite groups by exhaustive orbit enumeration, and free groups by a
// bounded conjugator search over the ball of the model's search radius.

#include "fixpt/group.hpp"
#include "fixpt/smith.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fixpt {

/// Canonical identifier of a class. For free abelian models the key is the
/// coordinate vector in the Smith box; for finite models the smallest
/// element index of the class; for free models the letters of the
/// shortlex-least word in the merged component.
struct ClassId {
    std::vector<Int> key;
    friend auto operator<=>(const ClassId&, const ClassId&) = default;
};

inline std::string format_class_id(const ClassId& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.key.size(); ++i)
        s += (i ? "," : "") + std::to_string(c.key[i]);
    return s + "]";
}

enum class ExtraRelations { TwistedOnly, TwistedAndRhoOrbit };

/// Exact finite class list.
struct FiniteClasses {
    std::vector<ClassId> representatives;
};

/// Infinite cokernel of I - phi: Z^free_rank plus the listed torsion.
struct InfiniteWithStructure {
    std::vector<Int> invariant_factors; // the factors > 1
    std::size_t free_rank = 0;
};

/// Classes found inside the search ball; distinct ids are not certified
/// distinct classes.
struct SemiDecided {
    std::vector<ClassId> representatives;
    std::size_t search_radius = 0;
};

using ClassStructure = std::variant<FiniteClasses, InfiniteWithStructure, SemiDecided>;

/// Upper bound on explicitly enumerated classes or ball words.
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 22;
inline constexpr std::size_t kMaxFreeBall = 4000;
inline constexpr std::size_t kRhoOrbitStepCap = 4096;

class CapacityExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ReidemeisterClassSet {
public:
    ReidemeisterClassSet(GroupModel model, Endomorphism phi, ExtraRelations extra = ExtraRelations::TwistedOnly,
                         std::optional<Endomorphism> rho = std::nullopt,
                         std::size_t enumeration_cap = kDefaultEnumerationCap)
        : model_(std::move(model)), phi_(std::move(phi)), extra_(extra), rho_(std::move(rho)),
          cap_(enumeration_cap) {
        model_.check_endomorphism(phi_);
        if (extra_ == ExtraRelations::TwistedAndRhoOrbit) {
            if (!rho_)
                throw std::invalid_argument("rho-orbit relation requested without rho");
            model_.check_endomorphism(*rho_);
        }
        if (model_.is_free_abelian())
            build_free_abelian();
        else if (model_.is_finite())
            build_finite();
        else
            build_free();
    }

    const GroupModel& model() const { return model_; }
    const Endomorphism& phi() const { return phi_; }
    ExtraRelations extra() const { return extra_; }
    const std::optional<Endomorphism>& rho() const { return rho_; }
    const ClassStructure& structure() const { return structure_; }

    bool is_finite() const { return std::holds_alternative<FiniteClasses>(structure_); }
    bool is_semi_decided() const { return std::holds_alternative<SemiDecided>(structure_); }

    /// Number of classes when exactly known and finite.
    std::optional<std::size_t> class_count() const {
        if (auto* f = std::get_if<FiniteClasses>(&structure_))
            return f->representatives.size();
        return std::nullopt;
    }

    /// Class ids known to the set (all classes when finite, ball components
    /// when semi-decided, empty for infinite structure).
    const std::vector<ClassId>& known_classes() const {
        static const std::vector<ClassId> none;
        if (auto* f = std::get_if<FiniteClasses>(&structure_))
            return f->representatives;
        if (auto* s = std::get_if<SemiDecided>(&structure_))
            return s->representatives;
        return none;
    }

    /// Smith data of I - phi (free abelian models only).
    const SmithForm& smith() const { return smith_; }

    /// Canonical class of beta; nullopt when the bounded search cannot
    /// place beta (free models, or an unbounded rho orbit).
    std::optional<ClassId> class_of(const GroupWord& beta) const {
        model_.check_word(beta);
        if (model_.is_free_abelian()) {
            ClassId twisted = abelian_key(std::get<AbelianVector>(beta));
            if (extra_ == ExtraRelations::TwistedOnly)
                return twisted;
            if (is_finite())
                return rho_canonical_.at(twisted);
            return rho_cycle_min(twisted);
        }
        if (model_.is_finite())
            return ClassId{{static_cast<Int>(finite_canonical_[std::get<FiniteElement>(beta).index])}};
        return free_class_of(std::get<FreeWord>(beta));
    }

    /// A group word lying in the class.
    GroupWord representative(const ClassId& c) const {
        if (model_.is_free_abelian()) {
            std::vector<Int> w = c.key;
            return AbelianVector{u_inverse_ * w};
        }
        if (model_.is_finite())
            return FiniteElement{static_cast<std::size_t>(c.key.at(0))};
        std::vector<int> l(c.key.begin(), c.key.end());
        return FreeWord{std::move(l)};
    }

    /// True when both words land in one class; nullopt when undecided.
    std::optional<bool> same_class(const GroupWord& a, const GroupWord& b) const {
        auto ca = class_of(a), cb = class_of(b);
        if (!ca || !cb)
            return std::nullopt;
        if (*ca == *cb)
            return true;
        if (is_semi_decided())
            return std::nullopt;
        return false;
    }

private:
    // ---------------------------------------------------------- free abelian

    ClassId abelian_key(const AbelianVector& v) const {
        std::vector<Int> w = smith_.U * v.coords;
        for (std::size_t i = 0; i < w.size(); ++i) {
            Int d = smith_.D(i, i);
            if (d != 0)
                w[i] = floor_mod(w[i], d);
        }
        return ClassId{std::move(w)};
    }

    void build_free_abelian() {
        const std::size_t n = model_.rank();
        const IntMatrix& phi = std::get<MatrixEndo>(phi_).matrix;
        smith_ = smith_normal_form(identity_minus(phi));
        IntMatrix adj = adjugate(smith_.U);
        Int det_u = determinant(smith_.U);
        u_inverse_ = det_u == 1 ? adj : IntMatrix(n, n) - adj;

        std::vector<Int> d = smith_.diagonal();
        std::size_t free_rank = 0;
        std::vector<Int> factors;
        for (Int x : d) {
            if (x == 0)
                ++free_rank;
            else if (x > 1)
                factors.push_back(x);
        }
        if (free_rank > 0) {
            structure_ = InfiniteWithStructure{factors, free_rank};
            return;
        }

        std::size_t total = 1;
        for (Int x : factors) {
            total *= static_cast<std::size_t>(x);
            if (total > cap_)
                throw CapacityExceeded("class set of size above enumeration cap " + std::to_string(cap_));
        }
        // mixed-radix enumeration of the box, lexicographic in the key
        std::vector<ClassId> reps;
        reps.reserve(total);
        std::vector<Int> w(n, 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            reps.push_back(ClassId{w});
            for (std::size_t i = n; i-- > 0;) {
                if (++w[i] < d[i])
                    break;
                w[i] = 0;
            }
        }
        if (extra_ == ExtraRelations::TwistedAndRhoOrbit) {
            // union each class with its rho image; canonical = least key
            std::map<ClassId, std::size_t> pos;
            for (std::size_t i = 0; i < reps.size(); ++i)
                pos.emplace(reps[i], i);
            std::vector<std::size_t> parent(reps.size());
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](std::size_t x) {
                while (parent[x] != x)
                    x = parent[x] = parent[parent[x]];
                return x;
            };
            const IntMatrix& rho = std::get<MatrixEndo>(*rho_).matrix;
            for (std::size_t i = 0; i < reps.size(); ++i) {
                std::vector<Int> v = u_inverse_ * reps[i].key;
                ClassId img = abelian_key(AbelianVector{rho * v});
                std::size_t a = find(i), b = find(pos.at(img));
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
            std::vector<ClassId> canon;
            for (std::size_t i = 0; i < reps.size(); ++i) {
                rho_canonical_.emplace(reps[i], reps[find(i)]);
                if (find(i) == i)
                    canon.push_back(reps[i]);
            }
            structure_ = FiniteClasses{std::move(canon)};
            return;
        }
        structure_ = FiniteClasses{std::move(reps)};
    }

    // Least key on the eventual cycle of the forward rho orbit. Two classes
    // are rho-related exactly when their forward orbits meet, which happens
    // exactly when they reach the same cycle.
    std::optional<ClassId> rho_cycle_min(const ClassId& start) const {
        const IntMatrix& rho = std::get<MatrixEndo>(*rho_).matrix;
        std::map<ClassId, std::size_t> seen;
        std::vector<ClassId> path;
        ClassId cur = start;
        for (std::size_t step = 0; step < kRhoOrbitStepCap; ++step) {
            auto it = seen.find(cur);
            if (it != seen.end())
                return *std::min_element(path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end());
            seen.emplace(cur, path.size());
            path.push_back(cur);
            try {
                cur = abelian_key(AbelianVector{rho * (u_inverse_ * cur.key)});
            } catch (const OverflowError&) {
                return std::nullopt; // orbit leaves the 64-bit range, so it never cycles back
            }
        }
        return std::nullopt;
    }

    // ---------------------------------------------------------- finite

    void build_finite() {
        const FiniteGroup& g = model_.finite_group();
        const auto& phi = std::get<IndexMapEndo>(phi_).images;
        const std::size_t n = g.order();
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](std::size_t a, std::size_t b) {
            a = find(a);
            b = find(b);
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        };
        for (std::size_t beta = 0; beta < n; ++beta)
            for (std::size_t alpha = 0; alpha < n; ++alpha)
                unite(beta, g.mul(g.mul(alpha, beta), g.inverse(phi[alpha])));
        if (extra_ == ExtraRelations::TwistedAndRhoOrbit) {
            const auto& rho = std::get<IndexMapEndo>(*rho_).images;
            for (std::size_t beta = 0; beta < n; ++beta)
                unite(beta, rho[beta]);
        }
        finite_canonical_.resize(n);
        std::vector<ClassId> reps;
        for (std::size_t x = 0; x < n; ++x) {
            finite_canonical_[x] = find(x);
            if (find(x) == x)
                reps.push_back(ClassId{{static_cast<Int>(x)}});
        }
        structure_ = FiniteClasses{std::move(reps)};
    }

    // ---------------------------------------------------------- free

    void build_free() {
        const std::size_t rank = model_.rank();
        const std::size_t radius = model_.search_radius();
        // ball of reduced words, in shortlex order
        ball_.push_back(FreeWord{});
        std::size_t frontier_begin = 0;
        for (std::size_t len = 1; len <= radius; ++len) {
            std::size_t frontier_end = ball_.size();
            for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
                for (int g = 1; g <= static_cast<int>(rank); ++g)
                    for (int x : {g, -g}) {
                        const FreeWord& w = ball_[i];
                        if (!w.letters.empty() && w.letters.back() == -x)
                            continue;
                        FreeWord next = w;
                        next.letters.push_back(x);
                        ball_.push_back(std::move(next));
                        if (ball_.size() > kMaxFreeBall)
                            throw CapacityExceeded("free-group search ball exceeds " + std::to_string(kMaxFreeBall) +
                                                   " words; lower the search radius");
                    }
            }
            frontier_begin = frontier_end;
        }
        std::sort(ball_.begin(), ball_.end(), shortlex_less);
        for (std::size_t i = 0; i < ball_.size(); ++i)
            ball_index_.emplace(ball_[i], i);

        std::vector<std::size_t> parent(ball_.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](std::size_t a, std::size_t b) {
            a = find(a);
            b = find(b);
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        };
        std::vector<FreeWord> phi_inv;
        for (const auto& a : ball_)
            phi_inv.push_back(free_inverse(std::get<FreeWord>(model_.apply(phi_, a))));
        for (std::size_t b = 0; b < ball_.size(); ++b)
            for (std::size_t a = 0; a < ball_.size(); ++a) {
                FreeWord c = free_concat(free_concat(ball_[a], ball_[b]), phi_inv[a]);
                if (c.letters.size() > radius)
                    continue;
                unite(b, ball_index_.at(c));
            }
        if (extra_ == ExtraRelations::TwistedAndRhoOrbit)
            for (std::size_t b = 0; b < ball_.size(); ++b) {
                FreeWord r = std::get<FreeWord>(model_.apply(*rho_, ball_[b]));
                auto it = ball_index_.find(r);
                if (it != ball_index_.end())
                    unite(b, it->second);
            }
        // ball_ is shortlex sorted and union keeps the smaller index,
        // so each root is the shortlex-least member of its component
        ball_root_.resize(ball_.size());
        std::vector<ClassId> reps;
        for (std::size_t i = 0; i < ball_.size(); ++i) {
            ball_root_[i] = find(i);
            if (ball_root_[i] == i)
                reps.push_back(free_key(ball_[i]));
        }
        structure_ = SemiDecided{std::move(reps), radius};
    }

    static ClassId free_key(const FreeWord& w) { return ClassId{std::vector<Int>(w.letters.begin(), w.letters.end())}; }

    std::optional<ClassId> free_class_of(const FreeWord& beta) const {
        const std::size_t radius = model_.search_radius();
        if (auto it = ball_index_.find(beta); it != ball_index_.end())
            return free_key(ball_[ball_root_[it->second]]);
        for (const auto& a : ball_) {
            FreeWord phi_a = std::get<FreeWord>(model_.apply(phi_, a));
            FreeWord c = free_concat(free_concat(a, beta), free_inverse(phi_a));
            if (c.letters.size() > radius)
                continue;
            return free_key(ball_[ball_root_[ball_index_.at(c)]]);
        }
        return std::nullopt;
    }

    GroupModel model_;
    Endomorphism phi_;
    ExtraRelations extra_;
    std::optional<Endomorphism> rho_;
    std::size_t cap_;
    ClassStructure structure_;

    SmithForm smith_;
    IntMatrix u_inverse_;
    std::map<ClassId, ClassId> rho_canonical_;

    std::vector<std::size_t> finite_canonical_;

    std::vector<FreeWord> ball_;
    std::map<FreeWord, std::size_t> ball_index_;
    std::vector<std::size_t> ball_root_;
};

inline ReidemeisterClassSet reidemeister_classes(const GroupModel& model, const Endomorphism& phi,
                                                 ExtraRelations extra = ExtraRelations::TwistedOnly,
                                                 std::optional<Endomorphism> rho = std::nullopt) {
    return ReidemeisterClassSet(model, phi, extra, std::move(rho));
}

} // namespace fixpt
