#pragma once

// Computable group presentations: free abelian groups of a given rank, finite
// groups given by a multiplication table, and free groups of a given rank.
// Elements of each kind share one value type, GroupWord, and endomorphisms
// are stored in the form native to the presentation.

#include "fixpt/integer.hpp"

#include <cctype>
#include <compare>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace fixpt {

/// Raised when elements, endomorphisms and models of different kinds or
/// sizes are combined.
class ModelMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for malformed group data (bad tables, non-homomorphisms, ...).
class InvalidGroupData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- finite

/// Finite group as a full multiplication table; element 0 is the identity.
class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup(std::vector<std::vector<std::size_t>>{{0}}) {}

    explicit FiniteGroup(std::vector<std::vector<std::size_t>> table,
                         std::vector<std::string> names = {})
        : table_(std::move(table)), names_(std::move(names)) {
        validate();
        inverse_.assign(order(), 0);
        for (std::size_t g = 0; g < order(); ++g)
            for (std::size_t h = 0; h < order(); ++h)
                if (table_[g][h] == 0)
                    inverse_[g] = h;
        if (names_.empty())
            for (std::size_t g = 0; g < order(); ++g)
                names_.push_back(std::to_string(g));
    }

    /// Z/n under addition mod n.
    static FiniteGroup cyclic(std::size_t n) {
        if (n == 0)
            throw InvalidGroupData("cyclic group of order 0");
        std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                t[a][b] = (a + b) % n;
        return FiniteGroup(std::move(t));
    }

    /// Symmetric group on k letters, elements in lexicographic order of
    /// their one-line notation (so the identity is element 0).
    static FiniteGroup symmetric(std::size_t k) {
        std::vector<std::vector<std::size_t>> perms;
        std::vector<std::size_t> p(k);
        for (std::size_t i = 0; i < k; ++i)
            p[i] = i;
        do
            perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        auto index_of = [&](const std::vector<std::size_t>& q) {
            return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
        };
        std::vector<std::vector<std::size_t>> t(perms.size(), std::vector<std::size_t>(perms.size()));
        std::vector<std::string> names;
        for (std::size_t a = 0; a < perms.size(); ++a) {
            std::string nm;
            for (auto v : perms[a])
                nm += static_cast<char>('1' + v);
            names.push_back(nm);
            for (std::size_t b = 0; b < perms.size(); ++b) {
                // (a*b)(i) = a(b(i))
                std::vector<std::size_t> c(k);
                for (std::size_t i = 0; i < k; ++i)
                    c[i] = perms[a][perms[b][i]];
                t[a][b] = index_of(c);
            }
        }
        return FiniteGroup(std::move(t), std::move(names));
    }

    /// Direct product, element (a, b) at index a * |other| + b.
    FiniteGroup product(const FiniteGroup& other) const {
        const std::size_t n = order(), m = other.order();
        std::vector<std::vector<std::size_t>> t(n * m, std::vector<std::size_t>(n * m));
        for (std::size_t a1 = 0; a1 < n; ++a1)
            for (std::size_t b1 = 0; b1 < m; ++b1)
                for (std::size_t a2 = 0; a2 < n; ++a2)
                    for (std::size_t b2 = 0; b2 < m; ++b2)
                        t[a1 * m + b1][a2 * m + b2] = mul(a1, a2) * m + other.mul(b1, b2);
        return FiniteGroup(std::move(t));
    }

    std::size_t order() const { return table_.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table_.at(a).at(b); }
    std::size_t inverse(std::size_t a) const { return inverse_.at(a); }
    const std::vector<std::vector<std::size_t>>& table() const { return table_; }
    const std::vector<std::string>& names() const { return names_; }

    bool contains(std::size_t a) const { return a < order(); }

    /// True when images[] is a homomorphism of this group to itself.
    bool is_endomorphism(const std::vector<std::size_t>& images) const {
        if (images.size() != order())
            return false;
        for (auto v : images)
            if (v >= order())
                return false;
        for (std::size_t a = 0; a < order(); ++a)
            for (std::size_t b = 0; b < order(); ++b)
                if (images[mul(a, b)] != mul(images[a], images[b]))
                    return false;
        return true;
    }

    bool is_cyclic() const {
        for (std::size_t g = 0; g < order(); ++g)
            if (element_order(g) == order())
                return true;
        return false;
    }

    std::size_t element_order(std::size_t g) const {
        std::size_t k = 1;
        for (std::size_t x = g; x != 0; x = mul(x, g))
            ++k;
        return k;
    }

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
        return a.table_ == b.table_ && a.names_ == b.names_;
    }

private:
    void validate() const {
        const std::size_t n = table_.size();
        if (n == 0)
            throw InvalidGroupData("empty group table");
        for (const auto& row : table_)
            if (row.size() != n)
                throw InvalidGroupData("group table is not square");
        if (!names_.empty() && names_.size() != n)
            throw InvalidGroupData("element name count differs from order");
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<bool> row_seen(n), col_seen(n);
            for (std::size_t b = 0; b < n; ++b) {
                std::size_t r = table_[a][b], c = table_[b][a];
                if (r >= n || c >= n || row_seen[r] || col_seen[c])
                    throw InvalidGroupData("group table row or column " + std::to_string(a) +
                                           " is not a permutation");
                row_seen[r] = col_seen[c] = true;
            }
            if (table_[0][a] != a || table_[a][0] != a)
                throw InvalidGroupData("element 0 is not the identity");
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                        throw InvalidGroupData("group table is not associative at (" + std::to_string(a) +
                                               "," + std::to_string(b) + "," + std::to_string(c) + ")");
    }

    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::string> names_;
    std::vector<std::size_t> inverse_;
};

// ---------------------------------------------------------------- words

/// Element of a free abelian group, additive coordinates.
struct AbelianVector {
    std::vector<Int> coords;
    friend auto operator<=>(const AbelianVector&, const AbelianVector&) = default;
};

/// Element of a finite group, by table index.
struct FiniteElement {
    std::size_t index = 0;
    friend auto operator<=>(const FiniteElement&, const FiniteElement&) = default;
};

/// Freely reduced word. Letter +i is generator i (1-based), -i its inverse.
struct FreeWord {
    std::vector<int> letters;
    friend auto operator<=>(const FreeWord&, const FreeWord&) = default;
};

using GroupWord = std::variant<AbelianVector, FiniteElement, FreeWord>;

inline FreeWord free_reduce(std::vector<int> letters) {
    std::vector<int> out;
    out.reserve(letters.size());
    for (int x : letters) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return FreeWord{std::move(out)};
}

inline FreeWord free_inverse(const FreeWord& w) {
    FreeWord r;
    r.letters.assign(w.letters.rbegin(), w.letters.rend());
    for (int& x : r.letters)
        x = -x;
    return r;
}

inline FreeWord free_concat(const FreeWord& a, const FreeWord& b) {
    std::vector<int> l = a.letters;
    l.insert(l.end(), b.letters.begin(), b.letters.end());
    return free_reduce(std::move(l));
}

/// Shortlex order: length first, then letters ordered a < A < b < B < ...
inline bool shortlex_less(const FreeWord& a, const FreeWord& b) {
    if (a.letters.size() != b.letters.size())
        return a.letters.size() < b.letters.size();
    auto key = [](int x) { return 2 * std::abs(x) + (x < 0 ? 1 : 0); };
    for (std::size_t i = 0; i < a.letters.size(); ++i)
        if (a.letters[i] != b.letters[i])
            return key(a.letters[i]) < key(b.letters[i]);
    return false;
}

/// Words as text: lower-case letters are generators, upper-case their
/// inverses; "1" or "" is the identity.
inline FreeWord parse_free_word(const std::string& s, std::size_t rank) {
    if (s == "1")
        return {};
    std::vector<int> l;
    for (char ch : s) {
        if (!std::isalpha(static_cast<unsigned char>(ch)))
            throw InvalidGroupData("bad letter '" + std::string(1, ch) + "' in word \"" + s + "\"");
        int g = std::tolower(static_cast<unsigned char>(ch)) - 'a' + 1;
        if (static_cast<std::size_t>(g) > rank)
            throw InvalidGroupData("letter '" + std::string(1, ch) + "' exceeds free rank " + std::to_string(rank));
        l.push_back(std::isupper(static_cast<unsigned char>(ch)) ? -g : g);
    }
    return free_reduce(std::move(l));
}

inline std::string format_free_word(const FreeWord& w) {
    if (w.letters.empty())
        return "1";
    std::string s;
    for (int x : w.letters) {
        char c = static_cast<char>('a' + std::abs(x) - 1);
        s += x < 0 ? static_cast<char>(std::toupper(c)) : c;
    }
    return s;
}

// ---------------------------------------------------------------- models

struct FreeAbelianModel {
    std::size_t rank = 0;
    friend bool operator==(const FreeAbelianModel&, const FreeAbelianModel&) = default;
};

struct FiniteModel {
    FiniteGroup group;
    friend bool operator==(const FiniteModel&, const FiniteModel&) = default;
};

struct FreeModel {
    std::size_t rank = 0;
    std::size_t search_radius = 1;
    friend bool operator==(const FreeModel&, const FreeModel&) = default;
};

/// Endomorphism images: matrix acting on coordinate columns, an index map,
/// or the image word of each generator.
struct MatrixEndo {
    IntMatrix matrix;
    friend bool operator==(const MatrixEndo&, const MatrixEndo&) = default;
};
struct IndexMapEndo {
    std::vector<std::size_t> images;
    friend bool operator==(const IndexMapEndo&, const IndexMapEndo&) = default;
};
struct GeneratorImagesEndo {
    std::vector<FreeWord> images;
    friend bool operator==(const GeneratorImagesEndo&, const GeneratorImagesEndo&) = default;
};
using Endomorphism = std::variant<MatrixEndo, IndexMapEndo, GeneratorImagesEndo>;

class GroupModel {
public:
    using Kind = std::variant<FreeAbelianModel, FiniteModel, FreeModel>;

    GroupModel() : kind_(FreeAbelianModel{0}) {}
    explicit GroupModel(Kind k) : kind_(std::move(k)) {
        if (auto* f = std::get_if<FreeModel>(&kind_)) {
            if (f->search_radius == 0)
                throw InvalidGroupData("free model search radius must be positive");
            if (f->rank > 26)
                throw InvalidGroupData("free model rank exceeds 26 letters");
        }
    }

    static GroupModel free_abelian(std::size_t rank) { return GroupModel(FreeAbelianModel{rank}); }
    static GroupModel finite(FiniteGroup g) { return GroupModel(FiniteModel{std::move(g)}); }
    static GroupModel free(std::size_t rank, std::size_t radius) { return GroupModel(FreeModel{rank, radius}); }

    const Kind& kind() const { return kind_; }
    bool is_free_abelian() const { return std::holds_alternative<FreeAbelianModel>(kind_); }
    bool is_finite() const { return std::holds_alternative<FiniteModel>(kind_); }
    bool is_free() const { return std::holds_alternative<FreeModel>(kind_); }

    const FiniteGroup& finite_group() const { return std::get<FiniteModel>(kind_).group; }
    std::size_t rank() const {
        if (auto* a = std::get_if<FreeAbelianModel>(&kind_))
            return a->rank;
        if (auto* f = std::get_if<FreeModel>(&kind_))
            return f->rank;
        throw ModelMismatch("finite model has no rank");
    }
    std::size_t search_radius() const { return std::get<FreeModel>(kind_).search_radius; }

    std::string kind_name() const {
        return std::visit(
            [](const auto& k) -> std::string {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, FreeAbelianModel>)
                    return "free_abelian";
                else if constexpr (std::is_same_v<K, FiniteModel>)
                    return "finite";
                else
                    return "free";
            },
            kind_);
    }

    // -------- element checks and arithmetic

    void check_word(const GroupWord& w) const {
        bool ok = std::visit(
            [&](const auto& k) -> bool {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, FreeAbelianModel>) {
                    auto* v = std::get_if<AbelianVector>(&w);
                    return v && v->coords.size() == k.rank;
                } else if constexpr (std::is_same_v<K, FiniteModel>) {
                    auto* e = std::get_if<FiniteElement>(&w);
                    return e && e->index < k.group.order();
                } else {
                    auto* f = std::get_if<FreeWord>(&w);
                    if (!f)
                        return false;
                    for (std::size_t i = 0; i < f->letters.size(); ++i) {
                        int x = f->letters[i];
                        if (x == 0 || static_cast<std::size_t>(std::abs(x)) > k.rank)
                            return false;
                        if (i > 0 && f->letters[i - 1] == -x)
                            return false;
                    }
                    return true;
                }
            },
            kind_);
        if (!ok)
            throw ModelMismatch("group word does not belong to the " + kind_name() + " model");
    }

    void check_endomorphism(const Endomorphism& e) const {
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, FreeAbelianModel>) {
                    auto* m = std::get_if<MatrixEndo>(&e);
                    if (!m || m->matrix.rows() != k.rank || m->matrix.cols() != k.rank)
                        throw ModelMismatch("free abelian endomorphism must be a rank x rank matrix");
                } else if constexpr (std::is_same_v<K, FiniteModel>) {
                    auto* m = std::get_if<IndexMapEndo>(&e);
                    if (!m)
                        throw ModelMismatch("finite endomorphism must be an index map");
                    if (!k.group.is_endomorphism(m->images))
                        throw InvalidGroupData("index map is not a homomorphism of the group table");
                } else {
                    auto* m = std::get_if<GeneratorImagesEndo>(&e);
                    if (!m || m->images.size() != k.rank)
                        throw ModelMismatch("free endomorphism needs one image word per generator");
                    for (const auto& w : m->images)
                        check_word(w);
                }
            },
            kind_);
    }

    GroupWord identity() const {
        return std::visit(
            [](const auto& k) -> GroupWord {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, FreeAbelianModel>)
                    return AbelianVector{std::vector<Int>(k.rank, 0)};
                else if constexpr (std::is_same_v<K, FiniteModel>)
                    return FiniteElement{0};
                else
                    return FreeWord{};
            },
            kind_);
    }

    GroupWord multiply(const GroupWord& a, const GroupWord& b) const {
        check_word(a);
        check_word(b);
        if (auto* va = std::get_if<AbelianVector>(&a)) {
            const auto& vb = std::get<AbelianVector>(b);
            AbelianVector r{va->coords};
            for (std::size_t i = 0; i < r.coords.size(); ++i)
                r.coords[i] = checked_add(r.coords[i], vb.coords[i]);
            return r;
        }
        if (auto* ea = std::get_if<FiniteElement>(&a))
            return FiniteElement{finite_group().mul(ea->index, std::get<FiniteElement>(b).index)};
        return free_concat(std::get<FreeWord>(a), std::get<FreeWord>(b));
    }

    GroupWord inverse(const GroupWord& a) const {
        check_word(a);
        if (auto* va = std::get_if<AbelianVector>(&a)) {
            AbelianVector r{va->coords};
            for (auto& x : r.coords)
                x = checked_sub(0, x);
            return r;
        }
        if (auto* ea = std::get_if<FiniteElement>(&a))
            return FiniteElement{finite_group().inverse(ea->index)};
        return free_inverse(std::get<FreeWord>(a));
    }

    GroupWord apply(const Endomorphism& phi, const GroupWord& a) const {
        check_endomorphism(phi);
        check_word(a);
        if (auto* va = std::get_if<AbelianVector>(&a))
            return AbelianVector{std::get<MatrixEndo>(phi).matrix * va->coords};
        if (auto* ea = std::get_if<FiniteElement>(&a))
            return FiniteElement{std::get<IndexMapEndo>(phi).images[ea->index]};
        const auto& images = std::get<GeneratorImagesEndo>(phi).images;
        std::vector<int> out;
        for (int x : std::get<FreeWord>(a).letters) {
            const FreeWord& img = images[static_cast<std::size_t>(std::abs(x) - 1)];
            FreeWord piece = x > 0 ? img : free_inverse(img);
            out.insert(out.end(), piece.letters.begin(), piece.letters.end());
        }
        return free_reduce(std::move(out));
    }

    /// phi after psi.
    Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi) const {
        check_endomorphism(phi);
        check_endomorphism(psi);
        if (auto* m = std::get_if<MatrixEndo>(&phi))
            return MatrixEndo{m->matrix * std::get<MatrixEndo>(psi).matrix};
        if (auto* m = std::get_if<IndexMapEndo>(&phi)) {
            const auto& inner = std::get<IndexMapEndo>(psi).images;
            IndexMapEndo r;
            for (auto v : inner)
                r.images.push_back(m->images[v]);
            return r;
        }
        GeneratorImagesEndo r;
        for (const auto& w : std::get<GeneratorImagesEndo>(psi).images)
            r.images.push_back(std::get<FreeWord>(apply(phi, w)));
        return r;
    }

    Endomorphism identity_endomorphism() const {
        return std::visit(
            [](const auto& k) -> Endomorphism {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, FreeAbelianModel>)
                    return MatrixEndo{IntMatrix::identity(k.rank)};
                else if constexpr (std::is_same_v<K, FiniteModel>) {
                    IndexMapEndo e;
                    for (std::size_t i = 0; i < k.group.order(); ++i)
                        e.images.push_back(i);
                    return e;
                } else {
                    GeneratorImagesEndo e;
                    for (std::size_t i = 1; i <= k.rank; ++i)
                        e.images.push_back(FreeWord{{static_cast<int>(i)}});
                    return e;
                }
            },
            kind_);
    }

    Endomorphism power(const Endomorphism& phi, std::size_t k) const {
        Endomorphism r = identity_endomorphism();
        for (std::size_t i = 0; i < k; ++i)
            r = compose(phi, r);
        return r;
    }

    friend bool operator==(const GroupModel&, const GroupModel&) = default;

private:
    Kind kind_;
};

/// alpha * beta * phi(alpha)^-1, the twisted conjugation action of alpha on beta.
inline GroupWord twisted_conjugate(const GroupModel& model, const GroupWord& alpha, const GroupWord& beta,
                                   const Endomorphism& phi) {
    return model.multiply(model.multiply(alpha, beta), model.inverse(model.apply(phi, alpha)));
}

inline std::string format_word(const GroupWord& w) {
    if (auto* v = std::get_if<AbelianVector>(&w)) {
        std::string s = "(";
        for (std::size_t i = 0; i < v->coords.size(); ++i)
            s += (i ? "," : "") + std::to_string(v->coords[i]);
        return s + ")";
    }
    if (auto* e = std::get_if<FiniteElement>(&w))
        return std::to_string(e->index);
    return format_free_word(std::get<FreeWord>(w));
}

} // namespace fixpt
