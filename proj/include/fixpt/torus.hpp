#pragma once

// Linear self-maps x -> A x (mod 1) of the m-torus. Fixed points, classes,
// indices and traces are all exact here, which makes the torus the oracle
// model for the rest of the library.

#include "fixpt/index.hpp"
#include "fixpt/trace.hpp"

#include <memory>

namespace fixpt {

struct TorusMap {
    IntMatrix matrix;

    explicit TorusMap(IntMatrix a) : matrix(std::move(a)) {
        if (!matrix.square() || matrix.rows() == 0)
            throw std::invalid_argument("torus map needs a nonempty square integer matrix");
    }

    std::size_t dim() const { return matrix.rows(); }
    GroupModel fundamental_group() const { return GroupModel::free_abelian(dim()); }
    Endomorphism induced() const { return MatrixEndo{matrix}; }

    friend bool operator==(const TorusMap&, const TorusMap&) = default;
};

struct TorusFixedPoints {
    bool generic = false;
    Int lefschetz = 0; // det(I - A)
    std::vector<RationalVector> points;
};

inline TorusMap torus_iterate(const TorusMap& f, unsigned l) {
    if (l == 0)
        throw std::invalid_argument("iterate exponent must be positive");
    return TorusMap(matrix_power(f.matrix, l));
}

/// Every solution of (I - A) x in Z^m with x in [0,1)^m, sorted.
inline TorusFixedPoints torus_fixed_points(const TorusMap& f) {
    const IntMatrix m = identity_minus(f.matrix);
    TorusFixedPoints out;
    out.lefschetz = determinant(m);
    out.generic = out.lefschetz != 0;
    if (!out.generic)
        return out;

    const std::size_t n = f.dim();
    SmithForm s = smith_normal_form(m);
    IntMatrix u_inv = adjugate(s.U);
    if (determinant(s.U) != 1)
        u_inv = IntMatrix(n, n) - u_inv;
    const IntMatrix adj = adjugate(m);
    std::vector<Int> d = s.diagonal();

    std::vector<Int> w(n, 0);
    const std::size_t total = static_cast<std::size_t>(out.lefschetz < 0 ? -out.lefschetz : out.lefschetz);
    if (total > kDefaultEnumerationCap)
        throw CapacityExceeded("torus fixed point count above enumeration cap");
    for (std::size_t idx = 0; idx < total; ++idx) {
        // x = (I - A)^{-1} v with v = U^{-1} w a coset representative
        std::vector<Int> v = u_inv * w;
        std::vector<Int> num = adj * v;
        RationalVector x;
        for (Int c : num)
            x.push_back(Rational(c, out.lefschetz).frac());
        out.points.push_back(std::move(x));
        for (std::size_t i = n; i-- > 0;) {
            if (++w[i] < d[i])
                break;
            w[i] = 0;
        }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

/// (I - A) x for a fixed point x; an integer vector locating its class.
inline AbelianVector torus_class_word(const TorusMap& f, const RationalVector& x) {
    const IntMatrix m = identity_minus(f.matrix);
    AbelianVector v;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < f.dim(); ++j)
            acc = acc + Rational(m(i, j)) * x[j];
        if (!acc.is_integer())
            throw std::logic_error("point is not a fixed point of the torus map");
        v.coords.push_back(acc.num());
    }
    return v;
}

struct TorusTrace {
    std::shared_ptr<const ReidemeisterClassSet> classes;
    std::vector<FixedPointRecord> records;
    Trace trace;
    std::size_t nielsen = 0;
};

inline std::string format_point(const RationalVector& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (i ? "," : "") + x[i].str();
    return s + ")";
}

/// Reidemeister trace of the torus map: one record per fixed point, index
/// sign det(I - A), class given by (I - A) x.
inline TorusTrace torus_trace(const TorusMap& f) {
    const int index = generic_index(f.matrix);
    auto fp = torus_fixed_points(f);
    TorusTrace out;
    out.classes = std::make_shared<const ReidemeisterClassSet>(f.fundamental_group(), f.induced());
    for (const auto& x : fp.points)
        out.records.push_back(FixedPointRecord{format_point(x), index, torus_class_word(f, x), {}});
    out.trace = reidemeister_trace(out.records, *out.classes);
    out.nielsen = nielsen_number(out.trace);
    return out;
}

/// Whether fixed points map bijectively onto the Reidemeister classes.
inline bool torus_class_bijection_check(const TorusMap& f) {
    if (determinant(identity_minus(f.matrix)) == 0)
        throw Degenerate("torus map has non-isolated fixed points");
    auto fp = torus_fixed_points(f);
    ReidemeisterClassSet classes(f.fundamental_group(), f.induced());
    auto count = classes.class_count();
    if (!count || *count != fp.points.size())
        return false;
    std::set<ClassId> hit;
    for (const auto& x : fp.points) {
        auto c = classes.class_of(torus_class_word(f, x));
        if (!c || !hit.insert(*c).second)
            return false;
    }
    return hit.size() == *count;
}

} // namespace fixpt
