#pragma once

#include "fixpt/integer.hpp"

#include <cstdlib>

namespace fixpt {

/// U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ... , di >= 0.
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;

    std::vector<Int> diagonal() const {
        std::vector<Int> d;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
            d.push_back(D(i, i));
        return d;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b)
        return;
    for (std::size_t j = 0; j < m.cols(); ++j)
        std::swap(m(a, j), m(b, j));
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b)
        return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        std::swap(m(i, a), m(i, b));
}

// row[dst] += q * row[src]
inline void add_row(IntMatrix& m, std::size_t dst, std::size_t src, Int q) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        m(dst, j) = checked_add(m(dst, j), checked_mul(q, m(src, j)));
}

inline void add_col(IntMatrix& m, std::size_t dst, std::size_t src, Int q) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        m(i, dst) = checked_add(m(i, dst), checked_mul(q, m(i, src)));
}

inline void negate_row(IntMatrix& m, std::size_t r) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        m(r, j) = checked_sub(0, m(r, j));
}

// nearest-integer quotient; keeps remainders at most |b|/2
inline Int round_div(Int a, Int b) {
    Int q = a / b;
    Int rem = a - q * b;
    if (2 * std::llabs(rem) > std::llabs(b))
        q += ((rem < 0) == (b < 0)) ? 1 : -1;
    return q;
}

} // namespace detail

/// Smith normal form by repeated smallest-pivot elimination. Row operations
/// are mirrored into U and column operations into V.
inline SmithForm smith_normal_form(const IntMatrix& m) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    SmithForm s{IntMatrix::identity(r), m, IntMatrix::identity(c)};
    IntMatrix& a = s.D;

    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::size_t pi = r, pj = c;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (a(i, j) != 0 && (pi == r || std::llabs(a(i, j)) < std::llabs(a(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == r)
                return s;
            detail::swap_rows(a, t, pi);
            detail::swap_rows(s.U, t, pi);
            detail::swap_cols(a, t, pj);
            detail::swap_cols(s.V, t, pj);

            bool residue = false;
            const Int p = a(t, t);
            for (std::size_t i = t + 1; i < r; ++i) {
                if (a(i, t) == 0)
                    continue;
                Int q = detail::round_div(a(i, t), p);
                detail::add_row(a, i, t, -q);
                detail::add_row(s.U, i, t, -q);
                residue |= a(i, t) != 0;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (a(t, j) == 0)
                    continue;
                Int q = detail::round_div(a(t, j), p);
                detail::add_col(a, j, t, -q);
                detail::add_col(s.V, j, t, -q);
                residue |= a(t, j) != 0;
            }
            if (residue)
                continue;

            // divisibility: fold a non-multiple row into the pivot row and retry
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (a(i, j) % p != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r)
                break;
            detail::add_row(a, t, bad, 1);
            detail::add_row(s.U, t, bad, 1);
        }
        if (a(t, t) < 0) {
            detail::negate_row(a, t);
            detail::negate_row(s.U, t);
        }
    }
    return s;
}

} // namespace fixpt
