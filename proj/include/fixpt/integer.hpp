#pragma once

// Exact integer and rational arithmetic over small dense matrices.
//
// Everything in this library is exact: entries are 64-bit integers and every
// product or sum is overflow-checked. Determinants use fraction-free
// (Bareiss) elimination with 128-bit intermediates.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fixpt {

using Int = std::int64_t;

/// Thrown when an exact computation would leave the 64-bit range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("integer overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r))
        throw OverflowError("integer overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("integer overflow in multiplication");
    return r;
}

inline Int narrow(__int128 v) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw OverflowError("integer overflow narrowing 128-bit value");
    return static_cast<Int>(v);
}

/// Floor modulus, result in [0, |m|).
inline Int floor_mod(Int a, Int m) {
    if (m == 0)
        throw std::domain_error("modulus zero");
    if (m < 0)
        m = -m;
    Int r = a % m;
    return r < 0 ? r + m : r;
}

inline Int sign_of(Int v) { return (v > 0) - (v < 0); }

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
inline std::tuple<Int, Int, Int> extended_gcd(Int a, Int b) {
    Int old_r = a, r = b;
    Int old_s = 1, s = 0;
    Int old_t = 0, t = 1;
    while (r != 0) {
        Int q = old_r / r;
        old_r = checked_sub(old_r, checked_mul(q, r));
        std::swap(old_r, r);
        old_s = checked_sub(old_s, checked_mul(q, s));
        std::swap(old_s, s);
        old_t = checked_sub(old_t, checked_mul(q, t));
        std::swap(old_t, t);
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

/// Row-major dense integer matrix.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols, Int fill = 0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
        IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < m.cols_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<std::vector<Int>> to_rows() const {
        std::vector<std::vector<Int>> out(rows_, std::vector<Int>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out[i][j] = (*this)(i, j);
        return out;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](Int v) { return v == 0; });
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? "," : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

inline std::string to_string(const IntMatrix& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Int aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) = checked_add(c(i, j), checked_mul(aik, b(k, j)));
        }
    return c;
}

inline std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v) {
    if (a.cols() != v.size())
        throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<Int> out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out[i] = checked_add(out[i], checked_mul(a(i, j), v[j]));
    return out;
}

inline IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix difference shape mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = checked_sub(a(i, j), b(i, j));
    return c;
}

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix sum shape mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = checked_add(a(i, j), b(i, j));
    return c;
}

/// I - A for square A.
inline IntMatrix identity_minus(const IntMatrix& a) {
    if (!a.square())
        throw std::invalid_argument("identity_minus needs a square matrix");
    return IntMatrix::identity(a.rows()) - a;
}

inline IntMatrix matrix_power(const IntMatrix& a, unsigned exponent) {
    if (!a.square())
        throw std::invalid_argument("matrix_power needs a square matrix");
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base = a;
    while (exponent) {
        if (exponent & 1u)
            result = result * base;
        exponent >>= 1u;
        if (exponent)
            base = base * base;
    }
    return result;
}

/// Exact determinant by Bareiss fraction-free elimination.
inline Int determinant(const IntMatrix& a) {
    if (!a.square())
        throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    std::vector<__int128> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i * n + j] = a(i, j);
    auto at = [&](std::size_t i, std::size_t j) -> __int128& { return m[i * n + j]; };

    int sign = 1;
    __int128 prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && at(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 lhs, rhs, diff;
                if (__builtin_mul_overflow(at(i, j), at(k, k), &lhs) ||
                    __builtin_mul_overflow(at(i, k), at(k, j), &rhs) ||
                    __builtin_sub_overflow(lhs, rhs, &diff))
                    throw OverflowError("determinant intermediate overflow");
                at(i, j) = diff / prev;
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    return narrow(sign * at(n - 1, n - 1));
}

/// Adjugate, so that A * adj(A) = det(A) * I.
inline IntMatrix adjugate(const IntMatrix& a) {
    if (!a.square())
        throw std::invalid_argument("adjugate of a non-square matrix");
    const std::size_t n = a.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (std::size_t r = 0, mr = 0; r < n; ++r) {
                if (r == j)
                    continue;
                for (std::size_t c = 0, mc = 0; c < n; ++c) {
                    if (c == i)
                        continue;
                    minor(mr, mc++) = a(r, c);
                }
                ++mr;
            }
            Int d = determinant(minor);
            adj(i, j) = ((i + j) % 2 == 0) ? d : checked_sub(0, d);
        }
    return adj;
}

/// Reduced fraction with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(Int num) : num_(num), den_(1) {} // NOLINT: implicit from integer
    Rational(Int num, Int den) : num_(num), den_(den) {
        if (den_ == 0)
            throw std::domain_error("zero denominator");
        normalize();
    }

    Int num() const { return num_; }
    Int den() const { return den_; }

    /// Representative of this value modulo 1, in [0, 1).
    Rational frac() const { return Rational(floor_mod(num_, den_), den_); }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(checked_sub(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
    }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend auto operator<=>(const Rational& a, const Rational& b) {
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = checked_sub(0, num_);
            den_ = checked_sub(0, den_);
        }
        Int g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    Int num_ = 0;
    Int den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

using RationalVector = std::vector<Rational>;

} // namespace fixpt
