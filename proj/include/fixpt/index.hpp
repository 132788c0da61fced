#pragma once

// Fixed point indices of generic fixed points, computed as the sign of
// det(I - J) for the Jacobian J, together with the Jacobian of the cyclic
// (Fuller) product map and the determinant identity relating the two.

#include "fixpt/integer.hpp"

#include <stdexcept>
#include <vector>

namespace fixpt {

/// det(I - J) = 0: the fixed point is not generic.
class Degenerate : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Jacobians of f along an orbit: blocks[i] is the derivative of f at f^i(x).
class JacobianChain {
public:
    explicit JacobianChain(std::vector<IntMatrix> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty())
            throw std::invalid_argument("Jacobian chain needs at least one block");
        const std::size_t m = blocks_.front().rows();
        if (m == 0)
            throw std::invalid_argument("Jacobian blocks must be nonempty");
        for (const auto& b : blocks_)
            if (b.rows() != m || b.cols() != m)
                throw std::invalid_argument("Jacobian blocks must be square of one dimension");
    }

    std::size_t dim() const { return blocks_.front().rows(); }
    std::size_t length() const { return blocks_.size(); }
    const std::vector<IntMatrix>& blocks() const { return blocks_; }

    /// Chain started at f^s(x) instead of x.
    JacobianChain shifted(std::size_t s) const {
        std::vector<IntMatrix> b;
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            b.push_back(blocks_[(i + s) % blocks_.size()]);
        return JacobianChain(std::move(b));
    }

private:
    std::vector<IntMatrix> blocks_;
};

/// sign det(I - J), exactly; throws Degenerate when the determinant vanishes.
inline int generic_index(const IntMatrix& jacobian) {
    Int d = determinant(identity_minus(jacobian));
    if (d == 0)
        throw Degenerate("det(I - J) = 0: non-generic fixed point");
    return d > 0 ? 1 : -1;
}

/// Derivative of f^l at x: blocks[l-1] * ... * blocks[1] * blocks[0].
inline IntMatrix chain_jacobian(const JacobianChain& chain) {
    IntMatrix p = chain.blocks().front();
    for (std::size_t i = 1; i < chain.length(); ++i)
        p = chain.blocks()[i] * p;
    return p;
}

/// Jacobian of (x_1, ..., x_l) -> (f(x_l), f(x_1), ..., f(x_{l-1})) at the
/// orbit point: last block in the top-right corner, block i on the block
/// subdiagonal at (i+1, i).
inline IntMatrix fuller_block_jacobian(const JacobianChain& chain) {
    const std::size_t m = chain.dim(), l = chain.length();
    if (l == 1)
        return chain.blocks().front();
    IntMatrix big(m * l, m * l);
    auto place = [&](std::size_t br, std::size_t bc, const IntMatrix& b) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                big(br * m + i, bc * m + j) = b(i, j);
    };
    place(0, l - 1, chain.blocks()[l - 1]);
    for (std::size_t i = 0; i + 1 < l; ++i)
        place(i + 1, i, chain.blocks()[i]);
    return big;
}

struct DeterminantIdentity {
    Int lhs; // det(I - fuller block Jacobian)
    Int rhs; // det(I - chain product)
    bool equal;
};

inline DeterminantIdentity fuller_determinant_identity(const JacobianChain& chain) {
    Int lhs = determinant(identity_minus(fuller_block_jacobian(chain)));
    Int rhs = determinant(identity_minus(chain_jacobian(chain)));
    return {lhs, rhs, lhs == rhs};
}

/// Whether every cyclic shift of the chain yields the same index.
inline bool iterate_index_invariance(const JacobianChain& chain) {
    const int base = generic_index(chain_jacobian(chain));
    for (std::size_t s = 1; s < chain.length(); ++s)
        if (generic_index(chain_jacobian(chain.shifted(s))) != base)
            return false;
    return true;
}

} // namespace fixpt
