#pragma once

#include <algorithm>
#include <span>

#include "core.hpp"

namespace structnorm {

/// J = [[0, I_n], [-I_n, 0]].
template <std::floating_point Real = double>
Matrix<Real> make_J(HalfDimension n) {
    const Index h = n.value();
    Matrix<Real> j = Matrix<Real>::Zero(2 * h, 2 * h);
    for (Index k = 0; k < h; ++k) {
        j(k, h + k) = 1;
        j(h + k, k) = -1;
    }
    return j;
}

/// m x m flip (anti-identity).
template <std::floating_point Real = double>
Matrix<Real> make_F(Index m) {
    if (m < 1)
        throw Error("make_F: size must be at least 1");
    Matrix<Real> f = Matrix<Real>::Zero(m, m);
    for (Index k = 0; k < m; ++k)
        f(k, m - 1 - k) = 1;
    return f;
}

namespace detail {

// J * A without forming J.
template <std::floating_point Real>
Matrix<Real> left_J(const Matrix<Real>& a) {
    const Index h = a.rows() / 2;
    Matrix<Real> s(a.rows(), a.cols());
    s.topRows(h) = a.bottomRows(h);
    s.bottomRows(h) = -a.topRows(h);
    return s;
}

// F * A: reverse the row order.
template <std::floating_point Real>
Matrix<Real> left_F(const Matrix<Real>& a) {
    return a.colwise().reverse();
}

} // namespace detail

/// ||S - sigma S^H||_F / max(1, ||A||_F) with S = JA or FA.
template <std::floating_point Real>
Real check_structure(const Matrix<Real>& a, Structure tag) {
    if (a.rows() != a.cols())
        throw Error("check_structure: matrix is not square");
    const bool uses_j = family_of(tag) == Family::symplectic;
    if (uses_j && a.rows() % 2 != 0)
        throw Error("check_structure: (skew-)Hamiltonian structure needs an even dimension");
    Matrix<Real> s = uses_j ? detail::left_J(a) : detail::left_F(a);
    const Real sigma = hermitian_sign(tag);
    Matrix<Real> diff = s - sigma * s.adjoint();
    return diff.norm() / std::max(Real(1), a.norm());
}

template <std::floating_point Real>
bool is_structured(const Matrix<Real>& a, Structure tag, Real tol) {
    return check_structure(a, tag) <= tol;
}

/// Assembles the 2n x 2n matrix of the given structure from its free blocks.
///
/// `top_left` is unconstrained. `top_right` and `bottom_left` must already
/// satisfy the block constraints of the tag: Hermitian (Hamiltonian), skew-Hermitian
/// (skew-Hamiltonian), F*block Hermitian (per-Hermitian) or F*block skew-Hermitian
/// (perskew-Hermitian). The bottom-right block is derived from `top_left`:
/// -B^H, B^H, F B^H F or -F B^H F respectively.
template <std::floating_point Real>
Matrix<Real> assemble_blocks(Structure tag, const Matrix<Real>& top_left, const Matrix<Real>& top_right,
                             const Matrix<Real>& bottom_left) {
    const Index h = top_left.rows();
    if (top_left.cols() != h || top_right.rows() != h || top_right.cols() != h || bottom_left.rows() != h ||
        bottom_left.cols() != h)
        throw Error("assemble_blocks: blocks must all be n x n");
    Matrix<Real> a(2 * h, 2 * h);
    a.topLeftCorner(h, h) = top_left;
    a.topRightCorner(h, h) = top_right;
    a.bottomLeftCorner(h, h) = bottom_left;
    Matrix<Real> tl_h = top_left.adjoint();
    switch (tag) {
    case Structure::hamiltonian:
        a.bottomRightCorner(h, h) = -tl_h;
        break;
    case Structure::skew_hamiltonian:
        a.bottomRightCorner(h, h) = tl_h;
        break;
    case Structure::per_hermitian:
        a.bottomRightCorner(h, h) = tl_h.colwise().reverse().rowwise().reverse();
        break;
    case Structure::perskew_hermitian:
        a.bottomRightCorner(h, h) = -tl_h.colwise().reverse().rowwise().reverse();
        break;
    }
    return a;
}

/// Diagonal matrix of the given structure built from the leading n entries:
/// diag(D, -D^H), diag(D, D^H), diag(D, F D^H F), diag(D, -F D^H F).
template <std::floating_point Real>
Matrix<Real> structured_diagonal(Structure tag, std::span<const std::complex<Real>> leading) {
    const Index h = static_cast<Index>(leading.size());
    if (h < 1)
        throw Error("structured_diagonal: need at least one entry");
    Matrix<Real> d = Matrix<Real>::Zero(2 * h, 2 * h);
    for (Index k = 0; k < h; ++k) {
        const auto v = leading[static_cast<std::size_t>(k)];
        d(k, k) = v;
        switch (tag) {
        case Structure::hamiltonian:
            d(h + k, h + k) = -std::conj(v);
            break;
        case Structure::skew_hamiltonian:
            d(h + k, h + k) = std::conj(v);
            break;
        case Structure::per_hermitian:
            d(2 * h - 1 - k, 2 * h - 1 - k) = std::conj(v);
            break;
        case Structure::perskew_hermitian:
            d(2 * h - 1 - k, 2 * h - 1 - k) = -std::conj(v);
            break;
        }
    }
    return d;
}

} // namespace structnorm
