#pragma once

#include <cmath>

#include "core.hpp"
#include "rotations.hpp"

namespace structnorm {

template <std::floating_point Real = double>
struct GradientResult {
    Matrix<Real> grad; // Z X, Riemannian gradient on the structured unitary group
    Matrix<Real> y;    // Z^H times the unconstrained gradient
    Matrix<Real> x;    // tangent projection of Y at the identity
    Real grad_norm = 0;
};

/// f(Z) = ||diag(Z^H A Z)||_F^2.
template <std::floating_point Real>
Real objective(const Matrix<Real>& a, const Matrix<Real>& z) {
    return (z.adjoint() * a * z).diagonal().squaredNorm();
}

/// Gradient of sum_j |<A Z e_j, Z e_j>|^2 over all of C^{2n x 2n}, with the
/// real/imaginary partials packed as re + i im. Column j is
/// 2 conj(<Az, z>) A z + 2 <Az, z> A^H z at z = Z e_j.
template <std::floating_point Real>
Matrix<Real> euclidean_gradient(const Matrix<Real>& a, const Matrix<Real>& z) {
    const Matrix<Real> az = a * z;
    const Matrix<Real> ahz = a.adjoint() * z;
    Matrix<Real> g(z.rows(), z.cols());
    for (Index j = 0; j < z.cols(); ++j) {
        const std::complex<Real> rayleigh = z.col(j).dot(az.col(j)); // z^H A z
        g.col(j) = Real(2) * std::conj(rayleigh) * az.col(j) + Real(2) * rayleigh * ahz.col(j);
    }
    return g;
}

/// Orthogonal projection onto the tangent space at the identity: skew-Hermitian
/// Hamiltonian matrices [[B, C], [-C, B]] (symplectic) or skew-Hermitian
/// perskew-Hermitian matrices (perplectic).
template <std::floating_point Real>
Matrix<Real> project_tangent(const Matrix<Real>& y, Family family) {
    if (y.rows() != y.cols() || y.rows() % 2 != 0)
        throw Error("project_tangent: need an even square matrix");
    if (family == Family::symplectic) {
        const Index h = y.rows() / 2;
        const Matrix<Real> y11 = y.topLeftCorner(h, h), y12 = y.topRightCorner(h, h);
        const Matrix<Real> y21 = y.bottomLeftCorner(h, h), y22 = y.bottomRightCorner(h, h);
        const Matrix<Real> b = (y11 + y22 - y11.adjoint() - y22.adjoint()) / Real(4);
        const Matrix<Real> c = (y12 - y21 + y12.adjoint() - y21.adjoint()) / Real(4);
        Matrix<Real> x(y.rows(), y.cols());
        x << b, c, -c, b;
        return x;
    }
    // Skew-Hermitian part, then average with its flip F W F: for skew-Hermitian
    // W the perskew condition reads W = F W F. The two involutions commute.
    const Matrix<Real> w = (y - y.adjoint()) / Real(2);
    const Matrix<Real> fwf = w.colwise().reverse().rowwise().reverse();
    return (w + fwf) / Real(2);
}

namespace detail {

template <std::floating_point Real>
void require_structured_unitary(const Matrix<Real>& z, Family family) {
    const Index dim = z.rows();
    if (z.cols() != dim || dim % 2 != 0)
        throw Error("grad_f: Z must be an even square matrix");
    const Real tol = Real(1e-10) * std::sqrt(Real(dim));
    const Real unitary = (z.adjoint() * z - Matrix<Real>::Identity(dim, dim)).norm();
    const Matrix<Real> s = family == Family::symplectic ? make_J<Real>(HalfDimension(dim / 2)) : make_F<Real>(dim);
    const Real preserving = (z.adjoint() * s * z - s).norm();
    if (!(unitary <= tol) || !(preserving <= tol))
        throw Error("grad_f: Z is not a structured unitary (unitarity residual " + std::to_string(unitary) +
                    ", structure residual " + std::to_string(preserving) + ")");
}

} // namespace detail

template <std::floating_point Real>
GradientResult<Real> grad_f(const Matrix<Real>& a, const Matrix<Real>& z, Family family) {
    detail::require_structured_unitary(z, family);
    if (a.rows() != z.rows() || a.cols() != z.cols())
        throw Error("grad_f: dimension mismatch between A and Z");
    GradientResult<Real> out;
    out.y = z.adjoint() * euclidean_gradient(a, z);
    out.x = project_tangent(out.y, family);
    out.grad = z * out.x;
    out.grad_norm = out.x.norm();
    return out;
}

/// eta = 2 / sqrt(4n^2 - 2n).
template <std::floating_point Real = double>
Real pivot_bound_eta(HalfDimension half) {
    const Real n = Real(half.value());
    return Real(2) / std::sqrt(Real(4) * n * n - Real(2) * n);
}

/// alpha with e^{-i alpha} = sgn(conj(x)), x the tangent entry at the pivot;
/// sgn(0) = 1.
template <std::floating_point Real>
Real pivot_alpha(const Matrix<Real>& x, const Pivot& pivot) {
    const auto entry = x(pivot.i - 1, pivot.j - 1);
    return entry == std::complex<Real>(0) ? Real(0) : std::arg(entry);
}

/// |<grad f(Z), Z dR/dphi(i, j, 0, alpha~)>_R| = |Re tr(X^H dR)|.
template <std::floating_point Real>
Real pivot_gain(const GradientResult<Real>& result, const Pivot& pivot) {
    const Matrix<Real>& x = result.x;
    const auto planes = derivative_planes_at_zero<Real>(pivot, pivot_alpha(x, pivot), x.rows());
    std::complex<Real> sum = 0;
    for (const auto& pl : planes) {
        sum += std::conj(x(pl.p, pl.q)) * pl.pq;
        sum += std::conj(x(pl.q, pl.p)) * pl.qp;
    }
    return std::abs(sum.real());
}

template <std::floating_point Real>
Real max_pivot_gain(const GradientResult<Real>& result, Family family) {
    const HalfDimension half(result.x.rows() / 2);
    Real best = 0;
    for (const auto& pv : pivot_set(family, half, Ordering::o1))
        best = std::max(best, pivot_gain(result, pv));
    return best;
}

/// Skip a pivot whose first-order gain falls below eta ||grad f||_F.
template <std::floating_point Real>
bool should_skip(Real gain, Real grad_norm, HalfDimension half) {
    return gain < pivot_bound_eta<Real>(half) * grad_norm;
}

} // namespace structnorm
