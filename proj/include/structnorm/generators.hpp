#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rotations.hpp"
#include "structure.hpp"

namespace structnorm {

namespace detail {

template <std::floating_point Real, class Rng>
Matrix<Real> gaussian_matrix(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<Real> normal;
    Matrix<Real> g(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) {
            const Real re = normal(rng);
            const Real im = normal(rng);
            g(r, c) = {re, im};
        }
    return g;
}

// Random block satisfying the off-diagonal block constraint of the tag.
template <std::floating_point Real, class Rng>
Matrix<Real> constrained_block(Structure tag, Index n, Rng& rng) {
    const Matrix<Real> g = gaussian_matrix<Real>(n, n, rng);
    const Matrix<Real> sym = hermitian_sign(tag) > 0 ? Matrix<Real>((g + g.adjoint()) / Real(2))
                                                     : Matrix<Real>((g - g.adjoint()) / Real(2));
    if (family_of(tag) == Family::symplectic)
        return sym;
    // F * (F B) = B with F B (skew-)Hermitian.
    return sym.colwise().reverse();
}

// Real part (or imaginary part) kept at least `gap` away from zero.
template <std::floating_point Real, class Rng>
Real away_from_zero(Rng& rng, Real gap) {
    std::normal_distribution<Real> normal;
    const Real v = normal(rng);
    return std::copysign(gap + std::abs(v), v);
}

} // namespace detail

/// Random 2n x 2n matrix of the given structure, deterministic in `seed`.
///
/// Blocks are drawn with independent standard-normal real and imaginary parts;
/// the off-diagonal blocks are then symmetrized so that the structural identity
/// holds up to rounding.
template <std::floating_point Real = double>
Matrix<Real> gen_structured(Structure tag, HalfDimension half, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Index n = half.value();
    const Matrix<Real> top_left = detail::gaussian_matrix<Real>(n, n, rng);
    const Matrix<Real> top_right = detail::constrained_block<Real>(tag, n, rng);
    const Matrix<Real> bottom_left = detail::constrained_block<Real>(tag, n, rng);
    return assemble_blocks(tag, top_left, top_right, bottom_left);
}

/// Product of `count` random rotations of the family.
template <std::floating_point Real, class Rng>
Matrix<Real> random_structured_unitary(Family family, HalfDimension half, Index count, Rng& rng) {
    Matrix<Real> u = Matrix<Real>::Identity(half.full(), half.full());
    for (Index k = 0; k < count; ++k)
        apply_right(u, random_rotation<Real>(family, half, rng));
    return u;
}

template <std::floating_point Real>
struct NormalFixture {
    Matrix<Real> a; // U D U^H
    Matrix<Real> u; // structured unitary
    Matrix<Real> d; // structured diagonal
};

/// Normal matrix of the given structure that the matching rotation family
/// diagonalizes exactly: A = U D U^H with D in the tag's diagonal form and
/// U a product of `rotations` random structure-preserving rotations.
///
/// Eigenvalues avoid the excluded set of the tag (purely imaginary for
/// Hamiltonian/perskew-Hermitian, real for skew-Hamiltonian/per-Hermitian).
template <std::floating_point Real = double>
NormalFixture<Real> gen_normal_structured(Structure tag, HalfDimension half, std::uint64_t seed, Index rotations) {
    if (rotations < 1)
        throw Error("gen_normal_structured: need at least one rotation");
    std::mt19937_64 rng(seed);
    std::normal_distribution<Real> normal;
    const bool real_part_nonzero = tag == Structure::hamiltonian || tag == Structure::perskew_hermitian;
    std::vector<std::complex<Real>> leading(static_cast<std::size_t>(half.value()));
    for (auto& v : leading) {
        const Real fixed = detail::away_from_zero<Real>(rng, Real(0.25));
        const Real free = normal(rng);
        v = real_part_nonzero ? std::complex<Real>(fixed, free) : std::complex<Real>(free, fixed);
    }
    NormalFixture<Real> out;
    out.d = structured_diagonal<Real>(tag, leading);
    out.u = random_structured_unitary<Real>(family_of(tag), half, rotations, rng);
    out.a = out.u * out.d * out.u.adjoint();
    return out;
}

/// Skew-Hamiltonian U [[T, W12], [0, T^H]] U^H with T upper triangular whose
/// first `real_count` diagonal entries are real, so those are (double) real
/// eigenvalues. U is a product of `rotations` random symplectic rotations.
template <std::floating_point Real = double>
Matrix<Real> gen_skew_hamiltonian_with_real_eigenvalues(HalfDimension half, std::uint64_t seed, Index real_count,
                                                        Index rotations) {
    const Index n = half.value();
    if (real_count < 0 || real_count > n)
        throw Error("real eigenvalue count out of range");
    std::mt19937_64 rng(seed);
    Matrix<Real> t = detail::gaussian_matrix<Real>(n, n, rng).template triangularView<Eigen::Upper>();
    for (Index k = 0; k < real_count; ++k)
        t(k, k) = t(k, k).real();
    const Matrix<Real> w12 = detail::constrained_block<Real>(Structure::skew_hamiltonian, n, rng);
    const Matrix<Real> w = assemble_blocks<Real>(Structure::skew_hamiltonian, t, w12, Matrix<Real>::Zero(n, n));
    const Matrix<Real> u = random_structured_unitary<Real>(Family::symplectic, half, rotations, rng);
    return u * w * u.adjoint();
}

} // namespace structnorm
