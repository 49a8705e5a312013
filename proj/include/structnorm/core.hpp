#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace structnorm {

/// Dense complex matrix, column-major. Carrier for A, Z, U, D and X.
template <std::floating_point Real>
using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

using ComplexMatrix = Matrix<double>;
using Index = Eigen::Index;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Half of the (even) matrix dimension: matrices handled here are 2n x 2n.
class HalfDimension {
  public:
    constexpr explicit HalfDimension(Index n) : n_(n) {
        if (n < 1)
            throw Error("half dimension must be at least 1, got " + std::to_string(n));
    }
    constexpr Index value() const noexcept { return n_; }
    constexpr Index full() const noexcept { return 2 * n_; }

  private:
    Index n_;
};

enum class Structure { hamiltonian, skew_hamiltonian, per_hermitian, perskew_hermitian };

/// Structure-preserving unitary group: symplectic (J) or perplectic (F).
enum class Family { symplectic, perplectic };

constexpr Family family_of(Structure tag) noexcept {
    return (tag == Structure::hamiltonian || tag == Structure::skew_hamiltonian) ? Family::symplectic
                                                                                  : Family::perplectic;
}

/// sigma in (S A)^H = sigma (S A), S = J or F.
constexpr int hermitian_sign(Structure tag) noexcept {
    return (tag == Structure::hamiltonian || tag == Structure::per_hermitian) ? 1 : -1;
}

constexpr std::string_view to_string(Structure tag) noexcept {
    switch (tag) {
    case Structure::hamiltonian:
        return "hamiltonian";
    case Structure::skew_hamiltonian:
        return "skew-hamiltonian";
    case Structure::per_hermitian:
        return "per-hermitian";
    case Structure::perskew_hermitian:
        return "perskew-hermitian";
    }
    return "?";
}

constexpr std::string_view to_string(Family family) noexcept {
    return family == Family::symplectic ? "symplectic" : "perplectic";
}

inline Structure parse_structure(std::string_view name) {
    for (auto tag : {Structure::hamiltonian, Structure::skew_hamiltonian, Structure::per_hermitian,
                     Structure::perskew_hermitian}) {
        if (name == to_string(tag))
            return tag;
    }
    // Accept underscore spellings too.
    if (name == "skew_hamiltonian")
        return Structure::skew_hamiltonian;
    if (name == "per_hermitian")
        return Structure::per_hermitian;
    if (name == "perskew_hermitian")
        return Structure::perskew_hermitian;
    throw Error("unknown structure '" + std::string(name) + "'");
}

template <std::floating_point Real>
Real frob_norm(const Matrix<Real>& a) {
    return a.norm();
}

template <std::floating_point Real>
Real diag_norm_sq(const Matrix<Real>& a) {
    if (a.rows() != a.cols())
        throw Error("diag_norm_sq: matrix is not square");
    return a.diagonal().squaredNorm();
}

template <std::floating_point Real>
Real offdiag_norm_sq(const Matrix<Real>& a) {
    if (a.rows() != a.cols())
        throw Error("offdiag_norm_sq: matrix is not square");
    Real sum = 0;
    for (Index c = 0; c < a.cols(); ++c)
        for (Index r = 0; r < a.rows(); ++r)
            if (r != c)
                sum += std::norm(a(r, c));
    return sum;
}

/// ||A A^H - A^H A||_F.
template <std::floating_point Real>
Real normality_residual(const Matrix<Real>& a) {
    Matrix<Real> ah = a.adjoint();
    return (a * ah - ah * a).norm();
}

template <std::floating_point Real>
Real distance_to(const Matrix<Real>& a, const Matrix<Real>& x) {
    if (a.rows() != x.rows() || a.cols() != x.cols())
        throw Error("distance_to: dimension mismatch");
    return (a - x).norm();
}

template <std::floating_point Real>
bool all_finite(const Matrix<Real>& a) {
    for (Index c = 0; c < a.cols(); ++c)
        for (Index r = 0; r < a.rows(); ++r)
            if (!std::isfinite(a(r, c).real()) || !std::isfinite(a(r, c).imag()))
                return false;
    return true;
}

} // namespace structnorm
