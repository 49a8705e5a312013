#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "structure.hpp"

namespace structnorm {

/// The six structure-preserving embeddings of the Givens rotation
/// G = [[c, -s], [conj(s), c]], c = cos(phi), s = e^{i alpha} sin(phi).
enum class RotationKind {
    symp_single,      // G on (i, n+i), alpha = 0
    symp_direct_sum,  // G on (i, j) and on (n+i, n+j)
    symp_concentric,  // G on (i, j), j > n+i, mirrored on (j-n, n+i)
    perp_single,      // G on (i, 2n-i+1), alpha = -pi/2
    perp_direct_sum,  // G on (i, j), j <= n, mirrored on (2n-j+1, 2n-i+1)
    perp_interleaved, // G on (i, j), n < j <= 2n-i, mirrored on (2n-j+1, 2n-i+1)
};

enum class Ordering { o1, o2 };

constexpr Family family_of(RotationKind kind) noexcept {
    switch (kind) {
    case RotationKind::symp_single:
    case RotationKind::symp_direct_sum:
    case RotationKind::symp_concentric:
        return Family::symplectic;
    default:
        return Family::perplectic;
    }
}

constexpr bool is_single(RotationKind kind) noexcept {
    return kind == RotationKind::symp_single || kind == RotationKind::perp_single;
}

/// Single embeddings only exist for one value of alpha.
template <std::floating_point Real = double>
constexpr std::optional<Real> fixed_alpha(RotationKind kind) noexcept {
    if (kind == RotationKind::symp_single)
        return Real(0);
    if (kind == RotationKind::perp_single)
        return -std::numbers::pi_v<Real> / 2;
    return std::nullopt;
}

constexpr std::string_view to_string(RotationKind kind) noexcept {
    switch (kind) {
    case RotationKind::symp_single:
        return "symp_single";
    case RotationKind::symp_direct_sum:
        return "symp_direct_sum";
    case RotationKind::symp_concentric:
        return "symp_concentric";
    case RotationKind::perp_single:
        return "perp_single";
    case RotationKind::perp_direct_sum:
        return "perp_direct_sum";
    case RotationKind::perp_interleaved:
        return "perp_interleaved";
    }
    return "?";
}

inline RotationKind parse_rotation_kind(std::string_view name) {
    for (auto kind : {RotationKind::symp_single, RotationKind::symp_direct_sum, RotationKind::symp_concentric,
                      RotationKind::perp_single, RotationKind::perp_direct_sum, RotationKind::perp_interleaved})
        if (name == to_string(kind))
            return kind;
    throw Error("unknown rotation kind '" + std::string(name) + "'");
}

constexpr std::string_view to_string(Ordering ordering) noexcept { return ordering == Ordering::o1 ? "o1" : "o2"; }

inline Ordering parse_ordering(std::string_view name) {
    if (name == "o1" || name == "O1")
        return Ordering::o1;
    if (name == "o2" || name == "O2")
        return Ordering::o2;
    throw Error("unknown ordering '" + std::string(name) + "'");
}

/// Pivot position. Indices are 1-based, as in the pivot diagrams; (i, j) is the
/// upper-triangle position the first embedded Givens rotation acts on.
struct Pivot {
    RotationKind kind;
    Index i;
    Index j;

    friend bool operator==(const Pivot&, const Pivot&) = default;
};

template <std::floating_point Real = double>
struct RotationSpec {
    RotationKind kind;
    Index i;
    Index j;
    Real phi = 0;   // (-pi/4, pi/4]
    Real alpha = 0; // (-pi/2, pi/2]; ignored for single embeddings

    Pivot pivot() const noexcept { return {kind, i, j}; }
};

using PivotSet = std::vector<Pivot>;

/// True iff (i, j) is a pivot position of `kind` for 2n x 2n matrices.
constexpr bool in_pivot_set(RotationKind kind, Index i, Index j, HalfDimension half) noexcept {
    const Index n = half.value();
    switch (kind) {
    case RotationKind::symp_single:
        return 1 <= i && i <= n && j == n + i;
    case RotationKind::symp_direct_sum:
    case RotationKind::perp_direct_sum:
        return 1 <= i && i < j && j <= n;
    case RotationKind::symp_concentric:
        return 1 <= i && i < n && n + i < j && j <= 2 * n;
    case RotationKind::perp_single:
        return 1 <= i && i <= n && j == 2 * n - i + 1;
    case RotationKind::perp_interleaved:
        return 1 <= i && i < n && n + 1 <= j && j <= 2 * n - i;
    }
    return false;
}

/// Kind whose pivot set contains (i, j) for the given family, if any.
constexpr std::optional<RotationKind> kind_at(Family family, Index i, Index j, HalfDimension half) noexcept {
    const std::array symp{RotationKind::symp_direct_sum, RotationKind::symp_single, RotationKind::symp_concentric};
    const std::array perp{RotationKind::perp_direct_sum, RotationKind::perp_single, RotationKind::perp_interleaved};
    for (auto kind : family == Family::symplectic ? symp : perp)
        if (in_pivot_set(kind, i, j, half))
            return kind;
    return std::nullopt;
}

/// One full cycle of n^2 pivot positions.
///
/// O1 is the row-wise ordering: the direct-sum block row by row, the single
/// embeddings along their (anti)diagonal, then the concentric/interleaved block
/// row by row. O2 walks every row from right to left over the same positions.
inline PivotSet pivot_set(Family family, HalfDimension half, Ordering ordering) {
    const Index n = half.value();
    PivotSet set;
    set.reserve(static_cast<std::size_t>(n * n));
    if (ordering == Ordering::o2) {
        for (Index i = 1; i <= n; ++i)
            for (Index j = 2 * n; j > i; --j)
                if (auto kind = kind_at(family, i, j, half))
                    set.push_back({*kind, i, j});
        return set;
    }
    const bool symp = family == Family::symplectic;
    const auto ds = symp ? RotationKind::symp_direct_sum : RotationKind::perp_direct_sum;
    for (Index i = 1; i < n; ++i)
        for (Index j = i + 1; j <= n; ++j)
            set.push_back({ds, i, j});
    for (Index i = 1; i <= n; ++i)
        set.push_back(symp ? Pivot{RotationKind::symp_single, i, n + i}
                           : Pivot{RotationKind::perp_single, i, 2 * n - i + 1});
    for (Index i = 1; i < n; ++i) {
        if (symp) {
            for (Index j = n + i + 1; j <= 2 * n; ++j)
                set.push_back({RotationKind::symp_concentric, i, j});
        } else {
            for (Index j = n + 1; j <= 2 * n - i; ++j)
                set.push_back({RotationKind::perp_interleaved, i, j});
        }
    }
    return set;
}

/// 2x2 unitary block acting on rows/columns (p, q), 0-based. Entries are
/// [[pp, pq], [qp, qq]] in the (p, q) coordinates.
template <std::floating_point Real>
struct PlaneRotation {
    Index p;
    Index q;
    std::complex<Real> pp, pq, qp, qq;
};

template <std::floating_point Real>
struct PlaneSet {
    std::array<PlaneRotation<Real>, 2> planes;
    int count = 0;

    const PlaneRotation<Real>* begin() const noexcept { return planes.data(); }
    const PlaneRotation<Real>* end() const noexcept { return planes.data() + count; }
};

namespace detail {

enum class Off { minus_s, conj_s, minus_conj_s, s };

template <std::floating_point Real>
std::complex<Real> off_value(Off pattern, std::complex<Real> s) {
    switch (pattern) {
    case Off::minus_s:
        return -s;
    case Off::conj_s:
        return std::conj(s);
    case Off::minus_conj_s:
        return -std::conj(s);
    case Off::s:
        return s;
    }
    return {};
}

struct PlanePattern {
    Index p, q;
    Off upper, lower;
};

struct EmbeddingPattern {
    std::array<PlanePattern, 2> planes;
    int count;
};

inline EmbeddingPattern embedding(const Pivot& pv, Index n) {
    const Index i = pv.i - 1;
    const Index j = pv.j - 1;
    const PlanePattern first{i, j, Off::minus_s, Off::conj_s};
    switch (pv.kind) {
    case RotationKind::symp_single:
    case RotationKind::perp_single:
        return {{first, first}, 1};
    case RotationKind::symp_direct_sum:
        return {{first, PlanePattern{n + i, n + j, Off::minus_s, Off::conj_s}}, 2};
    case RotationKind::symp_concentric:
        return {{first, PlanePattern{j - n, n + i, Off::minus_conj_s, Off::s}}, 2};
    case RotationKind::perp_direct_sum:
    case RotationKind::perp_interleaved:
        return {{first, PlanePattern{2 * n - 1 - j, 2 * n - 1 - i, Off::conj_s, Off::minus_s}}, 2};
    }
    return {{first, first}, 1};
}

inline void require_pivot(const Pivot& pv, Index dim) {
    if (dim < 2 || dim % 2 != 0)
        throw Error("rotation dimension must be even and positive, got " + std::to_string(dim));
    if (!in_pivot_set(pv.kind, pv.i, pv.j, HalfDimension(dim / 2)))
        throw Error("pivot (" + std::to_string(pv.i) + ", " + std::to_string(pv.j) + ") is not a " +
                    std::string(to_string(pv.kind)) + " position for dimension " + std::to_string(dim));
}

template <std::floating_point Real>
PlaneSet<Real> evaluate(const EmbeddingPattern& e, std::complex<Real> c, std::complex<Real> s) {
    PlaneSet<Real> out;
    out.count = e.count;
    for (int k = 0; k < e.count; ++k) {
        const auto& pl = e.planes[static_cast<std::size_t>(k)];
        out.planes[static_cast<std::size_t>(k)] = {pl.p, pl.q, c, off_value(pl.upper, s), off_value(pl.lower, s), c};
    }
    return out;
}

template <std::floating_point Real>
Real effective_alpha(const RotationSpec<Real>& spec) {
    return fixed_alpha<Real>(spec.kind).value_or(spec.alpha);
}

} // namespace detail

/// The 2x2 blocks of R(i, j, phi, alpha); throws when the pivot does not fit the kind.
template <std::floating_point Real>
PlaneSet<Real> planes_of(const RotationSpec<Real>& spec, Index dim) {
    detail::require_pivot(spec.pivot(), dim);
    const Real alpha = detail::effective_alpha(spec);
    const std::complex<Real> s = std::polar(std::sin(spec.phi), alpha);
    return detail::evaluate<Real>(detail::embedding(spec.pivot(), dim / 2), std::cos(spec.phi), s);
}

/// Blocks of dR/dphi at phi = 0 (zero diagonal, s replaced by e^{i alpha}).
template <std::floating_point Real>
PlaneSet<Real> derivative_planes_at_zero(const Pivot& pivot, Real alpha, Index dim) {
    detail::require_pivot(pivot, dim);
    const Real a = fixed_alpha<Real>(pivot.kind).value_or(alpha);
    return detail::evaluate<Real>(detail::embedding(pivot, dim / 2), Real(0), std::polar(Real(1), a));
}

template <std::floating_point Real>
Matrix<Real> dense_from_planes(const PlaneSet<Real>& planes, Index dim, bool identity_background) {
    Matrix<Real> r = Matrix<Real>::Zero(dim, dim);
    if (identity_background)
        r.setIdentity();
    for (const auto& pl : planes) {
        r(pl.p, pl.p) = pl.pp;
        r(pl.p, pl.q) = pl.pq;
        r(pl.q, pl.p) = pl.qp;
        r(pl.q, pl.q) = pl.qq;
    }
    return r;
}

/// Explicit 2n x 2n rotation matrix.
template <std::floating_point Real>
Matrix<Real> build_rotation(const RotationSpec<Real>& spec, Index dim) {
    return dense_from_planes(planes_of(spec, dim), dim, true);
}

/// A <- R^H A R, touching only the 2 or 4 affected rows, then columns.
template <std::floating_point Real>
void apply_similarity(Matrix<Real>& a, const RotationSpec<Real>& spec) {
    if (a.rows() != a.cols())
        throw Error("apply_similarity: matrix is not square");
    const auto planes = planes_of(spec, a.rows());
    const Index dim = a.rows();
    for (const auto& pl : planes) {
        const auto cpp = std::conj(pl.pp), cpq = std::conj(pl.pq), cqp = std::conj(pl.qp), cqq = std::conj(pl.qq);
        for (Index k = 0; k < dim; ++k) {
            const auto ap = a(pl.p, k), aq = a(pl.q, k);
            a(pl.p, k) = cpp * ap + cqp * aq;
            a(pl.q, k) = cpq * ap + cqq * aq;
        }
        for (Index k = 0; k < dim; ++k) {
            const auto ap = a(k, pl.p), aq = a(k, pl.q);
            a(k, pl.p) = ap * pl.pp + aq * pl.qp;
            a(k, pl.q) = ap * pl.pq + aq * pl.qq;
        }
    }
}

/// Z <- Z R (column update only).
template <std::floating_point Real>
void apply_right(Matrix<Real>& z, const RotationSpec<Real>& spec) {
    const auto planes = planes_of(spec, z.cols());
    for (const auto& pl : planes) {
        for (Index k = 0; k < z.rows(); ++k) {
            const auto zp = z(k, pl.p), zq = z(k, pl.q);
            z(k, pl.p) = zp * pl.pp + zq * pl.qp;
            z(k, pl.q) = zp * pl.pq + zq * pl.qq;
        }
    }
}

/// ||R^H S R - S||_F, S = J for symplectic kinds and F for perplectic kinds.
template <std::floating_point Real>
Real is_structure_preserving(const RotationSpec<Real>& spec, Index dim) {
    const Matrix<Real> r = build_rotation(spec, dim);
    const Matrix<Real> s = family_of(spec.kind) == Family::symplectic ? make_J<Real>(HalfDimension(dim / 2))
                                                                       : make_F<Real>(dim);
    return (r.adjoint() * s * r - s).norm();
}

/// Uniformly random pivot of the family with phi in (-pi/4, pi/4], alpha in (-pi/2, pi/2].
template <std::floating_point Real, class Rng>
RotationSpec<Real> random_rotation(Family family, HalfDimension half, Rng& rng) {
    const auto set = pivot_set(family, half, Ordering::o1);
    std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
    std::uniform_real_distribution<Real> unit(Real(-1), Real(1));
    const auto& pv = set[pick(rng)];
    RotationSpec<Real> spec{pv.kind, pv.i, pv.j};
    spec.phi = unit(rng) * std::numbers::pi_v<Real> / 4;
    spec.alpha = fixed_alpha<Real>(pv.kind).value_or(unit(rng) * std::numbers::pi_v<Real> / 2);
    return spec;
}

} // namespace structnorm
