#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"

namespace structnorm {

/// 2x2 pivot submatrix [[a_ii, a_ij], [a_ji, a_jj]] and the alpha regime.
///
/// `fixed_alpha` is set for single embeddings (0 symplectic, -pi/2 perplectic);
/// double embeddings leave both angles free.
template <std::floating_point Real = double>
struct AngleProblem {
    std::complex<Real> aii, aij, aji, ajj;
    std::optional<Real> fixed_alpha;
};

enum class AngleCase { trivial, phi_quarter, alpha_half, cubic, fixed_1d };

constexpr std::string_view to_string(AngleCase c) noexcept {
    switch (c) {
    case AngleCase::trivial:
        return "trivial";
    case AngleCase::phi_quarter:
        return "phi_quarter";
    case AngleCase::alpha_half:
        return "alpha_half";
    case AngleCase::cubic:
        return "cubic";
    case AngleCase::fixed_1d:
        return "fixed_1d";
    }
    return "?";
}

template <std::floating_point Real = double>
struct AngleSolution {
    Real phi = 0;
    Real alpha = 0;
    Real g_value = 0;
    Real gain = 0; // g_value - g(0, 0)
    AngleCase case_label = AngleCase::trivial;
};

/// c3 tau^3 + c2 tau^2 + c1 tau + c0, named by power of tau.
template <std::floating_point Real = double>
struct CubicCoefficients {
    Real cube = 0, square = 0, linear = 0, constant = 0;

    Real operator()(Real tau) const noexcept { return ((cube * tau + square) * tau + linear) * tau + constant; }
    Real derivative(Real tau) const noexcept { return (Real(3) * cube * tau + Real(2) * square) * tau + linear; }
    Real max_abs() const noexcept {
        return std::max({std::abs(cube), std::abs(square), std::abs(linear), std::abs(constant)});
    }
};

template <std::floating_point Real = double>
struct CubicRoots {
    bool degenerate = false; // every coefficient is zero
    std::vector<Real> roots; // sorted, deduplicated
};

/// Real quadratic forms of the pivot entries shared by the stationarity equations.
///
///   p = (x_ij + x_ji)(x_ii - x_jj) + (y_ij + y_ji)(y_ii - y_jj)
///   q = (x_ii - x_jj)(y_ij - y_ji) + (x_ji - x_ij)(y_ii - y_jj)
///   u = x_ji y_ij - x_ij y_ji
///   v = x_ij x_ji + y_ij y_ji
///   r = x_ij^2 + x_ji^2 + y_ij^2 + y_ji^2 - (x_ii - x_jj)^2 - (y_ii - y_jj)^2
///
/// dg/dphi = 2 cos4phi (p cos a + q sin a) + sin4phi (r + 2 v cos2a + 2 u sin2a)
/// dg/dalpha = sin^2(2phi) K2(a) + sin2phi cos2phi K1(a)
template <std::floating_point Real = double>
struct PivotQuantities {
    Real p, q, u, v, r;

    static PivotQuantities from(const AngleProblem<Real>& pb) noexcept {
        const Real xii = pb.aii.real(), yii = pb.aii.imag(), xij = pb.aij.real(), yij = pb.aij.imag();
        const Real xji = pb.aji.real(), yji = pb.aji.imag(), xjj = pb.ajj.real(), yjj = pb.ajj.imag();
        const Real dx = xii - xjj, dy = yii - yjj;
        return {(xij + xji) * dx + (yij + yji) * dy, dx * (yij - yji) + (xji - xij) * dy, xji * yij - xij * yji,
                xij * xji + yij * yji, xij * xij + xji * xji + yij * yij + yji * yji - dx * dx - dy * dy};
    }

    Real k1(Real alpha) const noexcept { return q * std::cos(alpha) - p * std::sin(alpha); }
    Real k2(Real alpha) const noexcept {
        return Real(2) * (u * std::cos(2 * alpha) - v * std::sin(2 * alpha));
    }

    /// (P, Q) with dg/dphi = P cos4phi + Q sin4phi at fixed alpha.
    std::pair<Real, Real> dphi_coefficients(Real alpha) const noexcept {
        return {Real(2) * (p * std::cos(alpha) + q * std::sin(alpha)),
                r + Real(2) * v * std::cos(2 * alpha) + Real(2) * u * std::sin(2 * alpha)};
    }

    /// Cubic in tau = tan(alpha) obtained from the two stationarity equations
    /// after eliminating t = tan(2phi) = -K1/K2 and dividing by cos^3(alpha).
    CubicCoefficients<Real> cubic() const noexcept {
        CubicCoefficients<Real> c;
        c.cube = -p * p * q - 2 * p * r * u + 4 * p * u * v + 4 * q * u * u;
        c.square = -p * p * p + 2 * p * q * q - 4 * p * r * v - 4 * p * u * u + 8 * p * v * v + 2 * q * r * u +
                   12 * q * u * v;
        c.linear = 2 * p * p * q + 2 * p * r * u - 12 * p * u * v - q * q * q + 4 * q * r * v - 4 * q * u * u +
                   8 * q * v * v;
        c.constant = -p * q * q + 4 * p * u * u - 2 * q * r * u - 4 * q * u * v;
        return c;
    }

    /// Largest sum of |terms| over the cubic's coefficients; rounding in
    /// cubic() is a small multiple of eps times this.
    Real cubic_term_bound() const noexcept {
        const Real P = std::abs(p), Q = std::abs(q), U = std::abs(u), V = std::abs(v), R = std::abs(r);
        const Real cube = P * P * Q + 2 * P * R * U + 4 * P * U * V + 4 * Q * U * U;
        const Real square =
            P * P * P + 2 * P * Q * Q + 4 * P * R * V + 4 * P * U * U + 8 * P * V * V + 2 * Q * R * U + 12 * Q * U * V;
        const Real linear = 2 * P * P * Q + 2 * P * R * U + 12 * P * U * V + Q * Q * Q + 4 * Q * R * V +
                            4 * Q * U * U + 8 * Q * V * V;
        const Real constant = P * Q * Q + 4 * P * U * U + 2 * Q * R * U + 4 * Q * U * V;
        return std::max({cube, square, linear, constant});
    }
};

namespace detail {

// Diagonal of G^H M G from the four explicit real formulas; returns
// (x_ii')^2 + (y_ii')^2 + (x_jj')^2 + (y_jj')^2.
template <std::floating_point Real>
Real g_from_trig(const AngleProblem<Real>& pb, Real cc, Real ss, Real sc, Real ca, Real sa) noexcept {
    const Real xii = pb.aii.real(), yii = pb.aii.imag(), xij = pb.aij.real(), yij = pb.aij.imag();
    const Real xji = pb.aji.real(), yji = pb.aji.imag(), xjj = pb.ajj.real(), yjj = pb.ajj.imag();
    const Real mix_x = ((xij * ca + yij * sa) + (xji * ca - yji * sa)) * sc;
    const Real mix_y = ((-xij * sa + yij * ca) + (xji * sa + yji * ca)) * sc;
    const Real xii_p = xii * cc + xjj * ss + mix_x;
    const Real yii_p = yii * cc + yjj * ss + mix_y;
    const Real xjj_p = xii * ss + xjj * cc - mix_x;
    const Real yjj_p = yii * ss + yjj * cc - mix_y;
    return xii_p * xii_p + yii_p * yii_p + xjj_p * xjj_p + yjj_p * yjj_p;
}

template <std::floating_point Real>
Real wrap(Real x, Real period) noexcept {
    return std::remainder(x, period); // [-period/2, period/2]
}

} // namespace detail

/// g(phi, alpha) = |a_ii'|^2 + |a_jj'|^2 for the rotated pivot submatrix.
template <std::floating_point Real>
Real eval_g(const AngleProblem<Real>& pb, Real phi, Real alpha) noexcept {
    const Real c = std::cos(phi), s = std::sin(phi);
    return detail::g_from_trig(pb, c * c, s * s, s * c, std::cos(alpha), std::sin(alpha));
}

/// g(phi, alpha) - g(0, 0) without cancellation against |a_ii|^2 + |a_jj|^2.
/// The trace is invariant, so a_ii' = a_ii + d and a_jj' = a_jj - d, giving
/// 2 Re(conj(a_ii - a_jj) d) + 2 |d|^2.
template <std::floating_point Real>
Real eval_gain(const AngleProblem<Real>& pb, Real phi, Real alpha) noexcept {
    const Real c = std::cos(phi), s = std::sin(phi);
    const Real ca = std::cos(alpha), sa = std::sin(alpha), sc = s * c;
    const Real xij = pb.aij.real(), yij = pb.aij.imag(), xji = pb.aji.real(), yji = pb.aji.imag();
    const Real dx = pb.aii.real() - pb.ajj.real(), dy = pb.aii.imag() - pb.ajj.imag();
    const Real mix_x = ((xij * ca + yij * sa) + (xji * ca - yji * sa)) * sc;
    const Real mix_y = ((-xij * sa + yij * ca) + (xji * sa + yji * ca)) * sc;
    const Real d_re = mix_x - s * s * dx;
    const Real d_im = mix_y - s * s * dy;
    return Real(2) * (dx * d_re + dy * d_im) + Real(2) * (d_re * d_re + d_im * d_im);
}

/// phi modulo pi/2, into (-pi/4, pi/4].
template <std::floating_point Real>
Real normalize_phi(Real phi) noexcept {
    constexpr Real pi = std::numbers::pi_v<Real>;
    phi = detail::wrap(phi, pi / 2);
    if (phi <= -pi / 4)
        phi += pi / 2;
    return phi;
}

/// Maps (phi, alpha) into (-pi/4, pi/4] x (-pi/2, pi/2] without changing g:
/// g is pi/2-periodic in phi and g(phi, alpha + pi) = g(-phi, alpha).
template <std::floating_point Real>
std::pair<Real, Real> normalize_angles(Real phi, Real alpha) noexcept {
    constexpr Real pi = std::numbers::pi_v<Real>;
    alpha = detail::wrap(alpha, 2 * pi);
    if (alpha > pi / 2) {
        alpha -= pi;
        phi = -phi;
    } else if (alpha <= -pi / 2) {
        alpha += pi;
        phi = -phi;
    }
    return {normalize_phi(phi), alpha};
}

/// Real roots of a cubic (degree reduced when the leading coefficients vanish),
/// Newton-polished and deduplicated at 1e-10 relative spacing.
template <std::floating_point Real>
CubicRoots<Real> cubic_real_roots(const CubicCoefficients<Real>& coeffs) {
    CubicRoots<Real> out;
    const Real scale = coeffs.max_abs();
    if (scale == 0) {
        out.degenerate = true;
        return out;
    }
    const CubicCoefficients<Real> c{coeffs.cube / scale, coeffs.square / scale, coeffs.linear / scale,
                                    coeffs.constant / scale};
    constexpr Real negligible = Real(1e-14);
    std::vector<Real> raw;

    auto quadratic = [&raw](Real a, Real b, Real k) {
        Real disc = b * b - 4 * a * k;
        if (disc < 0) {
            if (disc < -Real(1e-12) * (b * b + std::abs(4 * a * k)))
                return;
            disc = 0;
        }
        const Real q = -(b + std::copysign(std::sqrt(disc), b)) / 2;
        if (q != 0) {
            raw.push_back(q / a);
            raw.push_back(k / q);
        } else {
            raw.push_back(Real(0));
        }
    };

    if (std::abs(c.cube) <= negligible) {
        if (std::abs(c.square) > negligible)
            quadratic(c.square, c.linear, c.constant);
        else if (std::abs(c.linear) > negligible)
            raw.push_back(-c.constant / c.linear);
    } else {
        constexpr Real pi = std::numbers::pi_v<Real>;
        const Real b = c.square / c.cube, k = c.linear / c.cube, d = c.constant / c.cube;
        const Real qq = (b * b - 3 * k) / 9;
        const Real rr = (2 * b * b * b - 9 * b * k + 27 * d) / 54;
        if (qq > 0 && rr * rr < qq * qq * qq) {
            const Real theta = std::acos(std::clamp(rr / std::sqrt(qq * qq * qq), Real(-1), Real(1)));
            const Real m = -2 * std::sqrt(qq);
            for (Real shift : {Real(0), 2 * pi, -2 * pi})
                raw.push_back(m * std::cos((theta + shift) / 3) - b / 3);
        } else {
            const Real big = -std::copysign(std::cbrt(std::abs(rr) + std::sqrt(std::max(Real(0), rr * rr - qq * qq * qq))), rr);
            const Real root = big + (big != 0 ? qq / big : Real(0)) - b / 3;
            raw.push_back(root);
            // Deflate to recover a possible (near-)double root lost to rounding.
            const Real e = b + root, f = k + root * e;
            quadratic(Real(1), e, f);
        }
    }

    for (Real tau : raw) {
        Real best = tau, best_res = std::abs(c(tau));
        for (int it = 0; it < 12 && best_res > 0; ++it) {
            const Real slope = c.derivative(best);
            if (slope == 0)
                break;
            const Real next = best - c(best) / slope;
            const Real res = std::abs(c(next));
            if (!(res < best_res))
                break;
            best = next;
            best_res = res;
        }
        if (std::isfinite(best))
            out.roots.push_back(best);
    }
    std::sort(out.roots.begin(), out.roots.end());
    std::vector<Real> unique;
    for (Real tau : out.roots)
        if (unique.empty() || std::abs(tau - unique.back()) > Real(1e-10) * std::max(Real(1), std::abs(tau)))
            unique.push_back(tau);
    out.roots = std::move(unique);
    return out;
}

namespace detail {

template <std::floating_point Real>
struct CandidatePool {
    const AngleProblem<Real>& problem;
    bool free_alpha;
    AngleSolution<Real> best{};
    bool any = false;

    void add(Real phi, Real alpha, AngleCase label) {
        if (!std::isfinite(phi) || !std::isfinite(alpha))
            return;
        if (free_alpha) {
            std::tie(phi, alpha) = normalize_angles(phi, alpha);
        } else {
            phi = normalize_phi(phi);
        }
        const Real gain = eval_gain(problem, phi, alpha);
        const AngleSolution<Real> cand{phi, alpha, eval_g(problem, phi, alpha), gain, label};
        if (!any) {
            best = cand;
            any = true;
            return;
        }
        // Ties within 1e-12 prefer the gentler rotation: smaller |phi|, then |alpha|.
        const Real tie = Real(1e-12) * std::max(std::abs(gain), std::abs(best.gain));
        if (gain > best.gain + tie) {
            best = cand;
        } else if (gain >= best.gain - tie) {
            const auto key = std::pair(std::abs(phi), std::abs(alpha));
            const auto best_key = std::pair(std::abs(best.phi), std::abs(best.alpha));
            if (key < best_key)
                best = cand;
        }
    }

    // Stationary points of g(., alpha) for fixed alpha plus phi in {0, pi/4}.
    void add_fixed_alpha(const PivotQuantities<Real>& pq, Real alpha, AngleCase label) {
        constexpr Real pi = std::numbers::pi_v<Real>;
        add(Real(0), alpha, label);
        add(pi / 4, alpha, label);
        const auto [pc, qc] = pq.dphi_coefficients(alpha);
        if (pc == 0 && qc == 0)
            return;
        const Real phi0 = std::atan2(-pc, qc) / 4;
        add(phi0, alpha, label);
        add(phi0 + pi / 4, alpha, label);
        add(phi0 - pi / 4, alpha, label);
    }
};

} // namespace detail

/// Maximizer of g over both angles, from the pooled stationary-point cases:
///  1. phi = 0 (identity);
///  2. phi = pi/4 with alpha = +-pi/4 or tan 2alpha = u / v;
///  3. alpha = pi/2 with phi = +-pi/8 or tan 4phi = -2q / (r at alpha = pi/2);
///  4. alpha = arctan(tau) for each real root of the cubic, phi = atan(-K1/K2) / 2.
/// The candidate with the largest g wins.
template <std::floating_point Real>
AngleSolution<Real> solve_angles(const AngleProblem<Real>& pb) {
    if (pb.fixed_alpha)
        throw Error("solve_angles: problem has a fixed alpha; use solve_angles_fixed_alpha");
    constexpr Real pi = std::numbers::pi_v<Real>;
    const auto pq = PivotQuantities<Real>::from(pb);
    detail::CandidatePool<Real> pool{pb, true};

    pool.add(Real(0), Real(0), AngleCase::trivial);

    pool.add(pi / 4, pi / 4, AngleCase::phi_quarter);
    pool.add(pi / 4, -pi / 4, AngleCase::phi_quarter);
    const Real alpha2 = std::atan2(pq.u, pq.v) / 2;
    pool.add(pi / 4, alpha2, AngleCase::phi_quarter);
    pool.add(pi / 4, alpha2 + pi / 2, AngleCase::phi_quarter);

    pool.add(pi / 8, pi / 2, AngleCase::alpha_half);
    pool.add(-pi / 8, pi / 2, AngleCase::alpha_half);
    const auto [p_half, q_half] = pq.dphi_coefficients(pi / 2);
    const Real phi3 = std::atan2(-p_half, q_half) / 4;
    pool.add(phi3, pi / 2, AngleCase::alpha_half);
    pool.add(phi3 + pi / 4, pi / 2, AngleCase::alpha_half);
    pool.add(phi3 - pi / 4, pi / 2, AngleCase::alpha_half);

    const auto cubic = pq.cubic();
    const bool degenerate =
        cubic.max_abs() <= Real(64) * std::numeric_limits<Real>::epsilon() * pq.cubic_term_bound();
    if (!degenerate) {
        for (Real tau : cubic_real_roots(cubic).roots) {
            const Real alpha = std::atan(tau);
            const Real k2 = pq.k2(alpha);
            if (k2 != 0)
                pool.add(std::atan(-pq.k1(alpha) / k2) / 2, alpha, AngleCase::cubic);
            // Fixed-alpha stationary points cover K2(alpha) = 0 as well.
            pool.add_fixed_alpha(pq, alpha, AngleCase::cubic);
        }
    } else {
        // Every alpha solves the cubic; the explicit-angle cases remain.
        for (Real alpha : {Real(0), pi / 4, -pi / 4, pi / 2, alpha2, alpha2 + pi / 2})
            pool.add_fixed_alpha(pq, alpha, AngleCase::fixed_1d);
    }
    return pool.best;
}

/// Maximizer of g over phi with alpha held at the problem's fixed value:
/// roots of P cos 4phi + Q sin 4phi = 0 plus phi in {0, pi/4}.
template <std::floating_point Real>
AngleSolution<Real> solve_angles_fixed_alpha(const AngleProblem<Real>& pb) {
    if (!pb.fixed_alpha)
        throw Error("solve_angles_fixed_alpha: problem has a free alpha");
    const auto pq = PivotQuantities<Real>::from(pb);
    detail::CandidatePool<Real> pool{pb, false};
    pool.add_fixed_alpha(pq, *pb.fixed_alpha, AngleCase::fixed_1d);
    pool.best.case_label = pool.best.phi == 0 ? AngleCase::trivial : AngleCase::fixed_1d;
    return pool.best;
}

template <std::floating_point Real>
AngleSolution<Real> solve(const AngleProblem<Real>& pb) {
    return pb.fixed_alpha ? solve_angles_fixed_alpha(pb) : solve_angles(pb);
}

template <std::floating_point Real = double>
struct GridPoint {
    Real phi = 0, alpha = 0, g = 0;
};

/// Exhaustive search over a grid x grid lattice of [-pi/4, pi/4] x [-pi/2, pi/2]
/// (a 1-D lattice over phi when alpha is fixed). Lattices with grid = 2k+1 nest.
template <std::floating_point Real>
GridPoint<Real> grid_oracle(const AngleProblem<Real>& pb, Index grid) {
    if (grid < 3)
        throw Error("grid_oracle: grid must be at least 3");
    constexpr Real pi = std::numbers::pi_v<Real>;
    const Real step_phi = (pi / 2) / Real(grid - 1);
    const Real step_alpha = pi / Real(grid - 1);
    std::vector<std::array<Real, 4>> phis(static_cast<std::size_t>(grid));
    for (Index k = 0; k < grid; ++k) {
        const Real phi = -pi / 4 + Real(k) * step_phi;
        const Real c = std::cos(phi), s = std::sin(phi);
        phis[static_cast<std::size_t>(k)] = {phi, c * c, s * s, s * c};
    }
    GridPoint<Real> best{Real(0), Real(0), -Real(1)};
    auto scan = [&](Real alpha) {
        const Real ca = std::cos(alpha), sa = std::sin(alpha);
        for (const auto& [phi, cc, ss, sc] : phis) {
            const Real g = detail::g_from_trig(pb, cc, ss, sc, ca, sa);
            if (g > best.g)
                best = {phi, alpha, g};
        }
    };
    if (pb.fixed_alpha) {
        scan(*pb.fixed_alpha);
    } else {
        for (Index k = 0; k < grid; ++k)
            scan(-pi / 2 + Real(k) * step_alpha);
    }
    return best;
}

} // namespace structnorm
