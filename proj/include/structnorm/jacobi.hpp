#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "angle_solver.hpp"
#include "core.hpp"
#include "gradient.hpp"
#include "rotations.hpp"
#include "structure.hpp"

namespace structnorm {

struct SolverConfig {
    Ordering ordering = Ordering::o1;
    /// Stop once a full sweep raises ||diag||^2 by less than tol * ||A||^2.
    double tol = 1e-14;
    Index max_sweeps = 50;
    /// Skip pivots failing eta ||grad f|| <= gain; the gradient is taken at sweep start.
    bool skip_rule = false;
    bool trace = true;
};

template <std::floating_point Real = double>
struct JacobiState {
    Matrix<Real> a; // Z^H A0 Z
    Matrix<Real> z;
    Index sweep = 0;
    Index step = 0;
};

template <std::floating_point Real = double>
struct TraceRecord {
    Index sweep = 0;
    Index step = 0;
    RotationKind kind = RotationKind::symp_single;
    Index i = 0, j = 0;
    Real phi = 0, alpha = 0;
    Real diag_norm_sq = 0;
    Real offdiag_norm_sq = std::numeric_limits<Real>::quiet_NaN(); // NaN when not tracked
    bool skipped = false;
};

template <std::floating_point Real = double>
using JacobiTrace = std::vector<TraceRecord<Real>>;

/// Norms after a sweep; entry 0 holds the input.
template <std::floating_point Real = double>
struct SweepSummary {
    Index sweep = 0;
    Real diag_norm_sq = 0;
    Real offdiag_norm_sq = 0;
};

template <std::floating_point Real = double>
struct NearestNormalResult {
    Matrix<Real> x;       // nearest structured normal matrix Z D Z^H
    Matrix<Real> z;       // structured unitary
    Matrix<Real> d;       // diag(Z^H A Z)
    Matrix<Real> a_final; // Z^H A Z
    Real distance = 0;    // ||A - X||_F
    Real final_grad_norm = 0;
    Index sweeps = 0;
    bool converged = false;
    JacobiTrace<Real> trace;
    std::vector<SweepSummary<Real>> history;
};

template <std::floating_point Real = double>
using StepObserver = std::function<void(const JacobiState<Real>&, const TraceRecord<Real>&)>;

namespace detail {

template <std::floating_point Real>
void require_finite_pivot_lines(const Matrix<Real>& a, const RotationSpec<Real>& spec, Index sweep, Index step) {
    for (const auto& pl : planes_of(spec, a.rows())) {
        for (Index idx : {pl.p, pl.q}) {
            if (!a.row(idx).allFinite() || !a.col(idx).allFinite())
                throw Error("non-finite entry after sweep " + std::to_string(sweep) + ", step " + std::to_string(step) +
                            " (" + std::string(to_string(spec.kind)) + " at " + std::to_string(spec.i) + ", " +
                            std::to_string(spec.j) + ")");
        }
    }
}

template <std::floating_point Real>
AngleProblem<Real> pivot_problem(const Matrix<Real>& a, const Pivot& pv) {
    const Index i = pv.i - 1, j = pv.j - 1;
    return {a(i, i), a(i, j), a(j, i), a(j, j), fixed_alpha<Real>(pv.kind)};
}

} // namespace detail

template <std::floating_point Real>
JacobiState<Real> initial_state(const Matrix<Real>& a) {
    return {a, Matrix<Real>::Identity(a.rows(), a.cols()), 0, 0};
}

/// One cycle over the pivot set: for each pivot solve the 2x2 angle problem,
/// then A <- R^H A R and Z <- Z R.
template <std::floating_point Real>
void sweep_once(JacobiState<Real>& state, Structure tag, const SolverConfig& config, JacobiTrace<Real>* trace = nullptr,
                const StepObserver<Real>& observer = {}) {
    const Index dim = state.a.rows();
    if (dim != state.a.cols() || dim % 2 != 0 || dim == 0)
        throw Error("sweep_once: need a nonempty even square matrix");
    const HalfDimension half(dim / 2);
    const Family family = family_of(tag);
    const auto pivots = pivot_set(family, half, config.ordering);
    const bool track_offdiag = trace != nullptr || static_cast<bool>(observer);

    std::optional<GradientResult<Real>> grad;
    if (config.skip_rule) {
        // Z^H grad f~(Z) for A0 equals grad f~ at the identity for Z^H A0 Z.
        grad = grad_f<Real>(state.a, Matrix<Real>::Identity(dim, dim), family);
    }

    ++state.sweep;
    for (const auto& pv : pivots) {
        ++state.step;
        TraceRecord<Real> rec;
        rec.sweep = state.sweep;
        rec.step = state.step;
        rec.kind = pv.kind;
        rec.i = pv.i;
        rec.j = pv.j;

        if (grad && should_skip(pivot_gain(*grad, pv), grad->grad_norm, half)) {
            rec.skipped = true;
        } else {
            const auto sol = solve(detail::pivot_problem(state.a, pv));
            rec.phi = sol.phi;
            rec.alpha = fixed_alpha<Real>(pv.kind).value_or(sol.alpha);
            if (std::abs(sol.phi) < Real(1e-15)) {
                rec.skipped = true;
            } else {
                const RotationSpec<Real> spec{pv.kind, pv.i, pv.j, sol.phi, rec.alpha};
                apply_similarity(state.a, spec);
                apply_right(state.z, spec);
                detail::require_finite_pivot_lines(state.a, spec, state.sweep, state.step);
            }
        }
        rec.diag_norm_sq = diag_norm_sq(state.a);
        if (track_offdiag)
            rec.offdiag_norm_sq = offdiag_norm_sq(state.a);
        if (trace)
            trace->push_back(rec);
        if (observer)
            observer(state, rec);
    }
}

/// Nearest normal matrix with the structure of `a`: cyclic structure-preserving
/// Jacobi sweeps maximize ||diag(Z^H A Z)||_F, then X = Z diag(Z^H A Z) Z^H.
template <std::floating_point Real>
NearestNormalResult<Real> solve(const Matrix<Real>& a, Structure tag, const SolverConfig& config = {},
                                const StepObserver<Real>& observer = {}) {
    if (a.rows() != a.cols() || a.rows() % 2 != 0 || a.rows() == 0)
        throw Error("solve: input must be a nonempty square matrix of even dimension");
    if (!all_finite(a))
        throw Error("solve: input has non-finite entries");
    if (!(config.tol > 0) || config.max_sweeps < 1)
        throw Error("solve: need tol > 0 and max_sweeps >= 1");
    const Real residual = check_structure(a, tag);
    if (!(residual <= Real(1e-10)))
        throw Error("solve: input is not " + std::string(to_string(tag)) + " (residual " + std::to_string(residual) +
                    ")");

    NearestNormalResult<Real> out;
    const Real total = a.squaredNorm();
    auto state = initial_state(a);
    out.history.push_back({0, diag_norm_sq(state.a), offdiag_norm_sq(state.a)});

    JacobiTrace<Real>* trace = config.trace ? &out.trace : nullptr;
    while (state.sweep < config.max_sweeps) {
        const Real before = diag_norm_sq(state.a);
        sweep_once(state, tag, config, trace, observer);
        const Real after = diag_norm_sq(state.a);
        out.history.push_back({state.sweep, after, offdiag_norm_sq(state.a)});
        if (total == 0 || (after - before) < Real(config.tol) * total) {
            out.converged = true;
            break;
        }
    }

    out.sweeps = state.sweep;
    out.d = Matrix<Real>(state.a.diagonal().asDiagonal());
    out.x = state.z * out.d * state.z.adjoint();
    out.distance = distance_to(a, out.x);
    out.final_grad_norm = grad_f<Real>(state.a, Matrix<Real>::Identity(a.rows(), a.cols()), family_of(tag)).grad_norm;
    out.z = std::move(state.z);
    out.a_final = std::move(state.a);
    return out;
}

} // namespace structnorm
