#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "structnorm/structnorm.hpp"

using namespace structnorm;

namespace {

constexpr std::array all_tags{Structure::hamiltonian, Structure::skew_hamiltonian, Structure::per_hermitian,
                              Structure::perskew_hermitian};

std::string tag_name(const ::testing::TestParamInfo<Structure>& info) {
    std::string name(to_string(info.param));
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

} // namespace

class JacobiTag : public ::testing::TestWithParam<Structure> {};

TEST_P(JacobiTag, PerStepInvariants) {
    const Structure tag = GetParam();
    const ComplexMatrix a0 = gen_structured(tag, HalfDimension(4), 11);
    const double total = a0.squaredNorm();
    double prev_diag = diag_norm_sq(a0);
    int steps = 0;
    SolverConfig cfg;
    cfg.max_sweeps = 5;
    auto check = [&](const JacobiState<double>& st, const TraceRecord<double>& rec) {
        ++steps;
        EXPECT_LE(oracle::defining_residual(st.a, tag), 1e-12);
        EXPECT_NEAR(st.a.squaredNorm(), total, 1e-12 * total);
        EXPECT_GE(rec.diag_norm_sq, prev_diag - 1e-12 * total);
        prev_diag = rec.diag_norm_sq;
        EXPECT_NEAR(rec.diag_norm_sq + rec.offdiag_norm_sq, total, 1e-12 * total);
        EXPECT_LE(oracle::unitarity_residual(st.z), 1e-12);
        EXPECT_LE(oracle::group_residual(st.z, family_of(tag)), 1e-12);
        EXPECT_LE((st.z.adjoint() * a0 * st.z - st.a).norm(), 1e-12 * std::sqrt(total));
    };
    const auto res = structnorm::solve(a0, tag, cfg, StepObserver<double>(check));
    EXPECT_EQ(steps, res.sweeps * 16);
    EXPECT_EQ(static_cast<Index>(res.trace.size()), res.sweeps * 16);
}

TEST_P(JacobiTag, ConvergesOnNormalFixture) {
    const Structure tag = GetParam();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto fx = gen_normal_structured(tag, HalfDimension(6), seed, 150);
        const auto res = structnorm::solve(fx.a, tag);
        const double na2 = fx.a.squaredNorm();
        EXPECT_TRUE(res.converged);
        EXPECT_LE(offdiag_norm_sq(res.a_final), 1e-20 * na2) << "seed " << seed;
        EXPECT_LE(res.distance, 1e-9 * std::sqrt(na2));
        EXPECT_LE(check_structure(res.x, tag), 1e-12);
        EXPECT_LE(normality_residual(res.x), 1e-10 * na2);
    }
}

TEST_P(JacobiTag, ResultIsStructuredNormalAndStationary) {
    const Structure tag = GetParam();
    const ComplexMatrix a = gen_structured(tag, HalfDimension(5), 21);
    SolverConfig cfg;
    cfg.max_sweeps = 200;
    const auto res = structnorm::solve(a, tag, cfg);
    const double na2 = a.squaredNorm();
    EXPECT_LE(check_structure(res.x, tag), 1e-12);
    EXPECT_LE(normality_residual(res.x), 1e-10 * na2);
    EXPECT_LE(oracle::unitarity_residual(res.z), 1e-11);
    EXPECT_LE(oracle::group_residual(res.z, family_of(tag)), 1e-11);
    EXPECT_NEAR(res.distance * res.distance, offdiag_norm_sq(res.a_final), 1e-10 * na2);
    EXPECT_LE(res.distance, std::sqrt(offdiag_norm_sq(a)) + 1e-12);
    ASSERT_EQ(static_cast<Index>(res.history.size()), res.sweeps + 1);
    for (std::size_t k = 1; k < res.history.size(); ++k)
        EXPECT_GE(res.history[k].diag_norm_sq, res.history[k - 1].diag_norm_sq - 1e-12 * na2);
}

TEST_P(JacobiTag, DiagonalInputNeedsNoRotation) {
    const Structure tag = GetParam();
    const auto fx = gen_normal_structured(tag, HalfDimension(3), 5, 1);
    const auto res = structnorm::solve(fx.d, tag);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.sweeps, 1);
    for (const auto& rec : res.trace)
        EXPECT_TRUE(rec.skipped);
    EXPECT_EQ(res.x, fx.d);
    EXPECT_EQ(res.distance, 0.0);
}

TEST_P(JacobiTag, OrderingsReachTheSameLimitOnNormalInput) {
    const Structure tag = GetParam();
    const auto fx = gen_normal_structured(tag, HalfDimension(5), 17, 100);
    SolverConfig c1, c2;
    c2.ordering = Ordering::o2;
    const auto r1 = structnorm::solve(fx.a, tag, c1);
    const auto r2 = structnorm::solve(fx.a, tag, c2);
    EXPECT_LE((r1.x - r2.x).norm(), 1e-8 * fx.a.norm());
    EXPECT_NEAR(r1.history.back().diag_norm_sq, r2.history.back().diag_norm_sq, 1e-10 * fx.a.squaredNorm());
}

TEST_P(JacobiTag, SkipRuleStillConverges) {
    const Structure tag = GetParam();
    const auto fx = gen_normal_structured(tag, HalfDimension(5), 23, 100);
    SolverConfig cfg;
    cfg.skip_rule = true;
    cfg.max_sweeps = 100;
    const auto res = structnorm::solve(fx.a, tag, cfg);
    EXPECT_LE(res.final_grad_norm, 1e-8 * fx.a.squaredNorm());
    EXPECT_LE(offdiag_norm_sq(res.a_final), 1e-16 * fx.a.squaredNorm());
}

TEST_P(JacobiTag, TraceLayoutPerSweep) {
    const Structure tag = GetParam();
    const Index n = 4;
    const ComplexMatrix a = gen_structured(tag, HalfDimension(n), 3);
    SolverConfig cfg;
    cfg.max_sweeps = 3;
    cfg.tol = 1e-300;
    const auto res = structnorm::solve(a, tag, cfg);
    ASSERT_EQ(res.sweeps, 3);
    ASSERT_EQ(static_cast<Index>(res.trace.size()), 3 * n * n);
    const auto pivots = pivot_set(family_of(tag), HalfDimension(n), Ordering::o1);
    for (Index k = 0; k < 3 * n * n; ++k) {
        const auto& rec = res.trace[k];
        EXPECT_EQ(rec.sweep, k / (n * n) + 1);
        EXPECT_EQ(rec.step, k + 1);
        EXPECT_EQ(rec.kind, pivots[k % (n * n)].kind);
        EXPECT_EQ(rec.i, pivots[k % (n * n)].i);
        EXPECT_EQ(rec.j, pivots[k % (n * n)].j);
    }
}

INSTANTIATE_TEST_SUITE_P(AllStructures, JacobiTag, ::testing::ValuesIn(all_tags), tag_name);

TEST(JacobiErrors, RejectsUnstructuredInput) {
    std::mt19937_64 rng(1);
    const ComplexMatrix a = oracle::random_complex(6, 6, rng);
    for (Structure tag : all_tags)
        EXPECT_THROW(structnorm::solve(a, tag), Error);
}

TEST(JacobiErrors, RejectsOddOrNonSquare) {
    EXPECT_THROW(structnorm::solve(ComplexMatrix(ComplexMatrix::Zero(5, 5)), Structure::per_hermitian), Error);
    EXPECT_THROW(structnorm::solve(ComplexMatrix(ComplexMatrix::Zero(4, 6)), Structure::hamiltonian), Error);
}

TEST(JacobiErrors, RejectsNonFinite) {
    ComplexMatrix a = gen_structured(Structure::hamiltonian, HalfDimension(2), 1);
    a(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(structnorm::solve(a, Structure::hamiltonian), Error);
}

TEST(JacobiErrors, RejectsBadConfig) {
    const ComplexMatrix a = gen_structured(Structure::hamiltonian, HalfDimension(2), 1);
    SolverConfig cfg;
    cfg.tol = 0;
    EXPECT_THROW(structnorm::solve(a, Structure::hamiltonian, cfg), Error);
    cfg.tol = 1e-14;
    cfg.max_sweeps = 0;
    EXPECT_THROW(structnorm::solve(a, Structure::hamiltonian, cfg), Error);
}

TEST(Jacobi, ZeroMatrixConvergesImmediately) {
    const auto res = structnorm::solve(ComplexMatrix(ComplexMatrix::Zero(4, 4)), Structure::skew_hamiltonian);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.sweeps, 1);
    EXPECT_EQ(res.distance, 0.0);
}

TEST(Jacobi, SmallestCaseHalfDimensionOne) {
    for (Structure tag : all_tags) {
        const ComplexMatrix a = gen_structured(tag, HalfDimension(1), 4);
        const auto res = structnorm::solve(a, tag);
        EXPECT_TRUE(res.converged) << to_string(tag);
        EXPECT_LE(check_structure(res.x, tag), 1e-13);
        EXPECT_LE(normality_residual(res.x), 1e-12 * a.squaredNorm());
    }
}

TEST(Jacobi, FirstSweepReducesOffDiagonalOnNormalInput) {
    const auto fx = gen_normal_structured(Structure::hamiltonian, HalfDimension(25), 42, 2500);
    const auto res = structnorm::solve(fx.a, Structure::hamiltonian);
    const double ratio = res.history[1].offdiag_norm_sq / res.history[0].offdiag_norm_sq;
    RecordProperty("sweep1_offdiag_ratio", std::to_string(ratio));
    EXPECT_LT(ratio, 1.0);
    EXPECT_TRUE(res.converged);
}

TEST(Jacobi, FirstSweepFractionOfLimitOnGenericInput) {
    const ComplexMatrix a = gen_structured(Structure::hamiltonian, HalfDimension(25), 42);
    const auto hist = run_sweeps(a, Structure::hamiltonian, Ordering::o1, 60, nullptr);
    const double fraction = hist[1].diag_norm_sq / hist.back().diag_norm_sq;
    RecordProperty("sweep1_fraction_of_limit", std::to_string(fraction));
    EXPECT_GT(fraction, 20 * hist[0].diag_norm_sq / hist.back().diag_norm_sq);
    EXPECT_GT(fraction, 0.5);
}
