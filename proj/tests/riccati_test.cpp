#include <random>

#include "gtest/gtest.h"
#include "solvharm/clifford_dr.hpp"
#include "solvharm/riccati.hpp"
#include "test_support.hpp"

using namespace solvharm;

namespace {

Matrix scalar(double a) { return Matrix::Constant(1, 1, a); }

}  // namespace

TEST(Riccati, ScalarClosedForm) {
    for (double a : {-1.0, -0.3, 0.5, 2.0}) {
        const auto r = solve_algebraic_riccati_max(scalar(a));
        EXPECT_NEAR(r.X(0, 0), std::max(0.0, -2.0 * a), 1e-12);
        EXPECT_NEAR(r.L0(0, 0), -std::abs(a), 1e-12);
    }
    const auto r = solve_algebraic_riccati_max(scalar(-1.0));
    EXPECT_NEAR(r.X(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(r.L0(0, 0), -1.0, 1e-14);
}

TEST(Riccati, PositiveSymmetric) {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 0.5, 0.5, 1.0;
    const auto r = solve_algebraic_riccati_max(a);
    EXPECT_LE(max_abs(r.X), 1e-14);
    EXPECT_LE(max_abs(r.L0 + a), 1e-14);
    EXPECT_NEAR(r.trace_L0, -2.0, 1e-14);
}

TEST(Riccati, JordanBlockAgainstFiniteHorizon) {
    Matrix a(2, 2);
    a << 1, 1, 0, 1;
    const auto r = solve_algebraic_riccati_max(a);
    EXPECT_NEAR(r.trace_L0, -2.0, 1e-10);
    EXPECT_LE(max_abs(finite_horizon_shape(a, 40.0) + r.L0), 1e-6);
}

TEST(Riccati, FormulaExamples) {
    EXPECT_NEAR(horosphere_mean_curvature_formula(Matrix::Zero(3, 3)), 0.0, 1e-15);
    Matrix a(2, 2);
    a << 1, 5, 0, -1;
    EXPECT_NEAR(horosphere_mean_curvature_formula(a), -2.0, 1e-13);
    const auto dr = build_damek_ricci(clifford_generators(1, 1));
    EXPECT_NEAR(horosphere_mean_curvature_formula(dr.ad_basis(0).bottomRightCorner(3, 3)), -2.0, 1e-14);
}

TEST(Riccati, RandomTraceIdentityAndInvariants) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 8;
        const auto ks = testsupport::random_known_spectrum(n, 0.25, 2.0, rng);
        const auto r = solve_algebraic_riccati_max(ks.m);
        double exact = 0.0;
        for (const auto& v : ks.eigenvalues) exact -= std::abs(v.real());
        EXPECT_NEAR(r.trace_L0, exact, 1e-8);
        EXPECT_NEAR(horosphere_mean_curvature_formula(ks.m), exact, 1e-8);
        EXPECT_LE(max_abs(r.X - r.X.transpose()), 1e-9);
        EXPECT_LE(riccati_residual(r.X, ks.m), 1e-8);
        EXPECT_LE(eigenvalues(-ks.m - r.X).values.back().real(), 1e-8);

        // block triangularization: spec(M) = spec(-A - X) + spec(A^T + X)
        Matrix M = Matrix::Zero(2 * n, 2 * n);
        M.topLeftCorner(n, n) = -ks.m;
        M.topRightCorner(n, n) = -Matrix::Identity(n, n);
        M.bottomRightCorner(n, n) = ks.m.transpose();
        Spectrum joined = eigenvalues(-ks.m - r.X);
        const Spectrum other = eigenvalues(ks.m.transpose() + r.X);
        joined.values.insert(joined.values.end(), other.values.begin(), other.values.end());
        EXPECT_LE(spectrum_distance(eigenvalues(M), joined), 1e-8);
    }
}

TEST(Riccati, AxisReductionAgreesWithBlockSchur) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ks = testsupport::random_known_spectrum(2 + trial % 6, 0.3, 1.5, rng);
        const Matrix a = detail::riccati_block_schur(ks.m, default_tolerances());
        const Matrix b = detail::riccati_axis_reduction(ks.m, 1e-10, default_tolerances());
        EXPECT_LE(max_abs(a - b), 1e-9 * std::max(1.0, max_abs(a)));
    }
}

TEST(Riccati, ImaginaryAxisSpectrum) {
    Matrix skew(2, 2);
    skew << 0, -1, 1, 0;
    const auto r = solve_algebraic_riccati_max(skew);
    EXPECT_LE(max_abs(r.X), 1e-12);
    EXPECT_NEAR(r.trace_L0, 0.0, 1e-12);
    EXPECT_NEAR(solve_algebraic_riccati_max(Matrix::Zero(3, 3)).trace_L0, 0.0, 1e-15);

    // mixed: rotation block plus an unstable direction
    Matrix m = Matrix::Zero(3, 3);
    m.topLeftCorner(2, 2) = skew;
    m(2, 2) = -0.7;
    m(0, 2) = 0.4;
    const auto mixed = solve_algebraic_riccati_max(m);
    EXPECT_NEAR(mixed.trace_L0, -0.7, 1e-10);
    EXPECT_LE(riccati_residual(mixed.X, m), 1e-10);
}

TEST(Riccati, AmbiguousSpectrumRejected) {
    EXPECT_THROW(solve_algebraic_riccati_max(scalar(1e-8)), DegenerateSpectrumError);
}

TEST(Riccati, Maximality) {
    // every symmetric solution comes from an n-dimensional invariant graph subspace
    for (const auto& diag : {std::vector<double>{-1.3}, std::vector<double>{0.7, -0.4},
                             std::vector<double>{-0.9, -0.2}, std::vector<double>{1.1, 0.3}}) {
        const int n = static_cast<int>(diag.size());
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) a(i, i) = diag[i];
        const Matrix X = solve_algebraic_riccati_max(a).X;
        Matrix M = Matrix::Zero(2 * n, 2 * n);
        M.topLeftCorner(n, n) = -a;
        M.topRightCorner(n, n) = -Matrix::Identity(n, n);
        M.bottomRightCorner(n, n) = a.transpose();
        Eigen::EigenSolver<Matrix> es(M);
        const Matrix V = es.eigenvectors().real();
        for (int mask = 0; mask < (1 << (2 * n)); ++mask) {
            if (__builtin_popcount(mask) != n) continue;
            Matrix U(2 * n, n);
            int c = 0;
            for (int k = 0; k < 2 * n; ++k)
                if (mask & (1 << k)) U.col(c++) = V.col(k);
            const Matrix U1 = U.topRows(n);
            if (std::abs(U1.determinant()) < 1e-10) continue;
            const Matrix Xp = U.bottomRows(n) * U1.inverse();
            if (max_abs(Xp - Xp.transpose()) > 1e-10) continue;
            EXPECT_LE(riccati_residual(Xp, a), 1e-10);
            EXPECT_GE(symmetric_eigenvalues(X - Xp).minCoeff(), -1e-10);
        }
    }
}

TEST(FiniteHorizon, ScalarCoth) {
    EXPECT_NEAR(finite_horizon_shape(scalar(1.0), 1.0)(0, 0), 1.3130352854993312, 1e-12);
    for (double r : {0.3, 2.0, 7.5, 40.0})
        EXPECT_NEAR(finite_horizon_shape(scalar(1.0), r)(0, 0), 1.0 / std::tanh(r), 1e-10);
    EXPECT_THROW(finite_horizon_shape(scalar(1.0), -1.0), DomainError);
}

TEST(FiniteHorizon, SkewDecays) {
    Matrix skew(2, 2);
    skew << 0, -2, 2, 0;
    // (d/dt + S)^2 E = 0 gives U_r = id / r
    for (double r : {1.0, 10.0, 100.0})
        EXPECT_LE(max_abs(finite_horizon_shape(skew, r) - Matrix::Identity(2, 2) / r), 1e-9);
}

TEST(FiniteHorizon, Monotone) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 4;
        Matrix b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b(i, j) = u(rng);
        Matrix skew = 0.1 * (b - b.transpose());
        const Matrix a = b * b.transpose() + 0.3 * Matrix::Identity(n, n) + skew;
        Matrix prev = finite_horizon_shape(a, 0.5);
        for (double r : {1.0, 2.0, 4.0, 8.0}) {
            const Matrix next = finite_horizon_shape(a, r);
            EXPECT_LE(symmetric_eigenvalues(next - prev).maxCoeff(), 1e-9);
            prev = next;
        }
    }
}
