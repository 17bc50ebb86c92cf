#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "solvharm/numerics.hpp"
#include "solvharm/ode.hpp"
#include "solvharm/parallel.hpp"

using namespace solvharm;

namespace {

Matrix random_matrix(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

}  // namespace

TEST(Eigenvalues, Identity) {
    const Spectrum s = eigenvalues(Matrix::Identity(3, 3));
    ASSERT_EQ(s.size(), 3u);
    for (const auto& v : s.values) EXPECT_NEAR(std::abs(v - Complex(1.0, 0.0)), 0.0, 1e-14);
}

TEST(Eigenvalues, RotationGenerator) {
    Matrix m(2, 2);
    m << 0, -1, 1, 0;
    const Spectrum s = eigenvalues(m);
    EXPECT_NEAR(std::abs(s.values[0] - Complex(0, -1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.values[1] - Complex(0, 1)), 0.0, 1e-14);
}

TEST(Eigenvalues, Triangular) {
    Matrix m(2, 2);
    m << 1, 5, 0, -1;
    const Spectrum s = eigenvalues(m);
    EXPECT_NEAR(s.values[0].real(), -1.0, 1e-14);
    EXPECT_NEAR(s.values[1].real(), 1.0, 1e-14);
}

TEST(Eigenvalues, NonSquareRejected) {
    EXPECT_THROW(eigenvalues(Matrix::Zero(2, 3)), DimensionError);
}

TEST(Eigenvalues, TransposeAndTraceInvariants) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix m = random_matrix(6, seed);
        const Spectrum a = eigenvalues(m);
        EXPECT_LE(spectrum_distance(a, eigenvalues(m.transpose())), 1e-9);
        EXPECT_NEAR(a.sum().real(), m.trace(), 1e-9);
        EXPECT_NEAR(a.sum().imag(), 0.0, 1e-9);
    }
}

TEST(MatrixExponential, Basics) {
    EXPECT_LE(max_abs(matrix_exponential(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)), 1e-15);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 1, 2;
    const Matrix e = matrix_exponential(d);
    EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-14);
    EXPECT_NEAR(e(1, 1), std::exp(2.0), 1e-13);
    Matrix r(2, 2);
    r << 0, -M_PI, M_PI, 0;
    EXPECT_LE(max_abs(matrix_exponential(r) + Matrix::Identity(2, 2)), 1e-14);
}

TEST(MatrixExponential, InverseAndDeterminant) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix m = 3.0 * random_matrix(5, 100 + seed);
        const Matrix e = matrix_exponential(m);
        EXPECT_LE(max_abs(e * matrix_exponential(-m) - Matrix::Identity(5, 5)), 1e-9);
        EXPECT_NEAR(e.determinant() / std::exp(m.trace()), 1.0, 1e-8);
    }
}

TEST(SolveLinear, Basics) {
    const Matrix b = random_matrix(3, 7);
    EXPECT_LE(max_abs(solve_linear(Matrix::Identity(3, 3), b) - b), 0.0);
    Matrix a = Matrix::Zero(2, 2);
    a.diagonal() << 2, 4;
    Vector rhs(2);
    rhs << 2, 4;
    const Matrix x = solve_linear(a, rhs);
    EXPECT_DOUBLE_EQ(x(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(x(1, 0), 1.0);
}

TEST(SolveLinear, ResidualOracle) {
    const Matrix a = random_matrix(5, 11) + 5.0 * Matrix::Identity(5, 5);
    const Matrix b = random_matrix(5, 12);
    const Matrix x = solve_linear(a, b);
    EXPECT_LE((a * x - b).norm(), 1e-10 * b.norm());
}

TEST(SolveLinear, SingularRejected) {
    Matrix a(2, 2);
    a << 1, 2, 2, 4;
    EXPECT_THROW(solve_linear(a, Matrix::Identity(2, 2)), SingularMatrixError);
}

TEST(Schur, SortedComplexSchurKeepsFactorization) {
    const Matrix m = random_matrix(7, 3);
    ComplexSchurForm s = complex_schur(m);
    sort_schur_by_real_part(s);
    EXPECT_LE((s.U * s.T * s.U.adjoint() - m.cast<Complex>()).norm(), 1e-12);
    for (int i = 1; i < 7; ++i) {
        EXPECT_LE(s.T(i - 1, i - 1).real(), s.T(i, i).real() + 1e-12);
        EXPECT_LE(s.T.col(i - 1).tail(7 - i).norm(), 1e-12);
    }
}

TEST(Subspaces, RangeAndKernel) {
    Matrix m(3, 3);
    m << 1, 0, 1, 0, 1, 1, 0, 0, 0;
    EXPECT_EQ(orthonormal_range(m, 1e-10).cols(), 2);
    const Matrix k = null_space(m, 1e-10);
    ASSERT_EQ(k.cols(), 1);
    EXPECT_LE((m * k).norm(), 1e-14);
}

TEST(Ode, ExponentialDecayBothDirections) {
    auto sys = [](const OdeState& x, OdeState& dx, double) { dx[0] = -x[0]; };
    OdeState x{1.0};
    double dt = 0.1;
    integrate_segment(sys, x, 0.0, 5.0, dt);
    EXPECT_NEAR(x[0], std::exp(-5.0), 1e-11);
    integrate_segment(sys, x, 5.0, 0.0, dt);
    EXPECT_NEAR(x[0], 1.0, 1e-9);
}

TEST(Parallel, OrderIndependentOfScheduling) {
    const auto out = parallel_map(50, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
    EXPECT_THROW(parallel_map(4,
                              [](std::size_t i) -> int {
                                  if (i == 2) throw DomainError("boom");
                                  return 0;
                              }),
                 DomainError);
}
