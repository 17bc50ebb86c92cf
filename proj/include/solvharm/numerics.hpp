#pragma once

/**
 * @file numerics.hpp
 * @brief Dense real/complex kernels: spectra, matrix exponential, linear solves,
 *        Schur forms, orthonormal bases of ranges and kernels.
 *
 * Everything here is a pure function on immutable inputs.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "solvharm/config.hpp"

namespace solvharm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Eigenvalues with multiplicity, sorted by (real part, imaginary part).
struct Spectrum {
    std::vector<Complex> values;

    std::size_t size() const { return values.size(); }
    Complex sum() const {
        Complex s{0.0, 0.0};
        for (const auto& v : values) s += v;
        return s;
    }
    double max_abs_real() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v.real()));
        return m;
    }
};

namespace detail {

inline std::string shape(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

}  // namespace detail

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             detail::shape(m));
}

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entries");
}

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void sort_complex(std::vector<Complex>& v) {
    std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

/// All eigenvalues of a real square matrix (Hessenberg reduction + shifted QR).
inline Spectrum eigenvalues(const Matrix& m) {
    require_square(m, "eigenvalues");
    require_finite(m, "eigenvalues");
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: QR iteration did not converge");
    Spectrum s;
    s.values.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
    sort_complex(s.values);
    return s;
}

/// Eigenvalues of a symmetric matrix, ascending. The input is symmetrized first.
inline Vector symmetric_eigenvalues(const Matrix& m) {
    require_square(m, "symmetric_eigenvalues");
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric_eigenvalues: did not converge");
    return solver.eigenvalues();
}

/**
 * Multiset distance between two spectra: greedy nearest matching, returns the
 * largest matched gap. Sizes must agree.
 */
inline double spectrum_distance(const Spectrum& a, const Spectrum& b) {
    if (a.size() != b.size())
        throw DimensionError("spectrum_distance: spectra of different sizes");
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& x : a.values) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b.values[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

/// exp(m) by Pade-13 scaling and squaring.
inline Matrix matrix_exponential(const Matrix& m) {
    require_square(m, "matrix_exponential");
    require_finite(m, "matrix_exponential");
    Matrix e = m.exp();
    if (!e.allFinite()) throw NumericalError("matrix_exponential: overflow");
    return e;
}

/// Solve a*x = b with partial pivoting; rejects pivots below tol*||a||_inf.
inline Matrix solve_linear(const Matrix& a, const Matrix& b,
                           const Tolerances& tol = default_tolerances()) {
    require_square(a, "solve_linear");
    if (b.rows() != a.rows())
        throw DimensionError("solve_linear: right-hand side has " + std::to_string(b.rows()) +
                             " rows, matrix has " + std::to_string(a.rows()));
    const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::PartialPivLU<Matrix> lu(a);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot > tol.singular_pivot * scale))
        throw SingularMatrixError("solve_linear: pivot " + std::to_string(min_pivot) +
                                  " below threshold");
    return lu.solve(b);
}

struct RealSchurForm {
    Matrix T;  ///< quasi upper triangular
    Matrix U;  ///< orthogonal, m = U T U^T
};

inline RealSchurForm real_schur(const Matrix& m) {
    require_square(m, "real_schur");
    require_finite(m, "real_schur");
    Eigen::RealSchur<Matrix> schur(m);
    if (schur.info() != Eigen::Success) throw NumericalError("real_schur: did not converge");
    return {schur.matrixT(), schur.matrixU()};
}

struct ComplexSchurForm {
    ComplexMatrix T;  ///< upper triangular
    ComplexMatrix U;  ///< unitary, m = U T U^H
};

inline ComplexSchurForm complex_schur(const Matrix& m) {
    require_square(m, "complex_schur");
    require_finite(m, "complex_schur");
    Eigen::ComplexSchur<ComplexMatrix> schur(m.cast<Complex>());
    if (schur.info() != Eigen::Success) throw NumericalError("complex_schur: did not converge");
    return {schur.matrixT(), schur.matrixU()};
}

/**
 * Exchange the adjacent diagonal entries k and k+1 of a complex Schur form by a
 * unitary rotation, keeping T upper triangular and m = U T U^H.
 */
inline void swap_schur_diagonal(ComplexSchurForm& s, Eigen::Index k) {
    const Eigen::Index n = s.T.rows();
    const Complex t11 = s.T(k, k);
    const Complex t12 = s.T(k, k + 1);
    const Complex t22 = s.T(k + 1, k + 1);
    // (t12, t22 - t11) is the eigenvector of the 2x2 block for t22
    const Complex x0 = t12;
    const Complex x1 = t22 - t11;
    const double norm = std::hypot(std::abs(x0), std::abs(x1));
    if (norm == 0.0) return;
    const Complex c = x0 / norm;
    const Complex s1 = x1 / norm;
    Eigen::Matrix2cd q;
    q << c, -std::conj(s1), s1, std::conj(c);

    // rows k, k+1 <- q^H * rows
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex a = s.T(k, j);
        const Complex b = s.T(k + 1, j);
        s.T(k, j) = std::conj(q(0, 0)) * a + std::conj(q(1, 0)) * b;
        s.T(k + 1, j) = std::conj(q(0, 1)) * a + std::conj(q(1, 1)) * b;
    }
    // columns k, k+1 <- columns * q
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex a = s.T(i, k);
        const Complex b = s.T(i, k + 1);
        s.T(i, k) = a * q(0, 0) + b * q(1, 0);
        s.T(i, k + 1) = a * q(0, 1) + b * q(1, 1);
        const Complex ua = s.U(i, k);
        const Complex ub = s.U(i, k + 1);
        s.U(i, k) = ua * q(0, 0) + ub * q(1, 0);
        s.U(i, k + 1) = ua * q(0, 1) + ub * q(1, 1);
    }
    s.T(k + 1, k) = Complex{0.0, 0.0};
    s.T(k, k) = t22;
    s.T(k + 1, k + 1) = t11;
}

/**
 * Reorder a complex Schur form so that the diagonal is non-decreasing in real
 * part. Leading columns of U then span the invariant subspace of the
 * leftmost eigenvalues.
 */
inline void sort_schur_by_real_part(ComplexSchurForm& s) {
    const Eigen::Index n = s.T.rows();
    for (Eigen::Index target = 0; target < n; ++target) {
        Eigen::Index best = target;
        for (Eigen::Index j = target + 1; j < n; ++j)
            if (s.T(j, j).real() < s.T(best, best).real()) best = j;
        for (Eigen::Index k = best; k > target; --k) swap_schur_diagonal(s, k - 1);
    }
}

/// Orthonormal basis (as columns) of the column space of m.
inline Matrix orthonormal_range(const Matrix& m, double rel_tol) {
    if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * scale) ++rank;
    return svd.matrixU().leftCols(rank);
}

/// Orthonormal basis (as columns) of the kernel of m.
inline Matrix null_space(const Matrix& m, double rel_tol) {
    const Eigen::Index n = m.cols();
    if (m.rows() == 0) return Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * scale) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

/// Orthonormal basis of the orthogonal complement of span(basis) in R^n.
inline Matrix orthogonal_complement(const Matrix& basis, Eigen::Index n, double rel_tol) {
    if (basis.cols() == 0) return Matrix::Identity(n, n);
    return null_space(basis.transpose(), rel_tol);
}

/// Gram-Schmidt with re-orthogonalization; columns of the result are orthonormal.
inline Matrix orthonormalize(const Matrix& m) {
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
    // fix column signs so that the result is continuous in m
    const Matrix r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

}  // namespace solvharm
