#pragma once

/**
 * @file riccati.hpp
 * @brief X^2 + X A + A^T X = 0: maximal symmetric solution, the horosphere
 *        shape operator L0 = -D_A - X, and the finite-horizon Jacobi oracle.
 */

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "solvharm/config.hpp"
#include "solvharm/lie_metric.hpp"
#include "solvharm/numerics.hpp"

namespace solvharm {

struct RiccatiResult {
    Matrix X;
    Matrix L0;
    Spectrum spectrum_adA;
    double trace_L0 = 0.0;
    double residual = 0.0;
    std::string method;  ///< "schur", "schur-axis" or "finite-horizon"
};

/// -sum |Re sigma| over the spectrum of adA.
inline double horosphere_mean_curvature_formula(const Matrix& adA) {
    double s = 0.0;
    for (const auto& v : eigenvalues(adA).values) s -= std::abs(v.real());
    return s;
}

inline double riccati_residual(const Matrix& X, const Matrix& adA) {
    return max_abs(X * X + X * adA + adA.transpose() * X);
}

/**
 * U_r = -(E'(0) + S_A) for the Jacobi tensor with E(0) = id, E(r) = 0 of
 * E'' + 2 S E' + (S^2 + R_A) E = 0, R_A = -D^2 - [D, S].
 *
 * The subspace {E(r) = 0} is carried back from r to 0 with exp(-C h) over unit
 * steps and re-orthonormalized after each, which keeps large r well conditioned.
 */
inline Matrix finite_horizon_shape(const Matrix& adA, double r,
                                   const Tolerances& tol = default_tolerances()) {
    require_square(adA, "finite_horizon_shape");
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("finite_horizon_shape: r must be positive");
    const Eigen::Index n = adA.rows();
    const auto [D, S] = symmetric_skew_split(adA);
    const Matrix RA = -D * D - (D * S - S * D);
    Matrix C = Matrix::Zero(2 * n, 2 * n);
    C.topRightCorner(n, n) = Matrix::Identity(n, n);
    C.bottomLeftCorner(n, n) = -(S * S + RA);
    C.bottomRightCorner(n, n) = -2.0 * S;

    const auto steps = static_cast<int>(std::ceil(r - 1e-12));
    const double h = r / steps;
    const Matrix phi = matrix_exponential(-h * C);
    Matrix Y = Matrix::Zero(2 * n, n);
    Y.bottomRows(n) = Matrix::Identity(n, n);
    for (int k = 0; k < steps; ++k) Y = orthonormalize(phi * Y);
    const Matrix P = Y.topRows(n);
    const Matrix Q = Y.bottomRows(n);
    Matrix Eprime0;
    try {
        Eprime0 = solve_linear(P.transpose(), Q.transpose(), tol).transpose();
    } catch (const SingularMatrixError&) {
        throw ConjugatePointError("finite_horizon_shape: E(0) is singular for r = " +
                                  std::to_string(r) + " (conjugate point)");
    }
    return -(Eprime0 + S);
}

namespace detail {

inline std::string short_number(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string spectrum_text(const Spectrum& s) {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < s.size(); ++i)
        os << (i ? ", " : "") << s.values[i].real() << (s.values[i].imag() < 0 ? "-" : "+")
           << std::abs(s.values[i].imag()) << "i";
    return os.str();
}

/// Stable invariant subspace of [[-A, -I], [0, A^T]] as the graph of X.
inline Matrix riccati_block_schur(const Matrix& adA, const Tolerances& tol) {
    const Eigen::Index n = adA.rows();
    Matrix M = Matrix::Zero(2 * n, 2 * n);
    M.topLeftCorner(n, n) = -adA;
    M.topRightCorner(n, n) = -Matrix::Identity(n, n);
    M.bottomRightCorner(n, n) = adA.transpose();
    ComplexSchurForm s = complex_schur(M);
    sort_schur_by_real_part(s);
    const ComplexMatrix U1 = s.U.topLeftCorner(n, n);
    const ComplexMatrix U2 = s.U.bottomLeftCorner(n, n);
    Eigen::PartialPivLU<ComplexMatrix> lu(U1.transpose());
    const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot > tol.singular_pivot * std::max(1.0, U1.cwiseAbs().maxCoeff())))
        throw SingularMatrixError("stable subspace is not a graph");
    const ComplexMatrix X = lu.solve(U2.transpose()).transpose();
    const Matrix Xr = X.real();
    return 0.5 * (Xr + Xr.transpose());
}

/**
 * Axis-tolerant route: with A = U T U^H ordered so that Re >= 0 comes first,
 * X = U diag(0, W^{-1}) U^H where T22 W + W T22^H = -I on the block with Re < 0.
 */
inline Matrix riccati_axis_reduction(const Matrix& adA, double axis, const Tolerances& tol) {
    const Eigen::Index n = adA.rows();
    // Schur form of -A sorted ascending puts the largest Re of A first
    ComplexSchurForm s = complex_schur(-adA);
    sort_schur_by_real_part(s);
    const ComplexMatrix T = -s.T;
    Eigen::Index k = 0;
    while (k < n && T(k, k).real() >= -axis) ++k;
    const Eigen::Index m = n - k;
    if (m == 0) return Matrix::Zero(n, n);
    const ComplexMatrix T22 = T.bottomRightCorner(m, m);
    ComplexMatrix W = ComplexMatrix::Zero(m, m);
    for (Eigen::Index i = m - 1; i >= 0; --i)
        for (Eigen::Index j = m - 1; j >= 0; --j) {
            Complex rhs = i == j ? Complex(-1.0, 0.0) : Complex(0.0, 0.0);
            for (Eigen::Index q = i + 1; q < m; ++q) rhs -= T22(i, q) * W(q, j);
            for (Eigen::Index q = j + 1; q < m; ++q) rhs -= W(i, q) * std::conj(T22(j, q));
            W(i, j) = rhs / (T22(i, i) + std::conj(T22(j, j)));
        }
    Eigen::PartialPivLU<ComplexMatrix> lu(W);
    if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() >
          tol.singular_pivot * std::max(1.0, W.cwiseAbs().maxCoeff())))
        throw SingularMatrixError("Lyapunov solution is singular");
    ComplexMatrix Xc = ComplexMatrix::Zero(n, n);
    Xc.bottomRightCorner(m, m) = lu.inverse();
    const Matrix Xr = (s.U * Xc * s.U.adjoint()).real();
    return 0.5 * (Xr + Xr.transpose());
}

}  // namespace detail

/**
 * Maximal symmetric solution of X^2 + X adA + adA^T X = 0, characterized by
 * -adA - X having spectrum in the closed left half-plane.
 */
inline RiccatiResult solve_algebraic_riccati_max(const Matrix& adA,
                                                 const Tolerances& tol = default_tolerances()) {
    require_square(adA, "solve_algebraic_riccati_max");
    require_finite(adA, "solve_algebraic_riccati_max");
    const double scale = std::max(1.0, max_abs(adA));
    RiccatiResult res;
    res.spectrum_adA = eigenvalues(adA);

    const double axis = tol.riccati_axis * scale;
    bool on_axis = false;
    for (const auto& v : res.spectrum_adA.values) {
        const double re = std::abs(v.real());
        if (re > axis && re < tol.riccati_ambiguity)
            throw DegenerateSpectrumError(
                "riccati: eigenvalue with |Re| = " + detail::short_number(re) +
                " is too close to the imaginary axis to separate; spectrum {" +
                detail::spectrum_text(res.spectrum_adA) + "}");
        if (re <= axis) on_axis = true;
    }

    const auto [D, S] = symmetric_skew_split(adA);
    auto accept = [&](const Matrix& X, const char* method) {
        if (!X.allFinite()) return false;
        const double resid = riccati_residual(X, adA);
        if (resid > tol.riccati_residual * scale * scale) return false;
        const Matrix L = -adA - X;
        if (eigenvalues(L).values.back().real() > tol.imaginary_axis * scale) return false;
        res.X = X;
        res.residual = resid;
        res.method = method;
        return true;
    };

    bool ok = false;
    try {
        ok = on_axis ? accept(detail::riccati_axis_reduction(adA, axis, tol), "schur-axis")
                     : accept(detail::riccati_block_schur(adA, tol), "schur");
    } catch (const NumericalError&) {
        ok = false;
    }
    if (!ok) {
        // finite-horizon continuation: U_r -> D + X as r grows
        Matrix prev;
        double r = 10.0;
        try {
            prev = finite_horizon_shape(adA, r, tol);
            for (r = 20.0; r <= tol.horizon_cap && !ok; r *= 2.0) {
                const Matrix next = finite_horizon_shape(adA, r, tol);
                if (max_abs(next - prev) <= tol.horizon_convergence) {
                    const Matrix X = next - D;
                    ok = accept(0.5 * (X + X.transpose()), "finite-horizon");
                }
                prev = next;
            }
        } catch (const NumericalError&) {
            ok = false;
        }
        if (!ok)
            throw DegenerateSpectrumError(
                "riccati: no stabilizing solution found (Schur route rejected, finite horizon did "
                "not converge by r = " +
                std::to_string(tol.horizon_cap) + "); spectrum {" +
                detail::spectrum_text(res.spectrum_adA) + "}");
    }
    res.L0 = -D - res.X;
    res.trace_L0 = res.L0.trace();
    return res;
}

}  // namespace solvharm
