#pragma once

/**
 * @file curvature.hpp
 * @brief Left-invariant Levi-Civita connection and curvature at the identity.
 *
 * Convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
 * so that K(X,Y) = <R(X,Y)Y, X> / |X ^ Y|^2.
 */

#include <cmath>
#include <string>
#include <vector>

#include "solvharm/config.hpp"
#include "solvharm/lie_metric.hpp"
#include "solvharm/numerics.hpp"

namespace solvharm {

/// gamma[i] is the matrix of nabla_{e_i}; column j is nabla_{e_i} e_j.
struct ConnectionCoefficients {
    std::vector<Matrix> gamma;

    int dim() const { return static_cast<int>(gamma.size()); }

    Matrix nabla(const Vector& x) const {
        Matrix out = Matrix::Zero(dim(), dim());
        for (int i = 0; i < dim(); ++i)
            if (x(i) != 0.0) out += x(i) * gamma[i];
        return out;
    }

    Vector apply(const Vector& x, const Vector& y) const { return nabla(x) * y; }
};

/// Koszul formula: 2<nabla_X Y, W> = <[X,Y],W> - <[Y,W],X> + <[W,X],Y>.
inline ConnectionCoefficients levi_civita(const MetricLieAlgebra& g) {
    const int n = g.dim();
    ConnectionCoefficients c;
    c.gamma.assign(n, Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                c.gamma[i](k, j) =
                    0.5 * (g.constant(i, j, k) - g.constant(j, k, i) + g.constant(k, i, j));
    return c;
}

/// r[i * n + j] is the endomorphism R(e_i, e_j).
struct CurvatureTensor {
    int n = 0;
    std::vector<Matrix> r;

    const Matrix& operator()(int i, int j) const { return r[static_cast<std::size_t>(i * n + j)]; }

    /// R(x, y) as an endomorphism.
    Matrix op(const Vector& x, const Vector& y) const {
        Matrix out = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            if (x(i) == 0.0) continue;
            for (int j = 0; j < n; ++j)
                if (y(j) != 0.0) out += x(i) * y(j) * (*this)(i, j);
        }
        return out;
    }

    Vector apply(const Vector& x, const Vector& y, const Vector& z) const { return op(x, y) * z; }

    double norm() const {
        double s = 0.0;
        for (const auto& m : r) s += m.squaredNorm();
        return std::sqrt(s);
    }
};

inline CurvatureTensor curvature_tensor(const MetricLieAlgebra& g, const ConnectionCoefficients& c) {
    const int n = g.dim();
    CurvatureTensor R;
    R.n = n;
    R.r.assign(static_cast<std::size_t>(n * n), Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Matrix m = c.gamma[i] * c.gamma[j] - c.gamma[j] * c.gamma[i] -
                             c.nabla(g.ad_basis(i).col(j));
            R.r[i * n + j] = m;
            R.r[j * n + i] = -m;
        }
    return R;
}

inline CurvatureTensor curvature_tensor(const MetricLieAlgebra& g) {
    return curvature_tensor(g, levi_civita(g));
}

/// Ric(Y, Z) = trace(X -> R(X, Y) Z).
inline Matrix ricci(const MetricLieAlgebra& g, const CurvatureTensor& R) {
    const int n = g.dim();
    Matrix ric = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += R(i, j)(i, k);
            ric(j, k) = s;
        }
    return ric;
}

struct EinsteinResult {
    bool is_einstein = false;
    double constant = 0.0;
    double residual = 0.0;  ///< max |Ric - c id|
};

inline EinsteinResult einstein_check(const MetricLieAlgebra& g,
                                     const Tolerances& tol = default_tolerances()) {
    const Matrix ric = ricci(g, curvature_tensor(g));
    const int n = g.dim();
    EinsteinResult e;
    e.constant = ric.trace() / n;
    e.residual = max_abs(ric - e.constant * Matrix::Identity(n, n));
    e.is_einstein = e.residual <= tol.einstein;
    return e;
}

inline double sectional_curvature(const CurvatureTensor& R, const Vector& x, const Vector& y) {
    const double area = x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
    if (!(area > 1e-12 * x.squaredNorm() * y.squaredNorm()) || x.squaredNorm() == 0.0)
        throw DegeneratePlaneError("sectional_curvature: vectors span no plane");
    return R.apply(x, y, y).dot(x) / area;
}

inline double sectional_curvature(const MetricLieAlgebra& g, const CurvatureTensor& R,
                                  const Vector& x, const Vector& y) {
    if (x.size() != g.dim() || y.size() != g.dim())
        throw DimensionError("sectional_curvature: vector length does not match the algebra");
    return sectional_curvature(R, x, y);
}

/// The Jacobi operator X -> R(X, v) v on the whole algebra (v is a kernel vector).
inline Matrix jacobi_operator_tensor(const CurvatureTensor& R, const Vector& v) {
    const int n = R.n;
    Matrix out(n, n);
    for (int k = 0; k < n; ++k) out.col(k) = R.apply(Vector::Unit(n, k), v, v);
    return out;
}

/// Orthonormal basis of v^perp (columns); for a basis vector, the remaining basis in order.
inline Matrix perp_basis(const Vector& v) {
    const auto n = v.size();
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(std::abs(v(i)) - 1.0) <= 1e-14 && std::abs(v.norm() - 1.0) <= 1e-14) {
            Matrix b(n, n - 1);
            Eigen::Index c = 0;
            for (Eigen::Index k = 0; k < n; ++k)
                if (k != i) b.col(c++) = Vector::Unit(n, k);
            return b;
        }
    return orthogonal_complement(v, n, 1e-12);
}

/**
 * -D_A^2 - [D_A, S_A] for a unit A orthogonal to the derived algebra, where
 * D_A, S_A are the symmetric and skew parts of ad_A on A^perp. Expressed in the
 * given orthonormal basis of A^perp (default: perp_basis(A)).
 */
inline Matrix jacobi_operator_H(const MetricLieAlgebra& g, const Vector& A, const Matrix& basis) {
    if (A.size() != g.dim()) throw DimensionError("jacobi_operator_H: wrong vector length");
    if (std::abs(A.norm() - 1.0) > 1e-10) throw DomainError("jacobi_operator_H: A is not a unit vector");
    const Matrix N = derived_algebra(g);
    if (N.cols() > 0 && (N.transpose() * A).norm() > 1e-10)
        throw DomainError("jacobi_operator_H: A is not orthogonal to the derived algebra");
    const Matrix a = basis.transpose() * g.ad(A) * basis;
    const auto [D, S] = symmetric_skew_split(a);
    return -D * D - (D * S - S * D);
}

inline Matrix jacobi_operator_H(const MetricLieAlgebra& g, const Vector& A) {
    return jacobi_operator_H(g, A, perp_basis(A));
}

inline Matrix jacobi_operator_H(const StandardSolvableData& d) {
    return jacobi_operator_H(d.algebra, d.H());
}

/// Velocity of the central geodesic in left-invariant coordinates: (-tanh t) H + (1/cosh t) Z.
struct CentralVelocity {
    double h;
    double z;
};

inline CentralVelocity central_velocity(double t) { return {-std::tanh(t), 1.0 / std::cosh(t)}; }

/**
 * Orthonormal frame of the orthogonal complement of the central geodesic's
 * velocity at time t, in left-invariant coordinates of the adapted basis:
 * w(t) = sech(t) H + tanh(t) Z, then Z*_j, then the v basis (pairs, kernel).
 * Column 0 of the result is w(t).
 */
inline Matrix central_frame(const StandardSolvableData& d, double t) {
    const int n = d.algebra.dim();
    Matrix f = Matrix::Zero(n, n - 1);
    f(d.h_index, 0) = 1.0 / std::cosh(t);
    f(d.z_index, 0) = std::tanh(t);
    int c = 1;
    for (int i : d.zstar_indices) f(i, c++) = 1.0;
    for (int i : d.v_indices) f(i, c++) = 1.0;
    return f;
}

namespace detail {

inline void require_central(const StandardSolvableData& d, const Tolerances& tol) {
    const Vector Z = d.Z();
    const Vector img = d.algebra.ad(d.H()) * Z;
    if ((img - Z).norm() > tol.self_adjoint)
        throw DomainError("central direction: Z is not a unit 1-eigenvector of ad_H");
}

}  // namespace detail

/// The pieces of ad_H and j(Z) that enter the central Jacobi operator.
struct CentralBlocks {
    Matrix hz;  ///< ad_H on span(Z*_j)
    Matrix hv;  ///< ad_H on v
    Matrix j;   ///< j(Z) on v
};

inline CentralBlocks central_blocks(const StandardSolvableData& d,
                                    const Tolerances& tol = default_tolerances()) {
    detail::require_central(d, tol);
    const int nz = static_cast<int>(d.zstar_indices.size());
    const int nv = d.dim_v();
    const Matrix adh = d.algebra.ad(d.H());
    CentralBlocks b;
    b.hz.resize(nz, nz);
    for (int a = 0; a < nz; ++a)
        for (int c = 0; c < nz; ++c) b.hz(a, c) = adh(d.zstar_indices[a], d.zstar_indices[c]);
    b.hv.resize(nv, nv);
    for (int a = 0; a < nv; ++a)
        for (int c = 0; c < nv; ++c) b.hv(a, c) = adh(d.v_indices[a], d.v_indices[c]);
    b.j = nv > 0 ? extract_jmap(d.algebra, NilpotentSplit{d.v_indices, {d.z_index}}).generators[0]
                 : Matrix(0, 0);
    return b;
}

/**
 * R(t) = R(., gamma'(t)) gamma'(t) on gamma'(t)^perp along the central geodesic
 * in the frame of central_frame(d, t), from the closed-form block formulas:
 * -1 on w(t); -(ad_H + sinh^2 ad_H^2) / cosh^2 on the rest of the center;
 * sech^2 (-j^2/4 - ad_H - sinh^2 ad_H^2 - sinh j (1/2 - ad_H)) on v, j = j(Z).
 */
inline Matrix jacobi_operator_central(const CentralBlocks& b, double t) {
    const Eigen::Index nz = b.hz.rows(), nv = b.hv.rows();
    const double ch = std::cosh(t), sh = std::sinh(t);
    const double sech2 = 1.0 / (ch * ch);
    Matrix R = Matrix::Zero(1 + nz + nv, 1 + nz + nv);
    R(0, 0) = -1.0;
    if (nz > 0) R.block(1, 1, nz, nz) = -(b.hz + sh * sh * b.hz * b.hz) * sech2;
    if (nv > 0) {
        const Matrix id = Matrix::Identity(nv, nv);
        R.bottomRightCorner(nv, nv) =
            sech2 * (-0.25 * b.j * b.j - b.hv - sh * sh * b.hv * b.hv - sh * b.j * (0.5 * id - b.hv));
    }
    return R;
}

inline Matrix jacobi_operator_central(const StandardSolvableData& d, double t,
                                      const Tolerances& tol = default_tolerances()) {
    return jacobi_operator_central(central_blocks(d, tol), t);
}

/// Same operator from the curvature tensor: F^T R_v F with v = gamma'(t), F = central_frame.
inline Matrix jacobi_operator_central_tensor(const StandardSolvableData& d, const CurvatureTensor& R,
                                             double t) {
    const auto v = central_velocity(t);
    const Vector vel = v.h * d.H() + v.z * d.Z();
    const Matrix F = central_frame(d, t);
    return F.transpose() * jacobi_operator_tensor(R, vel) * F;
}

/**
 * Frobenius norm of nabla R at the identity, from the algebraic formula
 * (nabla_i R)(e_j, e_k) = [G_i, R_jk] - sum_m G_i(m,j) R_mk - sum_m G_i(m,k) R_jm.
 */
inline double nabla_R_norm(const MetricLieAlgebra& g, const ConnectionCoefficients& c,
                           const CurvatureTensor& R) {
    const int n = g.dim();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Matrix& G = c.gamma[i];
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Matrix m = G * R(j, k) - R(j, k) * G;
                for (int q = 0; q < n; ++q) {
                    if (G(q, j) != 0.0) m -= G(q, j) * R(q, k);
                    if (G(q, k) != 0.0) m -= G(q, k) * R(j, q);
                }
                total += 2.0 * m.squaredNorm();  // (j,k) and (k,j)
            }
    }
    return std::sqrt(total);
}

inline double nabla_R_norm(const MetricLieAlgebra& g) {
    const auto c = levi_civita(g);
    return nabla_R_norm(g, c, curvature_tensor(g, c));
}

/// Largest first-Bianchi and pair-symmetry violations.
struct CurvatureSymmetryResiduals {
    double bianchi = 0.0;
    double pair = 0.0;
};

inline CurvatureSymmetryResiduals curvature_residuals(const CurvatureTensor& R) {
    const int n = R.n;
    CurvatureSymmetryResiduals out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vector b = R(i, j).col(k) + R(j, k).col(i) + R(k, i).col(j);
                out.bianchi = std::max(out.bianchi, b.cwiseAbs().maxCoeff());
                for (int l = 0; l < n; ++l)
                    out.pair = std::max(out.pair, std::abs(R(i, j)(l, k) - R(k, l)(j, i)));
            }
    return out;
}

}  // namespace solvharm
