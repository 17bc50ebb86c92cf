#pragma once

/**
 * @file jacobi_flow.hpp
 * @brief Jacobi fields along central geodesics and along general geodesics,
 *        stable Jacobi tensors, numeric horosphere mean curvature and the
 *        volume density.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "solvharm/config.hpp"
#include "solvharm/curvature.hpp"
#include "solvharm/lie_metric.hpp"
#include "solvharm/numerics.hpp"
#include "solvharm/ode.hpp"
#include "solvharm/parallel.hpp"

namespace solvharm {

enum class JacobiFrame { LeftInvariant, Parallel };

/// E and its covariant derivative E' on a time grid, as coefficient matrices in a frame.
struct JacobiTensorSample {
    std::vector<double> t;
    std::vector<Matrix> E;
    std::vector<Matrix> E_prime;
    JacobiFrame frame = JacobiFrame::LeftInvariant;
    double r = 0.0;  ///< horizon used by stable_jacobi_tensor

    std::size_t size() const { return t.size(); }
};

/// nabla_{gamma'(t)} X for a left-invariant X, gamma the central geodesic through Z.
inline Vector covariant_derivative_along(const StandardSolvableData& d, const ConnectionCoefficients& c,
                                         double t, const Vector& field) {
    const auto v = central_velocity(t);
    const Vector vel = v.h * d.H() + v.z * d.Z();
    return c.nabla(vel) * field;
}

inline Vector covariant_derivative_along(const StandardSolvableData& d, double t, const Vector& field) {
    return covariant_derivative_along(d, levi_civita(d.algebra), t, field);
}

/**
 * The Jacobi equation along the central geodesic in the frame of
 * central_frame(d, t). With coefficients c(t), the covariant derivative is
 * c' + G(t) c, where G vanishes on w(t) and on the Z*_j and equals
 * -j(Z) / (2 cosh t) on v, so
 *   c'' = -2 G c' - (G' + G^2 + R(t)) c.
 */
class CentralJacobiSystem {
public:
    explicit CentralJacobiSystem(const StandardSolvableData& d, const Tolerances& tol = default_tolerances())
        : blocks_(central_blocks(d, tol)),
          n_(1 + static_cast<int>(blocks_.hz.rows()) + static_cast<int>(blocks_.hv.rows())) {}

    explicit CentralJacobiSystem(CentralBlocks blocks)
        : blocks_(std::move(blocks)),
          n_(1 + static_cast<int>(blocks_.hz.rows()) + static_cast<int>(blocks_.hv.rows())) {}

    int dim() const { return n_; }
    const CentralBlocks& blocks() const { return blocks_; }

    Matrix connection(double t) const {
        Matrix G = Matrix::Zero(n_, n_);
        const Eigen::Index nv = blocks_.hv.rows();
        if (nv > 0) G.bottomRightCorner(nv, nv) = -blocks_.j / (2.0 * std::cosh(t));
        return G;
    }

    Matrix connection_dot(double t) const {
        Matrix G = Matrix::Zero(n_, n_);
        const Eigen::Index nv = blocks_.hv.rows();
        const double ch = std::cosh(t);
        if (nv > 0) G.bottomRightCorner(nv, nv) = blocks_.j * (std::sinh(t) / (2.0 * ch * ch));
        return G;
    }

    Matrix curvature(double t) const { return jacobi_operator_central(blocks_, t); }

    /// Coefficient matrices for c'' = P(t) c' + Q(t) c.
    void coefficients(double t, Matrix& P, Matrix& Q) const {
        const Matrix G = connection(t);
        P = -2.0 * G;
        Q = -(connection_dot(t) + G * G + curvature(t));
    }

    /// Parallel transport in the frame: Phi(t) = exp(gd(t)/2 j(Z)) on v, identity elsewhere.
    Matrix parallel_transport(double t) const {
        Matrix phi = Matrix::Identity(n_, n_);
        const Eigen::Index nv = blocks_.hv.rows();
        if (nv > 0) {
            const Matrix arg = (0.5 * std::atan(std::sinh(t))) * blocks_.j;
            phi.bottomRightCorner(nv, nv) = arg.exp();
        }
        return phi;
    }

private:
    CentralBlocks blocks_;
    int n_;
};

namespace detail {

/// State layout: [Y (n x k, column-major), Y' (n x k)].
inline OdeState pack(const Matrix& Y, const Matrix& Yd) {
    OdeState x(static_cast<std::size_t>(Y.size() + Yd.size()));
    Eigen::Map<Matrix>(x.data(), Y.rows(), Y.cols()) = Y;
    Eigen::Map<Matrix>(x.data() + Y.size(), Yd.rows(), Yd.cols()) = Yd;
    return x;
}

inline void unpack(const OdeState& x, Eigen::Index n, Eigen::Index k, Matrix& Y, Matrix& Yd) {
    Y = Eigen::Map<const Matrix>(x.data(), n, k);
    Yd = Eigen::Map<const Matrix>(x.data() + n * k, n, k);
}

/// Second-order linear system c'' = P(t) c' + Q(t) c with k right-hand columns.
template <typename Coeffs>
struct LinearSecondOrder {
    const Coeffs& coeffs;
    Eigen::Index n, k;

    void operator()(const OdeState& x, OdeState& dx, double t) const {
        Matrix P, Q;
        coeffs(t, P, Q);
        dx.resize(x.size());
        Eigen::Map<const Matrix> Y(x.data(), n, k), Yd(x.data() + n * k, n, k);
        Eigen::Map<Matrix>(dx.data(), n, k) = Yd;
        Eigen::Map<Matrix>(dx.data() + n * k, n, k) = P * Yd + Q * Y;
    }
};

inline void require_grid(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) throw DomainError(std::string(what) + ": empty time grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw DomainError(std::string(what) + ": time grid must be strictly increasing");
    for (double t : grid)
        if (!std::isfinite(t)) throw DomainError(std::string(what) + ": non-finite time");
}

}  // namespace detail

/**
 * Jacobi fields along the central geodesic with J(t_grid[0]) = J0 and
 * covariant derivative J0prime, both given in the central frame
 * (n - 1 rows, any number of columns).
 */
inline JacobiTensorSample integrate_jacobi(const CentralJacobiSystem& sys, const Matrix& J0,
                                           const Matrix& J0prime, const std::vector<double>& t_grid,
                                           const Tolerances& tol = default_tolerances()) {
    detail::require_grid(t_grid, "integrate_jacobi");
    const Eigen::Index n = sys.dim(), k = J0.cols();
    if (J0.rows() != n || J0prime.rows() != n || J0prime.cols() != k)
        throw DimensionError("integrate_jacobi: initial data must have " + std::to_string(n) + " rows");
    auto coeffs = [&](double t, Matrix& P, Matrix& Q) { sys.coefficients(t, P, Q); };
    detail::LinearSecondOrder<decltype(coeffs)> ode{coeffs, n, k};

    const double t0 = t_grid.front();
    OdeState x = detail::pack(J0, J0prime - sys.connection(t0) * J0);
    JacobiTensorSample s;
    s.t = t_grid;
    double dt = 1e-2, t = t0;
    for (double tk : t_grid) {
        integrate_segment(ode, x, t, tk, dt, tol);
        t = tk;
        Matrix Y, Yd;
        detail::unpack(x, n, k, Y, Yd);
        s.E.push_back(Y);
        s.E_prime.push_back(Yd + sys.connection(tk) * Y);
    }
    return s;
}

inline JacobiTensorSample integrate_jacobi(const StandardSolvableData& d, const Matrix& J0,
                                           const Matrix& J0prime, const std::vector<double>& t_grid,
                                           const Tolerances& tol = default_tolerances()) {
    return integrate_jacobi(CentralJacobiSystem(d, tol), J0, J0prime, t_grid, tol);
}

/// Express a left-invariant-frame sample in a parallel frame along the central geodesic.
inline JacobiTensorSample to_parallel_frame(const CentralJacobiSystem& sys, JacobiTensorSample s) {
    if (s.frame == JacobiFrame::Parallel) return s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Matrix phiT = sys.parallel_transport(s.t[i]).transpose();
        s.E[i] = phiT * s.E[i];
        s.E_prime[i] = phiT * s.E_prime[i];
    }
    s.frame = JacobiFrame::Parallel;
    return s;
}

namespace detail {

/**
 * E_r with E_r(0) = id, E_r(r) = 0 on the grid. The solution space
 * {E(r) = 0} is swept backward from r with QR re-orthonormalization at
 * least once per unit time; the recorded R factors reconstruct E_r at each
 * grid point from the snapshots.
 */
inline JacobiTensorSample finite_stable_tensor(const CentralJacobiSystem& sys,
                                               const std::vector<double>& t_grid, double r,
                                               const Tolerances& tol) {
    const Eigen::Index n = sys.dim();
    auto coeffs = [&](double t, Matrix& P, Matrix& Q) { sys.coefficients(t, P, Q); };
    LinearSecondOrder<decltype(coeffs)> ode{coeffs, n, n};

    // checkpoints in decreasing time: unit steps from r plus the grid and 0
    std::vector<double> pts(t_grid.begin(), t_grid.end());
    pts.push_back(0.0);
    for (double s = r; s > 0.0; s -= 1.0) pts.push_back(s);
    std::sort(pts.begin(), pts.end(), std::greater<>());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              pts.end());

    struct Checkpoint {
        double t;
        Matrix Y, Yd;
        Matrix R;  ///< empty at the final point
    };
    std::vector<Checkpoint> cps;
    OdeState x = pack(Matrix::Zero(n, n), Matrix::Identity(n, n));
    double dt = 1e-2, t = r;
    for (double tk : pts) {
        integrate_segment(ode, x, t, tk, dt, tol);
        t = tk;
        Checkpoint cp;
        cp.t = tk;
        unpack(x, n, n, cp.Y, cp.Yd);
        if (tk > 0.0) {
            Matrix stacked(2 * n, n);
            stacked << cp.Y, cp.Yd;
            Eigen::HouseholderQR<Matrix> qr(stacked);
            const Matrix Q = qr.householderQ() * Matrix::Identity(2 * n, n);
            cp.R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
            x = pack(Q.topRows(n), Q.bottomRows(n));
        }
        cps.push_back(std::move(cp));
    }

    const Matrix& Y0 = cps.back().Y;
    {
        Eigen::PartialPivLU<Matrix> lu(Y0);
        const double piv = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(piv > tol.conjugate_det * std::max(1.0, max_abs(Y0))))
            throw ConjugatePointError("stable_jacobi_tensor: E_r(0) is singular for r = " +
                                      std::to_string(r) + " (conjugate point)");
    }
    const Eigen::PartialPivLU<Matrix> lu0t(Y0.transpose());

    JacobiTensorSample s;
    s.t = t_grid;
    s.r = r;
    s.E.resize(t_grid.size());
    s.E_prime.resize(t_grid.size());
    Matrix T = Matrix::Identity(n, n);
    std::size_t gi = 0;
    for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
        if (it->R.size() > 0) T = it->R.triangularView<Eigen::Upper>().solve(T);
        for (; gi < t_grid.size() && std::abs(t_grid[gi] - it->t) < 1e-12; ++gi) {
            // E = S T Y0^{-1}, via (Y0^T)^{-1} on the transpose
            const Matrix E = lu0t.solve((it->Y * T).transpose()).transpose();
            const Matrix Ed = lu0t.solve((it->Yd * T).transpose()).transpose();
            s.E[gi] = E;
            s.E_prime[gi] = Ed + sys.connection(it->t) * E;
        }
    }
    return s;
}

inline double grid_relative_difference(const JacobiTensorSample& a, const JacobiTensorSample& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, (a.E[i] - b.E[i]).norm() / std::max(b.E[i].norm(), 1e-300));
    return worst;
}

}  // namespace detail

/// E_r for a fixed horizon r (the finite-horizon tensor E_r(0) = id, E_r(r) = 0).
inline JacobiTensorSample finite_horizon_tensor(const CentralJacobiSystem& sys, const std::vector<double>& t_grid,
                                                double r, const Tolerances& tol = default_tolerances()) {
    detail::require_grid(t_grid, "finite_horizon_tensor");
    if (t_grid.front() < 0.0 || !(r > t_grid.back()))
        throw DomainError("finite_horizon_tensor: grid must lie in [0, r)");
    return detail::finite_stable_tensor(sys, t_grid, r, tol);
}

/**
 * Stable Jacobi tensor on t_grid (t >= 0): the limit of E_r as r grows,
 * starting at r = t_last + 8 and doubling until two consecutive horizons
 * agree to tol.bvp_convergence (relative, per grid point).
 */
inline JacobiTensorSample stable_jacobi_tensor(const CentralJacobiSystem& sys, const std::vector<double>& t_grid,
                                               double r_max = 1000.0,
                                               const Tolerances& tol = default_tolerances()) {
    detail::require_grid(t_grid, "stable_jacobi_tensor");
    if (t_grid.front() < 0.0) throw DomainError("stable_jacobi_tensor: grid must start at t >= 0");
    double r = t_grid.back() + 8.0;
    if (!(r_max > r)) throw DomainError("stable_jacobi_tensor: r_max must exceed the last grid point by 8");
    JacobiTensorSample prev = detail::finite_stable_tensor(sys, t_grid, r, tol);
    std::ostringstream history;
    while (2.0 * r <= r_max) {
        r *= 2.0;
        JacobiTensorSample next = detail::finite_stable_tensor(sys, t_grid, r, tol);
        const double diff = detail::grid_relative_difference(next, prev);
        history << " r=" << r << ":" << diff;
        if (diff <= tol.bvp_convergence) return next;
        prev = std::move(next);
    }
    throw NumericalError("stable_jacobi_tensor: no convergence by r_max = " + std::to_string(r_max) +
                         "; grid differences" + history.str());
}

inline JacobiTensorSample stable_jacobi_tensor(const StandardSolvableData& d, const std::vector<double>& t_grid,
                                               double r_max = 1000.0,
                                               const Tolerances& tol = default_tolerances()) {
    return stable_jacobi_tensor(CentralJacobiSystem(d, tol), t_grid, r_max, tol);
}

struct MeanCurvatureSeries {
    std::vector<double> t;
    std::vector<double> m;        ///< -d/dt log|det E| by finite differences
    std::vector<double> m_trace;  ///< trace(-E' E^{-1})
    double max_disagreement = 0.0;
};

inline MeanCurvatureSeries mean_curvature_numeric(const JacobiTensorSample& s,
                                                  const Tolerances& tol = default_tolerances()) {
    if (s.size() < 2) throw DomainError("mean_curvature_numeric: need at least two grid points");
    MeanCurvatureSeries out;
    out.t = s.t;
    std::vector<double> logdet(s.size());
    double sign0 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Eigen::PartialPivLU<Matrix> lu(s.E[i]);
        const double det = lu.determinant();
        const double piv = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(piv > tol.conjugate_det * std::max(1e-300, max_abs(s.E[i]))) || det == 0.0)
            throw ConjugatePointError("mean_curvature_numeric: det E vanishes at t = " + std::to_string(s.t[i]));
        const double sg = det > 0 ? 1.0 : -1.0;
        if (i == 0) sign0 = sg;
        if (sg != sign0)
            throw ConjugatePointError("mean_curvature_numeric: det E changes sign before t = " +
                                      std::to_string(s.t[i]));
        logdet[i] = std::log(std::abs(det));
        out.m_trace.push_back(-lu.solve(s.E_prime[i]).trace());  // trace(E^{-1} E') = trace(E' E^{-1})
    }
    const std::size_t n = s.size();
    out.m.resize(n);
    // derivative of the quadratic through three neighbouring points, one-sided at the ends
    auto quad_derivative = [&](std::size_t a, std::size_t at) {
        const double x0 = s.t[a], x1 = s.t[a + 1], x2 = s.t[a + 2], x = s.t[at];
        const double y0 = logdet[a], y1 = logdet[a + 1], y2 = logdet[a + 2];
        return y0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)) +
               y1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)) +
               y2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (n == 2) {
            out.m[i] = -(logdet[1] - logdet[0]) / (s.t[1] - s.t[0]);
        } else {
            const std::size_t a = i == 0 ? 0 : (i + 1 == n ? n - 3 : i - 1);
            out.m[i] = -quad_derivative(a, i);
        }
        out.max_disagreement = std::max(out.max_disagreement, std::abs(out.m[i] - out.m_trace[i]));
    }
    return out;
}

enum class DensityRoute { Auto, General, Exponential, Central };

namespace detail {

/// Jacobi tensor data along a general geodesic: x' = -nabla_x x and
/// A'' = -G(x') A - 2 G(x) A' - G(x)^2 A - K(x) A in the left-invariant frame.
struct GeneralJacobiSystem {
    const ConnectionCoefficients& conn;
    const CurvatureTensor& R;
    Eigen::Index n, k;

    void operator()(const OdeState& s, OdeState& ds, double) const {
        ds.resize(s.size());
        Eigen::Map<const Vector> x(s.data(), n);
        Eigen::Map<const Matrix> A(s.data() + n, n, k), Ad(s.data() + n + n * k, n, k);
        const Matrix G = conn.nabla(x);
        const Vector xd = -G * x;
        const Matrix Gd = conn.nabla(xd);
        const Matrix K = jacobi_operator_tensor(R, x);
        Eigen::Map<Vector>(ds.data(), n) = xd;
        Eigen::Map<Matrix>(ds.data() + n, n, k) = Ad;
        Eigen::Map<Matrix>(ds.data() + n + n * k, n, k) = -Gd * A - 2.0 * G * Ad - G * G * A - K * A;
    }
};

inline void require_unit(const Vector& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > 1e-10) throw DomainError(std::string(what) + ": direction must be a unit vector");
}

inline double checked_density(double value, double t) {
    if (!(value > 0.0))
        throw ConjugatePointError("volume_density: conjugate point before t = " + std::to_string(t));
    return value;
}

}  // namespace detail

/// det A_v(t) along the geodesic with initial velocity v, integrating the geodesic and Jacobi equations.
inline std::vector<double> volume_density_general(const MetricLieAlgebra& g, const Vector& v,
                                                  const std::vector<double>& t_grid,
                                                  const Tolerances& tol = default_tolerances()) {
    detail::require_grid(t_grid, "volume_density");
    detail::require_unit(v, "volume_density");
    const Eigen::Index n = g.dim();
    const ConnectionCoefficients conn = levi_civita(g);
    const CurvatureTensor R = curvature_tensor(g, conn);
    const Matrix P = perp_basis(v);
    const Eigen::Index k = P.cols();
    Matrix frame0(n, n);
    frame0 << P, v;
    const double det0 = frame0.determinant();

    detail::GeneralJacobiSystem sys{conn, R, n, k};
    OdeState s(static_cast<std::size_t>(n + 2 * n * k), 0.0);
    Eigen::Map<Vector>(s.data(), n) = v;
    Eigen::Map<Matrix>(s.data() + n + n * k, n, k) = P;
    std::vector<double> out;
    double t = 0.0, dt = 1e-2;
    for (double tk : t_grid) {
        if (tk < 0.0) throw DomainError("volume_density: times must be nonnegative");
        integrate_segment(sys, s, t, tk, dt, tol);
        t = tk;
        Matrix M(n, n);
        M << Eigen::Map<const Matrix>(s.data() + n, n, k), Eigen::Map<const Vector>(s.data(), n);
        out.push_back(tk == 0.0 ? 0.0 : detail::checked_density(M.determinant() / det0, tk));
    }
    return out;
}

/// v orthogonal to [s, s]: the geodesic is t -> exp(t v) and the Jacobi system has constant coefficients.
inline std::vector<double> volume_density_exponential(const MetricLieAlgebra& g, const Vector& v,
                                                      const std::vector<double>& t_grid,
                                                      const Tolerances& tol = default_tolerances()) {
    detail::require_grid(t_grid, "volume_density");
    detail::require_unit(v, "volume_density");
    const Matrix derived = derived_algebra(g, tol);
    if (derived.cols() > 0 && (derived.transpose() * v).norm() > 1e-10)
        throw DomainError("volume_density: exponential route needs v orthogonal to [s, s]");
    const Eigen::Index n = g.dim();
    const ConnectionCoefficients conn = levi_civita(g);
    const CurvatureTensor R = curvature_tensor(g, conn);
    const Matrix G = conn.nabla(v);
    const Matrix K = jacobi_operator_tensor(R, v);
    Matrix C = Matrix::Zero(2 * n, 2 * n);
    C.topRightCorner(n, n) = Matrix::Identity(n, n);
    C.bottomLeftCorner(n, n) = -(G * G + K);
    C.bottomRightCorner(n, n) = -2.0 * G;
    const Matrix P = perp_basis(v);
    Matrix init = Matrix::Zero(2 * n, P.cols());
    init.bottomRows(n) = P;
    Matrix frame0(n, n);
    frame0 << P, v;
    const double det0 = frame0.determinant();
    std::vector<double> out;
    for (double tk : t_grid) {
        if (tk < 0.0) throw DomainError("volume_density: times must be nonnegative");
        const Matrix A = (matrix_exponential(tk * C) * init).topRows(n);
        Matrix M(n, n);
        M << A, v;
        out.push_back(tk == 0.0 ? 0.0 : detail::checked_density(M.determinant() / det0, tk));
    }
    return out;
}

/// Central direction Z: A(0) = 0, A'(0) = id in the central frame.
inline std::vector<double> volume_density_central(const StandardSolvableData& d, const std::vector<double>& t_grid,
                                                  const Tolerances& tol = default_tolerances()) {
    detail::require_grid(t_grid, "volume_density");
    const CentralJacobiSystem sys(d, tol);
    const Eigen::Index n = sys.dim();
    std::vector<double> grid = t_grid;
    const bool has_zero = grid.front() == 0.0;
    if (!has_zero) grid.insert(grid.begin(), 0.0);
    if (grid.front() < 0.0) throw DomainError("volume_density: times must be nonnegative");
    const auto s = integrate_jacobi(sys, Matrix::Zero(n, n), Matrix::Identity(n, n), grid, tol);
    std::vector<double> out;
    for (std::size_t i = has_zero ? 0 : 1; i < s.size(); ++i)
        out.push_back(s.t[i] == 0.0 ? 0.0 : detail::checked_density(s.E[i].determinant(), s.t[i]));
    return out;
}

inline std::vector<double> volume_density(const MetricLieAlgebra& g, const Vector& v,
                                          const std::vector<double>& t_grid,
                                          DensityRoute route = DensityRoute::Auto,
                                          const Tolerances& tol = default_tolerances()) {
    switch (route) {
        case DensityRoute::General: return volume_density_general(g, v, t_grid, tol);
        case DensityRoute::Exponential: return volume_density_exponential(g, v, t_grid, tol);
        case DensityRoute::Central:
            throw DomainError("volume_density: the central route takes standard data");
        case DensityRoute::Auto: break;
    }
    const Matrix derived = derived_algebra(g, tol);
    if (derived.cols() == 0 || (derived.transpose() * v).norm() <= 1e-12)
        return volume_density_exponential(g, v, t_grid, tol);
    return volume_density_general(g, v, t_grid, tol);
}

/// 2^{m+l} sinh^{m+l}(t/2) cosh^l(t/2): the density of a Damek-Ricci space with dim v = m, dim z = l.
inline double damek_ricci_density(int m, int l, double t) {
    return std::pow(2.0 * std::sinh(0.5 * t), m + l) * std::pow(std::cosh(0.5 * t), l);
}

struct DensitySpread {
    std::vector<double> t;
    std::vector<double> spread;  ///< (max - min) / mean over directions, per t
    std::vector<std::vector<double>> values;  ///< [direction][t]
    std::vector<Vector> directions;

    double max_spread() const { return spread.empty() ? 0.0 : *std::max_element(spread.begin(), spread.end()); }
};

/// Uniformly distributed unit vectors from a seeded generator.
inline std::vector<Vector> random_directions(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) {
        Vector v(dim);
        do {
            for (int k = 0; k < dim; ++k) v(k) = nd(rng);
        } while (v.norm() < 1e-8);
        out.push_back(v.normalized());
    }
    return out;
}

/// Volume density over several directions; a harmonic space has zero spread.
inline DensitySpread density_spread(const MetricLieAlgebra& g, const std::vector<Vector>& directions,
                                    const std::vector<double>& t_grid,
                                    const Tolerances& tol = default_tolerances()) {
    DensitySpread out;
    out.t = t_grid;
    out.directions = directions;
    out.values = parallel_map(directions.size(), [&](std::size_t i) {
        return volume_density(g, directions[i], t_grid, DensityRoute::Auto, tol);
    });
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        double lo = 1e300, hi = -1e300, sum = 0.0;
        for (const auto& row : out.values) {
            lo = std::min(lo, row[k]);
            hi = std::max(hi, row[k]);
            sum += row[k];
        }
        const double mean = sum / static_cast<double>(out.values.size());
        out.spread.push_back(mean > 0.0 ? (hi - lo) / mean : 0.0);
    }
    return out;
}

}  // namespace solvharm
