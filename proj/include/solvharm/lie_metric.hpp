#pragma once

/**
 * @file lie_metric.hpp
 * @brief Metric Lie algebras given by structure constants in an orthonormal
 *        basis, and the orthogonal decomposition <H> + v + z of a codimension-one
 *        solvable algebra.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "solvharm/config.hpp"
#include "solvharm/numerics.hpp"
#include "solvharm/spectral.hpp"

namespace solvharm {

/// [e_i, e_j] = c * e_k, stored only for i < j.
struct StructureConstant {
    int i = 0;
    int j = 0;
    int k = 0;
    double c = 0.0;
};

/**
 * A real Lie algebra with the inner product fixed to the identity in the
 * stored basis. Internally dense: ad(e_i) for every basis vector.
 */
class MetricLieAlgebra {
public:
    MetricLieAlgebra() = default;

    /// Zero brackets on R^n.
    explicit MetricLieAlgebra(int dim) {
        if (dim < 1) throw DimensionError("MetricLieAlgebra: dimension must be positive");
        ad_.assign(dim, Matrix::Zero(dim, dim));
    }

    static MetricLieAlgebra from_triples(int dim, const std::vector<StructureConstant>& triples,
                                         const Tolerances& tol = default_tolerances()) {
        MetricLieAlgebra g(dim);
        std::map<std::tuple<int, int, int>, bool> seen;
        for (const auto& t : triples) {
            if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= dim || t.j >= dim || t.k >= dim)
                throw DomainError("structure constant index out of range: [" + std::to_string(t.i) +
                                  "," + std::to_string(t.j) + "," + std::to_string(t.k) + "]");
            if (t.i >= t.j)
                throw DomainError("structure constant requires i < j, got i=" +
                                  std::to_string(t.i) + " j=" + std::to_string(t.j));
            if (!std::isfinite(t.c)) throw DomainError("structure constant is not finite");
            if (!seen.emplace(std::make_tuple(t.i, t.j, t.k), true).second)
                throw DomainError("duplicate structure constant [" + std::to_string(t.i) + "," +
                                  std::to_string(t.j) + "," + std::to_string(t.k) + "]");
            g.ad_[t.i](t.k, t.j) = t.c;
            g.ad_[t.j](t.k, t.i) = -t.c;
        }
        g.check_jacobi(tol);
        return g;
    }

    /// From the ad matrices of the basis vectors; antisymmetry is checked.
    static MetricLieAlgebra from_ad(std::vector<Matrix> ad,
                                    const Tolerances& tol = default_tolerances()) {
        if (ad.empty()) throw DimensionError("from_ad: empty basis");
        const auto n = static_cast<Eigen::Index>(ad.size());
        for (const auto& m : ad)
            if (m.rows() != n || m.cols() != n)
                throw DimensionError("from_ad: ad matrix has shape " + detail::shape(m));
        MetricLieAlgebra g;
        g.ad_ = std::move(ad);
        double scale = 0.0;
        for (const auto& m : g.ad_) scale = std::max(scale, max_abs(m));
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if ((g.ad_[i].col(j) + g.ad_[j].col(i)).cwiseAbs().maxCoeff() >
                    1e-12 * std::max(1.0, scale))
                    throw StructureError("from_ad: bracket is not antisymmetric");
        g.check_jacobi(tol);
        return g;
    }

    int dim() const { return static_cast<int>(ad_.size()); }

    /// ad(e_i); column j is [e_i, e_j].
    const Matrix& ad_basis(int i) const { return ad_.at(i); }

    Matrix ad(const Vector& x) const {
        require_len(x, "ad_matrix");
        Matrix out = Matrix::Zero(dim(), dim());
        for (int i = 0; i < dim(); ++i)
            if (x(i) != 0.0) out += x(i) * ad_[i];
        return out;
    }

    Vector bracket(const Vector& x, const Vector& y) const {
        require_len(x, "bracket");
        require_len(y, "bracket");
        return ad(x) * y;
    }

    double constant(int i, int j, int k) const { return ad_.at(i)(k, j); }

    /// Nonzero constants with i < j, in lexicographic (i, j, k) order.
    std::vector<StructureConstant> triples(double drop_below = 0.0) const {
        std::vector<StructureConstant> out;
        for (int i = 0; i < dim(); ++i)
            for (int j = i + 1; j < dim(); ++j)
                for (int k = 0; k < dim(); ++k) {
                    const double c = ad_[i](k, j);
                    if (std::abs(c) > drop_below) out.push_back({i, j, k, c});
                }
        return out;
    }

    double max_constant() const {
        double m = 0.0;
        for (const auto& a : ad_) m = std::max(m, max_abs(a));
        return m;
    }

    /// max over basis triples of |[[x,y],z] + [[y,z],x] + [[z,x],y]|.
    double jacobi_residual() const {
        const int n = dim();
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                // ad([e_i,e_j]) - [ad e_i, ad e_j] must vanish
                const Matrix lhs = ad(ad_[i].col(j));
                const Matrix rhs = ad_[i] * ad_[j] - ad_[j] * ad_[i];
                worst = std::max(worst, max_abs(lhs - rhs));
            }
        return worst;
    }

    bool is_abelian() const { return max_constant() == 0.0; }

    /**
     * Same algebra in the orthonormal basis given by the columns of p
     * (p orthogonal). Column a of p is the new basis vector e'_a.
     */
    MetricLieAlgebra change_basis(const Matrix& p) const {
        const int n = dim();
        if (p.rows() != n || p.cols() != n)
            throw DimensionError("change_basis: expected " + std::to_string(n) + "x" +
                                 std::to_string(n) + ", got " + detail::shape(p));
        if (max_abs(p.transpose() * p - Matrix::Identity(n, n)) > 1e-10)
            throw DomainError("change_basis: basis is not orthonormal");
        std::vector<Matrix> ad(n);
        for (int a = 0; a < n; ++a) ad[a] = p.transpose() * this->ad(p.col(a)) * p;
        MetricLieAlgebra g;
        g.ad_ = std::move(ad);
        return g;
    }

    /// Brackets multiplied by s (metric scaled by 1/s^2).
    MetricLieAlgebra scaled(double s) const {
        MetricLieAlgebra g = *this;
        for (auto& a : g.ad_) a *= s;
        return g;
    }

private:
    void require_len(const Vector& x, const char* what) const {
        if (x.size() != dim())
            throw DimensionError(std::string(what) + ": vector of length " +
                                 std::to_string(x.size()) + " in a " + std::to_string(dim()) +
                                 "-dimensional algebra");
    }

    void check_jacobi(const Tolerances& tol) const {
        const double c = max_constant();
        const double r = jacobi_residual();
        if (r > tol.jacobi_identity * std::max(1.0, c * c))
            throw StructureError("Jacobi identity violated: residual " + std::to_string(r));
    }

    std::vector<Matrix> ad_;
};

inline Vector bracket(const Vector& x, const Vector& y, const MetricLieAlgebra& g) {
    return g.bracket(x, y);
}

inline Matrix ad_matrix(const Vector& x, const MetricLieAlgebra& g) { return g.ad(x); }

inline Vector basis_vector(int n, int i) { return Vector::Unit(n, i); }

struct SymmetricSkew {
    Matrix D;
    Matrix S;
};

inline SymmetricSkew symmetric_skew_split(const Matrix& m) {
    require_square(m, "symmetric_skew_split");
    return {0.5 * (m + m.transpose()), 0.5 * (m - m.transpose())};
}

/// Orthonormal basis of [g, g] as columns (n x 0 when abelian).
inline Matrix derived_algebra(const MetricLieAlgebra& g,
                              const Tolerances& tol = default_tolerances()) {
    const int n = g.dim();
    Matrix span(n, n * n);
    for (int i = 0; i < n; ++i) span.middleCols(i * n, n) = g.ad_basis(i);
    return orthonormal_range(span, tol.rank);
}

/// Orthonormal basis of the center {z : [z, x] = 0 for all x}.
inline Matrix center_of(const MetricLieAlgebra& g, const Tolerances& tol = default_tolerances()) {
    const int n = g.dim();
    Matrix stacked(n * n, n);
    for (int j = 0; j < n; ++j) stacked.middleRows(j * n, n) = g.ad_basis(j);
    return null_space(stacked, tol.rank);
}

/// Length of the lower central series; nullopt when it stabilizes at a nonzero ideal.
inline std::optional<int> nilpotency_class(const MetricLieAlgebra& g,
                                           const Tolerances& tol = default_tolerances()) {
    const int n = g.dim();
    Matrix current = Matrix::Identity(n, n);
    for (int step = 1;; ++step) {
        Matrix span(n, n * current.cols());
        for (int i = 0; i < n; ++i)
            span.middleCols(i * current.cols(), current.cols()) = g.ad_basis(i) * current;
        Matrix next = orthonormal_range(span, tol.rank);
        if (next.cols() == 0) return step;
        if (next.cols() == current.cols()) return std::nullopt;
        current = std::move(next);
    }
}

/// Skew maps j(Z_a) on v: <j(Z_a) V_p, V_q> = <[V_p, V_q], Z_a>.
struct JMap {
    std::vector<Matrix> generators;

    int dim_v() const { return generators.empty() ? 0 : static_cast<int>(generators[0].rows()); }

    /// j(Z) for Z = sum_a z_a Z_a.
    Matrix operator()(const Vector& z) const {
        if (static_cast<std::size_t>(z.size()) != generators.size())
            throw DimensionError("JMap: coefficient vector has wrong length");
        Matrix out = Matrix::Zero(dim_v(), dim_v());
        for (std::size_t a = 0; a < generators.size(); ++a) out += z(a) * generators[a];
        return out;
    }
};

/// Index sets of v and z inside the basis of some algebra.
struct NilpotentSplit {
    std::vector<int> v_indices;
    std::vector<int> z_indices;
};

inline JMap extract_jmap(const MetricLieAlgebra& g, const NilpotentSplit& split) {
    const double scale = std::max(1.0, g.max_constant());
    std::vector<int> n_idx = split.v_indices;
    n_idx.insert(n_idx.end(), split.z_indices.begin(), split.z_indices.end());
    for (int z : split.z_indices)
        for (int x : n_idx)
            if (g.ad_basis(z).col(x).cwiseAbs().maxCoeff() > 1e-12 * scale)
                throw StructureError("extract_jmap: basis vector " + std::to_string(z) +
                                     " is not central in n");
    JMap j;
    const auto dv = static_cast<Eigen::Index>(split.v_indices.size());
    for (int z : split.z_indices) {
        Matrix m(dv, dv);
        for (Eigen::Index p = 0; p < dv; ++p)
            for (Eigen::Index q = 0; q < dv; ++q)
                m(q, p) = g.constant(split.v_indices[p], split.v_indices[q], z);
        j.generators.push_back(std::move(m));
    }
    return j;
}

/**
 * The normalized decomposition s = <H> + v + z. The basis of `algebra` is
 * adapted: H first, then v (pair vectors V_i, Vt_i in turn, then the kernel of
 * j(Z)), then z (the chosen top eigenvector Z, then the remaining center
 * eigenvectors Z*_j).
 */
struct StandardSolvableData {
    MetricLieAlgebra algebra;
    int h_index = 0;
    std::vector<int> v_indices;
    std::vector<int> z_indices;
    int z_index = 0;  ///< the top eigenvector Z
    std::vector<int> zstar_indices;
    std::vector<int> kernel_indices;
    std::vector<std::pair<int, int>> pair_indices;
    SpectralData spectral;
    double lambda = 1.0;    ///< top eigenvalue of ad_H before normalization
    Matrix basis;           ///< adapted basis in the input coordinates (columns)

    NilpotentSplit split() const { return {v_indices, z_indices}; }
    int dim_v() const { return static_cast<int>(v_indices.size()); }
    int dim_z() const { return static_cast<int>(z_indices.size()); }
    Vector H() const { return Vector::Unit(algebra.dim(), h_index); }
    Vector Z() const { return Vector::Unit(algebra.dim(), z_index); }
};

inline JMap extract_jmap(const StandardSolvableData& d) { return extract_jmap(d.algebra, d.split()); }

inline JMap extract_jmap(const MetricLieAlgebra& g, const StandardSolvableData& d) {
    return extract_jmap(g, d.split());
}

namespace detail {

struct EigenCluster {
    double value;
    Matrix basis;  // columns, in whatever coordinates the input used
};

/// Eigenvectors of a symmetric matrix grouped by eigenvalue (ascending).
inline std::vector<EigenCluster> clusters(const Matrix& sym, double merge) {
    std::vector<EigenCluster> out;
    if (sym.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sym + sym.transpose()));
    if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");
    const Vector& w = es.eigenvalues();
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= w.size(); ++i) {
        if (i == w.size() || w(i) - w(i - 1) > merge) {
            const Eigen::Index len = i - start;
            out.push_back({w.segment(start, len).mean(), es.eigenvectors().middleCols(start, len)});
            start = i;
        }
    }
    return out;
}

}  // namespace detail

/**
 * Orthogonal decomposition and normalization of a codimension-one solvable
 * metric Lie algebra whose ad_H is self-adjoint with positive spectrum.
 */
inline StandardSolvableData standard_decomposition(const MetricLieAlgebra& g,
                                                   const Tolerances& tol = default_tolerances()) {
    const int n = g.dim();
    const Matrix N = derived_algebra(g, tol);
    if (N.cols() != n - 1)
        throw StructureError("derived algebra has codimension " + std::to_string(n - N.cols()) +
                             ", expected 1");
    if (N.cols() == 0) throw NotStandardError("derived algebra is trivial");
    Vector H = orthogonal_complement(N, n, tol.rank).col(0);
    const Matrix adH = g.ad(H);
    const double adh_scale = std::max(1.0, max_abs(adH));

    // center of n, in coefficients of N
    const Eigen::Index k = N.cols();
    Matrix stacked(n * k, k);
    for (Eigen::Index b = 0; b < k; ++b) {
        const Matrix adb = g.ad(N.col(b));
        stacked.middleRows(b * n, n) = adb * N;
    }
    const Matrix zc = null_space(stacked, tol.rank);
    const Matrix Zb = N * zc;
    const Matrix Vb = N * orthogonal_complement(zc, k, tol.rank);

    auto restricted = [&](const Matrix& B, const char* name) {
        const Matrix a = B.transpose() * adH * B;
        if (max_abs(adH * B - B * a) > tol.self_adjoint * adh_scale)
            throw NotStandardError(std::string("ad_H does not preserve ") + name);
        if (max_abs(a - a.transpose()) > tol.self_adjoint * adh_scale)
            throw NotStandardError(std::string("ad_H is not self-adjoint on ") + name);
        return Matrix(0.5 * (a + a.transpose()));
    };
    Matrix Az = restricted(Zb, "z");
    Matrix Av = restricted(Vb, "v");

    const Vector ez = symmetric_eigenvalues(Az);
    const Vector ev = Av.rows() ? symmetric_eigenvalues(Av) : Vector();
    double lo = ez.minCoeff(), hi = ez.maxCoeff();
    if (ev.size()) {
        lo = std::min(lo, ev.minCoeff());
        hi = std::max(hi, ev.maxCoeff());
    }
    const double zero = tol.self_adjoint * adh_scale;
    if (!(lo > zero) && !(hi < -zero))
        throw NotStandardError("ad_H has eigenvalues that are not all of one strict sign (range [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "])");
    if (hi < 0) {
        H = -H;
        Az = -Az;
        Av = -Av;
        std::swap(lo, hi);
        lo = -lo;
        hi = -hi;
    }
    const double lambda = hi;
    Az /= lambda;
    Av /= lambda;

    // center eigenvectors, descending; the first spans the top direction
    Eigen::SelfAdjointEigenSolver<Matrix> esz(Az);
    const Matrix zvec = Zb * esz.eigenvectors().rowwise().reverse();
    if (std::abs(esz.eigenvalues()(esz.eigenvalues().size() - 1) - 1.0) > tol.eigen_merge)
        throw NotStandardError("top eigenvalue of ad_H is not attained on the center");
    const Vector Z = zvec.col(0);

    // j(Z) on v in the Vb basis
    const Eigen::Index dv = Vb.cols();
    Matrix Jz(dv, dv);
    for (Eigen::Index p = 0; p < dv; ++p)
        for (Eigen::Index q = 0; q < dv; ++q)
            Jz(q, p) = Z.dot(g.bracket(Vb.col(p), Vb.col(q))) / lambda;

    std::vector<Vector> pair_cols;
    std::vector<Vector> kernel_cols;
    if (dv > 0) {
        const Matrix K = null_space(Jz, tol.rank);
        const Matrix P = orthogonal_complement(K, dv, tol.rank);
        if (K.cols() > 0) {
            Eigen::SelfAdjointEigenSolver<Matrix> esk(K.transpose() * Av * K);
            for (Eigen::Index c = 0; c < K.cols(); ++c)
                kernel_cols.push_back(Vb * K * esk.eigenvectors().col(c));
        }
        const Matrix Jsq = -Jz * Jz;
        for (const auto& cl : detail::clusters(P.transpose() * Av * P, tol.eigen_merge)) {
            if (cl.value > 0.5 + tol.eigen_merge) continue;
            Matrix W = P * cl.basis;  // coefficients in Vb
            const bool half = std::abs(cl.value - 0.5) <= tol.eigen_merge;
            if (!half) {
                Eigen::SelfAdjointEigenSolver<Matrix> es(W.transpose() * Jsq * W);
                for (Eigen::Index c = 0; c < W.cols(); ++c) {
                    const Vector v = W * es.eigenvectors().col(c);
                    const double theta = std::sqrt(std::max(es.eigenvalues()(c), 0.0));
                    pair_cols.push_back(Vb * v);
                    pair_cols.push_back(Vb * (Jz * v / theta));
                }
            } else {
                // the 1/2-eigenspace is j(Z)-invariant; peel off one j-plane at a time
                while (W.cols() > 0) {
                    Eigen::SelfAdjointEigenSolver<Matrix> es(W.transpose() * Jsq * W);
                    const Vector v = W * es.eigenvectors().col(0);
                    const double theta = std::sqrt(std::max(es.eigenvalues()(0), 0.0));
                    const Vector vt = Jz * v / theta;
                    pair_cols.push_back(Vb * v);
                    pair_cols.push_back(Vb * vt);
                    Matrix plane(dv, 2);
                    plane << v, vt;
                    const Matrix rest = W - plane * (plane.transpose() * W);
                    W = orthonormal_range(rest, 1e-8);
                }
            }
        }
        if (static_cast<Eigen::Index>(pair_cols.size()) != P.cols())
            throw NotStandardError("j(Z) does not pair the eigenspaces of ad_H on v");
    }

    Matrix basis(n, n);
    int col = 0;
    basis.col(col++) = H;
    for (const auto& v : pair_cols) basis.col(col++) = v;
    for (const auto& v : kernel_cols) basis.col(col++) = v;
    for (Eigen::Index c = 0; c < zvec.cols(); ++c) basis.col(col++) = zvec.col(c);
    basis = orthonormalize(basis);

    StandardSolvableData d;
    d.algebra = g.change_basis(basis).scaled(1.0 / lambda);
    d.lambda = lambda;
    d.basis = basis;
    d.h_index = 0;
    const int npair = static_cast<int>(pair_cols.size()) / 2;
    const int nker = static_cast<int>(kernel_cols.size());
    for (int i = 0; i < npair; ++i) d.pair_indices.emplace_back(1 + 2 * i, 2 + 2 * i);
    for (int i = 0; i < nker; ++i) d.kernel_indices.push_back(1 + 2 * npair + i);
    for (int i = 0; i < static_cast<int>(dv); ++i) d.v_indices.push_back(1 + i);
    d.z_index = 1 + static_cast<int>(dv);
    for (int i = d.z_index; i < n; ++i) d.z_indices.push_back(i);
    for (int i = d.z_index + 1; i < n; ++i) d.zstar_indices.push_back(i);

    // spectral data read back from the normalized algebra
    const Matrix& a = d.algebra.ad_basis(0);
    for (int i : d.z_indices) d.spectral.mu.push_back(a(i, i));
    d.spectral.mu[0] = 1.0;
    for (int i : d.kernel_indices) d.spectral.rho_star.push_back(a(i, i));
    for (const auto& [p, q] : d.pair_indices)
        d.spectral.pairs.push_back({a(p, p), d.algebra.constant(p, q, d.z_index)});
    for (double m : d.spectral.mu)
        if (!(m > 0.0 && m <= 1.0 + tol.eigen_merge))
            throw NotStandardError("center eigenvalue outside (0, 1]");
    for (double r : d.spectral.rho_star)
        if (!(r > 0.0 && r < 1.0)) throw NotStandardError("kernel eigenvalue outside (0, 1)");
    for (const auto& pr : d.spectral.pairs)
        if (!(pr.rho > 0.0 && pr.rho <= 0.5 + tol.eigen_merge && pr.theta > 0.0))
            throw NotStandardError("pair data outside 0 < rho <= 1/2, theta > 0");
    return d;
}

enum class Growth { Exponential, Subexponential };

inline const char* to_string(Growth g) {
    return g == Growth::Exponential ? "Exponential" : "Subexponential";
}

/**
 * Subexponential iff every sampled ad_X (basis vectors plus `samples` random
 * unit vectors) has spectrum on the imaginary axis.
 */
inline Growth growth_type(const MetricLieAlgebra& g, int samples, std::uint64_t seed = 0,
                          const Tolerances& tol = default_tolerances()) {
    const int n = g.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int s = 0; s < n + samples; ++s) {
        Vector x(n);
        if (s < n) {
            x = Vector::Unit(n, s);
        } else {
            for (int i = 0; i < n; ++i) x(i) = normal(rng);
            x.normalize();
        }
        const Matrix a = g.ad(x);
        // a nilpotent ad_X has zero spectrum; QR would blur it to O(sqrt(eps))
        Matrix p = a;
        const double na = std::max(max_abs(a), 1e-300);
        for (int k = 1; k < n && max_abs(p) > 1e-13 * std::pow(na, k); ++k) p = p * a;
        if (max_abs(p) <= 1e-13 * std::pow(na, n)) continue;
        if (eigenvalues(a).max_abs_real() > tol.imaginary_axis) return Growth::Exponential;
    }
    return Growth::Subexponential;
}

}  // namespace solvharm
