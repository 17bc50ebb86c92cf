#pragma once

/**
 * @file clifford_dr.hpp
 * @brief Clifford module generators, Heisenberg-type algebras and their
 *        solvable extensions (Damek-Ricci, real hyperbolic, flat, and a model
 *        algebra for arbitrary normalized spectral data).
 */

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "solvharm/config.hpp"
#include "solvharm/lie_metric.hpp"
#include "solvharm/numerics.hpp"
#include "solvharm/spectral.hpp"

namespace solvharm {

/// l anticommuting orthogonal complex structures J_1..J_l on R^m.
struct CliffordModule {
    int l = 0;
    int m = 0;
    std::vector<Matrix> generators;

    /// Largest violation of J_a^2 = -id, J_a J_b + J_b J_a = 0, J_a^T = -J_a.
    double relation_residual() const {
        const Matrix id = Matrix::Identity(m, m);
        double worst = 0.0;
        for (int a = 0; a < l; ++a) {
            const Matrix& ja = generators[a];
            worst = std::max(worst, max_abs(ja * ja + id));
            worst = std::max(worst, max_abs(ja + ja.transpose()));
            for (int b = a + 1; b < l; ++b)
                worst = std::max(worst, max_abs(ja * generators[b] + generators[b] * ja));
        }
        return worst;
    }
};

namespace detail {

using Quat = std::array<double, 4>;  // (1, i, j, k)

inline Quat qmul(const Quat& p, const Quat& q) {
    return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
            p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
            p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

/// Left (or right) multiplication by the imaginary unit u (1 = i, 2 = j, 3 = k) on H = R^4.
inline Matrix quaternion_mult(int u, bool left) {
    Quat unit{0, 0, 0, 0};
    unit[u] = 1.0;
    Matrix m(4, 4);
    for (int c = 0; c < 4; ++c) {
        Quat e{0, 0, 0, 0};
        e[c] = 1.0;
        const Quat img = left ? qmul(unit, e) : qmul(e, unit);
        for (int r = 0; r < 4; ++r) m(r, c) = img[r];
    }
    return m;
}

inline Matrix block2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    Matrix out(a.rows() + c.rows(), a.cols() + b.cols());
    out << a, b, c, d;
    return out;
}

/// Irreducible module for l <= 8.
inline std::vector<Matrix> irreducible_small(int l) {
    std::vector<Matrix> g;
    if (l == 1) {
        Matrix e(2, 2);
        e << 0, -1, 1, 0;
        g.push_back(e);
    } else if (l <= 3) {
        for (int u = 1; u <= l; ++u) g.push_back(quaternion_mult(u, true));
    } else if (l <= 7) {
        const Matrix z = Matrix::Zero(4, 4);
        const Matrix id = Matrix::Identity(4, 4);
        std::vector<Matrix> all;
        for (int u = 1; u <= 3; ++u) {
            const Matrix L = quaternion_mult(u, true);
            all.push_back(block2(L, z, z, -L));
        }
        all.push_back(block2(z, -id, id, z));
        for (int u = 1; u <= 3; ++u) {
            const Matrix R = quaternion_mult(u, false);
            all.push_back(block2(z, R, R, z));
        }
        g.assign(all.begin(), all.begin() + l);
    } else {
        // l == 8: double the l = 7 module
        const auto base = irreducible_small(7);
        const Eigen::Index m = base[0].rows();
        const Matrix z = Matrix::Zero(m, m);
        for (const auto& j : base) g.push_back(block2(j, z, z, -j));
        g.push_back(block2(z, -Matrix::Identity(m, m), Matrix::Identity(m, m), z));
    }
    return g;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline std::vector<Matrix> irreducible(int l) {
    if (l <= 8) return irreducible_small(l);
    // Cl_{l} module = Cl_{l-8} module (x) Cl_8 module
    const auto base = irreducible(l - 8);
    const auto eight = irreducible_small(8);
    Matrix omega = Matrix::Identity(eight[0].rows(), eight[0].cols());
    for (const auto& k : eight) omega = omega * k;
    std::vector<Matrix> g;
    for (const auto& j : base) g.push_back(kron(j, omega));
    const Matrix id = Matrix::Identity(base[0].rows(), base[0].cols());
    for (const auto& k : eight) g.push_back(kron(id, k));
    return g;
}

}  // namespace detail

inline CliffordModule clifford_generators(int l, int copies) {
    if (l < 1) throw DomainError("clifford_generators: l must be at least 1");
    if (copies < 1) throw DomainError("clifford_generators: copies must be at least 1");
    const auto irr = detail::irreducible(l);
    const Eigen::Index m0 = irr[0].rows();
    CliffordModule cm;
    cm.l = l;
    cm.m = static_cast<int>(m0 * copies);
    for (const auto& j : irr) {
        Matrix big = Matrix::Zero(cm.m, cm.m);
        for (int c = 0; c < copies; ++c) big.block(c * m0, c * m0, m0, m0) = j;
        cm.generators.push_back(std::move(big));
    }
    if (cm.relation_residual() > 1e-12)
        throw NumericalError("clifford_generators: relations fail for l = " + std::to_string(l));
    return cm;
}

/// n = R^m + R^l with <[V, W], Z_a> = theta <J_a V, W>. Basis (v, z).
inline MetricLieAlgebra build_heisenberg_type(const CliffordModule& cm, double theta = 1.0) {
    const int n = cm.m + cm.l;
    std::vector<StructureConstant> t;
    for (int p = 0; p < cm.m; ++p)
        for (int q = p + 1; q < cm.m; ++q)
            for (int a = 0; a < cm.l; ++a) {
                const double c = theta * cm.generators[a](q, p);
                if (c != 0.0) t.push_back({p, q, cm.m + a, c});
            }
    return MetricLieAlgebra::from_triples(n, t);
}

/**
 * R H + n with ad_H = 1/2 on v and 1 on z; basis (H, v, z). theta != 1 gives
 * the j(Z)^2 = -theta^2 deformation, which is not of Heisenberg type.
 */
inline MetricLieAlgebra build_damek_ricci(const CliffordModule& cm, double theta = 1.0) {
    const int n = 1 + cm.m + cm.l;
    std::vector<StructureConstant> t;
    for (int p = 0; p < cm.m; ++p) t.push_back({0, 1 + p, 1 + p, 0.5});
    for (int a = 0; a < cm.l; ++a) t.push_back({0, 1 + cm.m + a, 1 + cm.m + a, 1.0});
    for (int p = 0; p < cm.m; ++p)
        for (int q = p + 1; q < cm.m; ++q)
            for (int a = 0; a < cm.l; ++a) {
                const double c = theta * cm.generators[a](q, p);
                if (c != 0.0) t.push_back({1 + p, 1 + q, 1 + cm.m + a, c});
            }
    return MetricLieAlgebra::from_triples(n, t);
}

/// [H, Z_i] = Z_i on R^{n-1}; basis (H, Z_1, ...).
inline MetricLieAlgebra build_real_hyperbolic(int n) {
    if (n < 2) throw DomainError("build_real_hyperbolic: n must be at least 2");
    std::vector<StructureConstant> t;
    for (int i = 1; i < n; ++i) t.push_back({0, i, i, 1.0});
    return MetricLieAlgebra::from_triples(n, t);
}

inline MetricLieAlgebra build_flat(int n) {
    if (n < 1) throw DomainError("build_flat: n must be positive");
    return MetricLieAlgebra(n);
}

/// R A + R^k with [A, x] = M x on an abelian ideal; basis (A, x_1..x_k).
inline MetricLieAlgebra build_semidirect(const Matrix& M) {
    require_square(M, "build_semidirect");
    const auto k = static_cast<int>(M.rows());
    std::vector<StructureConstant> t;
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            if (M(i, j) != 0.0) t.push_back({0, 1 + j, 1 + i, M(i, j)});
    return MetricLieAlgebra::from_triples(k + 1, t);
}

/// R H + n with [H, X] = D X; D must be a derivation of n. Basis (H, n).
inline MetricLieAlgebra build_solvable_extension(const MetricLieAlgebra& n, const Matrix& D) {
    const int k = n.dim();
    if (D.rows() != k || D.cols() != k)
        throw DimensionError("build_solvable_extension: derivation has shape " + detail::shape(D));
    std::vector<Matrix> ad(k + 1, Matrix::Zero(k + 1, k + 1));
    ad[0].bottomRightCorner(k, k) = D;
    for (int i = 0; i < k; ++i) {
        ad[1 + i].bottomRightCorner(k, k) = n.ad_basis(i);
        ad[1 + i].block(1, 0, k, 1) = -D.col(i);
    }
    return MetricLieAlgebra::from_ad(std::move(ad));
}

/**
 * The model algebra realizing normalized spectral data, in adapted basis
 * order (H, V_1, Vt_1, ..., V*_k, Z, Z*_j):
 * [H, V_i] = rho_i V_i, [H, Vt_i] = (1 - rho_i) Vt_i, [V_i, Vt_i] = theta_i Z,
 * [H, V*_k] = rho*_k V*_k, [H, Z] = Z, [H, Z*_j] = mu_j Z*_j, and
 * [V*_a, V*_b] = Z*_j for kernel pairs with rho*_a + rho*_b = mu_j.
 * data.mu[0] is the top eigenvalue of Z and must be 1.
 */
inline MetricLieAlgebra build_spectral_model(const SpectralData& data) {
    if (data.mu.empty() || std::abs(data.mu[0] - 1.0) > 1e-12)
        throw DomainError("build_spectral_model: mu must start with the top eigenvalue 1");
    const int np = static_cast<int>(data.pairs.size());
    const int nk = static_cast<int>(data.rho_star.size());
    const int nz = static_cast<int>(data.mu.size());
    const int n = 1 + 2 * np + nk + nz;
    const int z = 1 + 2 * np + nk;
    std::vector<StructureConstant> t;
    for (int i = 0; i < np; ++i) {
        const auto& p = data.pairs[i];
        if (!(p.rho > 0.0 && p.rho < 1.0 && p.theta > 0.0))
            throw DomainError("build_spectral_model: pair needs 0 < rho < 1, theta > 0");
        t.push_back({0, 1 + 2 * i, 1 + 2 * i, p.rho});
        t.push_back({0, 2 + 2 * i, 2 + 2 * i, 1.0 - p.rho});
        t.push_back({1 + 2 * i, 2 + 2 * i, z, p.theta});
    }
    for (int i = 0; i < nk; ++i) {
        if (!(data.rho_star[i] > 0.0)) throw DomainError("build_spectral_model: rho* must be positive");
        t.push_back({0, 1 + 2 * np + i, 1 + 2 * np + i, data.rho_star[i]});
    }
    // kernel vectors are coupled in pairs into some Z*_j, else they would be central
    std::vector<bool> used(nk, false);
    for (int a = 0; a < nk; ++a) {
        if (used[a]) continue;
        bool found = false;
        for (int b = a + 1; b < nk && !found; ++b) {
            if (used[b]) continue;
            for (int j = 1; j < nz && !found; ++j)
                if (std::abs(data.rho_star[a] + data.rho_star[b] - data.mu[j]) <= 1e-12) {
                    t.push_back({1 + 2 * np + a, 1 + 2 * np + b, z + j, 1.0});
                    used[a] = used[b] = true;
                    found = true;
                }
        }
        if (!found)
            throw DomainError("build_spectral_model: kernel eigenvalue " +
                              std::to_string(data.rho_star[a]) +
                              " has no partner rho*' with rho* + rho*' among the mu_j");
    }
    for (int j = 0; j < nz; ++j) {
        if (!(data.mu[j] > 0.0)) throw DomainError("build_spectral_model: mu must be positive");
        t.push_back({0, z + j, z + j, data.mu[j]});
    }
    return MetricLieAlgebra::from_triples(n, t);
}

/// Spectral data of a Damek-Ricci build with module dimension m and center dimension l.
inline SpectralData damek_ricci_spectral(int m, int l, double theta = 1.0) {
    SpectralData d;
    d.mu.assign(l, 1.0);
    d.pairs.assign(m / 2, PairData{0.5, theta});
    return d;
}

}  // namespace solvharm
