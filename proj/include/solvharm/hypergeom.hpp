#pragma once

/**
 * @file hypergeom.hpp
 * @brief Gauss hypergeometric series, the fundamental solution pairs of the
 *        pair-block equation, stable blocks, the rigidity function h(z),
 *        monodromy coefficients around z = 1 and the factor classifier.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "solvharm/config.hpp"
#include "solvharm/numerics.hpp"
#include "solvharm/spectral.hpp"

namespace solvharm {

struct HypergeomParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
};

namespace detail {

inline bool is_nonpositive_integer(double x, double tol = 0.0) {
    return x <= tol && std::abs(x - std::round(x)) <= tol;
}

inline bool is_integer(double x, double tol = 0.0) { return std::abs(x - std::round(x)) <= tol; }

}  // namespace detail

inline double gamma(double x) {
    if (detail::is_nonpositive_integer(x)) throw DomainError("gamma: pole at " + std::to_string(x));
    return std::tgamma(x);
}

/// 1/Gamma(x); exactly 0 at the poles.
inline double reciprocal_gamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

namespace detail {

/**
 * sum_{k >= first} (a)_k (b)_k / ((c)_k k!) z^{k - first}, first in {0, 1}.
 * Stops when a geometric tail bound on the remaining terms drops below
 * tol * |sum|, or exactly when the series terminates.
 */
inline double hyp_series(double a, double b, double c, double z, int first, const Tolerances& tol) {
    double term = 1.0;  // k = 0 term of F
    double sum = first == 0 ? 1.0 : 0.0;
    if (first == 1) {
        // k = 1 term divided by z
        term = a * b / c;
        sum = term;
    }
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
    for (std::size_t k = static_cast<std::size_t>(first); k < tol.series_max_terms; ++k) {
        const double kd = static_cast<double>(k);
        const double ratio = (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
        const double next = term * ratio;
        if (next == 0.0) return sum;  // terminating series
        sum += next;
        term = next;
        if (kd > scale + 2.0) {
            const double q = std::max(std::abs(ratio), std::abs(z));
            if (q < 1.0 && std::abs(term) * q / (1.0 - q) <= 1e-3 * tol.series_truncation * std::abs(sum))
                return sum;
        }
    }
    throw NumericalError("gauss_F: series did not converge within " +
                         std::to_string(tol.series_max_terms) + " terms at z = " + std::to_string(z));
}

inline bool terminates(const HypergeomParams& p) {
    return is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b);
}

inline void check_params(const HypergeomParams& p, double z, const char* what) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(z))
        throw DomainError(std::string(what) + ": non-finite argument");
    if (is_nonpositive_integer(p.c))
        throw DomainError(std::string(what) + ": c = " + std::to_string(p.c) + " is a pole");
    if (!(std::abs(z) < 1.0) && !terminates(p))
        throw DomainError(std::string(what) + ": |z| must be below 1");
}

}  // namespace detail

/// F(a, b; c; z) for |z| < 1 (any z when the series terminates).
inline double gauss_F(const HypergeomParams& p, double z, const Tolerances& tol = default_tolerances()) {
    detail::check_params(p, z, "gauss_F");
    if (z == 0.0) return 1.0;
    if (z > 0.7 && !detail::terminates(p)) {
        // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z)
        return std::pow(1.0 - z, p.c - p.a - p.b) * detail::hyp_series(p.c - p.a, p.c - p.b, p.c, z, 0, tol);
    }
    return detail::hyp_series(p.a, p.b, p.c, z, 0, tol);
}

inline double gauss_F(double a, double b, double c, double z,
                      const Tolerances& tol = default_tolerances()) {
    return gauss_F(HypergeomParams{a, b, c}, z, tol);
}

/// (F(a, b; c; z) - 1) / z without cancellation near z = 0; ab/c at z = 0.
inline double gauss_F_minus_one_over_z(const HypergeomParams& p, double z,
                                       const Tolerances& tol = default_tolerances()) {
    detail::check_params(p, z, "gauss_F");
    if (z > 0.7 && !detail::terminates(p)) return (gauss_F(p, z, tol) - 1.0) / z;
    return detail::hyp_series(p.a, p.b, p.c, z, 1, tol);
}

/// u1, u1', u2, u2' (derivatives in z).
struct FundamentalPair {
    double u1 = 0.0;
    double du1 = 0.0;
    double u2 = 0.0;
    double du2 = 0.0;
};

inline FundamentalPair fundamental_pair(const HypergeomParams& p, double z,
                                        const Tolerances& tol = default_tolerances()) {
    if (detail::is_integer(p.c))
        throw DomainError("fundamental_pair: c = " + std::to_string(p.c) +
                          " is an integer, the pair degenerates");
    if (!(z > 0.0 && z < 1.0)) throw DomainError("fundamental_pair: z must lie in (0, 1)");
    const double a = p.a, b = p.b, c = p.c;
    FundamentalPair u;
    u.u1 = gauss_F(a, b, c, z, tol);
    u.du1 = a * b / c * gauss_F(a + 1, b + 1, c + 1, z, tol);
    u.u2 = std::pow(z, 1.0 - c) * gauss_F(1 + a - c, 1 + b - c, 2 - c, z, tol);
    u.du2 = (1.0 - c) * std::pow(z * (1.0 - z), -c) * gauss_F(-a, -b, 1 - c, z, tol);
    return u;
}

/// (a, b, c) for a pair block: a + b + 1 = 2 rho, ab = -theta^2, a < 0 < b, c = rho.
inline HypergeomParams pair_params(double rho, double theta) {
    const double s = 2.0 * rho - 1.0;
    const double disc = std::sqrt(s * s + 4.0 * theta * theta);
    // avoid cancellation in the smaller-magnitude root
    const double big = s >= 0.0 ? 0.5 * (s + disc) : 0.5 * (s - disc);
    const double small = -theta * theta / big;
    HypergeomParams p;
    p.a = std::min(big, small);
    p.b = std::max(big, small);
    p.c = rho;
    return p;
}

inline HypergeomParams center_params(double mu) { return {mu, 1.0 - mu, 1.0 + mu}; }

/// z(t) = (1 - tanh t) / 2 and its inverse.
inline double z_of_t(double t) { return 1.0 / (1.0 + std::exp(2.0 * t)); }
inline double t_of_z(double z) { return 0.5 * std::log((1.0 - z) / z); }

/// Columns are (f, g) coefficients on (V, Vt) of two stable Jacobi fields, with their t-derivatives.
struct StableBlock {
    Eigen::Matrix2d value;
    Eigen::Matrix2d dt;
};

/**
 * B_rho(z) C_{rho,theta}(z). Each column is a ker(d/dt - B(t)) solution built
 * from u1 or u2 plus a Killing solution from ker(d/dt - A(t)), so the
 * t-derivative is B(t) y_B + A(t) y_A.
 */
inline StableBlock stable_block_t(double rho, double theta, double t,
                                  const Tolerances& tol = default_tolerances()) {
    if (!(rho > 0.0 && rho <= 0.5 + 1e-12 && theta > 0.0))
        throw DomainError("stable_block: requires 0 < rho <= 1/2 and theta > 0");
    const double z = z_of_t(t);
    const FundamentalPair u = fundamental_pair(pair_params(rho, theta), z, tol);
    const double ch = std::cosh(t), th = std::tanh(t);
    const double w = 4.0 * z * (1.0 - z);  // = sech^2 t
    const double ch_rho = std::pow(ch, rho), ch_1rho = std::pow(ch, 1.0 - rho);
    const double wr2 = std::pow(w, 0.5 * rho);

    Eigen::Matrix2d A, Bm;
    A << th * rho, 0.0, 0.0, th * (1.0 - rho);
    Bm = A;
    Bm(0, 1) -= theta / ch;
    Bm(1, 0) += theta / ch;

    // hypergeometric (B-kernel) parts and Killing (A-kernel) parts per column
    Eigen::Vector2d yB1(-wr2 * u.du1, 2.0 * theta * ch_1rho * u.u1);
    Eigen::Vector2d yA1(0.0, -2.0 * theta * ch_1rho);
    Eigen::Vector2d yB2(-wr2 * u.du2, 2.0 * theta * ch_1rho * u.u2);
    Eigen::Vector2d yA2(std::pow(4.0, rho) * (1.0 - rho) * ch_rho, 0.0);

    StableBlock s;
    s.value.col(0) = yB1 + yA1;
    s.value.col(1) = yB2 + yA2;
    s.dt.col(0) = Bm * yB1 + A * yA1;
    s.dt.col(1) = Bm * yB2 + A * yA2;
    return s;
}

inline Eigen::Matrix2d stable_block(double rho, double theta, double z,
                                    const Tolerances& tol = default_tolerances()) {
    if (!(z > 0.0 && z < 1.0)) throw DomainError("stable_block: z must lie in (0, 1)");
    return stable_block_t(rho, theta, t_of_z(z), tol).value;
}

/// -4^rho (1 - rho) theta sqrt(z/(1-z)) (F(a,b;rho;z) + F(-a,-b;1-rho;z) - 2) / z.
inline double stable_block_det_formula(double rho, double theta, double z,
                                       const Tolerances& tol = default_tolerances()) {
    const HypergeomParams p = pair_params(rho, theta);
    const double factor = gauss_F_minus_one_over_z(p, z, tol) +
                          gauss_F_minus_one_over_z({-p.a, -p.b, 1.0 - p.c}, z, tol);
    return -std::pow(4.0, rho) * (1.0 - rho) * theta * std::sqrt(z / (1.0 - z)) * factor;
}

/// The individual factors of h(z): one per mu (including Z's own mu = 1), per rho*, per pair.
inline std::vector<double> h_factors(const SpectralData& d, double z,
                                     const Tolerances& tol = default_tolerances()) {
    if (!(std::abs(z) < 1.0)) throw DomainError("h_function: |z| must be below 1");
    std::vector<double> out;
    for (double mu : d.mu) out.push_back(gauss_F(center_params(mu), z, tol));
    for (double r : d.rho_star) out.push_back(gauss_F(center_params(r), z, tol));
    for (const auto& pr : d.pairs) {
        const HypergeomParams p = pair_params(pr.rho, pr.theta);
        out.push_back(gauss_F_minus_one_over_z(p, z, tol) +
                      gauss_F_minus_one_over_z({-p.a, -p.b, 1.0 - p.c}, z, tol));
    }
    return out;
}

inline double h_function(const SpectralData& d, double z, const Tolerances& tol = default_tolerances()) {
    double h = 1.0;
    for (double f : h_factors(d, z, tol)) h *= f;
    return h;
}

/// h(0) = prod_i (a_i b_i / rho_i + a_i b_i / (1 - rho_i)).
inline double h_at_zero(const SpectralData& d) {
    double h = 1.0;
    for (const auto& pr : d.pairs) {
        const double ab = -pr.theta * pr.theta;
        h *= ab / pr.rho + ab / (1.0 - pr.rho);
    }
    return h;
}

/// trace ad_H - d/dt log|h(z(t))| with h' from central differences.
inline double mean_curvature_analytic(const SpectralData& d, double t,
                                      const Tolerances& tol = default_tolerances()) {
    const double z = z_of_t(t);
    const double h = h_function(d, z, tol);
    if (!(std::abs(h) > 0.0) || !std::isfinite(h))
        throw DomainError("mean_curvature_analytic: h vanishes at z = " + std::to_string(z));
    const double step = tol.h_derivative_step;
    const double dh = (h_function(d, z + step, tol) - h_function(d, z - step, tol)) / (2.0 * step);
    const double dz_dt = -0.5 / std::pow(std::cosh(t), 2);
    return d.trace_ad_h() - dh / h * dz_dt;
}

struct MonodromyCoeffs {
    Complex B11;
    Complex B12;
};

/**
 * Continuation of u1 = F(a,b;c;z) once around z = 1: u1 -> B11 u1 + B12 u2.
 * A terminating series is a polynomial and continues to itself.
 */
inline MonodromyCoeffs monodromy_coeffs(const HypergeomParams& p) {
    if (detail::terminates(p)) return {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    const double a = p.a, b = p.b, c = p.c;
    if (detail::is_integer(c))
        throw DomainError("monodromy_coeffs: c = " + std::to_string(c) + " is an integer");
    const Complex I(0.0, 1.0);
    const Complex phase = std::exp(I * M_PI * (c - a - b));
    MonodromyCoeffs m;
    m.B11 = 1.0 - 2.0 * I * phase * std::sin(M_PI * a) * std::sin(M_PI * b) / std::sin(M_PI * c);
    const double g = gamma(c) * gamma(c - 1.0) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b) *
                     reciprocal_gamma(b) * reciprocal_gamma(a);
    m.B12 = -2.0 * I * M_PI * phase * g;
    return m;
}

enum class FactorKind { Center, Kernel, Pair };

struct FactorSpec {
    FactorKind kind = FactorKind::Center;
    double mu = 1.0;     ///< Center
    double rho = 0.5;    ///< Kernel (rho*) or Pair
    double theta = 1.0;  ///< Pair

    static FactorSpec center(double mu) { return {FactorKind::Center, mu, 0.5, 1.0}; }
    static FactorSpec kernel(double rho_star) { return {FactorKind::Kernel, 1.0, rho_star, 1.0}; }
    static FactorSpec pair(double rho, double theta) { return {FactorKind::Pair, 1.0, rho, theta}; }

    HypergeomParams params() const {
        switch (kind) {
            case FactorKind::Center: return center_params(mu);
            case FactorKind::Kernel: return center_params(rho);
            case FactorKind::Pair: return pair_params(rho, theta);
        }
        return {};
    }

    std::string describe() const;
};

enum class FactorClass { Constant, Polynomial, Unbounded };

struct FactorClassification {
    FactorClass kind = FactorClass::Unbounded;
    int degree = -1;  ///< Polynomial only
    Complex A{0.0, 0.0}, B{0.0, 0.0}, C{0.0, 0.0};  ///< pair coefficients of 1/z, z^{-c}, z^{c-1}

    /// Constant, or a polynomial of degree 0.
    bool is_constant() const {
        return kind == FactorClass::Constant || (kind == FactorClass::Polynomial && degree == 0);
    }
    std::string label() const {
        if (kind == FactorClass::Constant) return "Constant";
        if (kind == FactorClass::Polynomial) return "Polynomial(" + std::to_string(degree) + ")";
        return "Unbounded";
    }
};

inline std::string FactorSpec::describe() const {
    char buf[96];
    switch (kind) {
        case FactorKind::Center: std::snprintf(buf, sizeof buf, "center(mu=%.12g)", mu); break;
        case FactorKind::Kernel: std::snprintf(buf, sizeof buf, "kernel(rho*=%.12g)", rho); break;
        case FactorKind::Pair:
            std::snprintf(buf, sizeof buf, "pair(rho=%.12g, theta=%.12g)", rho, theta);
            break;
    }
    return buf;
}

/**
 * Behaviour of a factor of h after continuation around z = 1: it either
 * stays a polynomial or blows up as z -> 0.
 */
inline FactorClassification classify_factor(const FactorSpec& f,
                                            const Tolerances& tol = default_tolerances()) {
    FactorClassification out;
    const double eps = tol.classify;
    switch (f.kind) {
        case FactorKind::Center: {
            if (!(f.mu > 0.0 && f.mu <= 1.0 + eps))
                throw DomainError("classify_factor: center factor needs 0 < mu <= 1");
            if (std::abs(f.mu - 1.0) <= eps) {
                out.kind = FactorClass::Constant;  // F(1, 0; 2; z) = 1
                return out;
            }
            // B12 != 0 and u2 = z^{-mu}
            const auto m = monodromy_coeffs(center_params(f.mu));
            if (std::abs(m.B12) <= eps)
                throw NumericalError("classify_factor: unexpected B12 = 0 for " + f.describe());
            out.B = m.B12;
            out.kind = FactorClass::Unbounded;
            return out;
        }
        case FactorKind::Kernel: {
            if (!(f.rho > 0.0 && f.rho < 1.0))
                throw DomainError("classify_factor: kernel factor needs 0 < rho* < 1");
            const auto m = monodromy_coeffs(center_params(f.rho));
            out.B = m.B12;
            out.kind = FactorClass::Unbounded;
            return out;
        }
        case FactorKind::Pair: {
            if (!(f.rho > 0.0 && f.rho <= 0.5 + eps && f.theta > 0.0))
                throw DomainError("classify_factor: pair factor needs 0 < rho <= 1/2, theta > 0");
            const HypergeomParams p = pair_params(f.rho, f.theta);
            const HypergeomParams q{-p.a, -p.b, 1.0 - p.c};
            const double c = std::abs(p.c - 0.5) <= eps ? 0.5 : p.c;
            const HypergeomParams pc{p.a, p.b, c};
            const HypergeomParams qc{q.a, q.b, 1.0 - c};
            const auto m1 = monodromy_coeffs(pc);
            const auto m2 = monodromy_coeffs(qc);
            out.A = m1.B11 + m2.B11 - 2.0;
            out.B = m1.B12;
            out.C = m2.B12;
            if (c == 0.5) {
                // a = -b here, and A = -4 sin^2(pi b)
                if (detail::is_integer(p.b, eps) && p.b > 0.5) {
                    out.kind = FactorClass::Polynomial;
                    out.degree = static_cast<int>(std::lround(p.b)) - 1;
                } else {
                    out.kind = FactorClass::Unbounded;
                }
                return out;
            }
            if (std::abs(out.A) > eps || std::abs(out.B) > eps || std::abs(out.C) > eps) {
                out.kind = FactorClass::Unbounded;
                return out;
            }
            throw NumericalError("classify_factor: A = B = C = 0 with c != 1/2 for " + f.describe());
        }
    }
    return out;
}

struct FactorReport {
    FactorSpec spec;
    FactorClassification classification;
};

struct RigidityReport {
    bool is_rigid = false;
    std::vector<FactorReport> factors;
    std::vector<std::string> offending;  ///< descriptions of non-constant factors
};

inline std::vector<FactorSpec> factor_specs(const SpectralData& d) {
    std::vector<FactorSpec> out;
    for (double mu : d.mu) out.push_back(FactorSpec::center(mu));
    for (double r : d.rho_star) out.push_back(FactorSpec::kernel(r));
    for (const auto& p : d.pairs) out.push_back(FactorSpec::pair(p.rho, p.theta));
    return out;
}

/**
 * Rigid iff every factor of h is constant: no kernel factors, all mu = 1 and
 * all pairs (rho, theta) = (1/2, 1).
 */
inline RigidityReport rigidity_conclusion(const SpectralData& d,
                                          const Tolerances& tol = default_tolerances()) {
    RigidityReport r;
    r.is_rigid = true;
    for (const auto& spec : factor_specs(d)) {
        FactorReport fr{spec, classify_factor(spec, tol)};
        if (!fr.classification.is_constant()) {
            r.is_rigid = false;
            r.offending.push_back(spec.describe() + ": " + fr.classification.label());
        }
        r.factors.push_back(std::move(fr));
    }
    // the same statement read off the data directly
    bool direct = d.rho_star.empty();
    for (double mu : d.mu) direct = direct && std::abs(mu - 1.0) <= 1e-10;
    for (const auto& p : d.pairs)
        direct = direct && std::abs(p.rho - 0.5) <= 1e-10 && std::abs(p.theta - 1.0) <= 1e-10;
    if (direct != r.is_rigid)
        throw NumericalError("rigidity_conclusion: factor classification disagrees with the data");
    return r;
}

}  // namespace solvharm
