#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "solvharm/hypergeom.hpp"

using namespace solvharm;

namespace {

double ode_residual(const HypergeomParams& p, double z, double h = 1e-4) {
    auto F = [&](double x) { return gauss_F(p, x); };
    const double u = F(z);
    const double du = (F(z + h) - F(z - h)) / (2 * h);
    const double d2u = (F(z + h) - 2 * u + F(z - h)) / (h * h);
    const double r = z * (1 - z) * d2u + (p.c - (p.a + p.b + 1) * z) * du - p.a * p.b * u;
    return std::abs(r) / std::max(1.0, std::abs(u));
}

// residuals of the coupled pair-block Jacobi equation for both columns
double pair_jacobi_residual(double rho, double theta, double t, double h = 1e-4) {
    const StableBlock s = stable_block_t(rho, theta, t);
    const StableBlock sp = stable_block_t(rho, theta, t + h);
    const StableBlock sm = stable_block_t(rho, theta, t - h);
    const Eigen::Matrix2d dd = (sp.dt - sm.dt) / (2 * h);
    const double ch = std::cosh(t), sh = std::sinh(t);
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double f = s.value(0, k), g = s.value(1, k);
        const double df = s.dt(0, k), dg = s.dt(1, k);
        const double r1 = dd(0, k) + theta / ch * dg - (rho + sh * sh * rho * rho) / (ch * ch) * f +
                          (theta * rho - theta) * sh / (ch * ch) * g;
        const double r2 = dd(1, k) - theta / ch * df -
                          ((1 - rho) + sh * sh * (1 - rho) * (1 - rho)) / (ch * ch) * g +
                          theta * rho * sh / (ch * ch) * f;
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    return worst;
}

SpectralData dr_data(int m, int l) {
    SpectralData d;
    d.mu.assign(static_cast<std::size_t>(l), 1.0);
    d.pairs.assign(static_cast<std::size_t>(m / 2), PairData{0.5, 1.0});
    return d;
}

double variation(const SpectralData& d, double z0, double z1, int n = 46) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < n; ++i) {
        const double h = h_function(d, z0 + (z1 - z0) * i / (n - 1));
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return hi - lo;
}

}  // namespace

TEST(Gamma, Values) {
    EXPECT_DOUBLE_EQ(solvharm::gamma(1.0), 1.0);
    EXPECT_NEAR(solvharm::gamma(5.0), 24.0, 1e-12 * 24);
    EXPECT_EQ(reciprocal_gamma(0.0), 0.0);
    EXPECT_EQ(reciprocal_gamma(-3.0), 0.0);
    EXPECT_NEAR(solvharm::gamma(0.5), std::sqrt(M_PI), 1e-15);
    EXPECT_THROW(solvharm::gamma(-2.0), DomainError);
    // duplication: G(x)G(x+1/2) = 2^{1-2x} sqrt(pi) G(2x)
    for (double x : {0.3, 1.7, 4.25, 11.5}) {
        const double lhs = solvharm::gamma(x) * solvharm::gamma(x + 0.5);
        const double rhs = std::pow(2.0, 1 - 2 * x) * std::sqrt(M_PI) * solvharm::gamma(2 * x);
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-13);
    }
}

TEST(GaussF, ClosedForms) {
    EXPECT_EQ(gauss_F(0.3, 0.7, 1.2, 0.0), 1.0);
    for (double z : {0.1, 0.4, 0.9}) EXPECT_NEAR(gauss_F(-1, 1, 0.5, z), 1 - 2 * z, 1e-15);
    EXPECT_NEAR(gauss_F(1, 1, 2, 0.5), 2 * std::log(2.0), 1e-14);
    for (double z : {-0.6, -0.1, 0.05, 0.3, 0.69, 0.71, 0.95, 0.999}) {
        EXPECT_NEAR(gauss_F(1, 1, 2, z), -std::log1p(-z) / z, 1e-12 * std::abs(std::log1p(-z) / z)) << z;
        // F(a, b; b; z) = (1 - z)^{-a}
        EXPECT_NEAR(gauss_F(0.37, 1.3, 1.3, z), std::pow(1 - z, -0.37), 1e-12 * std::pow(1 - z, -0.37));
    }
    for (double x : {0.2, 0.6, 0.97}) {
        // F(1/2, 1/2; 3/2; x^2) = asin(x) / x
        EXPECT_NEAR(gauss_F(0.5, 0.5, 1.5, x * x), std::asin(x) / x, 1e-12);
    }
}

TEST(GaussF, Errors) {
    EXPECT_THROW(gauss_F(1, 1, 0, 0.2), DomainError);
    EXPECT_THROW(gauss_F(1, 1, -2, 0.2), DomainError);
    EXPECT_THROW(gauss_F(1, 1, 2, 1.0), DomainError);
    EXPECT_NO_THROW(gauss_F(-2, 1, 0.5, 1.5));  // polynomial
    Tolerances tol;
    tol.series_max_terms = 10;
    EXPECT_THROW(gauss_F(1.5, 1.5, 2.3, 0.6, tol), NumericalError);
}

TEST(GaussF, MinusOneOverZ) {
    const HypergeomParams p{-1.3, 0.8, 0.4};
    EXPECT_NEAR(gauss_F_minus_one_over_z(p, 0.0), p.a * p.b / p.c, 1e-15);
    for (double z : {1e-3, 0.2, 0.5, 0.8})
        EXPECT_NEAR(gauss_F_minus_one_over_z(p, z), (gauss_F(p, z) - 1) / z, 1e-11);
}

TEST(GaussF, HypergeometricOdeAtRandomPoints) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> par(-2.0, 2.0), zd(0.02, 0.9);
    for (int i = 0; i < 50; ++i) {
        HypergeomParams p{par(rng), par(rng), 0.0};
        do p.c = par(rng) + 1.5; while (std::abs(p.c - std::round(p.c)) < 0.05 && p.c < 0.5);
        EXPECT_LE(ode_residual(p, zd(rng)), 1e-6) << p.a << " " << p.b << " " << p.c;
    }
}

TEST(GaussF, Contiguity) {
    // (c - a) F(a-1) + (2a - c + (b - a) z) F(a) + a (z - 1) F(a+1) = 0
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> par(-1.5, 1.5), zd(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        const double a = par(rng), b = par(rng), c = par(rng) + 2.0, z = zd(rng);
        const double f0 = gauss_F(a - 1, b, c, z), f1 = gauss_F(a, b, c, z), f2 = gauss_F(a + 1, b, c, z);
        const double r = (c - a) * f0 + (2 * a - c + (b - a) * z) * f1 + a * (z - 1) * f2;
        EXPECT_LE(std::abs(r), 1e-10 * std::max({1.0, std::abs(f0), std::abs(f1), std::abs(f2)}));
    }
}

TEST(FundamentalPair, WronskianAndDerivatives) {
    for (auto [rho, theta] : {std::pair{0.5, 1.0}, {0.25, 0.5}, {0.3, 0.8}, {0.45, 2.2}}) {
        const HypergeomParams p = pair_params(rho, theta);
        EXPECT_NEAR(p.a + p.b + 1, 2 * rho, 1e-14);
        EXPECT_NEAR(p.a * p.b, -theta * theta, 1e-14);
        EXPECT_LT(p.a, 0.0);
        EXPECT_GT(p.b, 0.0);
        EXPECT_LE(p.b, -p.a + 1e-14);
        EXPECT_LT(-p.a, p.b + 1);
    }
    for (double rho : {0.25, 0.3, 0.45, 0.5}) {
        const HypergeomParams p = pair_params(rho, 0.7);
        double ref = 0.0;
        for (double z : {0.05, 0.2, 0.35, 0.5, 0.65, 0.8}) {
            const auto u = fundamental_pair(p, z);
            const double W = u.u1 * u.du2 - u.u2 * u.du1;
            const double expect = (1 - rho) * std::pow(z * (1 - z), -rho);
            EXPECT_NEAR(W / expect, 1.0, 1e-10) << rho << " " << z;
            const double scaled = W * std::pow(z * (1 - z), rho);
            if (ref == 0.0) ref = scaled;
            EXPECT_NEAR(scaled, ref, 1e-10 * std::abs(ref));
            // u2' against the other closed form and against differences
            const double alt = (1 - p.c) * std::pow(z, -p.c) * gauss_F(1 + p.a - p.c, 1 + p.b - p.c, 1 - p.c, z);
            EXPECT_NEAR(u.du2, alt, 1e-11 * std::abs(alt));
            const double h = 1e-5;
            const double fd = (fundamental_pair(p, z + h).u2 - fundamental_pair(p, z - h).u2) / (2 * h);
            EXPECT_NEAR(u.du2, fd, 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
    EXPECT_THROW(fundamental_pair({1, 0, 2}, 0.3), DomainError);
}

TEST(FundamentalPair, CenterCase) {
    for (double mu : {0.3, 0.5, 0.9}) {
        for (double z : {0.1, 0.4, 0.8}) {
            const auto u = fundamental_pair(center_params(mu), z);
            EXPECT_NEAR(u.u2, std::pow(z, -mu), 1e-12 * std::pow(z, -mu));
        }
    }
}

TEST(StableBlock, SolvesPairJacobiEquation) {
    EXPECT_LE(pair_jacobi_residual(0.5, 1.0, t_of_z(0.25)), 1e-8);
    for (auto [rho, theta] : {std::pair{0.25, 0.5}, {0.3, 0.8}, {0.5, 1.0}, {0.4, 1.7}})
        for (double t : {0.2, 1.0, 3.0, 6.0}) EXPECT_LE(pair_jacobi_residual(rho, theta, t), 1e-7);
}

TEST(StableBlock, DerivativeMatchesDifferences) {
    const double h = 1e-5;
    for (double t : {0.3, 2.0, 5.0}) {
        const auto s = stable_block_t(0.3, 0.8, t);
        const Eigen::Matrix2d fd =
            (stable_block_t(0.3, 0.8, t + h).value - stable_block_t(0.3, 0.8, t - h).value) / (2 * h);
        EXPECT_LE((s.dt - fd).cwiseAbs().maxCoeff(), 1e-7);
    }
}

TEST(StableBlock, DecaysAndDeterminantLaw) {
    for (auto [rho, theta] : {std::pair{0.5, 1.0}, {0.25, 0.5}, {0.3, 0.8}}) {
        // entries decay like e^{-rho t}
        EXPECT_LE(stable_block_t(rho, theta, 40.0).value.cwiseAbs().maxCoeff(), 1e-3);
        const double z0 = 0.3;
        const double ref = stable_block(rho, theta, z0).determinant() / stable_block_det_formula(rho, theta, z0);
        for (double z : {0.01, 0.1, 0.25, 0.4, 0.5, 0.7}) {
            const double ratio = stable_block(rho, theta, z).determinant() / stable_block_det_formula(rho, theta, z);
            EXPECT_NEAR(ratio, ref, 1e-8 * std::abs(ref)) << rho << " " << z;
        }
    }
}

TEST(HFunction, DamekRicciIsMinusFourPerPair) {
    const SpectralData d = dr_data(2, 1);
    EXPECT_NEAR(h_at_zero(d), -4.0, 1e-15);
    EXPECT_NEAR(h_function(d, 0.0), -4.0, 1e-15);
    for (int i = 0; i <= 45; ++i) EXPECT_NEAR(h_function(d, 0.05 + 0.01 * i), -4.0, 1e-9);
    EXPECT_NEAR(h_function(dr_data(4, 3), 0.3), 16.0, 1e-9);
}

TEST(HFunction, RealHyperbolicIsOne) {
    SpectralData d;
    d.mu.assign(3, 1.0);
    for (double z : {0.0, 0.1, 0.5}) EXPECT_NEAR(h_function(d, z), 1.0, 1e-15);
}

TEST(HFunction, KernelFactorVaries) {
    SpectralData d;
    d.mu = {1.0};
    d.rho_star = {0.5};
    EXPECT_GT(variation(d, 0.05, 0.5), 1e-3);
}

TEST(HFunction, ClassifierCoherenceSweep) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        SpectralData d;
        d.mu = {1.0};
        const int kind = i % 4;
        if (kind == 0) {
            d.pairs.assign(1 + i % 3, PairData{0.5, 1.0});
        } else if (kind == 1) {
            d.mu.push_back(0.1 + 0.85 * u01(rng));
        } else if (kind == 2) {
            d.rho_star = {u01(rng)};
        } else {
            d.pairs = {PairData{0.5, 1.0}, PairData{0.05 + 0.45 * u01(rng), 0.2 + 2 * u01(rng)}};
        }
        const auto r = rigidity_conclusion(d);
        const double h0 = std::abs(h_function(d, 0.3));
        if (r.is_rigid) {
            EXPECT_LE(variation(d, 0.05, 0.5), 1e-8 * h0);
        } else {
            EXPECT_GT(variation(d, 0.05, 0.5), 1e-4 * h0) << i;
        }
    }
}

TEST(MeanCurvature, AnalyticConstantForDamekRicci) {
    for (auto [m, l] : {std::pair{2, 1}, {4, 3}, {8, 1}}) {
        const SpectralData d = dr_data(m, l);
        for (double t : {0.5, 1.0, 3.0, 8.0}) EXPECT_NEAR(mean_curvature_analytic(d, t), m / 2.0 + l, 1e-8);
    }
    SpectralData d = dr_data(2, 1);
    d.pairs[0].theta = 0.8;
    EXPECT_GT(std::abs(mean_curvature_analytic(d, 0.5) - d.trace_ad_h()), 1e-4);
    EXPECT_LT(std::abs(mean_curvature_analytic(d, 20.0) - d.trace_ad_h()), 1e-6);
}

TEST(Monodromy, Coefficients) {
    const auto m1 = monodromy_coeffs({1, 0, 2});
    EXPECT_EQ(m1.B11, Complex(1, 0));
    EXPECT_EQ(m1.B12, Complex(0, 0));
    const auto m2 = monodromy_coeffs({-1, 1, 0.5});
    EXPECT_EQ(std::abs(m2.B12), 0.0);
    EXPECT_NEAR(std::abs(m2.B11 - 1.0), 0.0, 1e-15);
    // asin(sqrt z)/sqrt z continues to pi z^{-1/2} - itself around z = 1
    const auto m3 = monodromy_coeffs({0.5, 0.5, 1.5});
    EXPECT_GT(std::abs(m3.B12), 0.1);
    EXPECT_NEAR(std::abs(m3.B12 - Complex(M_PI, 0)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(m3.B11 - Complex(-1, 0)), 0.0, 1e-13);
    EXPECT_THROW(monodromy_coeffs({0.5, 0.3, 2.0}), DomainError);
    // B12 = 0 exactly when c - a or c - b is a nonpositive integer
    EXPECT_EQ(std::abs(monodromy_coeffs({1.75, 0.3, 0.75}).B12), 0.0);
}

TEST(Classify, Factors) {
    EXPECT_EQ(classify_factor(FactorSpec::center(1.0)).kind, FactorClass::Constant);
    for (double mu : {0.3, 0.5, 0.9}) EXPECT_EQ(classify_factor(FactorSpec::center(mu)).kind, FactorClass::Unbounded);
    for (double r : {0.25, 0.5, 0.75}) EXPECT_EQ(classify_factor(FactorSpec::kernel(r)).kind, FactorClass::Unbounded);
    const auto dr = classify_factor(FactorSpec::pair(0.5, 1.0));
    EXPECT_EQ(dr.kind, FactorClass::Polynomial);
    EXPECT_EQ(dr.degree, 0);
    EXPECT_TRUE(dr.is_constant());
    const auto two = classify_factor(FactorSpec::pair(0.5, 2.0));
    EXPECT_EQ(two.kind, FactorClass::Polynomial);
    EXPECT_EQ(two.degree, 1);
    const auto s6 = classify_factor(FactorSpec::pair(0.5, std::sqrt(6.0)));
    EXPECT_EQ(s6.kind, FactorClass::Unbounded);
    const double b = std::sqrt(6.0);
    EXPECT_NEAR(s6.A.real(), -4 * std::pow(std::sin(M_PI * b), 2), 1e-12);
    EXPECT_EQ(classify_factor(FactorSpec::pair(0.3, 0.8)).kind, FactorClass::Unbounded);
    EXPECT_THROW(classify_factor(FactorSpec::center(1.3)), DomainError);
    EXPECT_THROW(classify_factor(FactorSpec::kernel(1.0)), DomainError);
    EXPECT_THROW(classify_factor(FactorSpec::pair(0.6, 1.0)), DomainError);
}

TEST(Classify, Rigidity) {
    EXPECT_TRUE(rigidity_conclusion(dr_data(4, 3)).is_rigid);
    SpectralData rh;
    rh.mu.assign(3, 1.0);
    EXPECT_TRUE(rigidity_conclusion(rh).is_rigid);
    SpectralData d = dr_data(2, 1);
    d.pairs[0].theta = 0.9;
    const auto r = rigidity_conclusion(d);
    EXPECT_FALSE(r.is_rigid);
    ASSERT_EQ(r.offending.size(), 1u);
    EXPECT_NE(r.offending[0].find("pair"), std::string::npos);
}
