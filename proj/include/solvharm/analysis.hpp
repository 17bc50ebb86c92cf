#pragma once

/**
 * @file analysis.hpp
 * @brief The end-to-end analysis pipeline behind the command-line tool:
 *        curvature, Einstein check, horosphere mean curvature by Riccati and by
 *        Jacobi integration, the h scan, factor classification and the final label.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solvharm/clifford_dr.hpp"
#include "solvharm/curvature.hpp"
#include "solvharm/hypergeom.hpp"
#include "solvharm/io.hpp"
#include "solvharm/jacobi_flow.hpp"
#include "solvharm/lie_metric.hpp"
#include "solvharm/riccati.hpp"

namespace solvharm {

enum class Label { Flat, RankOneSymmetric, DamekRicciNonsymmetric, NotAsymptoticallyHarmonic, Indeterminate };

inline const char* to_string(Label l) {
    switch (l) {
        case Label::Flat: return "Flat";
        case Label::RankOneSymmetric: return "RankOneSymmetric";
        case Label::DamekRicciNonsymmetric: return "DamekRicciNonsymmetric";
        case Label::NotAsymptoticallyHarmonic: return "NotAsymptoticallyHarmonic";
        case Label::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

struct AnalysisOptions {
    std::uint64_t seed = 0;
    Tolerances tol;
    double t_min = 0.5, t_max = 8.0;
    int t_count = 76;
    double z_min = 0.05, z_max = 0.5;
    int z_count = 46;
    int directions = 20;
    std::vector<double> density_times{0.5, 1.0, 2.0};
    bool density = true;
};

inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) return {a};
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
    return g;
}

struct MeanCurvatureReport {
    double formula = 0.0;   ///< trace ad_H
    double riccati = 0.0;   ///< -trace L0 for ad_H
    std::optional<double> numeric_min, numeric_max, analytic_at_tmin;
    double max_deviation = 0.0;  ///< max |m_numeric(t) - trace ad_H|
    bool constant = false;
    std::string error;
    std::vector<double> t, m;
};

struct HScanReport {
    std::vector<double> z, h;
    std::vector<std::vector<double>> factors;  ///< [z][factor]
    std::vector<std::string> factor_names;
    double variation = 0.0;
    bool constant = false;
};

struct AnalysisReport {
    int dim = 0;
    int derived_dim = 0;
    int center_dim = 0;
    std::optional<int> nilpotency;
    double curvature_norm = 0.0;
    EinsteinResult einstein;
    Growth growth = Growth::Exponential;
    bool standard = false;
    std::string standard_error;
    std::optional<StandardSolvableData> data;
    MeanCurvatureReport mean_curvature;
    HScanReport hscan;
    std::optional<RigidityReport> rigidity;
    double nabla_R = 0.0;
    double nabla_R_ratio = 0.0;
    std::optional<DensitySpread> density;
    std::string density_error;
    Label label = Label::Indeterminate;
    Tolerances tol;
    std::uint64_t seed = 0;
};

inline HScanReport scan_h(const SpectralData& d, double z_min, double z_max, int count, const Tolerances& tol) {
    HScanReport r;
    for (const auto& f : factor_specs(d)) r.factor_names.push_back(f.describe());
    r.z = linspace(z_min, z_max, count);
    double lo = 1e300, hi = -1e300;
    for (double z : r.z) {
        auto fs = h_factors(d, z, tol);
        double h = 1.0;
        for (double f : fs) h *= f;
        r.h.push_back(h);
        r.factors.push_back(std::move(fs));
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    r.variation = hi - lo;
    r.constant = r.variation <= tol.h_constancy * std::max(1.0, std::abs(hi));
    return r;
}

/**
 * Flat iff ||R|| <= tol.flat; else RankOneSymmetric iff rigid, Einstein and
 * ||nabla R|| / ||R|| <= tol.symmetric_ratio; else DamekRicciNonsymmetric iff
 * rigid and Einstein; else NotAsymptoticallyHarmonic iff h or m(t) is not
 * constant; else Indeterminate.
 */
inline Label decide_label(const AnalysisReport& r) {
    if (r.curvature_norm <= r.tol.flat) return Label::Flat;
    if (!r.standard) return Label::Indeterminate;
    const bool rigid = r.rigidity && r.rigidity->is_rigid;
    if (rigid && r.einstein.is_einstein) {
        return r.nabla_R_ratio <= r.tol.symmetric_ratio ? Label::RankOneSymmetric : Label::DamekRicciNonsymmetric;
    }
    const bool m_known = r.mean_curvature.error.empty() && r.mean_curvature.numeric_min.has_value();
    if (!r.hscan.constant || (m_known && !r.mean_curvature.constant)) return Label::NotAsymptoticallyHarmonic;
    return Label::Indeterminate;
}

inline AnalysisReport analyze(const MetricLieAlgebra& g, const AnalysisOptions& opt = {}) {
    const Tolerances& tol = opt.tol;
    AnalysisReport r;
    r.tol = tol;
    r.seed = opt.seed;
    r.dim = g.dim();
    r.derived_dim = static_cast<int>(derived_algebra(g, tol).cols());
    r.center_dim = static_cast<int>(center_of(g, tol).cols());
    r.nilpotency = nilpotency_class(g, tol);
    const ConnectionCoefficients conn = levi_civita(g);
    const CurvatureTensor R = curvature_tensor(g, conn);
    r.curvature_norm = R.norm();
    r.einstein = einstein_check(g, tol);
    r.growth = growth_type(g, tol.growth_samples, opt.seed, tol);
    r.nabla_R = nabla_R_norm(g, conn, R);
    r.nabla_R_ratio = r.curvature_norm > 0.0 ? r.nabla_R / r.curvature_norm : 0.0;

    try {
        r.data = standard_decomposition(g, tol);
        r.standard = true;
    } catch (const StructureError& e) {
        r.standard_error = e.what();
    }

    if (r.standard) {
        const StandardSolvableData& d = *r.data;
        auto& mc = r.mean_curvature;
        mc.formula = d.spectral.trace_ad_h();
        mc.riccati = -solve_algebraic_riccati_max(d.algebra.ad(d.H()), tol).trace_L0;
        try {
            const auto s = stable_jacobi_tensor(d, linspace(opt.t_min, opt.t_max, opt.t_count), 1000.0, tol);
            const auto m = mean_curvature_numeric(s, tol);
            mc.t = m.t;
            mc.m = m.m;
            double lo = 1e300, hi = -1e300;
            for (double v : m.m) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                mc.max_deviation = std::max(mc.max_deviation, std::abs(v - mc.formula));
            }
            mc.numeric_min = lo;
            mc.numeric_max = hi;
            mc.constant = hi - lo <= tol.mean_curvature_constancy;
        } catch (const NumericalError& e) {
            mc.error = e.what();
        }
        try {
            mc.analytic_at_tmin = mean_curvature_analytic(d.spectral, opt.t_min, tol);
        } catch (const DomainError& e) {
            if (mc.error.empty()) mc.error = e.what();
        }
        r.hscan = scan_h(d.spectral, opt.z_min, opt.z_max, opt.z_count, tol);
        r.rigidity = rigidity_conclusion(d.spectral, tol);
    }

    if (opt.density && r.curvature_norm > tol.flat) {
        try {
            r.density = density_spread(g, random_directions(g.dim(), opt.directions, opt.seed), opt.density_times, tol);
        } catch (const NumericalError& e) {
            r.density_error = e.what();
        }
    }
    r.label = decide_label(r);
    return r;
}

inline Json tolerances_to_json(const Tolerances& t) {
    Json j;
    j["singular_pivot"] = t.singular_pivot;
    j["jacobi_identity"] = t.jacobi_identity;
    j["rank"] = t.rank;
    j["self_adjoint"] = t.self_adjoint;
    j["eigen_merge"] = t.eigen_merge;
    j["imaginary_axis"] = t.imaginary_axis;
    j["einstein"] = t.einstein;
    j["symmetric_ratio"] = t.symmetric_ratio;
    j["flat"] = t.flat;
    j["riccati_axis"] = t.riccati_axis;
    j["riccati_ambiguity"] = t.riccati_ambiguity;
    j["riccati_residual"] = t.riccati_residual;
    j["ode_rel"] = t.ode_rel;
    j["ode_abs"] = t.ode_abs;
    j["bvp_convergence"] = t.bvp_convergence;
    j["series_truncation"] = t.series_truncation;
    j["classify"] = t.classify;
    j["h_constancy"] = t.h_constancy;
    j["mean_curvature_constancy"] = t.mean_curvature_constancy;
    j["trace_mismatch"] = t.trace_mismatch;
    return j;
}

inline Json spectral_to_json(const SpectralData& d) {
    Json j;
    j["mu"] = d.mu;
    j["rho_star"] = d.rho_star;
    Json pairs = Json::array();
    for (const auto& p : d.pairs) pairs.push_back(Json{{"rho", p.rho}, {"theta", p.theta}});
    j["pairs"] = pairs;
    j["trace_ad_h"] = d.trace_ad_h();
    return j;
}

inline Json rigidity_to_json(const RigidityReport& r) {
    Json j;
    j["is_rigid"] = r.is_rigid;
    Json factors = Json::array();
    for (const auto& f : r.factors) {
        Json e;
        e["factor"] = f.spec.describe();
        e["class"] = f.classification.label();
        const HypergeomParams p = f.spec.params();
        e["a"] = p.a;
        e["b"] = p.b;
        e["c"] = p.c;
        if (f.spec.kind == FactorKind::Pair) {
            e["A"] = {f.classification.A.real(), f.classification.A.imag()};
            e["B"] = {f.classification.B.real(), f.classification.B.imag()};
            e["C"] = {f.classification.C.real(), f.classification.C.imag()};
        }
        factors.push_back(e);
    }
    j["factors"] = factors;
    j["offending"] = r.offending;
    return j;
}

inline Json report_to_json(const AnalysisReport& r) {
    Json j;
    j["label"] = to_string(r.label);
    Json alg;
    alg["dim"] = r.dim;
    alg["derived_dim"] = r.derived_dim;
    alg["center_dim"] = r.center_dim;
    alg["nilpotency_class"] = r.nilpotency ? Json(*r.nilpotency) : Json(nullptr);
    alg["growth"] = to_string(r.growth);
    j["algebra"] = alg;
    j["curvature_norm"] = r.curvature_norm;
    j["einstein"] = {{"is_einstein", r.einstein.is_einstein},
                     {"constant", r.einstein.constant},
                     {"residual", r.einstein.residual}};
    j["symmetry"] = {{"nabla_R", r.nabla_R}, {"ratio", r.nabla_R_ratio}};
    j["standard"] = r.standard;
    if (!r.standard) j["standard_error"] = r.standard_error;
    if (r.data) {
        j["spectral"] = spectral_to_json(r.data->spectral);
        const auto& mc = r.mean_curvature;
        Json m;
        m["formula"] = mc.formula;
        m["riccati"] = mc.riccati;
        m["numeric_min"] = mc.numeric_min ? Json(*mc.numeric_min) : Json(nullptr);
        m["numeric_max"] = mc.numeric_max ? Json(*mc.numeric_max) : Json(nullptr);
        m["analytic_at_tmin"] = mc.analytic_at_tmin ? Json(*mc.analytic_at_tmin) : Json(nullptr);
        m["max_deviation"] = mc.max_deviation;
        m["constant"] = mc.constant;
        if (!mc.error.empty()) m["error"] = mc.error;
        j["mean_curvature"] = m;
        j["h"] = {{"z_min", r.hscan.z.front()},
                  {"z_max", r.hscan.z.back()},
                  {"h_at_z_min", r.hscan.h.front()},
                  {"h_zero_limit", h_at_zero(r.data->spectral)},
                  {"variation", r.hscan.variation},
                  {"constant", r.hscan.constant}};
        j["rigidity"] = rigidity_to_json(*r.rigidity);
    }
    if (r.density) {
        j["density"] = {{"directions", r.density->directions.size()},
                        {"t", r.density->t},
                        {"spread", r.density->spread},
                        {"max_spread", r.density->max_spread()}};
    } else if (!r.density_error.empty()) {
        j["density"] = {{"error", r.density_error}};
    }
    j["seed"] = r.seed;
    j["tolerances"] = tolerances_to_json(r.tol);
    return j;
}

inline CsvTable density_csv(const DensitySpread& d) {
    CsvTable t({"direction", "t", "det"});
    for (std::size_t i = 0; i < d.values.size(); ++i)
        for (std::size_t k = 0; k < d.t.size(); ++k)
            t.add_row({std::to_string(i), format_double(d.t[k]), format_double(d.values[i][k])});
    return t;
}

inline CsvTable hscan_csv(const HScanReport& h) {
    std::vector<std::string> header{"z", "h"};
    for (std::size_t k = 0; k < h.factor_names.size(); ++k) header.push_back("factor_" + std::to_string(k + 1));
    CsvTable t(header);
    for (std::size_t i = 0; i < h.z.size(); ++i) {
        std::vector<double> row{h.z[i], h.h[i]};
        row.insert(row.end(), h.factors[i].begin(), h.factors[i].end());
        t.add_numeric_row(row);
    }
    return t;
}

struct RiccatiReport {
    RiccatiResult result;
    double formula_trace = 0.0;
    bool mismatch = false;
};

inline RiccatiReport riccati_report(const Matrix& adA, const Tolerances& tol) {
    RiccatiReport r;
    r.result = solve_algebraic_riccati_max(adA, tol);
    r.formula_trace = horosphere_mean_curvature_formula(adA);
    r.mismatch = std::abs(r.result.trace_L0 - r.formula_trace) > tol.trace_mismatch;
    return r;
}

inline Json riccati_to_json(const RiccatiReport& r) {
    Json j;
    j["X"] = matrix_to_json(r.result.X);
    j["L0"] = matrix_to_json(r.result.L0);
    j["traceL0"] = r.result.trace_L0;
    j["formulaTrace"] = r.formula_trace;
    Json spec = Json::array();
    for (const auto& v : r.result.spectrum_adA.values) spec.push_back({v.real(), v.imag()});
    j["spectrum"] = spec;
    j["residual"] = r.result.residual;
    j["method"] = r.result.method;
    return j;
}

}  // namespace solvharm
