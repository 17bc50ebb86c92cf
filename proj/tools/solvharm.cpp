// solvharm: build metric solvable Lie algebras and analyze their horospheres.
//
// Exit codes: 0 ok, 1 numerical failure, 2 usage or malformed input,
// 3 algebra not in standard position (scan-h), 4 Riccati trace mismatch,
// 5 degenerate Riccati spectrum.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include "solvharm/analysis.hpp"

using namespace solvharm;

namespace {

enum Exit { kOk = 0, kNumerical = 1, kUsage = 2, kNotStandard = 3, kMismatch = 4, kDegenerate = 5 };

struct UsageError : Error {
    using Error::Error;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
    } else {
        write_file_atomic(path, text);
    }
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
    cmd->add_option("--tol-einstein", tol.einstein, "Einstein residual threshold");
    cmd->add_option("--tol-flat", tol.flat, "curvature norm below which the metric is flat");
    cmd->add_option("--tol-symmetric", tol.symmetric_ratio, "|nabla R| / |R| threshold for local symmetry");
    cmd->add_option("--tol-h", tol.h_constancy, "relative variation of h counted as constant");
    cmd->add_option("--tol-m", tol.mean_curvature_constancy, "variation of m(t) counted as constant");
    cmd->add_option("--tol-trace", tol.trace_mismatch, "Riccati trace mismatch threshold");
    cmd->add_option("--tol-classify", tol.classify, "zero test for monodromy coefficients");
    cmd->add_option("--tol-ode-rel", tol.ode_rel, "relative ODE tolerance");
    cmd->add_option("--tol-ode-abs", tol.ode_abs, "absolute ODE tolerance");
    cmd->add_option("--tol-bvp", tol.bvp_convergence, "stable tensor convergence threshold");
}

MetricLieAlgebra load_algebra(const std::string& path, const Tolerances& tol) {
    return algebra_from_json(read_json_file(path), tol);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric solvable Lie algebras: curvature, horospheres and Damek-Ricci rigidity"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for every random choice")->capture_default_str();
    Tolerances tol;

    // build
    std::string kind, out_path;
    int dim = 0, l = 1, copies = 1;
    double theta = 1.0;
    auto* build = app.add_subcommand("build", "write an algebra file");
    build->add_option("kind", kind, "flat | real-hyperbolic | heisenberg | damek-ricci")
        ->required()
        ->check(CLI::IsMember({"flat", "real-hyperbolic", "heisenberg", "damek-ricci"}));
    build->add_option("--dim", dim, "dimension (flat, real-hyperbolic)");
    build->add_option("--l", l, "center dimension (heisenberg, damek-ricci)")->capture_default_str();
    build->add_option("--copies", copies, "copies of the irreducible Clifford module")->capture_default_str();
    build->add_option("--theta", theta, "scale of the bracket v x v -> z")->capture_default_str();
    build->add_option("-o,--output", out_path, "output file (stdout if omitted)");

    // analyze
    std::string algebra_path, density_csv_path, hscan_csv_path;
    AnalysisOptions aopt;
    auto* analyze_cmd = app.add_subcommand("analyze", "full analysis report as JSON");
    analyze_cmd->add_option("algebra", algebra_path, "algebra JSON file")->required();
    analyze_cmd->add_option("-o,--output", out_path, "report file (stdout if omitted)");
    analyze_cmd->add_option("--density-csv", density_csv_path, "per-direction volume density table");
    analyze_cmd->add_option("--h-csv", hscan_csv_path, "h scan table");
    analyze_cmd->add_option("--directions", aopt.directions, "random directions for the density test")
        ->capture_default_str();
    analyze_cmd->add_option("--t-max", aopt.t_max, "end of the mean-curvature grid")->capture_default_str();
    analyze_cmd->add_flag("!--no-density", aopt.density, "skip the volume density test");
    add_tolerance_flags(analyze_cmd, tol);

    // scan-h
    double z_min = 0.05, z_max = 0.5;
    int count = 46;
    auto* scan = app.add_subcommand("scan-h", "sample h(z) and its factors as CSV");
    scan->add_option("algebra", algebra_path, "algebra JSON file")->required();
    scan->add_option("--z-min", z_min)->capture_default_str();
    scan->add_option("--z-max", z_max)->capture_default_str();
    scan->add_option("--count", count)->capture_default_str()->check(CLI::Range(2, 1000000));
    scan->add_option("-o,--output", out_path, "CSV file (stdout if omitted)");
    add_tolerance_flags(scan, tol);

    // classify
    std::string mu_list, rho_list;
    std::vector<std::string> pair_list;
    auto* classify = app.add_subcommand("classify", "classify the factors of h as JSON");
    classify->add_option("algebra", algebra_path, "algebra JSON file (or give --mu/--rho-star/--pair)");
    classify->add_option("--mu", mu_list, "comma-separated center eigenvalues");
    classify->add_option("--rho-star", rho_list, "comma-separated kernel eigenvalues");
    classify->add_option("--pair", pair_list, "rho,theta (repeatable)");
    classify->add_option("-o,--output", out_path, "report file (stdout if omitted)");
    add_tolerance_flags(classify, tol);

    // riccati
    std::string matrix_path;
    auto* riccati = app.add_subcommand("riccati", "maximal Riccati solution and horosphere trace for ad_A");
    riccati->add_option("matrix", matrix_path, "matrix JSON file")->required();
    riccati->add_option("-o,--output", out_path, "report file (stdout if omitted)");
    add_tolerance_flags(riccati, tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*build) {
            MetricLieAlgebra g(1);
            if (kind == "flat" || kind == "real-hyperbolic") {
                if (kind == "flat" ? dim < 1 : dim < 2) throw UsageError("build " + kind + ": --dim is too small");
                g = kind == "flat" ? build_flat(dim) : build_real_hyperbolic(dim);
            } else {
                if (l < 1 || copies < 1) throw UsageError("build " + kind + ": --l and --copies must be positive");
                if (!(theta > 0.0)) throw UsageError("build " + kind + ": --theta must be positive");
                const auto cm = clifford_generators(l, copies);
                g = kind == "heisenberg" ? build_heisenberg_type(cm, theta) : build_damek_ricci(cm, theta);
            }
            emit(out_path, to_json_text(algebra_to_json(g)));
            return kOk;
        }
        if (*analyze_cmd) {
            aopt.tol = tol;
            aopt.seed = seed;
            const auto g = load_algebra(algebra_path, tol);
            const AnalysisReport r = analyze(g, aopt);
            if (!density_csv_path.empty() && r.density) write_file_atomic(density_csv_path, density_csv(*r.density).str());
            if (!hscan_csv_path.empty() && r.standard) write_file_atomic(hscan_csv_path, hscan_csv(r.hscan).str());
            emit(out_path, to_json_text(report_to_json(r)));
            return kOk;
        }
        if (*scan) {
            if (!(z_min >= 0.0 && z_min < z_max && z_max < 1.0))
                throw UsageError("scan-h: need 0 <= z-min < z-max < 1");
            const auto g = load_algebra(algebra_path, tol);
            StandardSolvableData d;
            try {
                d = standard_decomposition(g, tol);
            } catch (const StructureError& e) {
                std::cerr << "solvharm: " << e.what() << '\n';
                return kNotStandard;
            }
            emit(out_path, hscan_csv(scan_h(d.spectral, z_min, z_max, count, tol)).str());
            return kOk;
        }
        if (*classify) {
            SpectralData d;
            if (!algebra_path.empty()) {
                d = standard_decomposition(load_algebra(algebra_path, tol), tol).spectral;
            } else {
                d.mu = parse_list(mu_list);
                d.rho_star = parse_list(rho_list);
                for (const auto& p : pair_list) {
                    const auto v = parse_list(p);
                    if (v.size() != 2) throw UsageError("--pair expects rho,theta");
                    d.pairs.push_back({v[0], v[1]});
                }
                if (d.mu.empty() && d.rho_star.empty() && d.pairs.empty())
                    throw UsageError("classify: give an algebra file or spectral data");
            }
            Json j;
            j["spectral"] = spectral_to_json(d);
            j["rigidity"] = rigidity_to_json(rigidity_conclusion(d, tol));
            emit(out_path, to_json_text(j));
            return kOk;
        }
        if (*riccati) {
            const Matrix a = matrix_from_json(read_json_file(matrix_path));
            if (a.rows() != a.cols()) throw UsageError("riccati: matrix must be square");
            const RiccatiReport r = riccati_report(a, tol);
            emit(out_path, to_json_text(riccati_to_json(r)));
            if (r.mismatch) {
                std::cerr << "solvharm: trace(L0) = " << format_double(r.result.trace_L0)
                          << " but -sum|Re sigma| = " << format_double(r.formula_trace) << '\n';
                return kMismatch;
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return kUsage;
    } catch (const NotStandardError& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return *scan ? kNotStandard : kUsage;
    } catch (const StructureError& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return kUsage;
    } catch (const DegenerateSpectrumError& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return kDegenerate;
    } catch (const Error& e) {
        std::cerr << "solvharm: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
