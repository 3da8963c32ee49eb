#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include "sincfrac/checks.hpp"
#include "sincfrac/dense.hpp"
#include "sincfrac/experiments.hpp"
#include "sincfrac/fem1d.hpp"
#include "sincfrac/quadrature.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sincfrac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

inline constexpr double kBetaMin = 1e-3;
inline constexpr double kBetaMax = 1.0 - 1e-3;

struct CliConfig {
    double beta = 0.5;
    double k = 0.5;
    std::string strategy = "balanced";
    double s_plus = 0.0;

    std::string matrix_path;
    std::string rhs_path;
    std::optional<std::size_t> cells;
    double convection = 0.0;
    std::string out_path;

    std::vector<double> betas{0.3, 0.5, 0.7};
    std::vector<std::string> orders{"0", "beta", "1"};
    std::vector<double> ks{1.0, 0.75, 0.6, 0.5, 0.4, 0.35, 0.3};
    std::size_t study_cells = 512;
    double eps_s = 0.05;

    int j_min = 3;
    int j_max = 8;
    std::vector<std::string> norms{"L2", "H1"};
    std::size_t series_terms = 50000;
    double l2_k_constant = 8.0;
    double h1_k_constant = 4.0;

    unsigned workers = default_workers();
    bool verbose = false;
};

namespace detail {

inline void check_beta(double beta, const std::string& flag)
{
    if (!(beta >= kBetaMin && beta <= kBetaMax)) {
        throw ValidationError(flag + ": beta must lie in [0.001, 0.999], got " + std::to_string(beta));
    }
}

inline Vector read_vector_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open vector file '" + path + "'");
    Vector v;
    double x = 0.0;
    while (in >> x) v.push_back(x);
    if (!in.eof()) throw ValidationError(path + ": malformed decimal after entry " + std::to_string(v.size()));
    return v;
}

inline void write_vector(std::ostream& out, std::span<const double> v)
{
    for (double x : v) out << sincfrac::detail::format_double(x) << '\n';
}

inline NormOrder parse_order(const std::string& token)
{
    if (token == "beta") return {0.0, true};
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size()) throw ValidationError("--r: cannot parse '" + token + "' (number or 'beta')");
    return {value, false};
}

inline void write_table(const ConvergenceTable& table, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        write_csv(table, out);
    } else {
        try {
            emit_csv(table, path);
        } catch (const std::runtime_error& e) {
            throw ValidationError(e.what());
        }
    }
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr)
{
    CliConfig cfg;
    CLI::App app{"Negative fractional powers A^{-beta} f by sinc quadrature"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", cfg.verbose, "Log progress to standard error");

    auto add_scheme_flags = [&](CLI::App* sub) {
        sub->add_option("--beta", cfg.beta, "Fractional exponent in (0,1)")->capture_default_str();
        sub->add_option("--k", cfg.k, "Quadrature spacing")->capture_default_str();
        sub->add_option("--strategy", cfg.strategy, "balanced or uniform")
            ->check(CLI::IsMember({"balanced", "uniform"}))
            ->capture_default_str();
        sub->add_option("--s-plus", cfg.s_plus, "Balancing parameter s+ (balanced only)")->capture_default_str();
    };
    auto add_workers = [&](CLI::App* sub) {
        sub->add_option("--workers", cfg.workers, "Threads for shifted solves")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };

    CLI::App* scheme_cmd = app.add_subcommand("scheme", "Print the quadrature nodes and weights");
    add_scheme_flags(scheme_cmd);

    CLI::App* apply_cmd = app.add_subcommand("apply", "Compute Q_k^{-beta}(A) f for a matrix or FEM operator");
    add_scheme_flags(apply_cmd);
    add_workers(apply_cmd);
    auto* matrix_opt = apply_cmd->add_option("--matrix", cfg.matrix_path, "Dense matrix file (n, then n rows)");
    auto* cells_opt = apply_cmd->add_option("--cells", cfg.cells, "Use the 1D FEM operator with this many cells");
    matrix_opt->excludes(cells_opt);
    apply_cmd->add_option("--rhs", cfg.rhs_path,
                          "Right-hand side, one decimal per line (default: ones, or pi_h 1 for FEM)");
    apply_cmd->add_option("--b", cfg.convection, "Convection coefficient for the FEM operator")
        ->capture_default_str();
    apply_cmd->add_option("--out", cfg.out_path, "Output vector file (default: stdout)");

    CLI::App* sinc_cmd = app.add_subcommand("sinc-study", "Sinc error e(k,r) against the spectral solution");
    sinc_cmd->add_option("--beta", cfg.betas, "Comma-separated beta list")->delimiter(',')->capture_default_str();
    sinc_cmd->add_option("--r", cfg.orders, "Comma-separated norm orders; 'beta' means r = beta")
        ->delimiter(',')
        ->capture_default_str();
    sinc_cmd->add_option("--k", cfg.ks, "Comma-separated k list")->delimiter(',')->capture_default_str();
    sinc_cmd->add_option("--cells", cfg.study_cells, "Number of mesh cells")->capture_default_str();
    sinc_cmd->add_option("--strategy", cfg.strategy, "balanced or uniform")
        ->check(CLI::IsMember({"balanced", "uniform"}))
        ->capture_default_str();
    sinc_cmd->add_option("--eps-s", cfg.eps_s, "s+ = beta - eps when r/2 >= beta")->capture_default_str();
    sinc_cmd->add_option("--out", cfg.out_path, "CSV output path (default: stdout)");
    add_workers(sinc_cmd);

    CLI::App* total_cmd = app.add_subcommand("total-study", "Total error against the series solution");
    total_cmd->add_option("--beta", cfg.betas, "Comma-separated beta list")->delimiter(',')->capture_default_str();
    total_cmd->add_option("--j-min", cfg.j_min, "Coarsest level, h = 2^-j")->capture_default_str();
    total_cmd->add_option("--j-max", cfg.j_max, "Finest level")->capture_default_str();
    total_cmd->add_option("--norm", cfg.norms, "Comma-separated norms (L2,H1)")->delimiter(',')->capture_default_str();
    total_cmd->add_option("--series", cfg.series_terms, "Reference series terms")->capture_default_str();
    total_cmd->add_option("--c-l2", cfg.l2_k_constant, "Constant in the L2 k rule")->capture_default_str();
    total_cmd->add_option("--c-h1", cfg.h1_k_constant, "Constant in the H1 k rule")->capture_default_str();
    total_cmd->add_option("--eps-s", cfg.eps_s, "s+ = beta - eps when 1/2 >= beta (H1)")->capture_default_str();
    total_cmd->add_option("--out", cfg.out_path, "CSV output path (default: stdout)");
    add_workers(total_cmd);

    CLI::App* check_cmd = app.add_subcommand("check", "Run the invariant suite");
    add_workers(check_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*scheme_cmd) {
            detail::check_beta(cfg.beta, "--beta");
            const SincScheme s = build_scheme(FractionalExponent(cfg.beta), cfg.k,
                                              parse_strategy(cfg.strategy), cfg.s_plus);
            using sincfrac::detail::format_double;
            out << "M=" << s.M << " N=" << s.N << " k=" << format_double(s.k) << " beta=" << format_double(s.beta)
                << " strategy=" << to_string(s.strategy) << '\n';
            out << "l,y,mu,w\n";
            for (std::size_t i = 0; i < s.size(); ++i) {
                out << s.index(i) << ',' << format_double(s.nodes[i]) << ',' << format_double(s.shifts[i]) << ','
                    << format_double(s.weights[i]) << '\n';
            }
            return kExitOk;
        }

        if (*apply_cmd) {
            detail::check_beta(cfg.beta, "--beta");
            if (cfg.matrix_path.empty() && !cfg.cells) {
                throw ValidationError("apply: one of --matrix or --cells is required");
            }
            const SincScheme s = build_scheme(FractionalExponent(cfg.beta), cfg.k,
                                              parse_strategy(cfg.strategy), cfg.s_plus);
            Vector result;
            if (!cfg.matrix_path.empty()) {
                if (cfg.convection != 0.0) throw ValidationError("--b applies only with --cells");
                const DenseAccretiveOperator op(read_matrix_file(cfg.matrix_path));
                Vector f = cfg.rhs_path.empty() ? Vector(op.dimension(), 1.0) : detail::read_vector_file(cfg.rhs_path);
                if (f.size() != op.dimension()) {
                    throw ValidationError("--rhs: expected " + std::to_string(op.dimension()) + " entries, got "
                                          + std::to_string(f.size()));
                }
                result = apply_quadrature(s, op, f, cfg.workers);
            } else {
                const Fem1dSystem sys(*cfg.cells, cfg.convection);
                Vector f = cfg.rhs_path.empty() ? l2_project(sys, 1.0) : detail::read_vector_file(cfg.rhs_path);
                if (f.size() != sys.dimension()) {
                    throw ValidationError("--rhs: expected " + std::to_string(sys.dimension()) + " entries, got "
                                          + std::to_string(f.size()));
                }
                result = apply_quadrature(s, sys, f, cfg.workers);
            }
            if (cfg.out_path.empty() || cfg.out_path == "-") {
                detail::write_vector(out, result);
            } else {
                std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
                if (!file) throw ValidationError("cannot open '" + cfg.out_path + "' for writing");
                detail::write_vector(file, result);
            }
            return kExitOk;
        }

        if (*sinc_cmd) {
            SincStudyConfig study;
            for (double b : cfg.betas) detail::check_beta(b, "--beta");
            study.betas = cfg.betas;
            study.orders.clear();
            for (const std::string& t : cfg.orders) study.orders.push_back(detail::parse_order(t));
            study.ks = cfg.ks;
            study.n_cells = cfg.study_cells;
            study.strategy = parse_strategy(cfg.strategy);
            study.eps_s = cfg.eps_s;
            study.workers = cfg.workers;
            if (cfg.verbose) err << "running " << sincfrac::detail::describe(study) << '\n';
            const ConvergenceTable table = sinc_error_study(study);
            detail::write_table(table, cfg.out_path, out);
            return kExitOk;
        }

        if (*total_cmd) {
            TotalStudyConfig study;
            for (double b : cfg.betas) detail::check_beta(b, "--beta");
            study.betas = cfg.betas;
            study.j_min = cfg.j_min;
            study.j_max = cfg.j_max;
            study.norms.clear();
            for (const std::string& n : cfg.norms) study.norms.push_back(parse_norm(n));
            study.series_terms = cfg.series_terms;
            study.l2_k_constant = cfg.l2_k_constant;
            study.h1_k_constant = cfg.h1_k_constant;
            study.eps_s = cfg.eps_s;
            study.workers = cfg.workers;
            if (cfg.verbose) err << "running " << sincfrac::detail::describe(study) << '\n';
            const ConvergenceTable table = total_error_study(study);
            for (const std::string& w : table.warnings) err << "warning: " << w << '\n';
            detail::write_table(table, cfg.out_path, out);
            return kExitOk;
        }

        if (*check_cmd) {
            bool all = true;
            for (const CheckResult& r : run_invariant_checks(cfg.workers)) {
                out << (r.passed ? "PASS " : "FAIL ") << r.name;
                if (!r.passed) out << ": " << r.detail;
                out << '\n';
                all = all && r.passed;
            }
            return all ? kExitOk : kExitNumerical;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitValidation;
}

} // namespace sincfrac::cli
