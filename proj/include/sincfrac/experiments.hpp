#pragma once

// Convergence studies for the sinc quadrature on the 1D finite element
// discretization of A^beta u = 1 on (0, 1):
//   - sinc_error_study: e(k, r) = ||u_h - u_{h,k}||_{D(A_h^{r/2})} against the
//     exact spectral u_h, with a least-squares fit of ln e against 1/k;
//   - total_error_study: ||u - u_{h,k}|| in L2 or H1 on dyadic meshes with k
//     tied to h, and EOCs between consecutive levels.

#include "sincfrac/common.hpp"
#include "sincfrac/fem1d.hpp"
#include "sincfrac/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#ifndef SINCFRAC_VERSION
#define SINCFRAC_VERSION "0.0.0"
#endif

namespace sincfrac {

inline constexpr double kFloorThreshold = 1e-13;

/// A norm order that is either a fixed number or tied to the current beta.
struct NormOrder {
    double value = 0.0;
    bool equals_beta = false;

    [[nodiscard]] double resolve(double beta) const noexcept { return equals_beta ? beta : value; }
};

/// s_plus used when balancing a scheme for errors measured in D(A^{r/2}):
/// r/2 while that stays below beta, otherwise beta - eps.
inline double balancing_shift(double beta, double r, double eps = 0.05)
{
    if (0.5 * r < beta) return 0.5 * r;
    return std::max(0.0, beta - eps);
}

struct SincStudyConfig {
    std::vector<double> betas{0.3, 0.5, 0.7};
    std::vector<NormOrder> orders{{0.0, false}, {0.0, true}, {1.0, false}};
    std::vector<double> ks{1.0, 0.75, 0.6, 0.5, 0.4, 0.35, 0.3};
    std::size_t n_cells = 512;
    SchemeStrategy strategy = SchemeStrategy::Balanced;
    double eps_s = 0.05;
    unsigned workers = 1;

    void validate() const
    {
        if (betas.empty() || orders.empty() || ks.empty()) {
            throw ValidationError("sinc study needs non-empty beta, r and k lists");
        }
        for (double b : betas)
            if (!(b > 0.0 && b < 1.0)) throw ValidationError("beta values must lie in (0, 1)");
        for (double k : ks)
            if (!(k > 0.0)) throw ValidationError("k values must be positive");
        for (const NormOrder& o : orders) {
            if (o.equals_beta) continue;
            if (!(o.value >= 0.0 && o.value <= 2.0)) throw ValidationError("r values must lie in [0, 2]");
        }
        if (n_cells < 2) throw ValidationError("n_cells must be at least 2");
        if (!(eps_s > 0.0)) throw ValidationError("eps_s must be positive");
    }
};

enum class NormKind { L2, H1 };

inline std::string_view to_string(NormKind n) { return n == NormKind::L2 ? "L2" : "H1"; }

inline NormKind parse_norm(std::string_view text)
{
    if (text == "L2" || text == "l2") return NormKind::L2;
    if (text == "H1" || text == "h1") return NormKind::H1;
    throw ValidationError("unknown norm '" + std::string(text) + "' (expected L2 or H1)");
}

struct TotalStudyConfig {
    std::vector<double> betas{0.3, 0.5, 0.7};
    int j_min = 3;
    int j_max = 8;
    std::vector<NormKind> norms{NormKind::L2, NormKind::H1};
    std::size_t series_terms = 50000;
    double l2_k_constant = 8.0;
    double h1_k_constant = 4.0;
    double eps_s = 0.05;
    unsigned workers = 1;

    void validate() const
    {
        if (betas.empty() || norms.empty()) throw ValidationError("total study needs beta and norm lists");
        for (double b : betas)
            if (!(b > 0.0 && b < 1.0)) throw ValidationError("beta values must lie in (0, 1)");
        if (j_min < 2 || j_max < j_min) throw ValidationError("mesh levels need 2 <= j_min <= j_max");
        if (j_max > 20) throw ValidationError("mesh levels above 20 are not supported");
        if (series_terms < 1000) throw ValidationError("series terms must be at least 1000");
        if (!(l2_k_constant > 0.0) || !(h1_k_constant > 0.0)) {
            throw ValidationError("k-rule constants must be positive");
        }
        for (NormKind n : norms) {
            if (n != NormKind::H1) continue;
            for (double b : betas) {
                if (!(b > 0.25)) {
                    throw ValidationError("the H1 k rule needs beta > 1/4 (got beta="
                                          + std::to_string(b) + ")");
                }
            }
        }
    }
};

/// k(h) for the total-error study:
///   L2: 1 / (c_L2 (2 beta + 1/2) ln(1/h)),  H1: 1 / (c_H1 (2 beta - 1/2) ln(1/h)).
inline double total_study_k(NormKind norm, double beta, double h, double l2_constant = 8.0,
                            double h1_constant = 4.0)
{
    const double log_inv_h = std::log(1.0 / h);
    if (norm == NormKind::L2) return 1.0 / (l2_constant * (2.0 * beta + 0.5) * log_inv_h);
    if (!(2.0 * beta - 0.5 > 0.0)) throw ValidationError("the H1 k rule needs beta > 1/4");
    return 1.0 / (h1_constant * (2.0 * beta - 0.5) * log_inv_h);
}

enum class StudyKind { Sinc, Total };

struct ConvergenceRow {
    double beta = 0.0;
    double r = 0.0;               // sinc study
    NormKind norm = NormKind::L2; // total study
    int level = 0;                // total study: j with h = 2^{-j}
    double h = 0.0;
    double k = 0.0;
    std::int64_t M = 0;
    std::int64_t N = 0;
    double error = 0.0;
    bool at_floor = false;
    std::optional<double> eoc;
};

struct SlopeFit {
    double beta = 0.0;
    double r = 0.0;
    double c = 0.0;
    std::size_t points = 0;
};

struct ConvergenceTable {
    StudyKind kind = StudyKind::Sinc;
    std::vector<ConvergenceRow> rows;
    std::vector<SlopeFit> slopes;
    std::vector<std::string> warnings;
    std::string config;
    std::string version = SINCFRAC_VERSION;
};

/// Least-squares slope of ys against xs, returned as the decay constant c of
/// e^{-c x} (i.e. the negated slope).
inline double fit_slope(std::span<const double> xs, std::span<const double> ys)
{
    require_same_size(xs.size(), ys.size(), "fit_slope");
    if (xs.size() < 3) throw ValidationError("fit_slope needs at least 3 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (!(sxx > 0.0)) throw ValidationError("fit_slope needs at least two distinct abscissae");
    const double c = -sxy / sxx;
    return c == 0.0 ? 0.0 : c;
}

namespace detail {

inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string join(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_double(xs[i]);
    }
    return out;
}

inline std::string describe(const SincStudyConfig& cfg)
{
    std::string orders;
    for (std::size_t i = 0; i < cfg.orders.size(); ++i) {
        if (i) orders += ',';
        orders += cfg.orders[i].equals_beta ? "beta" : format_double(cfg.orders[i].value);
    }
    return "sinc-study beta=" + join(cfg.betas) + " r=" + orders + " k=" + join(cfg.ks)
           + " cells=" + std::to_string(cfg.n_cells) + " strategy=" + std::string(to_string(cfg.strategy))
           + " eps_s=" + format_double(cfg.eps_s);
}

inline std::string describe(const TotalStudyConfig& cfg)
{
    std::string norms;
    for (std::size_t i = 0; i < cfg.norms.size(); ++i) {
        if (i) norms += ',';
        norms += to_string(cfg.norms[i]);
    }
    return "total-study beta=" + join(cfg.betas) + " j=" + std::to_string(cfg.j_min) + ".."
           + std::to_string(cfg.j_max) + " norm=" + norms + " series=" + std::to_string(cfg.series_terms)
           + " c_l2=" + format_double(cfg.l2_k_constant) + " c_h1=" + format_double(cfg.h1_k_constant)
           + " eps_s=" + format_double(cfg.eps_s);
}

} // namespace detail

inline ConvergenceTable sinc_error_study(const SincStudyConfig& cfg)
{
    cfg.validate();
    ConvergenceTable table;
    table.kind = StudyKind::Sinc;
    table.config = detail::describe(cfg);

    std::vector<double> ks = cfg.ks;
    std::sort(ks.begin(), ks.end(), std::greater<>());

    const Fem1dSystem sys(cfg.n_cells);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const Vector f_h = l2_project(sys, 1.0);

    for (double beta_value : cfg.betas) {
        const FractionalExponent beta(beta_value);
        const Vector u_h = semidiscrete_solution(sd, beta, f_h);
        for (const NormOrder& order : cfg.orders) {
            const double r = order.resolve(beta_value);
            const double s_plus = cfg.strategy == SchemeStrategy::Balanced
                                      ? balancing_shift(beta_value, r, cfg.eps_s)
                                      : 0.0;
            std::vector<double> xs;
            std::vector<double> ys;
            for (double k : ks) {
                const SincScheme scheme = build_scheme(beta, k, cfg.strategy, s_plus);
                const Vector u_hk = apply_quadrature(scheme, sys, f_h, cfg.workers);
                Vector diff(u_h.size());
                for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_h[i] - u_hk[i];

                ConvergenceRow row;
                row.beta = beta_value;
                row.r = r;
                row.h = sys.h();
                row.k = k;
                row.M = scheme.M;
                row.N = scheme.N;
                row.error = fractional_norm(sd, diff, r);
                row.at_floor = row.error < kFloorThreshold;
                if (!row.at_floor) {
                    xs.push_back(1.0 / k);
                    ys.push_back(std::log(row.error));
                }
                table.rows.push_back(row);
            }
            if (xs.size() >= 3) {
                table.slopes.push_back({beta_value, r, fit_slope(xs, ys), xs.size()});
            }
        }
    }
    return table;
}

inline ConvergenceTable total_error_study(const TotalStudyConfig& cfg)
{
    cfg.validate();
    ConvergenceTable table;
    table.kind = StudyKind::Total;
    table.config = detail::describe(cfg);

    for (NormKind norm : cfg.norms) {
        for (double beta_value : cfg.betas) {
            const FractionalExponent beta(beta_value);
            const double s_plus = norm == NormKind::L2 ? 0.0 : balancing_shift(beta_value, 1.0, cfg.eps_s);
            std::optional<double> previous;
            for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
                const std::size_t cells = std::size_t{1} << j;
                const Fem1dSystem sys(cells);
                const double h = sys.h();
                const double k = total_study_k(norm, beta_value, h, cfg.l2_k_constant, cfg.h1_k_constant);
                const SincScheme scheme = build_scheme(beta, k, SchemeStrategy::Balanced, s_plus);
                const Vector f_h = l2_project(sys, 1.0);
                const Vector u_hk = apply_quadrature(scheme, sys, f_h, cfg.workers);
                const ErrorNorms errs = error_norms_exact(sys, u_hk, beta, cfg.series_terms, cfg.workers);

                ConvergenceRow row;
                row.beta = beta_value;
                row.norm = norm;
                row.level = j;
                row.h = h;
                row.k = k;
                row.M = scheme.M;
                row.N = scheme.N;
                row.error = norm == NormKind::L2 ? errs.l2 : errs.h1;
                if (previous) row.eoc = std::log2(*previous / row.error);
                previous = row.error;
                table.rows.push_back(row);
            }

            const SeriesTail tail = series_tail_estimate(beta_value, cfg.series_terms);
            const double tail_norm = norm == NormKind::L2
                                         ? tail.l2
                                         : std::sqrt(tail.l2 * tail.l2
                                                     + tail.h1_seminorm * tail.h1_seminorm);
            if (previous && tail_norm > 0.01 * *previous) {
                table.warnings.push_back(
                    "series truncation: estimated " + std::string(to_string(norm)) + " tail "
                    + detail::format_double(tail_norm) + " exceeds 1% of the finest error "
                    + detail::format_double(*previous) + " at beta=" + detail::format_double(beta_value));
            }
        }
    }
    return table;
}

/// CSV with shortest round-trip decimals. Slope fits, warnings and the config
/// echo follow the rows as '#' comment lines.
inline void write_csv(const ConvergenceTable& table, std::ostream& out)
{
    using detail::format_double;
    if (table.kind == StudyKind::Sinc) {
        out << "beta,r,k,M,N,error,at_floor\n";
        for (const ConvergenceRow& row : table.rows) {
            out << format_double(row.beta) << ',' << format_double(row.r) << ','
                << format_double(row.k) << ',' << row.M << ',' << row.N << ','
                << format_double(row.error) << ',' << (row.at_floor ? 1 : 0) << '\n';
        }
    } else {
        out << "beta,norm,j,h,k,error,eoc\n";
        for (const ConvergenceRow& row : table.rows) {
            out << format_double(row.beta) << ',' << to_string(row.norm) << ',' << row.level << ','
                << format_double(row.h) << ',' << format_double(row.k) << ','
                << format_double(row.error) << ',' << (row.eoc ? format_double(*row.eoc) : "") << '\n';
        }
    }
    for (const SlopeFit& s : table.slopes) {
        out << "# slope beta=" << format_double(s.beta) << " r=" << format_double(s.r)
            << " c=" << format_double(s.c) << '\n';
    }
    for (const std::string& w : table.warnings) out << "# warning " << w << '\n';
    if (!table.rows.empty()) {
        out << "# config " << table.config << '\n';
        out << "# version " << table.version << '\n';
    }
}

inline void emit_csv(const ConvergenceTable& table, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(table, out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace sincfrac
