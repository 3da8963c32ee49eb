#pragma once

// Continuous piecewise-linear finite elements on the uniform mesh of (0, 1)
// with homogeneous Dirichlet conditions. Coefficient vectors hold the values
// at the interior nodes x_j = j h, j = 1..n_cells-1.
//
// The discrete operator A_h is defined through the form against the mass
// pairing, so in coordinates (mu I + A_h)^{-1} v is the solution c of
// (mu M + S) c = M v.

#include "sincfrac/common.hpp"
#include "sincfrac/dense.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace sincfrac {

/// Tridiagonal matrix; lower[i] = (i, i-1), upper[i] = (i, i+1). lower[0] and
/// upper[n-1] are unused and kept at zero.
struct Tridiagonal {
    Vector lower;
    Vector diag;
    Vector upper;

    Tridiagonal() = default;
    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    [[nodiscard]] Vector multiply(std::span<const double> v) const
    {
        const std::size_t n = size();
        require_same_size(n, v.size(), "Tridiagonal::multiply");
        Vector out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += lower[i] * v[i - 1];
            if (i + 1 < n) s += upper[i] * v[i + 1];
            out[i] = s;
        }
        return out;
    }

    [[nodiscard]] DenseMatrix to_dense() const
    {
        const std::size_t n = size();
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = diag[i];
            if (i > 0) m(i, i - 1) = lower[i];
            if (i + 1 < n) m(i, i + 1) = upper[i];
        }
        return m;
    }
};

/// Thomas algorithm (no pivoting). Valid for diagonally dominant or SPD systems.
inline Vector thomas_solve(const Tridiagonal& t, std::span<const double> rhs)
{
    const std::size_t n = t.size();
    require_same_size(n, rhs.size(), "thomas_solve");
    Vector c(n);
    Vector x(n);
    double pivot = t.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) pivot = t.diag[i] - t.lower[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("zero pivot in tridiagonal solve");
        }
        c[i] = (i + 1 < n) ? t.upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - (i > 0 ? t.lower[i] * x[i - 1] : 0.0)) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

class Fem1dSystem {
public:
    Fem1dSystem(std::size_t n_cells, double convection = 0.0)
        : n_cells_(n_cells), convection_(convection)
    {
        if (n_cells < 2) throw ValidationError("fem1d needs at least 2 cells");
        h_ = 1.0 / static_cast<double>(n_cells);
        const std::size_t n = n_cells - 1;
        mass_ = Tridiagonal(n);
        stiffness_ = Tridiagonal(n);
        for (std::size_t i = 0; i < n; ++i) {
            mass_.diag[i] = 4.0 * h_ / 6.0;
            stiffness_.diag[i] = 2.0 / h_;
            if (i > 0) {
                mass_.lower[i] = h_ / 6.0;
                stiffness_.lower[i] = -1.0 / h_ - 0.5 * convection;
            }
            if (i + 1 < n) {
                mass_.upper[i] = h_ / 6.0;
                stiffness_.upper[i] = -1.0 / h_ + 0.5 * convection;
            }
        }
    }

    [[nodiscard]] std::size_t n_cells() const noexcept { return n_cells_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return n_cells_ - 1; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double convection() const noexcept { return convection_; }
    [[nodiscard]] const Tridiagonal& mass() const noexcept { return mass_; }
    [[nodiscard]] const Tridiagonal& stiffness() const noexcept { return stiffness_; }

    [[nodiscard]] Tridiagonal shifted_matrix(double mu) const
    {
        Tridiagonal t(dimension());
        for (std::size_t i = 0; i < dimension(); ++i) {
            t.lower[i] = mu * mass_.lower[i] + stiffness_.lower[i];
            t.diag[i] = mu * mass_.diag[i] + stiffness_.diag[i];
            t.upper[i] = mu * mass_.upper[i] + stiffness_.upper[i];
        }
        return t;
    }

    /// Coefficients of (mu I + A_h)^{-1} applied to the function with coefficients v.
    [[nodiscard]] Vector shifted_solve(double mu, std::span<const double> v) const
    {
        if (!(mu > 0.0)) throw ValidationError("fem shifted solve needs mu > 0");
        require_same_size(dimension(), v.size(), "fem_shifted_solve");
        return thomas_solve(shifted_matrix(mu), mass_.multiply(v));
    }

    [[nodiscard]] double mass_inner(std::span<const double> a, std::span<const double> b) const
    {
        return dot(a, mass_.multiply(b));
    }

    [[nodiscard]] double mass_norm(std::span<const double> v) const
    {
        return std::sqrt(mass_inner(v, v));
    }

private:
    std::size_t n_cells_;
    double convection_;
    double h_ = 0.0;
    Tridiagonal mass_;
    Tridiagonal stiffness_;
};

inline Fem1dSystem assemble(std::size_t n_cells, double convection = 0.0)
{
    return Fem1dSystem(n_cells, convection);
}

inline Vector fem_shifted_solve(const Fem1dSystem& sys, double mu, std::span<const double> v)
{
    return sys.shifted_solve(mu, v);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    Vector nodes;
    Vector weights;
};

inline GaussRule gauss_legendre(std::size_t points)
{
    GaussRule rule{Vector(points), Vector(points)};
    const double n = static_cast<double>(points);
    for (std::size_t i = 0; i < points; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t j = 2; j <= points; ++j) {
                const double jj = static_cast<double>(j);
                const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[points - 1 - i] = x;
        rule.weights[points - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

/// Load vector b_i = int_0^1 f phi_i, 3-point Gauss per cell.
inline Vector load_vector(const Fem1dSystem& sys, const std::function<double(double)>& f)
{
    const GaussRule g = gauss_legendre(3);
    const std::size_t n = sys.dimension();
    const double h = sys.h();
    Vector b(n, 0.0);
    for (std::size_t cell = 0; cell < sys.n_cells(); ++cell) {
        const double left = static_cast<double>(cell) * h;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            const double t = 0.5 * (g.nodes[q] + 1.0);
            const double wf = 0.5 * h * g.weights[q] * f(left + t * h);
            // Cell `cell` carries the right half of hat (cell) and the left half of hat (cell+1);
            // hat j lives at vector index j-1.
            if (cell >= 1) b[cell - 1] += wf * (1.0 - t);
            if (cell + 1 <= n) b[cell] += wf * t;
        }
    }
    return b;
}

/// Coefficients of pi_h f, the L2-orthogonal projection onto the FE space.
inline Vector l2_project(const Fem1dSystem& sys, const std::function<double(double)>& f)
{
    return thomas_solve(sys.mass(), load_vector(sys, f));
}

/// Constant data: the load vector is h * value exactly.
inline Vector l2_project(const Fem1dSystem& sys, double value)
{
    return thomas_solve(sys.mass(), Vector(sys.dimension(), sys.h() * value));
}

/// Closed-form eigenpairs of A_h for the pure Laplacian. Column l-1 of
/// `eigenvectors` is psi_l, normalized in the mass inner product.
struct FemSpectralData {
    double h = 0.0;
    Vector eigenvalues;
    Vector normalization;
    DenseMatrix eigenvectors;
    Tridiagonal mass;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }

    [[nodiscard]] Vector column(std::size_t l) const
    {
        Vector v(size());
        for (std::size_t i = 0; i < size(); ++i) v[i] = eigenvectors(i, l);
        return v;
    }

    /// (v, psi_l)_M for every l.
    [[nodiscard]] Vector mode_coefficients(std::span<const double> v) const
    {
        require_same_size(size(), v.size(), "mode_coefficients");
        const Vector mv = mass.multiply(v);
        Vector out(size(), 0.0);
        for (std::size_t l = 0; l < size(); ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < size(); ++i) s += eigenvectors(i, l) * mv[i];
            out[l] = s;
        }
        return out;
    }

    [[nodiscard]] Vector synthesize(std::span<const double> coeffs) const
    {
        Vector out(size(), 0.0);
        for (std::size_t l = 0; l < size(); ++l) {
            const double c = coeffs[l];
            for (std::size_t i = 0; i < size(); ++i) out[i] += c * eigenvectors(i, l);
        }
        return out;
    }
};

inline double fem_eigenvalue(std::size_t l, double h)
{
    const double c = std::cos(static_cast<double>(l) * std::numbers::pi * h);
    return 6.0 * (1.0 - c) / (h * h * (2.0 + c));
}

inline FemSpectralData discrete_eigenpairs(const Fem1dSystem& sys)
{
    if (sys.convection() != 0.0) {
        throw ValidationError("closed-form eigenpairs exist only without convection (b = 0)");
    }
    const std::size_t n = sys.dimension();
    const double h = sys.h();
    FemSpectralData sd{h, Vector(n), Vector(n), DenseMatrix(n), sys.mass()};
    for (std::size_t l = 1; l <= n; ++l) {
        const double angle = static_cast<double>(l) * std::numbers::pi * h;
        sd.eigenvalues[l - 1] = fem_eigenvalue(l, h);
        sd.normalization[l - 1] = std::sqrt(6.0 / (2.0 + std::cos(angle)));
        for (std::size_t j = 1; j <= n; ++j) {
            sd.eigenvectors(j - 1, l - 1)
                = sd.normalization[l - 1] * std::sin(angle * static_cast<double>(j));
        }
    }
    return sd;
}

/// (sum_l lambda_l^r |(v, psi_l)_M|^2)^{1/2}, the norm of D(A_h^{r/2}).
inline double fractional_norm(const FemSpectralData& sd, std::span<const double> v, double r)
{
    if (!(r >= 0.0)) throw ValidationError("fractional_norm needs r >= 0");
    const Vector c = sd.mode_coefficients(v);
    double s = 0.0;
    for (std::size_t l = 0; l < sd.size(); ++l) {
        s += std::pow(sd.eigenvalues[l], r) * c[l] * c[l];
    }
    return std::sqrt(s);
}

/// sum_l lambda_l^p (v, psi_l)_M psi_l.
inline Vector fem_spectral_power(const FemSpectralData& sd, double p, std::span<const double> v)
{
    Vector c = sd.mode_coefficients(v);
    for (std::size_t l = 0; l < sd.size(); ++l) c[l] *= std::pow(sd.eigenvalues[l], p);
    return sd.synthesize(c);
}

/// u_h = A_h^{-beta} f_h, computed exactly from the eigenpairs.
inline Vector semidiscrete_solution(const FemSpectralData& sd, FractionalExponent beta,
                                    std::span<const double> f_coeffs)
{
    return fem_spectral_power(sd, -beta.value(), f_coeffs);
}

// Reference solution of A^beta u = 1 on (0, 1) with u(0) = u(1) = 0:
//
//     u(x) = 2 sum_l lambda_l^{-beta} ((1 - (-1)^l) / (pi l)) sin(pi l x),  lambda_l = (pi l)^2.
//
// Only odd l contribute. Terms are summed from the highest l down.

struct SeriesValue {
    double value = 0.0;
    double derivative = 0.0;
};

inline double series_coefficient(double beta, std::size_t l)
{
    if (l % 2 == 0) return 0.0;
    const double pl = std::numbers::pi * static_cast<double>(l);
    return 4.0 * std::pow(pl, -2.0 * beta) / pl;
}

inline SeriesValue reference_series_point(double beta, std::size_t n_terms, double x)
{
    if (n_terms == 0) return {};
    std::size_t top = (n_terms % 2 == 1) ? n_terms : n_terms - 1;
    const double step_angle = -2.0 * std::numbers::pi * x;
    const double step_c = std::cos(step_angle);
    const double step_s = std::sin(step_angle);

    SeriesValue out;
    double zc = 0.0;
    double zs = 0.0;
    std::size_t since_reset = 0;
    for (std::size_t l = top;; l -= 2) {
        if (since_reset == 0) {
            // Periodic direct evaluation bounds the drift of the rotation recurrence.
            const double a = std::numbers::pi * static_cast<double>(l) * x;
            zc = std::cos(a);
            zs = std::sin(a);
        }
        const double c = series_coefficient(beta, l);
        out.value += c * zs;
        out.derivative += c * std::numbers::pi * static_cast<double>(l) * zc;
        if (l == 1) break;
        const double nc = zc * step_c - zs * step_s;
        const double ns = zc * step_s + zs * step_c;
        zc = nc;
        zs = ns;
        since_reset = (since_reset + 1) % 512;
    }
    return out;
}

inline Vector reference_solution_series(FractionalExponent beta, std::size_t n_terms,
                                        std::span<const double> points)
{
    if (n_terms < 1) throw ValidationError("reference series needs at least one term");
    Vector out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[i] = reference_series_point(beta.value(), n_terms, points[i]).value;
    }
    return out;
}

/// Integral estimate of what the series drops past n_terms, in L2 and in the
/// H1 seminorm.
struct SeriesTail {
    double l2 = 0.0;
    double h1_seminorm = 0.0;
};

inline SeriesTail series_tail_estimate(double beta, std::size_t n_terms)
{
    // ||sum c_l sin(pi l x)||^2 = sum c_l^2 / 2 with c_l^2 = 16 (pi l)^{-4 beta - 2};
    // odd l > L, so the sum is about half the integral from L.
    const double pi = std::numbers::pi;
    const double L = static_cast<double>(std::max<std::size_t>(n_terms, 1));
    const double p0 = 4.0 * beta + 2.0;
    const double p1 = 4.0 * beta;
    SeriesTail tail;
    tail.l2 = std::sqrt(4.0 * std::pow(pi, -p0) * std::pow(L, 1.0 - p0) / (p0 - 1.0));
    tail.h1_seminorm = p1 > 1.0
                           ? std::sqrt(4.0 * std::pow(pi, -p1) * std::pow(L, 1.0 - p1) / (p1 - 1.0))
                           : std::numeric_limits<double>::infinity();
    return tail;
}

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// ||u - u_hk|| in L2 and full H1, with u the truncated reference series and
/// u_hk the piecewise-linear function with interior coefficients u_hk.
/// Integrated with 6-point Gauss per cell.
inline ErrorNorms error_norms(const Fem1dSystem& sys, std::span<const double> u_hk,
                              FractionalExponent beta, std::size_t n_terms, unsigned workers = 1)
{
    require_same_size(sys.dimension(), u_hk.size(), "error_norms");
    const GaussRule g = gauss_legendre(6);
    const std::size_t q = g.nodes.size();
    const std::size_t cells = sys.n_cells();
    const double h = sys.h();

    std::vector<SeriesValue> ref(cells * q);
    parallel_for(cells, workers, [&](std::size_t cell) {
        const double left = static_cast<double>(cell) * h;
        for (std::size_t p = 0; p < q; ++p) {
            const double x = left + 0.5 * (g.nodes[p] + 1.0) * h;
            ref[cell * q + p] = reference_series_point(beta.value(), n_terms, x);
        }
    });

    auto nodal = [&](std::size_t j) { return (j == 0 || j == cells) ? 0.0 : u_hk[j - 1]; };
    double l2 = 0.0;
    double semi = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const double ul = nodal(cell);
        const double ur = nodal(cell + 1);
        const double slope = (ur - ul) / h;
        double cell_l2 = 0.0;
        double cell_semi = 0.0;
        for (std::size_t p = 0; p < q; ++p) {
            const double t = 0.5 * (g.nodes[p] + 1.0);
            const SeriesValue& u = ref[cell * q + p];
            const double e = u.value - (ul + t * (ur - ul));
            const double de = u.derivative - slope;
            cell_l2 += g.weights[p] * e * e;
            cell_semi += g.weights[p] * de * de;
        }
        l2 += 0.5 * h * cell_l2;
        semi += 0.5 * h * cell_semi;
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

/// Same norms as error_norms, evaluated without quadrature: Parseval for the
/// series, closed-form moments of the hat functions for the cross terms, and
/// the mass and stiffness matrices for the FE function. Exact for the
/// truncated series up to rounding; O(n_cells * n_terms).
inline ErrorNorms error_norms_exact(const Fem1dSystem& sys, std::span<const double> u_hk,
                                    FractionalExponent beta, std::size_t n_terms, unsigned workers = 1)
{
    require_same_size(sys.dimension(), u_hk.size(), "error_norms_exact");
    const double b = beta.value();
    const double h = sys.h();
    const std::size_t n = sys.dimension();
    const double pi = std::numbers::pi;

    // (u, phi_j) = sum_l c_l sin(pi l x_j) * 2 (1 - cos(pi l h)) / ((pi l)^2 h);
    // (u', phi_j') = (2 u(x_j) - u(x_{j-1}) - u(x_{j+1})) / h.
    Vector moment(n, 0.0);
    Vector nodal(n + 2, 0.0);
    parallel_for(n, workers, [&](std::size_t i) {
        const double x = static_cast<double>(i + 1) * h;
        double m = 0.0;
        double v = 0.0;
        std::size_t top = (n_terms % 2 == 1) ? n_terms : n_terms - 1;
        for (std::size_t l = top;; l -= 2) {
            const double pl = pi * static_cast<double>(l);
            const double c = series_coefficient(b, l);
            const double sx = std::sin(pl * x);
            v += c * sx;
            m += c * sx * 2.0 * (1.0 - std::cos(pl * h)) / (pl * pl * h);
            if (l == 1) break;
        }
        moment[i] = m;
        nodal[i + 1] = v;
    });

    double u_l2 = 0.0;
    double u_semi = 0.0;
    {
        std::size_t top = (n_terms % 2 == 1) ? n_terms : n_terms - 1;
        for (std::size_t l = top;; l -= 2) {
            const double c = series_coefficient(b, l);
            const double pl = pi * static_cast<double>(l);
            u_l2 += 0.5 * c * c;
            u_semi += 0.5 * c * c * pl * pl;
            if (l == 1) break;
        }
    }

    double cross_l2 = 0.0;
    double cross_semi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cross_l2 += u_hk[i] * moment[i];
        cross_semi += u_hk[i] * (2.0 * nodal[i + 1] - nodal[i] - nodal[i + 2]) / h;
    }
    const double fe_l2 = dot(u_hk, sys.mass().multiply(u_hk));
    const double fe_semi = dot(u_hk, sys.stiffness().multiply(u_hk));

    const double l2_sq = std::max(0.0, u_l2 - 2.0 * cross_l2 + fe_l2);
    const double semi_sq = std::max(0.0, u_semi - 2.0 * cross_semi + fe_semi);
    return {std::sqrt(l2_sq), std::sqrt(l2_sq + semi_sq)};
}

} // namespace sincfrac
