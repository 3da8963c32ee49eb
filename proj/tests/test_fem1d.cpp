#include "sincfrac/checks.hpp"
#include "sincfrac/fem1d.hpp"
#include "sincfrac/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sincfrac;

namespace {

constexpr double kPi = std::numbers::pi;

// ||g||_{L2(0,1)} by composite Gauss on a fine grid.
double l2_norm(const std::function<double(double)>& g, std::size_t cells = 2000)
{
    const GaussRule rule = gauss_legendre(8);
    double s = 0.0;
    const double h = 1.0 / static_cast<double>(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = (static_cast<double>(c) + 0.5 * (rule.nodes[q] + 1.0)) * h;
            s += 0.5 * h * rule.weights[q] * g(x) * g(x);
        }
    }
    return std::sqrt(s);
}

} // namespace

TEST(Assemble, TwoCells)
{
    const Fem1dSystem sys = assemble(2);
    ASSERT_EQ(sys.dimension(), 1u);
    EXPECT_DOUBLE_EQ(sys.h(), 0.5);
    EXPECT_NEAR(sys.mass().diag[0], 1.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(sys.stiffness().diag[0], 4.0);
}

TEST(Assemble, FourCellsStiffness)
{
    const Fem1dSystem sys = assemble(4);
    ASSERT_EQ(sys.dimension(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(sys.stiffness().diag[i], 8.0);
        EXPECT_NEAR(sys.mass().diag[i], 4.0 / 24.0, 1e-15);
        if (i > 0) {
            EXPECT_DOUBLE_EQ(sys.stiffness().lower[i], -4.0);
            EXPECT_NEAR(sys.mass().lower[i], 1.0 / 24.0, 1e-15);
        }
        if (i < 2) EXPECT_DOUBLE_EQ(sys.stiffness().upper[i], -4.0);
    }
}

TEST(Assemble, SymmetryAndConvection)
{
    const Fem1dSystem plain = assemble(10);
    for (std::size_t i = 1; i < plain.dimension(); ++i) {
        EXPECT_EQ(plain.stiffness().lower[i], plain.stiffness().upper[i - 1]);
        EXPECT_EQ(plain.mass().lower[i], plain.mass().upper[i - 1]);
    }
    const Fem1dSystem conv = assemble(10, 3.0);
    for (std::size_t i = 1; i < conv.dimension(); ++i) {
        EXPECT_NEAR(conv.stiffness().upper[i - 1] - plain.stiffness().upper[i - 1], 1.5, 1e-12);
        EXPECT_NEAR(conv.stiffness().lower[i] - plain.stiffness().lower[i], -1.5, 1e-12);
    }
    EXPECT_EQ(conv.stiffness().diag, plain.stiffness().diag);
}

TEST(Assemble, RejectsTooFewCells)
{
    EXPECT_THROW(assemble(1), ValidationError);
    EXPECT_THROW(assemble(0), ValidationError);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly)
{
    for (std::size_t p : {3u, 6u}) {
        const GaussRule g = gauss_legendre(p);
        for (std::size_t deg = 0; deg < 2 * p; ++deg) {
            double s = 0.0;
            for (std::size_t i = 0; i < p; ++i) s += g.weights[i] * std::pow(g.nodes[i], static_cast<double>(deg));
            const double exact = deg % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(deg + 1);
            EXPECT_NEAR(s, exact, 1e-14) << "points=" << p << " degree=" << deg;
        }
    }
}

TEST(L2Project, ConstantOnTwoCells)
{
    const Fem1dSystem sys(2);
    const Vector c = l2_project(sys, 1.0);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0], 1.5, 1e-14);
}

TEST(L2Project, HatFunctionIsReproduced)
{
    const Fem1dSystem sys(8);
    const std::size_t j = 3; // node x_3, vector index 2
    auto hat = [&](double x) {
        const double xj = static_cast<double>(j) * sys.h();
        return std::max(0.0, 1.0 - std::abs(x - xj) / sys.h());
    };
    const Vector c = l2_project(sys, hat);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c[i], i == j - 1 ? 1.0 : 0.0, 1e-13);
}

TEST(L2Project, ConstantMomentsArePreserved)
{
    for (std::size_t cells : {4u, 17u, 64u}) {
        const Fem1dSystem sys(cells);
        const Vector c = l2_project(sys, 1.0);
        // sum_i (M c)_i = sum_i int phi_i = 1 - h.
        const Vector mc = sys.mass().multiply(c);
        EXPECT_NEAR(kahan_sum(mc), 1.0 - sys.h(), 1e-13);
        const Vector general = l2_project(sys, [](double) { return 1.0; });
        EXPECT_LE(relative_difference(general, c), 1e-13);
    }
}

TEST(L2Project, StableInL2)
{
    const Fem1dSystem sys(32);
    const std::vector<std::function<double(double)>> samples{
        [](double x) { return std::sin(3.0 * kPi * x); },
        [](double x) { return std::exp(x) - 0.5; },
        [](double x) { return x * x * (1.0 - x) + 0.2; },
        [](double x) { return std::cos(17.0 * x); },
    };
    for (const auto& g : samples) {
        const Vector c = l2_project(sys, g);
        EXPECT_LE(sys.mass_norm(c), l2_norm(g) * (1.0 + 1e-10));
    }
}

TEST(FemShiftedSolve, EigenvectorIsScaled)
{
    const Fem1dSystem sys(16);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    for (std::size_t l : {0u, 4u, 14u}) {
        const Vector psi = sd.column(l);
        for (double mu : {0.1, 3.0, 1e3}) {
            const Vector x = fem_shifted_solve(sys, mu, psi);
            Vector expected = psi;
            for (double& e : expected) e /= (mu + sd.eigenvalues[l]);
            EXPECT_LE(relative_difference(x, expected), 1e-12);
        }
    }
}

TEST(FemShiftedSolve, AccretiveBound)
{
    std::mt19937_64 rng(21);
    const Fem1dSystem sys(50);
    for (int trial = 0; trial < 30; ++trial) {
        const Vector v = random_vector(sys.dimension(), rng);
        for (double mu : {1e-2, 1.0, 1e4}) {
            EXPECT_LE(sys.mass_norm(sys.shifted_solve(mu, v)), sys.mass_norm(v) / mu);
        }
    }
    // Large mu: the resolvent approaches v / mu.
    const Vector v = random_vector(sys.dimension(), rng);
    const double mu = 1e12;
    Vector scaled = v;
    for (double& x : scaled) x /= mu;
    EXPECT_LE(relative_difference(sys.shifted_solve(mu, v), scaled), 1e-6);
}

TEST(FemShiftedSolve, MatchesDenseLu)
{
    std::mt19937_64 rng(22);
    for (double b : {0.0, 2.0}) {
        const Fem1dSystem sys(37, b);
        const Vector v = random_vector(sys.dimension(), rng);
        for (double mu : {1e-4, 1.0, 1e5}) {
            const Vector thomas = sys.shifted_solve(mu, v);
            const LuFactorization lu(sys.shifted_matrix(mu).to_dense());
            EXPECT_LE(relative_difference(thomas, lu.solve(sys.mass().multiply(v))), 1e-12);
        }
    }
}

TEST(FemShiftedSolve, RejectsNonpositiveShift)
{
    const Fem1dSystem sys(4);
    EXPECT_THROW(sys.shifted_solve(0.0, Vector(3, 1.0)), ValidationError);
    EXPECT_THROW(sys.shifted_solve(-2.0, Vector(3, 1.0)), ValidationError);
    EXPECT_THROW(sys.shifted_solve(1.0, Vector(2, 1.0)), ValidationError);
}

TEST(Eigenpairs, TwoCells)
{
    const FemSpectralData sd = discrete_eigenpairs(Fem1dSystem(2));
    ASSERT_EQ(sd.size(), 1u);
    EXPECT_NEAR(sd.eigenvalues[0], 12.0, 1e-12);
    EXPECT_NEAR(4.0 / (1.0 / 3.0), 12.0, 1e-12);
}

TEST(Eigenpairs, SmallestApproachesPiSquared)
{
    const FemSpectralData sd = discrete_eigenpairs(Fem1dSystem(512));
    EXPECT_LE(std::abs(sd.eigenvalues[0] - kPi * kPi), 1e-3);
    // O(h^2) at fixed l.
    const double coarse = std::abs(fem_eigenvalue(1, 1.0 / 64) - kPi * kPi);
    const double fine = std::abs(fem_eigenvalue(1, 1.0 / 128) - kPi * kPi);
    EXPECT_NEAR(coarse / fine, 4.0, 0.05);
}

TEST(Eigenpairs, MassOrthonormalAndResidual)
{
    const Fem1dSystem sys(8);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const Vector p1 = sd.column(0);
    const Vector p2 = sd.column(1);
    EXPECT_NEAR(sys.mass_inner(p1, p1), 1.0, 1e-12);
    EXPECT_NEAR(sys.mass_inner(p2, p2), 1.0, 1e-12);
    EXPECT_NEAR(sys.mass_inner(p1, p2), 0.0, 1e-12);

    const Fem1dSystem big(128);
    const FemSpectralData bsd = discrete_eigenpairs(big);
    for (std::size_t l = 0; l < bsd.size(); ++l) {
        const Vector psi = bsd.column(l);
        const Vector s = big.stiffness().multiply(psi);
        const Vector m = big.mass().multiply(psi);
        Vector r(psi.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = s[i] - bsd.eigenvalues[l] * m[i];
        EXPECT_LE(norm2(r), 1e-10 * bsd.eigenvalues[l] * norm2(m));
    }
}

TEST(Eigenpairs, AgreeWithDenseGeneralizedSolve)
{
    // Independent route: eigenvalues of M^{-1/2} S M^{-1/2} via Jacobi are the
    // same as those of the generalized problem; use the similar symmetric form
    // L^{-1} S L^{-T} with M = L L^T computed densely.
    const Fem1dSystem sys(12);
    const std::size_t n = sys.dimension();
    const DenseMatrix m = sys.mass().to_dense();
    DenseMatrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
            l(i, j) = i == j ? std::sqrt(s) : s / l(j, j);
        }
    }
    auto lower_solve = [&](Vector b) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t p = 0; p < i; ++p) b[i] -= l(i, p) * b[p];
            b[i] /= l(i, i);
        }
        return b;
    };
    const DenseMatrix s = sys.stiffness().to_dense();
    DenseMatrix x(n); // L^{-1} S
    for (std::size_t j = 0; j < n; ++j) {
        Vector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = s(i, j);
        col = lower_solve(col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
    }
    DenseMatrix c(n); // (L^{-1} (L^{-1} S)^T)^T = L^{-1} S L^{-T}
    for (std::size_t j = 0; j < n; ++j) {
        Vector row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = x(j, i);
        row = lower_solve(row);
        for (std::size_t i = 0; i < n; ++i) c(j, i) = row[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) c(i, j) = c(j, i) = 0.5 * (c(i, j) + c(j, i));
    const SpectralData dense = symmetric_eigendecomposition(c);
    const FemSpectralData closed = discrete_eigenpairs(sys);
    for (std::size_t k = 0; k < n; ++k) {
        EXPECT_NEAR(dense.eigenvalues[k], closed.eigenvalues[k], 1e-11 * closed.eigenvalues[k]);
    }
}

TEST(Eigenpairs, RejectsConvection)
{
    EXPECT_THROW(discrete_eigenpairs(Fem1dSystem(8, 0.5)), ValidationError);
}

TEST(FractionalNorm, SingleMode)
{
    const Fem1dSystem sys(20);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    for (std::size_t l : {0u, 7u, 18u}) {
        for (double r : {0.0, 0.3, 1.0, 2.0}) {
            EXPECT_NEAR(fractional_norm(sd, sd.column(l), r), std::pow(sd.eigenvalues[l], r / 2.0),
                        1e-11 * std::pow(sd.eigenvalues[l], r / 2.0));
        }
    }
}

TEST(FractionalNorm, ZeroOrderIsMassNorm)
{
    std::mt19937_64 rng(23);
    const Fem1dSystem sys(40);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const Vector v = random_vector(sys.dimension(), rng);
    EXPECT_NEAR(fractional_norm(sd, v, 0.0), sys.mass_norm(v), 1e-12 * sys.mass_norm(v));
}

TEST(FractionalNorm, OrderTwoIsNormOfDiscreteOperator)
{
    std::mt19937_64 rng(24);
    const Fem1dSystem sys(40);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    // ||A_h v||_M with A_h v = M^{-1} S v: equals (S v)^T M^{-1} (S v).
    for (const Vector& v : {sd.column(0), random_vector(sys.dimension(), rng)}) {
        const Vector sv = sys.stiffness().multiply(v);
        const Vector ahv = thomas_solve(sys.mass(), sv);
        const double direct = std::sqrt(dot(sv, ahv));
        EXPECT_NEAR(fractional_norm(sd, v, 2.0), direct, 1e-10 * direct);
    }
    EXPECT_NEAR(fractional_norm(sd, sd.column(0), 2.0), sd.eigenvalues[0], 1e-10 * sd.eigenvalues[0]);
}

TEST(FractionalNorm, RejectsNegativeOrder)
{
    const FemSpectralData sd = discrete_eigenpairs(Fem1dSystem(4));
    EXPECT_THROW(fractional_norm(sd, Vector(3, 1.0), -0.5), ValidationError);
}

TEST(SemidiscreteSolution, EigenvectorData)
{
    const FemSpectralData sd = discrete_eigenpairs(Fem1dSystem(16));
    const Vector psi = sd.column(2);
    const Vector u = semidiscrete_solution(sd, FractionalExponent(0.4), psi);
    Vector expected = psi;
    for (double& x : expected) x *= std::pow(sd.eigenvalues[2], -0.4);
    EXPECT_LE(relative_difference(u, expected), 1e-12);
}

TEST(SemidiscreteSolution, InvertedByPositivePower)
{
    const Fem1dSystem sys(64);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const Vector f = l2_project(sys, 1.0);
    const Vector u = semidiscrete_solution(sd, FractionalExponent(0.7), f);
    EXPECT_LE(relative_difference(fem_spectral_power(sd, 0.7, u), f), 1e-10);
}

TEST(SemidiscreteSolution, QuadratureAgreesWithinBound)
{
    const Fem1dSystem sys(512);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const FractionalExponent beta(0.5);
    const Vector f = l2_project(sys, 1.0);
    const Vector u_h = semidiscrete_solution(sd, beta, f);
    const SincScheme s = build_scheme(beta, 0.2, SchemeStrategy::Balanced);
    const Vector u_hk = apply_quadrature(s, sys, f, 4);
    Vector diff(u_h.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_h[i] - u_hk[i];
    EXPECT_LE(sys.mass_norm(diff), 10.0 * theoretical_error_bound(s, 0.0) * sys.mass_norm(f));
}

TEST(SpectralCommutation, QuadratureActsModeByMode)
{
    for (std::size_t cells : {8u, 64u}) {
        const Fem1dSystem sys(cells);
        const FemSpectralData sd = discrete_eigenpairs(sys);
        const Vector f = l2_project(sys, 1.0);
        for (double b : {0.25, 0.5, 0.75}) {
            const SincScheme s = build_scheme(FractionalExponent(b), 0.4, SchemeStrategy::Balanced);
            const Vector direct = apply_quadrature(s, sys, f, 3);
            Vector c = sd.mode_coefficients(f);
            for (std::size_t l = 0; l < sd.size(); ++l) c[l] *= scalar_quadrature(s, sd.eigenvalues[l]);
            EXPECT_LE(relative_difference(direct, sd.synthesize(c)), 1e-11) << cells << " " << b;
        }
    }
}

TEST(SpectralCommutation, ErrorNormTwoWays)
{
    const Fem1dSystem sys(128);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const Vector f = l2_project(sys, 1.0);
    const FractionalExponent beta(0.3);
    const Vector u_h = semidiscrete_solution(sd, beta, f);
    const Vector fc = sd.mode_coefficients(f);
    for (double k : {0.7, 0.4}) {
        const SincScheme s = build_scheme(beta, k, SchemeStrategy::Balanced);
        const Vector u_hk = apply_quadrature(s, sys, f);
        Vector diff(u_h.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_h[i] - u_hk[i];
        for (double r : {0.0, 0.3, 1.0}) {
            double spectral = 0.0;
            for (std::size_t l = 0; l < sd.size(); ++l) {
                const double lam = sd.eigenvalues[l];
                const double d = (std::pow(lam, -0.3) - scalar_quadrature(s, lam)) * fc[l];
                spectral += std::pow(lam, r) * d * d;
            }
            spectral = std::sqrt(spectral);
            // Forming u_h - u_hk cancels; the floor scales with ||u_h||_r.
            const double floor = 1e-12 * fractional_norm(sd, u_h, r);
            EXPECT_NEAR(fractional_norm(sd, diff, r), spectral, 1e-11 * spectral + floor);
        }
    }
}

TEST(ReferenceSeries, VanishesOnTheBoundary)
{
    const Vector pts{0.0, 1.0};
    for (double b : {0.3, 0.7}) {
        const Vector u = reference_solution_series(FractionalExponent(b), 2001, pts);
        EXPECT_NEAR(u[0], 0.0, 1e-12);
        EXPECT_NEAR(u[1], 0.0, 1e-12);
    }
}

TEST(ReferenceSeries, EvenTermsVanish)
{
    EXPECT_EQ(series_coefficient(0.5, 2), 0.0);
    EXPECT_EQ(series_coefficient(0.5, 100), 0.0);
    const Vector pts{0.3};
    const FractionalExponent beta(0.5);
    EXPECT_EQ(reference_solution_series(beta, 3, pts)[0], reference_solution_series(beta, 4, pts)[0]);
}

TEST(ReferenceSeries, SingleTermAtMidpoint)
{
    // 2 * (pi^2)^{-1/2} * (2/pi) * sin(pi/2) = 4 / pi^2.
    const Vector u = reference_solution_series(FractionalExponent(0.5), 1, Vector{0.5});
    EXPECT_NEAR(u[0], 4.0 / (kPi * kPi), 1e-15);
    EXPECT_NEAR(u[0], 0.405285, 1e-6);
}

TEST(ReferenceSeries, RecurrenceMatchesDirectSummation)
{
    for (double x : {0.013, 0.25, 0.5, 0.77, 0.999}) {
        for (double b : {0.3, 0.7}) {
            double value = 0.0;
            double deriv = 0.0;
            for (std::size_t l = 49999;; l -= 2) {
                const double c = series_coefficient(b, l);
                value += c * std::sin(kPi * static_cast<double>(l) * x);
                deriv += c * kPi * static_cast<double>(l) * std::cos(kPi * static_cast<double>(l) * x);
                if (l == 1) break;
            }
            const SeriesValue got = reference_series_point(b, 50000, x);
            EXPECT_NEAR(got.value, value, 1e-12);
            EXPECT_NEAR(got.derivative, deriv, 1e-9 * (1.0 + std::abs(deriv)));
        }
    }
}

TEST(ReferenceSeries, SolvesTheContinuousProblem)
{
    // u_h from the FE eigenpairs approaches the series as h -> 0.
    const FractionalExponent beta(0.6);
    const Fem1dSystem sys(256);
    const FemSpectralData sd = discrete_eigenpairs(sys);
    const Vector u_h = semidiscrete_solution(sd, beta, l2_project(sys, 1.0));
    const double mid = u_h[127]; // x = 1/2
    const double series = reference_solution_series(beta, 50000, Vector{0.5})[0];
    EXPECT_NEAR(mid, series, 1e-3 * series);
}

TEST(ErrorNorms, InterpolantConvergesAtSecondOrder)
{
    const FractionalExponent beta(0.5);
    const std::size_t terms = 5;
    std::vector<double> errs;
    for (std::size_t cells : {16u, 32u, 64u}) {
        const Fem1dSystem sys(cells);
        Vector nodes(sys.dimension());
        for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<double>(i + 1) * sys.h();
        const Vector interp = reference_solution_series(beta, terms, nodes);
        errs.push_back(error_norms(sys, interp, beta, terms).l2);
    }
    EXPECT_NEAR(std::log2(errs[0] / errs[1]), 2.0, 0.05);
    EXPECT_NEAR(std::log2(errs[1] / errs[2]), 2.0, 0.05);
}

TEST(ErrorNorms, ZeroApproximationGivesSeriesNorm)
{
    for (double b : {0.3, 0.7}) {
        const std::size_t terms = 1001;
        double parseval_l2 = 0.0;
        double parseval_semi = 0.0;
        for (std::size_t l = 1; l <= terms; l += 2) {
            const double c = series_coefficient(b, l);
            parseval_l2 += 0.5 * c * c;
            parseval_semi += 0.5 * c * c * std::pow(kPi * static_cast<double>(l), 2);
        }
        const Fem1dSystem sys(512);
        const ErrorNorms e = error_norms(sys, Vector(sys.dimension(), 0.0), FractionalExponent(b), terms);
        EXPECT_NEAR(e.l2, std::sqrt(parseval_l2), 1e-9);
        EXPECT_NEAR(e.h1, std::sqrt(parseval_l2 + parseval_semi), 1e-6 * e.h1);
        const ErrorNorms x = error_norms_exact(sys, Vector(sys.dimension(), 0.0), FractionalExponent(b), terms);
        EXPECT_NEAR(x.l2, std::sqrt(parseval_l2), 1e-12);
        EXPECT_NEAR(x.h1, std::sqrt(parseval_l2 + parseval_semi), 1e-12 * x.h1);
    }
}

TEST(ErrorNorms, GaussAndClosedFormAgreeOnResolvedSeries)
{
    // When the mesh resolves every mode, 6-point Gauss is accurate and the two
    // routes must coincide.
    const FractionalExponent beta(0.4);
    const std::size_t terms = 41;
    const Fem1dSystem sys(256);
    const Vector f = l2_project(sys, 1.0);
    const Vector u = apply_quadrature(build_scheme(beta, 0.3, SchemeStrategy::Balanced), sys, f);
    const ErrorNorms g = error_norms(sys, u, beta, terms, 4);
    const ErrorNorms x = error_norms_exact(sys, u, beta, terms, 4);
    EXPECT_NEAR(g.l2, x.l2, 1e-7 * x.l2);
    EXPECT_NEAR(g.h1, x.h1, 1e-7 * x.h1);
}

TEST(ErrorNorms, Deterministic)
{
    const FractionalExponent beta(0.5);
    const Fem1dSystem sys(64);
    const Vector u = l2_project(sys, 1.0);
    const ErrorNorms a = error_norms(sys, u, beta, 5000, 1);
    const ErrorNorms b = error_norms(sys, u, beta, 5000, 6);
    EXPECT_EQ(a.l2, b.l2);
    EXPECT_EQ(a.h1, b.h1);
    const ErrorNorms c = error_norms_exact(sys, u, beta, 5000, 1);
    const ErrorNorms d = error_norms_exact(sys, u, beta, 5000, 6);
    EXPECT_EQ(c.l2, d.l2);
    EXPECT_EQ(c.h1, d.h1);
}
