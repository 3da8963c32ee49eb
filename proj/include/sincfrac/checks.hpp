#pragma once

// Quick invariant suite behind `sincfrac check`.

#include "sincfrac/dense.hpp"
#include "sincfrac/fem1d.hpp"
#include "sincfrac/quadrature.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace sincfrac {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline DenseMatrix random_spd(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> dist;
    DenseMatrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = dist(rng);
    DenseMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) s += b(m, i) * b(m, j);
            a(i, j) = s / static_cast<double>(n);
        }
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
    return a;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> dist;
    Vector v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

inline double relative_difference(std::span<const double> a, std::span<const double> b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline std::vector<CheckResult> run_invariant_checks(unsigned workers = 1)
{
    std::vector<CheckResult> results;
    auto record = [&](std::string name, const std::function<std::string()>& body) {
        CheckResult r{std::move(name), false, {}};
        try {
            r.detail = body();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    };
    std::mt19937_64 rng(20170419);

    record("scheme weights positive, nodes equally spaced", [] {
        for (double b : {0.1, 0.5, 0.9}) {
            for (double k : {1.0, 0.5, 0.2}) {
                for (auto strat : {SchemeStrategy::Balanced, SchemeStrategy::Uniform}) {
                    const SincScheme s = build_scheme(FractionalExponent(b), k, strat);
                    for (std::size_t i = 0; i < s.size(); ++i) {
                        if (!(s.weights[i] > 0.0) || !(s.shifts[i] > 0.0)) return std::string("nonpositive weight");
                        if (i > 0 && std::abs(s.nodes[i] - s.nodes[i - 1] - k) > 1e-12 * std::max(1.0, std::abs(s.nodes[i])))
                            return std::string("uneven node spacing");
                    }
                }
            }
        }
        return std::string();
    });

    record("scalar quadrature converges to lambda^-beta", [] {
        for (double lambda : {0.1, 1.0, 10.0}) {
            for (double b : {0.25, 0.5, 0.75}) {
                const SincScheme s = build_scheme(FractionalExponent(b), 0.25, SchemeStrategy::Balanced);
                const double err = std::abs(scalar_quadrature(s, lambda) - std::pow(lambda, -b));
                if (err > 100.0 * theoretical_error_bound(s, 0.0)) {
                    std::ostringstream msg;
                    msg << "lambda=" << lambda << " beta=" << b << " error=" << err;
                    return msg.str();
                }
            }
        }
        return std::string();
    });

    record("dense quadrature commutes with the spectral decomposition", [&] {
        const DenseAccretiveOperator op(random_spd(12, rng));
        const SpectralData sd = symmetric_eigendecomposition(op);
        const Vector f = random_vector(12, rng);
        const SincScheme s = build_scheme(FractionalExponent(0.5), 0.4, SchemeStrategy::Balanced);
        const Vector direct = apply_quadrature(s, op, f, workers);
        Vector modal(12, 0.0);
        for (std::size_t l = 0; l < 12; ++l) {
            const Vector v = sd.column(l);
            const double c = scalar_quadrature(s, sd.eigenvalues[l]) * dot(f, v);
            for (std::size_t i = 0; i < 12; ++i) modal[i] += c * v[i];
        }
        const double rel = relative_difference(direct, modal);
        return rel <= 1e-12 ? std::string() : "relative difference " + std::to_string(rel);
    });

    record("fem quadrature commutes with the closed-form eigenpairs", [&] {
        const Fem1dSystem sys(32);
        const FemSpectralData sd = discrete_eigenpairs(sys);
        const Vector f = l2_project(sys, 1.0);
        const SincScheme s = build_scheme(FractionalExponent(0.3), 0.4, SchemeStrategy::Balanced);
        const Vector direct = apply_quadrature(s, sys, f, workers);
        Vector c = sd.mode_coefficients(f);
        for (std::size_t l = 0; l < sd.size(); ++l) c[l] *= scalar_quadrature(s, sd.eigenvalues[l]);
        const double rel = relative_difference(direct, sd.synthesize(c));
        return rel <= 1e-11 ? std::string() : "relative difference " + std::to_string(rel);
    });

    record("fem resolvent is M-accretive", [&] {
        const Fem1dSystem sys(64);
        for (int trial = 0; trial < 20; ++trial) {
            const Vector v = random_vector(sys.dimension(), rng);
            for (double mu : {1e-2, 1.0, 1e4}) {
                if (sys.mass_norm(sys.shifted_solve(mu, v)) > sys.mass_norm(v) / mu) {
                    return "violated at mu=" + std::to_string(mu);
                }
            }
        }
        return std::string();
    });

    record("fem closed-form eigenpairs", [] {
        const Fem1dSystem sys(64);
        const FemSpectralData sd = discrete_eigenpairs(sys);
        for (std::size_t l = 0; l < sd.size(); ++l) {
            const Vector psi = sd.column(l);
            const Vector s = sys.stiffness().multiply(psi);
            const Vector m = sys.mass().multiply(psi);
            double res = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                const double d = s[i] - sd.eigenvalues[l] * m[i];
                res += d * d;
            }
            if (std::sqrt(res) > 1e-10 * sd.eigenvalues[l] * norm2(m)) return "residual at l=" + std::to_string(l + 1);
            if (std::abs(dot(psi, m) - 1.0) > 1e-10) return "normalization at l=" + std::to_string(l + 1);
        }
        return std::string();
    });

    record("tridiagonal solve matches dense LU", [&] {
        const Fem1dSystem sys(40);
        const Vector v = random_vector(sys.dimension(), rng);
        for (double mu : {1e-3, 1.0, 1e3}) {
            const Vector thomas = sys.shifted_solve(mu, v);
            const LuFactorization lu(sys.shifted_matrix(mu).to_dense());
            const Vector dense = lu.solve(sys.mass().multiply(v));
            if (relative_difference(thomas, dense) > 1e-12) return "mismatch at mu=" + std::to_string(mu);
        }
        return std::string();
    });

    record("quadrature result independent of worker count", [] {
        const Fem1dSystem sys(128);
        const Vector f = l2_project(sys, 1.0);
        const SincScheme s = build_scheme(FractionalExponent(0.7), 0.3, SchemeStrategy::Balanced);
        const Vector serial = apply_quadrature(s, sys, f, 1);
        const Vector threaded = apply_quadrature(s, sys, f, 8);
        return serial == threaded ? std::string() : std::string("outputs differ");
    });

    return results;
}

} // namespace sincfrac
