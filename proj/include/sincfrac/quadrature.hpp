#pragma once

// Sinc quadrature for negative fractional powers of accretive operators.
//
// For 0 < beta < 1,
//
//     A^{-beta} = (sin(pi beta) / pi) * int_{-inf}^{inf} e^{(1-beta) y} (e^y I + A)^{-1} dy,
//
// and the truncated trapezoid rule with spacing k over y_l = l k, l = -M..N,
// gives Q_k^{-beta}(A) f = sum_l w_l (mu_l I + A)^{-1} f with mu_l = e^{y_l} and
// w_l = (k sin(pi beta) / pi) e^{(1-beta) y_l}. The error of the infinite rule
// decays like e^{-pi^2/(2k)}; the two truncation tails decay like
// e^{-(beta - s) N k} and e^{-(1 - beta) M k}.

#include "sincfrac/common.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace sincfrac {

enum class SchemeStrategy { Balanced, Uniform };

inline std::string_view to_string(SchemeStrategy s)
{
    return s == SchemeStrategy::Balanced ? "balanced" : "uniform";
}

inline SchemeStrategy parse_strategy(std::string_view text)
{
    if (text == "balanced") return SchemeStrategy::Balanced;
    if (text == "uniform") return SchemeStrategy::Uniform;
    throw ValidationError("unknown scheme strategy '" + std::string(text)
                          + "' (expected balanced or uniform)");
}

struct SincScheme {
    double beta = 0.5;
    double k = 1.0;
    std::int64_t M = 0;
    std::int64_t N = 0;
    double s_plus = 0.0;
    SchemeStrategy strategy = SchemeStrategy::Balanced;
    Vector nodes;   // y_l, l = -M..N
    Vector shifts;  // mu_l = e^{y_l}
    Vector weights; // w_l
    // w_l / mu_l = (k sin(pi beta) / pi) e^{-beta y_l}; finite even where mu_l
    // overflows, in which case (mu_l I + A)^{-1} f equals f / mu_l to double precision.
    Vector scaled_weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
    [[nodiscard]] std::int64_t index(std::size_t i) const noexcept
    {
        return static_cast<std::int64_t>(i) - M;
    }
};

/// Any operator that can apply (mu I + A)^{-1} for mu > 0. Must be callable
/// concurrently on a const instance.
template <typename Op>
concept ShiftedSolveOperator = requires(const Op& op, double mu, std::span<const double> v) {
    { op.dimension() } -> std::convertible_to<std::size_t>;
    { op.shifted_solve(mu, v) } -> std::convertible_to<Vector>;
};

namespace detail {

inline std::int64_t ceil_count(double value)
{
    if (!std::isfinite(value) || value > 1e12) {
        throw ValidationError("quadrature truncation count is too large; increase k");
    }
    return std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(value)), 0);
}

} // namespace detail

/// Builds nodes, shifts and weights for the truncated sinc rule.
///
/// Balanced: N = ceil(pi^2 / (2 (beta - s_plus) k^2)), M = ceil(pi^2 / (2 (1 - beta) k^2)),
/// which equates the three exponential error terms. Uniform: M = N = ceil(1/k^2).
inline SincScheme build_scheme(FractionalExponent beta, double k, SchemeStrategy strategy,
                               double s_plus = 0.0)
{
    const double b = beta.value();
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ValidationError("quadrature spacing k must be positive, got " + std::to_string(k));
    }

    SincScheme scheme;
    scheme.beta = b;
    scheme.k = k;
    scheme.strategy = strategy;
    scheme.s_plus = s_plus;

    const double pi2 = std::numbers::pi * std::numbers::pi;
    if (strategy == SchemeStrategy::Balanced) {
        if (!(s_plus >= 0.0) || !(s_plus < b)) {
            throw ValidationError("balanced scheme needs 0 <= s_plus < beta (s_plus="
                                  + std::to_string(s_plus) + ", beta=" + std::to_string(b) + ")");
        }
        scheme.N = detail::ceil_count(pi2 / (2.0 * (b - s_plus) * k * k));
        scheme.M = detail::ceil_count(pi2 / (2.0 * (1.0 - b) * k * k));
    } else {
        scheme.N = scheme.M = detail::ceil_count(1.0 / (k * k));
    }

    const auto count = static_cast<std::size_t>(scheme.M + scheme.N + 1);
    scheme.nodes.resize(count);
    scheme.shifts.resize(count);
    scheme.weights.resize(count);
    scheme.scaled_weights.resize(count);
    const double scale = k * std::sin(std::numbers::pi * b) / std::numbers::pi;
    for (std::size_t i = 0; i < count; ++i) {
        const double y = static_cast<double>(scheme.index(i)) * k;
        scheme.nodes[i] = y;
        // Far lower-tail shifts underflow; their terms are negligible, but the
        // shift must stay positive.
        scheme.shifts[i] = std::max(std::exp(y), std::numeric_limits<double>::min());
        scheme.weights[i] = scale * std::exp((1.0 - b) * y);
        scheme.scaled_weights[i] = scale * std::exp(-b * y);
    }
    return scheme;
}

/// Q_k^{-beta}(A) f. Shifted solves are independent and run on `workers`
/// threads; accumulation is always sequential in ascending l with compensated
/// summation, so the result does not depend on the worker count.
template <ShiftedSolveOperator Op>
Vector apply_quadrature(const SincScheme& scheme, const Op& op, std::span<const double> f,
                        unsigned workers = 1)
{
    const std::size_t n = op.dimension();
    require_same_size(n, f.size(), "apply_quadrature");

    KahanVectorSum acc(n);
    // Bounded batches keep memory at O(batch * n) for schemes with many nodes.
    const std::size_t batch = std::max<std::size_t>(64, 16 * static_cast<std::size_t>(workers));
    std::vector<Vector> solved;
    for (std::size_t start = 0; start < scheme.size(); start += batch) {
        const std::size_t len = std::min(batch, scheme.size() - start);
        solved.assign(len, Vector{});
        parallel_for(len, workers, [&](std::size_t i) {
            const double mu = scheme.shifts[start + i];
            if (std::isfinite(mu)) solved[i] = op.shifted_solve(mu, f);
        });
        for (std::size_t i = 0; i < len; ++i) {
            if (solved[i].empty()) {
                acc.add(scheme.scaled_weights[start + i], f);
                continue;
            }
            require_same_size(n, solved[i].size(), "shifted_solve result");
            acc.add(scheme.weights[start + i], solved[i]);
        }
    }
    return std::move(acc).release();
}

/// The rule applied to the scalar operator lambda: sum_l w_l / (mu_l + lambda).
inline double scalar_quadrature(const SincScheme& scheme, double lambda)
{
    if (!(lambda > 0.0)) {
        throw ValidationError("scalar_quadrature needs lambda > 0, got " + std::to_string(lambda));
    }
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < scheme.size(); ++i) {
        const double mu = scheme.shifts[i];
        const double term = std::isfinite(mu) ? scheme.weights[i] / (mu + lambda)
                                              : scheme.scaled_weights[i];
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

/// The three error terms of the sinc rule, without the unknown constant.
struct ErrorBoundTerms {
    double discretization; // e^{-pi^2/(2k)} / sinh(pi^2/(2k))
    double upper_tail;     // e^{-(beta - s_plus) N k}
    double lower_tail;     // e^{-(1 - beta) M k}

    [[nodiscard]] double total() const noexcept { return discretization + upper_tail + lower_tail; }
};

inline ErrorBoundTerms error_bound_terms(const SincScheme& scheme, double s_plus)
{
    const double b = scheme.beta;
    if (!(s_plus >= 0.0) || !(s_plus < b)) {
        throw ValidationError("error bound needs 0 <= s_plus < beta");
    }
    const double a = std::numbers::pi * std::numbers::pi / (2.0 * scheme.k);
    const double k = scheme.k;
    ErrorBoundTerms terms{};
    // exp(-a)/sinh(a) = 2 / (e^{2a} - 1), stable for large a.
    terms.discretization = 2.0 / std::expm1(2.0 * a);
    terms.upper_tail = std::exp(-(b - s_plus) * static_cast<double>(scheme.N) * k);
    terms.lower_tail = std::exp(-(1.0 - b) * static_cast<double>(scheme.M) * k);
    return terms;
}

inline double theoretical_error_bound(const SincScheme& scheme, double s_plus)
{
    return error_bound_terms(scheme, s_plus).total();
}

} // namespace sincfrac
