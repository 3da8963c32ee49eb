#pragma once

// Dense operator backend: LU-based shifted solves for (possibly nonsymmetric)
// accretive matrices and a Jacobi eigensolver that serves as the spectral
// oracle for symmetric ones.

#include "sincfrac/common.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sincfrac {

/// Row-major square matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * n_, n_};
    }

    [[nodiscard]] Vector multiply(std::span<const double> v) const
    {
        require_same_size(n_, v.size(), "DenseMatrix::multiply");
        Vector out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = dot(row(i), v);
        return out;
    }

    [[nodiscard]] double frobenius_norm() const noexcept
    {
        double s = 0.0;
        for (double x : data_) s += x * x;
        return std::sqrt(s);
    }

    [[nodiscard]] double max_asymmetry() const noexcept
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
        return worst;
    }

private:
    std::size_t n_ = 0;
    Vector data_;
};

/// LU factorization with partial pivoting, PA = LU, packed in one matrix.
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.size())
    {
        const std::size_t n = lu_.size();
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(lu_(i, j)));

        for (std::size_t c = 0; c < n; ++c) {
            std::size_t pivot = c;
            for (std::size_t r = c + 1; r < n; ++r)
                if (std::abs(lu_(r, c)) > std::abs(lu_(pivot, c))) pivot = r;
            if (!(std::abs(lu_(pivot, c)) > 1e-14 * scale)) {
                throw NumericalError("singular shifted system (operator is not accretive?)");
            }
            if (pivot != c) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(c, j), lu_(pivot, j));
                std::swap(perm_[c], perm_[pivot]);
            }
            const double d = lu_(c, c);
            for (std::size_t r = c + 1; r < n; ++r) {
                const double factor = lu_(r, c) / d;
                lu_(r, c) = factor;
                if (factor == 0.0) continue;
                for (std::size_t j = c + 1; j < n; ++j) lu_(r, j) -= factor * lu_(c, j);
            }
        }
    }

    [[nodiscard]] Vector solve(std::span<const double> b) const
    {
        const std::size_t n = lu_.size();
        require_same_size(n, b.size(), "LuFactorization::solve");
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// A dense matrix whose symmetric part is positive definite. shifted_solve
/// factors mu I + A on every call unless the factorization cache is enabled.
class DenseAccretiveOperator {
public:
    explicit DenseAccretiveOperator(DenseMatrix a, bool cache_factorizations = false)
        : a_(std::move(a)), cache_(cache_factorizations ? std::make_unique<Cache>() : nullptr)
    {
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return a_.size(); }
    [[nodiscard]] const DenseMatrix& matrix() const noexcept { return a_; }

    [[nodiscard]] Vector shifted_solve(double mu, std::span<const double> v) const
    {
        if (!(mu > 0.0)) throw ValidationError("shifted_solve needs mu > 0");
        require_same_size(dimension(), v.size(), "dense_shifted_solve");
        if (!cache_) return factor(mu).solve(v);
        return cached_factor(mu)->solve(v);
    }

private:
    struct Cache {
        std::shared_mutex mutex;
        std::map<std::uint64_t, std::shared_ptr<const LuFactorization>> entries;
    };

    [[nodiscard]] LuFactorization factor(double mu) const
    {
        DenseMatrix shifted = a_;
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted(i, i) += mu;
        return LuFactorization(std::move(shifted));
    }

    [[nodiscard]] std::shared_ptr<const LuFactorization> cached_factor(double mu) const
    {
        const auto key = std::bit_cast<std::uint64_t>(mu);
        {
            std::shared_lock lock(cache_->mutex);
            if (auto it = cache_->entries.find(key); it != cache_->entries.end()) return it->second;
        }
        auto fresh = std::make_shared<const LuFactorization>(factor(mu));
        std::unique_lock lock(cache_->mutex);
        return cache_->entries.emplace(key, std::move(fresh)).first->second;
    }

    DenseMatrix a_;
    std::unique_ptr<Cache> cache_;
};

inline Vector dense_shifted_solve(const DenseAccretiveOperator& op, double mu,
                                  std::span<const double> v)
{
    return op.shifted_solve(mu, v);
}

/// Eigenpairs in ascending order; column l of `eigenvectors` pairs with
/// eigenvalues[l]. Columns are orthonormal in the Euclidean inner product.
struct SpectralData {
    Vector eigenvalues;
    DenseMatrix eigenvectors;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }

    [[nodiscard]] Vector column(std::size_t l) const
    {
        Vector v(size());
        for (std::size_t i = 0; i < size(); ++i) v[i] = eigenvectors(i, l);
        return v;
    }
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// 1e-13 * ||A||_F.
inline SpectralData symmetric_eigendecomposition(const DenseMatrix& a)
{
    const std::size_t n = a.size();
    const double scale = a.frobenius_norm();
    if (a.max_asymmetry() > 1e-12 * std::max(1.0, scale)) {
        throw ValidationError("symmetric_eigendecomposition: matrix is not symmetric");
    }

    DenseMatrix d = a;
    DenseMatrix v = DenseMatrix::identity(n);
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += d(i, j) * d(i, j);
        return std::sqrt(s);
    };

    const double tol = 1e-13 * scale;
    constexpr int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = d(p, q);
                if (apq == 0.0) continue;
                // Rutishauser's rotation: t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)).
                const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta)
                                 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    const double drp = d(r, p);
                    const double drq = d(r, q);
                    d(r, p) = c * drp - s * drq;
                    d(r, q) = s * drp + c * drq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double dpr = d(p, r);
                    const double dqr = d(q, r);
                    d(p, r) = c * dpr - s * dqr;
                    d(q, r) = s * dpr + c * dqr;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_norm() > tol) {
        throw NumericalError("Jacobi eigensolver did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return d(x, x) < d(y, y); });

    SpectralData sd{Vector(n), DenseMatrix(n)};
    for (std::size_t l = 0; l < n; ++l) {
        sd.eigenvalues[l] = d(order[l], order[l]);
        for (std::size_t i = 0; i < n; ++i) sd.eigenvectors(i, l) = v(i, order[l]);
    }
    return sd;
}

inline SpectralData symmetric_eigendecomposition(const DenseAccretiveOperator& op)
{
    return symmetric_eigendecomposition(op.matrix());
}

enum class PowerSign { Negative, Positive };

/// sum_l lambda_l^p (f, v_l) v_l.
inline Vector spectral_power(const SpectralData& sd, double p, std::span<const double> f)
{
    const std::size_t n = sd.size();
    require_same_size(n, f.size(), "spectral_power");
    Vector out(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        double coeff = 0.0;
        for (std::size_t i = 0; i < n; ++i) coeff += sd.eigenvectors(i, l) * f[i];
        coeff *= std::pow(sd.eigenvalues[l], p);
        for (std::size_t i = 0; i < n; ++i) out[i] += coeff * sd.eigenvectors(i, l);
    }
    return out;
}

/// Negative sign: A^{-beta} f. Positive sign: A^{r/2} f (beta is ignored).
inline Vector spectral_fractional_apply(const SpectralData& sd, FractionalExponent beta,
                                        std::span<const double> f, PowerSign sign, double r = 0.0)
{
    if (sign == PowerSign::Negative) return spectral_power(sd, -beta.value(), f);
    if (!(r >= 0.0)) throw ValidationError("positive spectral power needs r >= 0");
    return spectral_power(sd, 0.5 * r, f);
}

/// Plain-text matrix: first token n, then n*n whitespace-separated decimals.
inline DenseMatrix read_matrix(std::istream& in, const std::string& origin = "<stream>")
{
    long long n = 0;
    if (!(in >> n) || n <= 0) {
        throw ValidationError(origin + ": expected a positive dimension on the first line");
    }
    DenseMatrix m(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (!(in >> m(i, j))) {
                throw ValidationError(origin + ": expected " + std::to_string(n * n)
                                      + " entries, row " + std::to_string(i + 1)
                                      + " is short or malformed");
            }
        }
    }
    std::string trailing;
    if (in >> trailing) throw ValidationError(origin + ": unexpected trailing data '" + trailing + "'");
    return m;
}

inline DenseMatrix read_matrix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
    return read_matrix(in, path);
}

} // namespace sincfrac
