#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sincfrac {

using Vector = std::vector<double>;

/// Bad input: out-of-range parameters, malformed files, dimension mismatches.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that should not fail did (singular shifted system, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exponent of the negative fractional power, strictly inside (0, 1).
class FractionalExponent {
public:
    explicit FractionalExponent(double beta) : beta_(beta)
    {
        if (!(beta > 0.0 && beta < 1.0)) {
            throw ValidationError("beta must lie in the open interval (0, 1), got "
                                  + std::to_string(beta));
        }
    }

    [[nodiscard]] double value() const noexcept { return beta_; }

private:
    double beta_;
};

inline void require_same_size(std::size_t expected, std::size_t got, const char* what)
{
    if (expected != got) {
        throw ValidationError(std::string(what) + ": dimension mismatch (expected "
                              + std::to_string(expected) + ", got " + std::to_string(got)
                              + ")");
    }
}

/// Compensated accumulation of a sequence of vectors, component-wise.
class KahanVectorSum {
public:
    explicit KahanVectorSum(std::size_t n) : sum_(n, 0.0), carry_(n, 0.0) {}

    void add(double weight, std::span<const double> term)
    {
        for (std::size_t i = 0; i < sum_.size(); ++i) {
            const double y = weight * term[i] - carry_[i];
            const double t = sum_[i] + y;
            carry_[i] = (t - sum_[i]) - y;
            sum_[i] = t;
        }
    }

    [[nodiscard]] const Vector& value() const noexcept { return sum_; }
    [[nodiscard]] Vector release() && { return std::move(sum_); }

private:
    Vector sum_;
    Vector carry_;
};

inline double kahan_sum(std::span<const double> terms)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double term : terms) {
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline unsigned default_workers() noexcept
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work is handed
/// out dynamically, so fn must write only to slots owned by its index. The
/// first exception thrown by any task is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn)
{
    const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(body);
    body();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace sincfrac
