#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lyapspec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy; the CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration / precondition on user input (exit 2).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Work or depth cap exceeded (exit 3).
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// Operation refused because log|f'| is cohomologous to a constant (exit 4).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

// Precondition violated by a caller (inadmissible word, boundary exponent, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative scheme failed to converge or a root does not exist.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains(const Interval& other, double tol = 0.0) const {
        return other.lo >= lo - tol && other.hi <= hi + tol;
    }
};

// Online log(sum(exp(a_i))); order of add() calls is part of the result,
// so callers must feed terms in a deterministic order.
class LogSumExp {
public:
    void add(double a) {
        if (std::isinf(a) && a < 0) return;
        if (empty_) {
            max_ = a;
            sum_ = 1.0;
            empty_ = false;
            return;
        }
        if (a > max_) {
            sum_ = sum_ * std::exp(max_ - a) + 1.0;
            max_ = a;
        } else {
            sum_ += std::exp(a - max_);
        }
    }
    bool empty() const { return empty_; }
    double value() const { return empty_ ? -kInf : max_ + std::log(sum_); }

private:
    bool empty_ = true;
    double max_ = 0.0;
    double sum_ = 0.0;
};

// Least squares y ~ sum_k coeff[k] * basis[k](x). Returns coefficients and
// the rms residual. Small dense normal equations, enough for depth ladders.
struct FitResult {
    std::vector<double> coeff;
    double rms_residual = 0.0;
};

FitResult fit_least_squares(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<std::function<double(double)>>& basis);

// Convenience: y ~ a + b*(1/n) [+ c*log(n)/n when with_log_term].
struct TrendFit {
    double intercept = 0.0;
    double rms_residual = 0.0;
};
TrendFit fit_inverse_depth_trend(const std::vector<int>& depths,
                                 const std::vector<double>& values,
                                 bool with_log_term);

// Nonincreasing isotonic regression (pool adjacent violators).
void enforce_nonincreasing(std::vector<double>& v);

// Replace values by their lower convex hull in (x, v); x strictly increasing.
// Returns the max downward adjustment applied.
double enforce_convex(const std::vector<double>& x, std::vector<double>& v);

// FNV-1a over bytes, hex string; used for run manifests.
std::string fnv1a_hex(const std::string& bytes);

// %.17g with classic-locale semantics; round-trips doubles.
std::string format_double(double v);

// Thread budget: LYAPSPEC_THREADS if set (>=1), else hardware concurrency.
int thread_budget();

// Runs fn(i) for i in [0, n); partitions deterministically, results must be
// written to per-index slots by the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

inline bool nearly_equal(double a, double b, double tol) {
    return std::fabs(a - b) <= tol;
}

}  // namespace lyapspec
