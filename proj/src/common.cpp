#include "lyapspec/common.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

namespace lyapspec {

FitResult fit_least_squares(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<std::function<double(double)>>& basis) {
    const std::size_t n = x.size();
    const std::size_t k = basis.size();
    if (y.size() != n || n < k) throw DomainError("fit_least_squares: underdetermined system");

    // normal equations A c = b
    std::vector<double> a(k * k, 0.0), b(k, 0.0);
    std::vector<double> phi(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) phi[j] = basis[j](x[i]);
        for (std::size_t r = 0; r < k; ++r) {
            b[r] += phi[r] * y[i];
            for (std::size_t c = 0; c < k; ++c) a[r * k + c] += phi[r] * phi[c];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<int> piv(k);
    for (std::size_t i = 0; i < k; ++i) piv[i] = static_cast<int>(i);
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(a[r * k + col]) > std::fabs(a[best * k + col])) best = r;
        if (best != col) {
            for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[best * k + c]);
            std::swap(b[col], b[best]);
        }
        double d = a[col * k + col];
        if (std::fabs(d) < 1e-300) throw DomainError("fit_least_squares: singular basis");
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = a[r * k + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> c(k, 0.0);
    for (std::size_t ri = k; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t cc = ri + 1; cc < k; ++cc) s -= a[ri * k + cc] * c[cc];
        c[ri] = s / a[ri * k + ri];
    }

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < k; ++j) pred += c[j] * basis[j](x[i]);
        ss += (pred - y[i]) * (pred - y[i]);
    }
    FitResult out;
    out.coeff = std::move(c);
    out.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return out;
}

TrendFit fit_inverse_depth_trend(const std::vector<int>& depths,
                                 const std::vector<double>& values,
                                 bool with_log_term) {
    std::vector<double> x(depths.begin(), depths.end());
    std::vector<std::function<double(double)>> basis;
    basis.emplace_back([](double) { return 1.0; });
    basis.emplace_back([](double n) { return 1.0 / n; });
    if (with_log_term && x.size() >= 4)
        basis.emplace_back([](double n) { return std::log(n) / n; });
    while (x.size() < basis.size()) basis.pop_back();
    FitResult r = fit_least_squares(x, values, basis);
    return TrendFit{r.coeff[0], r.rms_residual};
}

void enforce_nonincreasing(std::vector<double>& v) {
    // pool adjacent violators for a nonincreasing target
    const std::size_t n = v.size();
    if (n < 2) return;
    std::vector<double> level;
    std::vector<std::size_t> count;
    level.reserve(n);
    count.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        level.push_back(v[i]);
        count.push_back(1);
        while (level.size() > 1 && level[level.size() - 2] < level.back()) {
            double merged = (level[level.size() - 2] * count[count.size() - 2] +
                             level.back() * count.back()) /
                            static_cast<double>(count[count.size() - 2] + count.back());
            count[count.size() - 2] += count.back();
            level[level.size() - 2] = merged;
            level.pop_back();
            count.pop_back();
        }
    }
    std::size_t idx = 0;
    for (std::size_t blk = 0; blk < level.size(); ++blk)
        for (std::size_t c = 0; c < count[blk]; ++c) v[idx++] = level[blk];
}

double enforce_convex(const std::vector<double>& x, std::vector<double>& v) {
    const std::size_t n = x.size();
    if (n < 3) return 0.0;
    // lower convex hull (Andrew scan); keep endpoints
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            double cross = (x[b] - x[a]) * (v[i] - v[a]) - (x[i] - x[a]) * (v[b] - v[a]);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    double max_adjust = 0.0;
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() && hull[seg + 1] < i) ++seg;
        if (hull[seg] == i) continue;
        std::size_t a = hull[seg], b = hull[seg + 1];
        double t = (x[i] - x[a]) / (x[b] - x[a]);
        double h = v[a] + t * (v[b] - v[a]);
        max_adjust = std::max(max_adjust, v[i] - h);
        v[i] = h;
    }
    return max_adjust;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int thread_budget() {
    static int budget = [] {
        const char* env = std::getenv("LYAPSPEC_THREADS");
        if (env && *env) {
            int n = std::atoi(env);
            if (n >= 1) return n;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }();
    return budget;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int budget = std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), n);
    if (budget <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(budget);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int t = 0; t < budget; ++t) {
        workers.emplace_back([&, t] {
            try {
                for (std::size_t i = static_cast<std::size_t>(t); i < n;
                     i += static_cast<std::size_t>(budget))
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lyapspec
