#include "lyapspec/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace lyapspec {

namespace {

// least-squares slope of log(count) vs n over the top half of the depths
double fit_top_half_slope(const std::vector<int>& depths, const std::vector<double>& counts,
                          std::vector<std::size_t>* used = nullptr) {
    std::vector<double> xs, ys;
    std::size_t start = depths.size() / 2;
    for (std::size_t i = start; i < depths.size(); ++i) {
        if (counts[i] <= 0) continue;
        xs.push_back(static_cast<double>(depths[i]));
        ys.push_back(std::log(counts[i]));
        if (used) used->push_back(i);
    }
    if (xs.size() < 2) return 0.0;
    FitResult fr = fit_least_squares(
        xs, ys, {[](double) { return 1.0; }, [](double n) { return n; }});
    return fr.coeff[1];
}

}  // namespace

CoverCount level0_cover_count(const PressureHost& host, double epsilon, int n_min,
                              int n_max) {
    if (!(epsilon > 0)) throw DomainError("cover count requires epsilon > 0");
    if (n_min < 1 || n_max < n_min) throw DomainError("bad depth range");
    CoverCount out;
    out.epsilon = epsilon;
    out.slope_bound = std::log1p(epsilon);
    const double log1pe = std::log1p(epsilon);
    for (int n = n_min; n <= std::min(n_max, host.engine->max_depth()); ++n) {
        const auto& stats = host.engine->level(n);
        double count = 0;
        const double threshold = -n * log1pe;  // log|Delta| >= -n log(1+eps)
        for (const CylStat& s : stats)
            if (s.log_len >= threshold) count += 1;
        out.depths.push_back(n);
        out.counts.push_back(count);
    }
    out.empty = true;
    for (double c : out.counts) out.empty = out.empty && c == 0;
    out.slope = out.empty ? 0.0 : fit_top_half_slope(out.depths, out.counts);
    return out;
}

GrowthRates capacitive_entropy(const PressureHost& host,
                               const std::function<bool(const Word&, const CylStat&)>& keep,
                               int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) throw DomainError("bad depth range");
    std::vector<int> depths;
    std::vector<double> counts;
    for (int n = n_min; n <= std::min(n_max, host.engine->max_depth()); ++n) {
        double count = 0;
        host.engine->visit_level(n, [&](const Word& w, const CylStat& s) {
            if (keep(w, s)) count += 1;
        });
        depths.push_back(n);
        counts.push_back(count);
    }
    GrowthRates out;
    out.central = fit_top_half_slope(depths, counts);
    out.lower = kInf;
    out.upper = -kInf;
    std::size_t start = depths.size() / 2;
    for (std::size_t i = std::max<std::size_t>(start, 1); i < depths.size(); ++i) {
        if (counts[i] <= 0 || counts[i - 1] <= 0) continue;
        double step = std::log(counts[i]) - std::log(counts[i - 1]);
        out.lower = std::min(out.lower, step);
        out.upper = std::max(out.upper, step);
    }
    if (!std::isfinite(out.lower)) out.lower = 0.0;
    if (!std::isfinite(out.upper)) out.upper = 0.0;
    return out;
}

ZeroExponentReport zero_exponent_report(std::shared_ptr<const MapModel> map,
                                        std::vector<double> epsilons, int n_min,
                                        int n_max) {
    ZeroExponentReport out;
    out.parabolic = map->is_parabolic();
    PressureHost host = whole_map_host(map);
    PressureEvaluator ev(host);
    out.d0 = pressure_root(ev);
    if (map->full_interval()) {
        out.known_dimension = 1.0;
        out.dimension_known = true;
    } else if (map->is_linear() && host.full_shift()) {
        // conformal Cantor repeller: dimension equals the pressure root
        out.known_dimension = out.d0.root;
        out.dimension_known = true;
    }
    if (!out.parabolic) return out;  // zero-exponent set empty; no ladder needed

    std::sort(epsilons.begin(), epsilons.end(), std::greater<double>());
    for (double eps : epsilons)
        out.ladder.push_back(level0_cover_count(host, eps, n_min, n_max));
    return out;
}

}  // namespace lyapspec
