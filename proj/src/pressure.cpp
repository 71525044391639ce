#include "lyapspec/pressure.hpp"

#include <algorithm>
#include <cmath>

namespace lyapspec {

namespace {

constexpr double kFpMargin = 1e-12;

bool host_symbol_parabolic(const MapModel& m, int s) {
    for (int q : m.parabolic_symbols())
        if (q == s) return true;
    return false;
}

}  // namespace

bool PressureHost::full_shift() const {
    if (forbid_run > 0) return false;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        for (std::size_t j = 0; j < symbols.size(); ++j)
            if (!map->transitions().allowed(symbols[i], symbols[j])) return false;
    return true;
}

std::string PressureHost::label() const {
    std::string s = map->label();
    if (static_cast<int>(symbols.size()) != map->symbol_count()) {
        s += "|symbols{";
        for (std::size_t i = 0; i < symbols.size(); ++i)
            s += (i ? "," : "") + std::to_string(symbols[i]);
        s += "}";
    }
    if (forbid_run > 0) s += "|truncated(m=" + std::to_string(forbid_run) + ")";
    return s;
}

PressureHost whole_map_host(std::shared_ptr<const MapModel> map, int grid_points) {
    PressureHost h;
    h.map = map;
    h.forbid_run = 0;
    for (int i = 0; i < map->symbol_count(); ++i) h.symbols.push_back(i);
    h.engine = std::make_shared<CylinderEngine>(map, 0, std::vector<int>{}, grid_points);
    return h;
}

PressureHost restricted_host(std::shared_ptr<const MapModel> map, std::vector<int> symbols,
                             int grid_points) {
    PressureHost h;
    h.map = map;
    h.forbid_run = 0;
    std::sort(symbols.begin(), symbols.end());
    h.symbols = symbols;
    // validates the restricted structure (mixing etc.)
    map->transitions().restricted(symbols);
    h.engine = std::make_shared<CylinderEngine>(map, 0, symbols, grid_points);
    return h;
}

Subsystem make_subsystem(std::shared_ptr<const MapModel> map, int m, int grid_points) {
    if (!map->is_parabolic())
        throw DomainError("subsystem truncation requires a map with a parabolic point");
    if (m < 2) throw DomainError("subsystem level must be >= 2");
    Subsystem sub;
    sub.level = m;
    sub.host.map = map;
    sub.host.forbid_run = m;
    for (int i = 0; i < map->symbol_count(); ++i) sub.host.symbols.push_back(i);
    sub.host.engine =
        std::make_shared<CylinderEngine>(map, m, std::vector<int>{}, grid_points);
    if (sub.host.engine->level_count(m) <= 0)
        throw DomainError("truncation at level " + std::to_string(m) + " empties the system");

    // min |f'| over the surviving depth-m cylinders
    double min_deriv = kInf;
    sub.host.engine->visit_level(m, [&](const Word& w, const CylStat&) {
        Interval c = cylinder(*map, w);
        const Branch& b = map->branch(w.front());
        for (int g = 0; g <= 4; ++g) {
            double x = c.lo + c.length() * g / 4.0;
            min_deriv = std::min(min_deriv, std::fabs(b.derivative(
                                                std::clamp(x, b.domain.lo, b.domain.hi))));
        }
    });
    sub.min_derivative = min_deriv;
    sub.uniformly_hyperbolic = min_deriv > 1.0;
    return sub;
}

// ---------------------------------------------------------------------------
// weighted shift representation and spectral radius

namespace {

struct WeightedShift {
    int n = 0;
    std::vector<double> mat;  // n x n, source-weighted A[i][j]*lambda_i^{-d}
};

WeightedShift build_weighted_shift(const PressureHost& host, double d) {
    const MapModel& m = *host.map;
    if (!m.is_linear() && d != 0.0)
        throw DomainError("matrix pressure route requires a piecewise-linear model");
    auto log_weight = [&](int sym) {
        return m.is_linear() ? -d * std::log(m.branch(sym).slope) : 0.0;
    };

    std::vector<Word> states;
    if (host.forbid_run == 0) {
        for (int s : host.symbols) states.push_back(Word{s});
    } else {
        states = enumerate_words(m.transitions(), host.forbid_run - 1);
        // restrict to host symbols (enumerate_words covers the full alphabet)
        std::vector<Word> kept;
        for (const Word& w : states) {
            bool ok = true;
            for (int s : w)
                ok = ok && std::find(host.symbols.begin(), host.symbols.end(), s) !=
                               host.symbols.end();
            if (ok) kept.push_back(w);
        }
        states = std::move(kept);
        if (states.size() > 8192)
            throw ResourceLimitError("block shift has too many states");
    }

    const int n = static_cast<int>(states.size());
    WeightedShift ws;
    ws.n = n;
    ws.mat.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u) {
        const Word& wu = states[static_cast<std::size_t>(u)];
        for (int v = 0; v < n; ++v) {
            const Word& wv = states[static_cast<std::size_t>(v)];
            bool ok = m.transitions().allowed(wu.back(), wv.back());
            for (std::size_t k = 0; ok && k + 1 < wu.size(); ++k)
                ok = wu[k + 1] == wv[k];
            if (ok && host.forbid_run > 0) {
                // the new window wu_1 ... wu_{m-1} wv_{m-1} must not be q^m
                int q = wv.back();
                if (host_symbol_parabolic(m, q)) {
                    bool all_q = true;
                    for (int s : wu) all_q = all_q && s == q;
                    if (all_q) ok = false;
                }
            }
            if (ok)
                ws.mat[static_cast<std::size_t>(u) * n + v] = std::exp(log_weight(wu.back()));
        }
    }

    // prune states with empty rows or columns until stable
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int u = 0; u < n; ++u) {
            if (!alive[static_cast<std::size_t>(u)]) continue;
            double row = 0, col = 0;
            for (int v = 0; v < n; ++v) {
                if (alive[static_cast<std::size_t>(v)]) {
                    row += ws.mat[static_cast<std::size_t>(u) * n + v];
                    col += ws.mat[static_cast<std::size_t>(v) * n + u];
                }
            }
            if (row == 0.0 || col == 0.0) {
                alive[static_cast<std::size_t>(u)] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> keep;
    for (int u = 0; u < n; ++u)
        if (alive[static_cast<std::size_t>(u)]) keep.push_back(u);
    if (keep.empty()) throw DomainError("weighted shift is empty after pruning");
    if (static_cast<int>(keep.size()) != n) {
        WeightedShift pruned;
        pruned.n = static_cast<int>(keep.size());
        pruned.mat.assign(static_cast<std::size_t>(pruned.n) * pruned.n, 0.0);
        for (int a = 0; a < pruned.n; ++a)
            for (int b = 0; b < pruned.n; ++b)
                pruned.mat[static_cast<std::size_t>(a) * pruned.n + b] =
                    ws.mat[static_cast<std::size_t>(keep[a]) * n + keep[b]];
        return pruned;
    }
    return ws;
}

// Collatz-Wielandt bracketing power iteration with a Rayleigh quotient finish.
double log_spectral_radius(const WeightedShift& ws, double rel_tol) {
    const int n = ws.n;
    std::vector<double> v(static_cast<std::size_t>(n), 1.0), w(static_cast<std::size_t>(n));
    double best_gap = kInf;
    double lam_mid = 1.0;
    for (int it = 0; it < 200000; ++it) {
        double lam_lo = kInf, lam_hi = 0.0, wmax = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                s += ws.mat[static_cast<std::size_t>(i) * n + j] * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = s;
            double ratio = s / v[static_cast<std::size_t>(i)];
            lam_lo = std::min(lam_lo, ratio);
            lam_hi = std::max(lam_hi, ratio);
            wmax = std::max(wmax, s);
        }
        lam_mid = 0.5 * (lam_lo + lam_hi);
        best_gap = std::min(best_gap, (lam_hi - lam_lo) / lam_hi);
        if ((lam_hi - lam_lo) <= rel_tol * lam_hi) {
            // Rayleigh quotient refinement
            double num = 0.0, den = 0.0;
            for (int i = 0; i < n; ++i) {
                num += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
                den += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            }
            return std::log(num / den);
        }
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / wmax;
    }
    if (best_gap < 1e-9) return std::log(lam_mid);
    throw ConvergenceError("power iteration did not converge");
}

double log_trace_power(const WeightedShift& ws, int n_steps) {
    const int n = ws.n;
    std::vector<double> b = ws.mat, next(static_cast<std::size_t>(n) * n);
    double log_scale = 0.0;
    for (int step = 2; step <= n_steps; ++step) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += ws.mat[static_cast<std::size_t>(i) * n + k] *
                         b[static_cast<std::size_t>(k) * n + j];
                next[static_cast<std::size_t>(i) * n + j] = s;
            }
        double mx = 0.0;
        for (double x : next) mx = std::max(mx, x);
        if (mx <= 0.0) return -kInf;
        for (auto& x : next) x /= mx;
        log_scale += std::log(mx);
        b = next;
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += b[static_cast<std::size_t>(i) * n + i];
    if (tr <= 0.0) return -kInf;
    return log_scale + std::log(tr);
}

}  // namespace

double pressure_matrix_oracle(const PressureHost& host, double d, double rel_tol) {
    WeightedShift ws = build_weighted_shift(host, d);
    return log_spectral_radius(ws, rel_tol);
}

int oracle_state_count(const PressureHost& host) {
    return build_weighted_shift(host, 0.0).n;
}

// ---------------------------------------------------------------------------
// cylinder-sum pressure

PressureBracket pressure_at(const PressureHost& host, double d, int depth) {
    const auto& stats = host.engine->level(depth);
    const double log_hull = std::log(host.map->hull().length());
    LogSumExp up, lo, mid;
    for (const CylStat& s : stats) {
        up.add(d >= 0 ? -d * s.s_min : -d * s.s_max);
        lo.add(d >= 0 ? -d * s.s_max : -d * s.s_min);
        mid.add(-d * (log_hull - s.log_len));
    }
    const double n = static_cast<double>(depth);
    return PressureBracket{up.value() / n, lo.value() / n, mid.value() / n};
}

double certified_lower_at(const PressureHost& host, double d, int depth) {
    if (host.linear()) {
        WeightedShift ws = build_weighted_shift(host, d);
        for (int n = depth; n >= 2; --n) {
            double lt = log_trace_power(ws, n);
            if (std::isfinite(lt)) return (lt - std::log(static_cast<double>(ws.n))) / n;
        }
        return -kInf;
    }
    double cyc = host.engine->cyclic_min_sum(depth, d);
    if (!std::isfinite(cyc)) return -kInf;
    double states = host.forbid_run == 0
                        ? static_cast<double>(host.symbols.size())
                        : host.engine->level_count(host.forbid_run - 1);
    return (cyc - std::log(states)) / depth;
}

int default_ladder_top(const PressureHost& host) {
    int cap = host.engine->max_depth();
    int want = host.linear() ? 20 : (host.forbid_run > 0 ? 18 : 16);
    return std::min(cap, want);
}

PressureValue pressure_extrapolated(const PressureHost& host, double d, int n_max) {
    if (n_max <= 0) n_max = default_ladder_top(host);
    n_max = std::min(n_max, host.engine->max_depth());
    const int n_min = std::min(4, n_max);

    PressureValue out;
    for (int n = n_min; n <= n_max; ++n) {
        out.depths.push_back(n);
        out.ladder.push_back(pressure_at(host, d, n));
    }
    out.depth = n_max;

    // certified-across-the-ladder bracket
    double upper = kInf, lower = -kInf;
    for (const PressureBracket& b : out.ladder) upper = std::min(upper, b.upper);
    if (host.full_shift()) {
        for (const PressureBracket& b : out.ladder) lower = std::max(lower, b.lower);
        out.lower_certified = true;
    } else if (host.linear()) {
        lower = certified_lower_at(host, d, n_max);
        out.lower_certified = true;
    } else {
        lower = certified_lower_at(host, d, n_max);
        out.lower_certified = false;
    }
    if (host.forbid_run == 0) {
        // an untruncated parabolic fixed point carries an invariant measure
        // with zero exponent and zero entropy, so the pressure is >= 0
        for (std::size_t q = 0; q < host.map->parabolic_symbols().size(); ++q) {
            int sym = host.map->parabolic_symbols()[q];
            bool in_host = std::find(host.symbols.begin(), host.symbols.end(), sym) !=
                           host.symbols.end();
            if (in_host && host.map->transitions().allowed(sym, sym)) {
                lower = std::max(lower, 0.0);
                out.lower_certified = true;
            }
        }
    }
    out.cert_upper = upper + kFpMargin * (1.0 + std::fabs(upper));
    out.cert_lower = lower - kFpMargin * (1.0 + std::fabs(lower));

    // trend fit on the deepest window of intermediate sums
    const int count = static_cast<int>(out.depths.size());
    const int window = std::min(7, count);
    std::vector<int> xs(out.depths.end() - window, out.depths.end());
    std::vector<double> ys;
    for (int i = count - window; i < count; ++i) ys.push_back(out.ladder[i].intermediate);
    TrendFit fit = fit_inverse_depth_trend(xs, ys, !host.linear());
    double value = fit.intercept;

    double stability = 0.0;
    if (count >= 3) {
        const int w2 = std::min(7, count - 1);
        std::vector<int> xs2(out.depths.end() - 1 - w2, out.depths.end() - 1);
        std::vector<double> ys2;
        for (int i = count - 1 - w2; i < count - 1; ++i)
            ys2.push_back(out.ladder[i].intermediate);
        TrendFit fit2 = fit_inverse_depth_trend(xs2, ys2, !host.linear());
        stability = std::fabs(fit.intercept - fit2.intercept);
    }

    double clamp_adjust = 0.0;
    if (value > out.cert_upper) {
        clamp_adjust = value - out.cert_upper;
        value = out.cert_upper;
    }
    if (out.lower_certified && value < out.cert_lower) {
        clamp_adjust = std::max(clamp_adjust, out.cert_lower - value);
        value = out.cert_lower;
    }
    out.value = value;
    out.error = fit.rms_residual + stability + clamp_adjust + kFpMargin;

    // non-convergence warning: bracket width grows over 3 consecutive depths
    int grow = 0;
    for (std::size_t i = 1; i < out.ladder.size(); ++i) {
        double w_prev = out.ladder[i - 1].upper - out.ladder[i - 1].lower;
        double w_cur = out.ladder[i].upper - out.ladder[i].lower;
        grow = w_cur > w_prev + 1e-15 ? grow + 1 : 0;
        if (grow >= 3) out.warning = true;
    }
    return out;
}

PressureEvaluator::PressureEvaluator(PressureHost host, int n_max)
    : host_(std::move(host)), n_max_(n_max > 0 ? n_max : default_ladder_top(host_)) {}

const PressureValue& PressureEvaluator::at(double d) const {
    {
        std::lock_guard<std::mutex> lk(mutex_);
        auto it = memo_.find(d);
        if (it != memo_.end()) return it->second;
    }
    PressureValue v = pressure_extrapolated(host_, d, n_max_);
    std::lock_guard<std::mutex> lk(mutex_);
    auto res = memo_.emplace(d, std::move(v));
    return res.first->second;
}

// ---------------------------------------------------------------------------
// curves, roots, endpoints

PressureCurve::PressureCurve(std::vector<PressureCurvePoint> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 2) throw DomainError("pressure curve needs at least 2 points");
    std::vector<double> xs, vs;
    for (const auto& p : pts_) {
        xs.push_back(p.d);
        vs.push_back(p.value);
    }
    std::vector<double> orig = vs;
    enforce_nonincreasing(vs);
    double hull_adj = enforce_convex(xs, vs);
    (void)hull_adj;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
        double v = vs[i];
        double adj = std::fabs(v - orig[i]);
        v = std::min(v, pts_[i].upper);
        v = std::max(v, pts_[i].lower);
        adj = std::max(adj, std::fabs(v - vs[i]));
        pts_[i].value = v;
        pts_[i].error += adj;
    }
}

double PressureCurve::eval(double d) const {
    const auto& p = pts_;
    if (d <= p.front().d) {
        double slope = (p[1].value - p[0].value) / (p[1].d - p[0].d);
        return p[0].value + slope * (d - p[0].d);
    }
    if (d >= p.back().d) {
        std::size_t n = p.size();
        double slope = (p[n - 1].value - p[n - 2].value) / (p[n - 1].d - p[n - 2].d);
        return p[n - 1].value + slope * (d - p[n - 1].d);
    }
    std::size_t lo = 0, hi = p.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (p[mid].d <= d)
            lo = mid;
        else
            hi = mid;
    }
    double t = (d - p[lo].d) / (p[hi].d - p[lo].d);
    return p[lo].value + t * (p[hi].value - p[lo].value);
}

PressureCurve build_pressure_curve(const PressureEvaluator& ev, const CurveOptions& opt) {
    if (opt.steps < 2 || opt.d_max <= opt.d_min)
        throw SchemaError("pressure curve grid is invalid");
    std::vector<double> ds;
    for (int i = 0; i < opt.steps; ++i)
        ds.push_back(opt.d_min + (opt.d_max - opt.d_min) * i / (opt.steps - 1));
    if (opt.tail_to_big) {
        for (double t : {6.0, 8.0, 11.0, 15.0, 20.0, 28.0, opt.d_big}) {
            if (t > opt.d_max && t <= opt.d_big) ds.push_back(t);
            if (-t < opt.d_min && -t >= -opt.d_big) ds.push_back(-t);
        }
    }
    if (opt.refine_near_root) {
        try {
            RootBracket rb = pressure_root(ev, 1e-3);
            double h = std::max(rb.hi - rb.lo, 2e-3);
            for (int k = -8; k <= 8; ++k) {
                double d = rb.root + k * h;
                if (d > opt.d_min && d < opt.d_big) ds.push_back(d);
            }
        } catch (const ConvergenceError&) {
            // no root in range; plain grid
        }
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
             ds.end());

    std::vector<PressureCurvePoint> pts(ds.size());
    parallel_for(ds.size(), [&](std::size_t i) {
        const PressureValue& v = ev.at(ds[i]);
        pts[i] = PressureCurvePoint{ds[i],    v.cert_lower, v.cert_upper, v.value,
                                    v.error, v.depth,      v.warning};
    });
    return PressureCurve(std::move(pts));
}

RootBracket pressure_root(const PressureEvaluator& ev, double width) {
    // "positive" means above the extrapolation noise floor: on parabolic
    // systems the pressure vanishes identically beyond the root and the
    // fitted sign there is round-off
    auto positive = [&](double d) {
        const PressureValue& v = ev.at(d);
        return v.value > std::max(1e-9, 0.25 * v.error);
    };
    double lo = 0.0;
    double g_lo = ev.value(lo);
    if (!positive(lo))
        throw ConvergenceError("pressure is not positive at d = 0; no root to bracket");
    double hi = 1.0;
    while (positive(hi)) {
        lo = hi;
        g_lo = ev.value(lo);
        hi *= 2.0;
        if (hi > 64.0)
            throw ConvergenceError("pressure stays positive for all tested d (up to 64)");
    }
    double g_hi = ev.value(hi);
    while (hi - lo > width) {
        double mid = 0.5 * (lo + hi);
        if (positive(mid)) {
            lo = mid;
            g_lo = ev.value(mid);
        } else {
            hi = mid;
            g_hi = ev.value(mid);
        }
    }
    RootBracket rb;
    double slope = (g_lo - g_hi) / (hi - lo);
    rb.root = slope > 0 ? lo + g_lo / slope : 0.5 * (lo + hi);
    rb.root = std::clamp(rb.root, lo, hi);
    double err = std::max(ev.at(lo).error, ev.at(hi).error);
    double kappa = std::clamp(err / std::max(slope, 1e-6), 2e-9, 0.05);
    rb.lo = lo - kappa;
    rb.hi = hi + kappa;
    return rb;
}

namespace {

// Periodic point of the cyclic word (iterates of the composed inverse map).
double periodic_point(const MapModel& m, const Word& w) {
    bool constant_parabolic = host_symbol_parabolic(m, w.front());
    for (int s : w) constant_parabolic = constant_parabolic && s == w.front();
    if (constant_parabolic) {
        for (std::size_t q = 0; q < m.parabolic_symbols().size(); ++q)
            if (m.parabolic_symbols()[q] == w.front()) return m.parabolic_points()[q];
    }
    double x = m.hull().midpoint();
    for (int it = 0; it < 400; ++it) {
        double nx = x;
        for (std::size_t k = w.size(); k-- > 0;) {
            const Branch& b = m.branch(w[k]);
            nx = b.inverse(std::clamp(nx, m.hull().lo, m.hull().hi));
        }
        if (std::fabs(nx - x) < 1e-15 * (1.0 + std::fabs(nx))) return nx;
        x = nx;
    }
    return x;
}

}  // namespace

AlphaBounds alpha_bounds(const PressureEvaluator& ev, double d_big) {
    const PressureHost& host = ev.host();
    const MapModel& m = *host.map;

    double slope_minus = ev.value(d_big - 1.0) - ev.value(d_big);
    double slope_plus = ev.value(-d_big) - ev.value(-d_big + 1.0);

    double lo = slope_minus, hi = slope_plus;
    const int max_len = std::min(std::max(6, host.forbid_run + 1), 10);
    Word w;
    std::function<void(void)> rec = [&]() {
        if (!w.empty()) {
            bool wrap_ok = m.transitions().allowed(w.back(), w.front());
            if (wrap_ok && host.forbid_run > 0 && host_symbol_parabolic(m, w.front())) {
                int lead = 0;
                while (lead < static_cast<int>(w.size()) &&
                       w[static_cast<std::size_t>(lead)] == w.front())
                    ++lead;
                if (lead == static_cast<int>(w.size()))
                    wrap_ok = false;  // constant parabolic cycle outside truncation
                else if (w.back() == w.front()) {
                    int trail = 0;
                    while (w[w.size() - 1 - static_cast<std::size_t>(trail)] == w.back())
                        ++trail;
                    if (lead + trail >= host.forbid_run) wrap_ok = false;
                }
            }
            if (wrap_ok) {
                double x = periodic_point(m, w);
                double ell = log_deriv_sum_word(m, x, w) / static_cast<double>(w.size());
                lo = std::min(lo, ell);
                hi = std::max(hi, ell);
            }
        }
        if (static_cast<int>(w.size()) == max_len) return;
        for (int s : host.symbols) {
            if (!w.empty() && !m.transitions().allowed(w.back(), s)) continue;
            if (host.forbid_run > 0 && host_symbol_parabolic(m, s)) {
                int run = 1;
                for (std::size_t k = w.size(); k-- > 0 && w[k] == s;) ++run;
                if (run >= host.forbid_run) continue;
            }
            w.push_back(s);
            rec();
            w.pop_back();
        }
    };
    rec();

    AlphaBounds out;
    out.alpha_minus = lo;
    out.alpha_plus = hi;
    out.degenerate = (hi - lo) < 1e-6;
    return out;
}

bool degeneracy_test(const PressureEvaluator& ev) {
    const double p0 = ev.value(0.0);
    const double p1 = ev.value(1.0);
    double worst = 0.0;
    for (double d : {-2.0, -1.0, -0.5, 0.5, 1.5, 2.0}) {
        double affine = p0 + d * (p1 - p0);
        worst = std::max(worst, std::fabs(ev.value(d) - affine));
    }
    return worst < 1e-6;
}

PmTable subsystem_pressure_table(std::shared_ptr<const MapModel> map, double d,
                                 const std::vector<int>& m_ladder, int n_max) {
    PmTable table;
    PressureHost whole = whole_map_host(map);
    for (int m : m_ladder) {
        PmRow row;
        row.m = m;
        if (map->is_parabolic()) {
            Subsystem sub = make_subsystem(map, m);
            row.value = pressure_extrapolated(sub.host, d, n_max);
        } else {
            // uniformly expanding: every truncation is the whole system
            row.value = pressure_extrapolated(whole, d, n_max);
        }
        table.rows.push_back(std::move(row));
    }
    table.full = pressure_extrapolated(whole, d, n_max);
    table.nondecreasing_within_error = true;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        double a = table.rows[i].value.value - table.rows[i].value.error;
        double b = table.rows[i + 1].value.value + table.rows[i + 1].value.error;
        if (b < a) table.nondecreasing_within_error = false;
    }
    if (!table.rows.empty()) {
        double a = table.rows.back().value.value - table.rows.back().value.error;
        if (table.full.value + table.full.error < a)
            table.nondecreasing_within_error = false;
        table.gap_to_full = table.full.value - table.rows.back().value.value;
    }
    return table;
}

}  // namespace lyapspec
