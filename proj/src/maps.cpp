#include "lyapspec/maps.hpp"

#include <algorithm>
#include <cmath>

namespace lyapspec {

namespace {

// Safeguarded Newton/bisection for a strictly increasing function on [lo, hi].
double solve_increasing(const std::function<double(double)>& f,
                        const std::function<double(double)>& df,
                        double lo, double hi, double target) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo >= 0 && flo < 1e-9) return lo;
    if (fhi <= 0 && fhi > -1e-9) return hi;
    if (flo > 0 || fhi < 0) throw DomainError("inverse branch target outside range");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fx = f(x) - target;
        if (fx > 0)
            hi = x;
        else
            lo = x;
        if (std::fabs(fx) < 1e-15 || hi - lo < 1e-16 * (1.0 + std::fabs(x))) break;
        double d = df(x);
        double step = d > 0 ? fx / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return x;
}

Branch make_linear_branch(Interval domain, double slope, Interval hull) {
    Branch b;
    b.domain = domain;
    b.linear = true;
    b.increasing = true;
    b.slope = slope;
    double a = domain.lo, c = hull.lo;
    b.forward = [slope, a, c](double x) { return slope * (x - a) + c; };
    b.derivative = [slope](double) { return slope; };
    b.inverse = [slope, a, c](double y) { return a + (y - c) / slope; };
    return b;
}

// x + coeff * (x - origin)^(1+s); the parabolic profile used by the
// Manneville-Pomeau branches and the blend family.
struct ParabolicProfile {
    double s, coeff, origin;
    double value(double x) const {
        double t = std::max(x - origin, 0.0);
        return x + coeff * std::pow(t, 1.0 + s);
    }
    double deriv(double x) const {
        double t = std::max(x - origin, 0.0);
        return 1.0 + coeff * (1.0 + s) * std::pow(t, s);
    }
};

bool symbol_is_parabolic(const MapModel& m, int s) {
    for (int q : m.parabolic_symbols())
        if (q == s) return true;
    return false;
}

}  // namespace

int MapModel::branch_of(double x) const {
    if (x > hull_.hi + 1e-15) return -1;
    for (int i = 0; i < symbol_count(); ++i) {
        const Interval& d = branches_[static_cast<std::size_t>(i)].domain;
        if (x < d.lo - 1e-15) return -1;  // in a gap (or left of the hull)
        if (x <= d.hi) return i;          // shared endpoints resolve left
    }
    return -1;
}

double MapModel::apply(double x, int* symbol_out) const {
    int b = branch_of(x);
    if (b < 0) throw DomainError("point left all branch domains; itinerary undefined");
    if (symbol_out) *symbol_out = b;
    const Branch& br = branches_[static_cast<std::size_t>(b)];
    double y = br.forward(std::clamp(x, br.domain.lo, br.domain.hi));
    return std::clamp(y, hull_.lo, hull_.hi);
}

double MapModel::log_abs_derivative(double x, int symbol) const {
    const Branch& br = branches_.at(static_cast<std::size_t>(symbol));
    return std::log(std::fabs(br.derivative(std::clamp(x, br.domain.lo, br.domain.hi))));
}

double MapModel::branch_fixed_point(int i) const {
    for (std::size_t k = 0; k < parabolic_symbols_.size(); ++k)
        if (parabolic_symbols_[k] == i) return parabolic_points_[k];
    const Branch& br = branches_.at(static_cast<std::size_t>(i));
    double x = br.domain.midpoint();
    for (int it = 0; it < 200; ++it) {
        double nx = br.inverse(std::clamp(x, hull_.lo, hull_.hi));
        nx = std::clamp(nx, br.domain.lo, br.domain.hi);
        if (std::fabs(nx - x) < 1e-16 * (1.0 + std::fabs(nx))) return nx;
        x = nx;
    }
    return x;
}

void MapModel::validate() const {
    if (symbol_count() < 2) throw SchemaError("a map model needs at least 2 branches");
    for (int i = 0; i + 1 < symbol_count(); ++i) {
        if (branches_[static_cast<std::size_t>(i)].domain.hi >
            branches_[static_cast<std::size_t>(i + 1)].domain.lo + 1e-12)
            throw SchemaError("branch intervals must have pairwise disjoint interiors");
    }
    for (int i = 0; i < symbol_count(); ++i) {
        const Branch& b = branches_[static_cast<std::size_t>(i)];
        if (b.domain.length() <= 0) throw SchemaError("branch interval has nonpositive length");
        for (int k = 0; k <= 6; ++k) {
            double x = b.domain.lo + b.domain.length() * k / 6.0;
            double y = b.forward(x);
            if (y < hull_.lo - 1e-9 || y > hull_.hi + 1e-9)
                throw SchemaError("branch image leaves the map interval");
            double back = b.inverse(std::clamp(y, hull_.lo, hull_.hi));
            if (std::fabs(back - x) > 1e-12)
                throw SchemaError("inverse branch does not invert branch " + std::to_string(i));
            if (std::fabs(b.derivative(x)) < 1.0 - 1e-12)
                throw SchemaError("branch derivative below 1 on branch " + std::to_string(i) +
                                  "; expanding Markov structure required");
        }
        double left = b.increasing ? b.forward(b.domain.lo) : b.forward(b.domain.hi);
        double right = b.increasing ? b.forward(b.domain.hi) : b.forward(b.domain.lo);
        if (std::fabs(left - hull_.lo) > 1e-9 || std::fabs(right - hull_.hi) > 1e-9)
            throw SchemaError("branch " + std::to_string(i) +
                              " must map its interval onto the full map interval");
    }
    for (std::size_t q = 0; q < parabolic_points_.size(); ++q) {
        const Branch& b = branches_.at(static_cast<std::size_t>(parabolic_symbols_[q]));
        double fp = parabolic_points_[q];
        if (std::fabs(b.forward(fp) - fp) > 1e-12)
            throw SchemaError("declared parabolic point is not fixed by its branch");
        if (std::fabs(std::fabs(b.derivative(fp)) - 1.0) > 1e-9)
            throw SchemaError("declared parabolic point does not have |f'| = 1");
    }
}

MapModel MapModel::manneville_pomeau(double s) {
    if (!(s > 0)) throw SchemaError("manneville_pomeau requires s > 0");
    MapModel m;
    m.family_ = "manneville_pomeau";
    m.label_ = "manneville_pomeau(s=" + format_double(s) + ")";
    m.hull_ = {0.0, 1.0};
    ParabolicProfile profile{s, 1.0, 0.0};  // x(1+x^s) = x + x^{1+s}
    double xstar = solve_increasing([&](double x) { return profile.value(x); },
                                    [&](double x) { return profile.deriv(x); },
                                    0.0, 1.0, 1.0);

    Branch b0;
    b0.domain = {0.0, xstar};
    b0.forward = [profile](double x) { return profile.value(std::max(x, 0.0)); };
    b0.derivative = [profile](double x) { return profile.deriv(std::max(x, 0.0)); };
    b0.inverse = [profile, xstar](double y) {
        return solve_increasing([&](double x) { return profile.value(x); },
                                [&](double x) { return profile.deriv(x); },
                                0.0, xstar, std::clamp(y, 0.0, 1.0));
    };

    Branch b1;
    b1.domain = {xstar, 1.0};
    b1.forward = [profile](double x) { return profile.value(std::min(x, 1.0)) - 1.0; };
    b1.derivative = [profile](double x) { return profile.deriv(std::min(x, 1.0)); };
    b1.inverse = [profile, xstar](double y) {
        return solve_increasing([&](double x) { return profile.value(x) - 1.0; },
                                [&](double x) { return profile.deriv(x); },
                                xstar, 1.0, std::clamp(y, 0.0, 1.0));
    };

    m.branches_.push_back(std::move(b0));
    m.branches_.push_back(std::move(b1));
    m.a_ = TransitionMatrix::full(2);
    m.parabolic_points_ = {0.0};
    m.parabolic_symbols_ = {0};
    m.full_interval_ = true;
    m.linear_ = false;
    m.validate();
    return m;
}

MapModel MapModel::linear_sft(std::vector<double> slopes, TransitionMatrix a,
                              std::vector<Interval> domains) {
    const int p = static_cast<int>(slopes.size());
    if (p < 2) throw SchemaError("linear_sft needs at least 2 branches");
    if (static_cast<int>(domains.size()) != p || a.symbol_count() != p)
        throw SchemaError("linear_sft: slopes, matrix, and branch_intervals sizes differ");
    for (int i = 0; i + 1 < p; ++i)
        if (domains[static_cast<std::size_t>(i)].lo > domains[static_cast<std::size_t>(i + 1)].lo)
            throw SchemaError("branch_intervals must be listed left to right");

    MapModel m;
    m.family_ = "linear_sft";
    m.hull_ = {domains.front().lo, domains.back().hi};
    for (int i = 0; i < p; ++i) {
        double slope = slopes[static_cast<std::size_t>(i)];
        if (!(slope > 1.0))
            throw SchemaError("linear_sft slope on branch " + std::to_string(i) +
                              " must exceed 1 (no parabolic points in this family)");
        double expected = m.hull_.length() / domains[static_cast<std::size_t>(i)].length();
        if (std::fabs(expected - slope) > 1e-9)
            throw SchemaError("linear_sft slope on branch " + std::to_string(i) +
                              " is inconsistent with a full branch (expected " +
                              format_double(expected) + ")");
        m.branches_.push_back(
            make_linear_branch(domains[static_cast<std::size_t>(i)], slope, m.hull_));
    }
    m.a_ = std::move(a);
    m.linear_ = true;
    m.full_interval_ = true;
    for (int i = 0; i + 1 < p; ++i)
        if (domains[static_cast<std::size_t>(i)].hi <
            domains[static_cast<std::size_t>(i + 1)].lo - 1e-12)
            m.full_interval_ = false;
    std::string sl;
    for (int i = 0; i < p; ++i)
        sl += (i ? "," : "") + format_double(slopes[static_cast<std::size_t>(i)]);
    m.label_ = "linear_sft[" + sl + "]";
    m.validate();
    return m;
}

MapModel MapModel::parabolic_linear_blend(double s, std::vector<Interval> domains,
                                          std::optional<TransitionMatrix> a) {
    if (!(s > 0)) throw SchemaError("parabolic_linear_blend requires s > 0");
    const int p = static_cast<int>(domains.size());
    if (p < 2) throw SchemaError("parabolic_linear_blend needs at least 2 branches");
    for (int i = 0; i + 1 < p; ++i)
        if (domains[static_cast<std::size_t>(i)].lo > domains[static_cast<std::size_t>(i + 1)].lo)
            throw SchemaError("branch_intervals must be listed left to right");

    MapModel m;
    m.family_ = "parabolic_linear_blend";
    m.hull_ = {domains.front().lo, domains.back().hi};
    const double origin = domains.front().lo;
    const double b0hi = domains.front().hi;
    if (!(b0hi < m.hull_.hi))
        throw SchemaError("parabolic branch must not cover the whole interval");
    ParabolicProfile profile{s, (m.hull_.hi - b0hi) / std::pow(b0hi - origin, 1.0 + s), origin};

    Branch first;
    first.domain = domains.front();
    first.forward = [profile](double x) { return profile.value(x); };
    first.derivative = [profile](double x) { return profile.deriv(x); };
    first.inverse = [profile, origin, b0hi](double y) {
        return solve_increasing([&](double x) { return profile.value(x); },
                                [&](double x) { return profile.deriv(x); },
                                origin, b0hi, y);
    };
    m.branches_.push_back(std::move(first));
    for (int i = 1; i < p; ++i) {
        double slope = m.hull_.length() / domains[static_cast<std::size_t>(i)].length();
        if (!(slope > 1.0))
            throw SchemaError("blend branch " + std::to_string(i) + " is not expanding");
        m.branches_.push_back(
            make_linear_branch(domains[static_cast<std::size_t>(i)], slope, m.hull_));
    }
    m.a_ = a ? std::move(*a) : TransitionMatrix::full(p);
    if (m.a_.symbol_count() != p)
        throw SchemaError("parabolic_linear_blend matrix size does not match branches");
    m.parabolic_points_ = {origin};
    m.parabolic_symbols_ = {0};
    m.linear_ = false;
    m.full_interval_ = true;
    for (int i = 0; i + 1 < p; ++i)
        if (domains[static_cast<std::size_t>(i)].hi <
            domains[static_cast<std::size_t>(i + 1)].lo - 1e-12)
            m.full_interval_ = false;
    m.label_ = "parabolic_linear_blend(s=" + format_double(s) + ")";
    m.validate();
    return m;
}

bool is_admissible(const MapModel& map, const Word& w) {
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < 0 || w[k] >= map.symbol_count()) return false;
        if (k > 0 && !map.transitions().allowed(w[k - 1], w[k])) return false;
    }
    return true;
}

Interval cylinder(const MapModel& map, const Word& w) {
    if (w.empty()) throw DomainError("cylinder requires a nonempty word");
    if (!is_admissible(map, w))
        throw DomainError("cylinder word is not admissible: " + word_to_string(w));
    Interval cur = map.branch(w.back()).domain;
    for (std::size_t k = w.size() - 1; k-- > 0;) {
        const Branch& b = map.branch(w[k]);
        double a = b.inverse(std::clamp(cur.lo, map.hull().lo, map.hull().hi));
        double c = b.inverse(std::clamp(cur.hi, map.hull().lo, map.hull().hi));
        cur = a <= c ? Interval{a, c} : Interval{c, a};
    }
    return cur;
}

DerivSum log_deriv_sum(const MapModel& map, double x, int n) {
    if (n <= 0) throw DomainError("log_deriv_sum requires n >= 1");
    double sum = 0.0;
    double cur = x;
    for (int k = 0; k < n; ++k) {
        int sym = map.branch_of(cur);
        if (sym < 0)
            throw DomainError("orbit escaped all branch domains after " + std::to_string(k) +
                              " steps; itinerary undefined");
        sum += map.log_abs_derivative(cur, sym);
        cur = map.apply(cur);
    }
    return DerivSum{sum, sum / n};
}

double log_deriv_sum_word(const MapModel& map, double x, const Word& w) {
    double sum = 0.0;
    double cur = x;
    for (int sym : w) {
        const Branch& b = map.branch(sym);
        cur = std::clamp(cur, b.domain.lo, b.domain.hi);
        sum += std::log(std::fabs(b.derivative(cur)));
        cur = std::clamp(b.forward(cur), map.hull().lo, map.hull().hi);
    }
    return sum;
}

double cylinder_contraction_rate(const MapModel& map, const Word& w) {
    Interval c = cylinder(map, w);
    return std::log(c.length()) / static_cast<double>(w.size());
}

// ---------------------------------------------------------------------------
// CylinderEngine

CylinderEngine::CylinderEngine(std::shared_ptr<const MapModel> map, int forbid_run,
                               std::vector<int> symbols, int grid_points)
    : map_(std::move(map)),
      forbid_run_(forbid_run),
      symbols_(std::move(symbols)),
      grid_points_(std::max(grid_points, 2)) {
    if (symbols_.empty()) {
        for (int i = 0; i < map_->symbol_count(); ++i) symbols_.push_back(i);
    } else {
        std::sort(symbols_.begin(), symbols_.end());
        for (int s : symbols_)
            if (s < 0 || s >= map_->symbol_count())
                throw SchemaError("restricted symbol out of range");
        if (symbols_.size() < 2) throw SchemaError("symbol restriction needs >= 2 symbols");
    }
    if (forbid_run_ == 1) throw DomainError("forbidden run length must be >= 2");
    if (forbid_run_ > 0 && map_->parabolic_symbols().empty())
        throw DomainError("run truncation requires a parabolic point");
}

bool CylinderEngine::parabolic_run_symbol(int* symbol_out) const {
    if (map_->parabolic_symbols().empty()) return false;
    if (symbol_out) *symbol_out = map_->parabolic_symbols().front();
    return true;
}

double CylinderEngine::level_count(int depth) const {
    if (depth < 0) throw DomainError("depth must be nonnegative");
    if (depth == 0) return 1.0;
    // transfer counting over (symbol, trailing parabolic run) states
    const int m = forbid_run_;
    struct State {
        int sym, run;
    };
    std::vector<State> states;
    for (int s : symbols_) {
        if (m > 0 && symbol_is_parabolic(*map_, s)) {
            for (int r = 1; r <= m - 1; ++r) states.push_back({s, r});
        } else {
            states.push_back({s, 0});
        }
    }
    const std::size_t ns = states.size();
    std::vector<double> v(ns, 0.0), next(ns);
    for (std::size_t i = 0; i < ns; ++i)
        if (states[i].run <= 1) v[i] = 1.0;  // length-1 words
    for (int len = 2; len <= depth; ++len) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t j = 0; j < ns; ++j) {
            int want_fresh = (m > 0 && symbol_is_parabolic(*map_, states[j].sym)) ? 1 : 0;
            for (std::size_t i = 0; i < ns; ++i) {
                if (v[i] == 0.0) continue;
                if (!map_->transitions().allowed(states[i].sym, states[j].sym)) continue;
                if (states[j].sym == states[i].sym && states[i].run > 0) {
                    if (states[j].run != states[i].run + 1 || states[j].run > m - 1) continue;
                } else {
                    if (states[j].run != want_fresh) continue;
                }
                next[j] += v[i];
            }
        }
        v.swap(next);
    }
    double total = 0.0;
    for (double x : v) total += x;
    return total;
}

namespace {
int engine_depth_cap(const MapModel& m, int grid_points,
                     const std::function<double(int)>& count_at) {
    const double budget = m.is_linear() ? 1.6e7 : 6.0e7;
    const int hard_cap = m.is_linear() ? 22 : 20;
    double cum = 0.0;
    int n = 0;
    while (n < hard_cap) {
        double c = count_at(n + 1);
        double cost = m.is_linear() ? c : c * static_cast<double>(n + 1) * (grid_points + 2);
        if (cum + cost > budget) break;
        cum += cost;
        ++n;
    }
    return std::max(n, 1);
}
}  // namespace

int CylinderEngine::max_depth() const {
    std::lock_guard<std::mutex> lk(mutex_);
    if (max_depth_ < 0)
        max_depth_ = engine_depth_cap(*map_, grid_points_,
                                      [this](int n) { return level_count(n); });
    return max_depth_;
}

void CylinderEngine::build_linear_level(int depth, std::vector<CylStat>& out) const {
    const MapModel& m = *map_;
    const double log_hull = std::log(m.hull().length());
    out.clear();
    std::vector<double> log_slopes(static_cast<std::size_t>(m.symbol_count()), 0.0);
    for (int i = 0; i < m.symbol_count(); ++i)
        log_slopes[static_cast<std::size_t>(i)] = std::log(m.branch(i).slope);

    Word w;
    w.reserve(static_cast<std::size_t>(depth));
    std::function<void(double, int)> rec = [&](double sum, int run) {
        if (static_cast<int>(w.size()) == depth) {
            out.push_back(CylStat{sum, sum, log_hull - sum});
            return;
        }
        for (int s : symbols_) {
            if (!w.empty() && !m.transitions().allowed(w.back(), s)) continue;
            int next_run = 0;
            if (forbid_run_ > 0 && symbol_is_parabolic(m, s))
                next_run = (!w.empty() && w.back() == s) ? run + 1 : 1;
            if (forbid_run_ > 0 && next_run >= forbid_run_) continue;
            w.push_back(s);
            rec(sum + log_slopes[static_cast<std::size_t>(s)], next_run);
            w.pop_back();
        }
    };
    rec(0.0, 0);
}

void CylinderEngine::ensure_entries(int depth) const {
    const MapModel& m = *map_;
    for (int lvl = 1; lvl <= depth; ++lvl) {
        if (entries_.count(lvl)) continue;
        std::vector<LevelEntry> level;
        if (lvl == 1) {
            for (int s : symbols_) {
                const Branch& b = m.branch(s);
                std::uint8_t lead = symbol_is_parabolic(m, s) ? 1 : 0;
                level.push_back(LevelEntry{b.domain.lo, b.domain.hi, -1,
                                           static_cast<std::uint8_t>(s), lead});
            }
        } else {
            const std::vector<LevelEntry>& prev = entries_.at(lvl - 1);
            for (int s : symbols_) {
                const Branch& b = m.branch(s);
                const bool s_par = symbol_is_parabolic(m, s);
                for (std::int32_t idx = 0; idx < static_cast<std::int32_t>(prev.size());
                     ++idx) {
                    const LevelEntry& e = prev[static_cast<std::size_t>(idx)];
                    if (!m.transitions().allowed(s, e.sym)) continue;
                    std::uint8_t lead = 0;
                    if (s_par) {
                        lead = (e.sym == s) ? static_cast<std::uint8_t>(e.lead + 1) : 1;
                        if (forbid_run_ > 0 && lead >= forbid_run_) continue;
                    }
                    double a = b.inverse(std::clamp(e.lo, m.hull().lo, m.hull().hi));
                    double c = b.inverse(std::clamp(e.hi, m.hull().lo, m.hull().hi));
                    if (a > c) std::swap(a, c);
                    level.push_back(
                        LevelEntry{a, c, idx, static_cast<std::uint8_t>(s), lead});
                }
            }
        }
        entries_.emplace(lvl, std::move(level));
    }
}

void CylinderEngine::build_nonlinear_level(int depth, std::vector<CylStat>& out) const {
    const MapModel& m = *map_;
    ensure_entries(depth);
    const std::vector<LevelEntry>& level = entries_.at(depth);
    out.assign(level.size(), CylStat{});
    Word w(static_cast<std::size_t>(depth), 0);
    for (std::size_t ci = 0; ci < level.size(); ++ci) {
        std::int32_t cur = static_cast<std::int32_t>(ci);
        for (int lvl = depth; lvl >= 1; --lvl) {
            const LevelEntry& e = entries_.at(lvl)[static_cast<std::size_t>(cur)];
            w[static_cast<std::size_t>(depth - lvl)] = e.sym;
            cur = e.parent;
        }
        const LevelEntry& e = level[ci];
        double smin = kInf, smax = -kInf;
        for (int g = 0; g < grid_points_; ++g) {
            double t = static_cast<double>(g) / (grid_points_ - 1);
            double x = e.lo + t * (e.hi - e.lo);
            double sum = log_deriv_sum_word(m, x, w);
            smin = std::min(smin, sum);
            smax = std::max(smax, sum);
        }
        out[ci] = CylStat{smin, smax, std::log(std::max(e.hi - e.lo, 1e-300))};
    }
}

const std::vector<CylStat>& CylinderEngine::built_level(int depth) const {
    std::lock_guard<std::mutex> lk(mutex_);
    auto it = cache_.find(depth);
    if (it != cache_.end()) return it->second;
    if (depth < 1) throw DomainError("cylinder level depth must be >= 1");
    if (max_depth_ < 0)
        max_depth_ = engine_depth_cap(*map_, grid_points_,
                                      [this](int n) { return level_count(n); });
    if (depth > max_depth_)
        throw ResourceLimitError("cylinder depth " + std::to_string(depth) +
                                 " exceeds the work cap (max " + std::to_string(max_depth_) +
                                 ") for " + map_->label());
    std::vector<CylStat> data;
    if (map_->is_linear())
        build_linear_level(depth, data);
    else
        build_nonlinear_level(depth, data);
    auto res = cache_.emplace(depth, std::move(data));
    return res.first->second;
}

const std::vector<CylStat>& CylinderEngine::level(int depth) const {
    return built_level(depth);
}

double CylinderEngine::rho_hat(int depth) const {
    const auto& stats = level(depth);
    double worst = 0.0;
    for (const CylStat& s : stats) worst = std::max(worst, s.s_max - s.s_min);
    return worst / static_cast<double>(depth);
}

void CylinderEngine::visit_level(
    int depth, const std::function<void(const Word&, const CylStat&)>& fn) const {
    const auto& stats = level(depth);
    std::size_t idx = 0;
    Word w;
    w.reserve(static_cast<std::size_t>(depth));
    const MapModel& m = *map_;
    std::function<void(int)> rec = [&](int run) {
        if (static_cast<int>(w.size()) == depth) {
            fn(w, stats[idx]);
            ++idx;
            return;
        }
        for (int s : symbols_) {
            if (!w.empty() && !m.transitions().allowed(w.back(), s)) continue;
            int next_run = 0;
            if (forbid_run_ > 0 && symbol_is_parabolic(m, s))
                next_run = (!w.empty() && w.back() == s) ? run + 1 : 1;
            if (forbid_run_ > 0 && next_run >= forbid_run_) continue;
            w.push_back(s);
            rec(next_run);
            w.pop_back();
        }
    };
    rec(0);
    if (idx != stats.size())
        throw Error("internal: level enumeration does not match cached stats");
}

double CylinderEngine::cyclic_min_sum(int depth, double d) const {
    LogSumExp acc;
    const MapModel& m = *map_;
    visit_level(depth, [&](const Word& w, const CylStat& st) {
        if (!m.transitions().allowed(w.back(), w.front())) return;
        if (forbid_run_ > 0 && symbol_is_parabolic(m, w.front())) {
            int lead = 0;
            while (lead < static_cast<int>(w.size()) &&
                   w[static_cast<std::size_t>(lead)] == w[0])
                ++lead;
            if (lead == static_cast<int>(w.size())) return;  // constant parabolic cycle
            if (w.back() == w.front()) {
                int trail = 0;
                while (w[w.size() - 1 - static_cast<std::size_t>(trail)] == w.back()) ++trail;
                if (lead + trail >= forbid_run_) return;
            }
        }
        acc.add(d >= 0 ? -d * st.s_max : -d * st.s_min);
    });
    return acc.value();
}

DistortionEstimate estimate_distortion(const MapModel& map, const std::vector<int>& depths,
                                       int grid_points) {
    auto shared = std::make_shared<MapModel>(map);
    CylinderEngine engine(shared, 0, {}, grid_points);
    DistortionEstimate out;
    for (int n : depths) {
        out.depths.push_back(n);
        out.rho.push_back(engine.rho_hat(n));
    }
    return out;
}

}  // namespace lyapspec
