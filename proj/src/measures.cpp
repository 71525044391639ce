#include "lyapspec/measures.hpp"

#include <algorithm>
#include <cmath>

namespace lyapspec {

namespace {

bool sym_parabolic(const MapModel& m, int s) {
    for (int q : m.parabolic_symbols())
        if (q == s) return true;
    return false;
}

// Admissible state words for a host: symbols for plain hosts, blocks of
// length forbid_run-1 for truncated ones.
std::vector<Word> host_state_words(const PressureHost& host) {
    std::vector<Word> states;
    if (host.forbid_run == 0) {
        for (int s : host.symbols) states.push_back(Word{s});
        return states;
    }
    const int r = host.forbid_run - 1;
    std::vector<Word> all = enumerate_words(host.map->transitions(), r);
    for (const Word& w : all) {
        bool keep = true;
        for (int s : w)
            keep = keep && std::find(host.symbols.begin(), host.symbols.end(), s) !=
                               host.symbols.end();
        if (keep) states.push_back(w);
    }
    return states;
}

bool state_transition_ok(const PressureHost& host, const Word& u, const Word& v) {
    const MapModel& m = *host.map;
    if (!m.transitions().allowed(u.back(), v.back())) return false;
    for (std::size_t k = 0; k + 1 < u.size(); ++k)
        if (u[k + 1] != v[k]) return false;
    if (host.forbid_run > 0 && sym_parabolic(m, v.back())) {
        bool all_q = true;
        for (int s : u) all_q = all_q && s == v.back();
        if (all_q) return false;  // the window u v.back() would be q^m
    }
    return true;
}

struct EigenData {
    double rho = 0.0;
    std::vector<double> right, left;
};

EigenData eigen_data(const std::vector<double>& mat, int n) {
    auto iterate = [&](bool transpose) {
        std::vector<double> v(static_cast<std::size_t>(n), 1.0), w(static_cast<std::size_t>(n));
        double lam = 1.0;
        for (int it = 0; it < 200000; ++it) {
            double lam_lo = kInf, lam_hi = 0.0, wmax = 0.0;
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) {
                    double a = transpose ? mat[static_cast<std::size_t>(j) * n + i]
                                         : mat[static_cast<std::size_t>(i) * n + j];
                    s += a * v[static_cast<std::size_t>(j)];
                }
                w[static_cast<std::size_t>(i)] = s;
                double ratio = s / v[static_cast<std::size_t>(i)];
                lam_lo = std::min(lam_lo, ratio);
                lam_hi = std::max(lam_hi, ratio);
                wmax = std::max(wmax, s);
            }
            lam = 0.5 * (lam_lo + lam_hi);
            for (int i = 0; i < n; ++i)
                v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / wmax;
            if (lam_hi - lam_lo <= 1e-14 * lam_hi) break;
        }
        return std::make_pair(lam, v);
    };
    EigenData out;
    auto [rho_r, r] = iterate(false);
    auto [rho_l, l] = iterate(true);
    out.rho = 0.5 * (rho_r + rho_l);
    out.right = std::move(r);
    out.left = std::move(l);
    return out;
}

}  // namespace

int MarkovChainMeasure::state_of(const Word& w) const {
    for (int i = 0; i < state_count(); ++i)
        if (state_words[static_cast<std::size_t>(i)] == w) return i;
    return -1;
}

double MarkovChainMeasure::log_mass(const Word& w) const {
    if (w.empty()) return 0.0;
    const int r = block;
    if (static_cast<int>(w.size()) < r) {
        // marginal over states extending the prefix
        double total = 0.0;
        for (int i = 0; i < state_count(); ++i) {
            const Word& sw = state_words[static_cast<std::size_t>(i)];
            bool match = true;
            for (std::size_t k = 0; k < w.size(); ++k) match = match && sw[k] == w[k];
            if (match) total += initial[static_cast<std::size_t>(i)];
        }
        if (total <= 0.0) return -kInf;
        return std::log(total);
    }
    Word head(w.begin(), w.begin() + r);
    int state = state_of(head);
    if (state < 0) return -kInf;
    double lm = std::log(initial[static_cast<std::size_t>(state)]);
    for (std::size_t k = static_cast<std::size_t>(r); k < w.size(); ++k) {
        Word next(w.begin() + (k - r + 1), w.begin() + k + 1);
        int ns = state_of(next);
        if (ns < 0) return -kInf;
        double p = trans_at(state, ns);
        if (p <= 0.0) return -kInf;
        lm += std::log(p);
        state = ns;
    }
    return lm;
}

double GibbsMeasure::dimension() const {
    if (!(exponent > 0)) throw DomainError("measure dimension requires a positive exponent");
    return entropy / exponent;
}

namespace {

GibbsMeasure gibbs_linear(const PressureHost& host, double q) {
    const MapModel& m = *host.map;
    std::vector<Word> states = host_state_words(host);
    const int n = static_cast<int>(states.size());
    std::vector<double> mat(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (state_transition_ok(host, states[static_cast<std::size_t>(u)],
                                    states[static_cast<std::size_t>(v)]))
                mat[static_cast<std::size_t>(u) * n + v] = std::pow(
                    m.branch(states[static_cast<std::size_t>(u)].back()).slope, -q);

    EigenData eig = eigen_data(mat, n);

    GibbsMeasure g;
    g.host = host;
    g.q = q;
    g.exact = true;
    g.pressure = std::log(eig.rho);

    MarkovChainMeasure& chain = g.chain;
    chain.block = static_cast<int>(states.front().size());
    chain.state_words = states;
    for (const Word& w : states) chain.emit.push_back(w.back());
    chain.initial.assign(static_cast<std::size_t>(n), 0.0);
    chain.trans.assign(static_cast<std::size_t>(n) * n, 0.0);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        chain.initial[static_cast<std::size_t>(i)] =
            eig.left[static_cast<std::size_t>(i)] * eig.right[static_cast<std::size_t>(i)];
        z += chain.initial[static_cast<std::size_t>(i)];
    }
    for (auto& p : chain.initial) p /= z;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            chain.trans[static_cast<std::size_t>(u) * n + v] =
                mat[static_cast<std::size_t>(u) * n + v] *
                eig.right[static_cast<std::size_t>(v)] /
                (eig.rho * eig.right[static_cast<std::size_t>(u)]);

    double h = 0.0, chi = 0.0;
    for (int u = 0; u < n; ++u) {
        double pu = chain.initial[static_cast<std::size_t>(u)];
        chi += pu * std::log(m.branch(chain.emit[static_cast<std::size_t>(u)]).slope);
        for (int v = 0; v < n; ++v) {
            double p = chain.trans_at(u, v);
            if (p > 0) h -= pu * p * std::log(p);
        }
    }
    g.entropy = h;
    g.exponent = chi;

    // Gibbs ratio mu(D_w) / exp(-nP + S_n psi) depends only on the first
    // state and the end state; scan the pairs for the exact constant.
    const int r = chain.block;
    double ratio_min = kInf, ratio_max = 0.0;
    for (int u = 0; u < n; ++u) {
        double head = std::log(chain.initial[static_cast<std::size_t>(u)]) +
                      r * std::log(eig.rho) -
                      std::log(eig.right[static_cast<std::size_t>(u)]);
        for (int s : chain.state_words[static_cast<std::size_t>(u)])
            head += q * std::log(m.branch(s).slope);
        for (int v = 0; v < n; ++v) {
            double lr = head + std::log(eig.right[static_cast<std::size_t>(v)]);
            double ratio = std::exp(lr);
            ratio_min = std::min(ratio_min, ratio);
            ratio_max = std::max(ratio_max, ratio);
        }
    }
    g.gibbs_constant = std::max(ratio_max, 1.0 / ratio_min);
    return g;
}

GibbsMeasure gibbs_ratio_representation(const PressureHost& host, double q, int n_max) {
    const MapModel& m = *host.map;
    std::vector<Word> states = host_state_words(host);
    const int n = static_cast<int>(states.size());
    const int r = static_cast<int>(states.front().size());
    PressureValue pv = pressure_extrapolated(host, q, n_max);

    const double log_hull = std::log(m.hull().length());
    auto rep_weight = [&](const Word& w) {
        Interval c = cylinder(m, w);
        double mid_sum = log_hull - std::log(c.length());
        return -q * mid_sum;  // log weight exp(S_n psi) at the mean-value point
    };

    GibbsMeasure g;
    g.host = host;
    g.q = q;
    g.exact = false;
    g.pressure = pv.value;

    MarkovChainMeasure& chain = g.chain;
    chain.block = r;
    chain.state_words = states;
    for (const Word& w : states) chain.emit.push_back(w.back());
    chain.trans.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u) {
        LogSumExp norm;
        std::vector<double> lw(static_cast<std::size_t>(n), -kInf);
        for (int v = 0; v < n; ++v) {
            if (!state_transition_ok(host, states[static_cast<std::size_t>(u)],
                                     states[static_cast<std::size_t>(v)]))
                continue;
            Word ext = states[static_cast<std::size_t>(u)];
            ext.push_back(chain.emit[static_cast<std::size_t>(v)]);
            lw[static_cast<std::size_t>(v)] = rep_weight(ext);
            norm.add(lw[static_cast<std::size_t>(v)]);
        }
        for (int v = 0; v < n; ++v)
            if (std::isfinite(lw[static_cast<std::size_t>(v)]))
                chain.trans[static_cast<std::size_t>(u) * n + v] =
                    std::exp(lw[static_cast<std::size_t>(v)] - norm.value());
    }
    // stationary distribution by power iteration on the left
    std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / n), nxt(static_cast<std::size_t>(n));
    for (int it = 0; it < 20000; ++it) {
        double diff = 0.0;
        for (int v = 0; v < n; ++v) {
            double s = 0.0;
            for (int u = 0; u < n; ++u)
                s += pi[static_cast<std::size_t>(u)] * chain.trans_at(u, v);
            nxt[static_cast<std::size_t>(v)] = s;
        }
        for (int v = 0; v < n; ++v) {
            diff += std::fabs(nxt[static_cast<std::size_t>(v)] - pi[static_cast<std::size_t>(v)]);
            pi[static_cast<std::size_t>(v)] = nxt[static_cast<std::size_t>(v)];
        }
        if (diff < 1e-15) break;
    }
    chain.initial = pi;

    // measured invariants and Gibbs constant from moderate-depth cylinders
    int probe = std::min(std::max(r + 3, 8), host.engine->max_depth());
    probe = std::min(probe, 12);
    double h = 0.0, chi = 0.0;
    double ratio_min = kInf, ratio_max = 0.0;
    host.engine->visit_level(probe, [&](const Word& w, const CylStat& st) {
        double lm = chain.log_mass(w);
        if (!std::isfinite(lm)) return;
        double mu = std::exp(lm);
        double mid_sum = log_hull - st.log_len;
        h -= mu * lm;
        chi += mu * mid_sum;
        double lr = lm + probe * g.pressure + q * mid_sum;
        double ratio = std::exp(lr);
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    });
    g.entropy = h / probe;
    g.exponent = chi / probe;
    g.gibbs_constant = std::max(ratio_max, 1.0 / ratio_min);
    return g;
}

}  // namespace

GibbsMeasure gibbs_measure(const PressureHost& host, double q, int n_max) {
    if (host.forbid_run == 0 && host.map->is_parabolic())
        throw DomainError("Gibbs states require a uniformly hyperbolic host; "
                          "truncate the parabolic map first");
    if (host.linear()) return gibbs_linear(host, q);
    return gibbs_ratio_representation(host, q, n_max);
}

GibbsMeasure equilibrium_for_exponent(const PressureHost& host, double alpha, double tol) {
    PressureEvaluator ev(host);
    AlphaBounds bounds = alpha_bounds(ev);
    const double guard = 1e-12 * (1.0 + std::fabs(bounds.alpha_plus));
    if (!(alpha > bounds.alpha_minus + guard) || !(alpha < bounds.alpha_plus - guard))
        throw DomainError("target exponent " + format_double(alpha) +
                          " is not strictly inside the host exponent interval (" +
                          format_double(bounds.alpha_minus) + ", " +
                          format_double(bounds.alpha_plus) + ")");

    double qlo = -8.0, qhi = 8.0;
    auto chi_of = [&](double q) { return gibbs_measure(host, q).exponent; };
    while (chi_of(qlo) < alpha) {
        qlo *= 2.0;
        if (qlo < -512.0)
            throw ConvergenceError("exponent bisection ran out of range (low side)");
    }
    while (chi_of(qhi) > alpha) {
        qhi *= 2.0;
        if (qhi > 512.0)
            throw ConvergenceError("exponent bisection ran out of range (high side)");
    }
    GibbsMeasure best = gibbs_measure(host, 0.5 * (qlo + qhi));
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (qlo + qhi);
        best = gibbs_measure(host, mid);
        if (std::fabs(best.exponent - alpha) <= tol) return best;
        if (best.exponent > alpha)
            qlo = mid;
        else
            qhi = mid;
    }
    if (std::fabs(best.exponent - alpha) <= 10 * tol) return best;
    throw ConvergenceError("exponent bisection did not reach tolerance");
}

ConformalMassEntry conformal_mass(const MapModel& map, double d, const Word& w,
                                  double pressure_value, double rho_n) {
    Interval c = cylinder(map, w);
    double mid = c.midpoint();
    double sn = log_deriv_sum_word(map, mid, w);
    const double n = static_cast<double>(w.size());
    ConformalMassEntry out;
    double log_center = -n * pressure_value - d * sn;
    out.center = std::exp(log_center);
    out.lower = std::exp(log_center - n * rho_n);
    out.upper = std::exp(log_center + n * rho_n);
    return out;
}

}  // namespace lyapspec
