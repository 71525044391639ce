#include "lyapspec/wmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lyapspec {

namespace {

bool sym_parabolic(const MapModel& m, int s) {
    for (int q : m.parabolic_symbols())
        if (q == s) return true;
    return false;
}

PressureHost stage_host(std::shared_ptr<const MapModel> map, const StageSpec& spec) {
    if (spec.level == 0) {
        if (map->is_parabolic())
            throw SchemaError("stage level 0 requires a hyperbolic map; "
                              "parabolic maps need a truncation level >= 2");
        if (!spec.restrict_symbols.empty())
            return restricted_host(map, spec.restrict_symbols);
        return whole_map_host(map);
    }
    if (!spec.restrict_symbols.empty())
        throw SchemaError("symbol restriction is only supported at stage level 0");
    return make_subsystem(map, spec.level).host;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

WSchedule build_schedule(std::shared_ptr<const MapModel> map,
                         const std::vector<StageSpec>& specs,
                         const std::vector<long long>& switch_times,
                         const GrowthPolicy& policy) {
    if (specs.empty()) throw SchemaError("schedule needs at least one stage spec");
    if (switch_times.empty()) throw SchemaError("schedule needs at least one switch time");
    const long long budget =
        map->is_linear() ? policy.budget : std::min(policy.budget, policy.nonlinear_budget);
    long long prev = 0;
    for (std::size_t i = 0; i < switch_times.size(); ++i) {
        long long m = switch_times[i];
        if (m <= prev) throw SchemaError("switch times must be strictly increasing");
        if (i > 0) {
            double need = std::max(policy.min_ratio * static_cast<double>(prev),
                                   policy.index_ratio
                                       ? static_cast<double>(i) * static_cast<double>(prev)
                                       : 0.0);
            if (static_cast<double>(m) < need)
                throw SchemaError("growth policy violated at stage " + std::to_string(i + 1) +
                                  ": m=" + std::to_string(m) + " but policy requires >= " +
                                  format_double(need));
        }
        prev = m;
    }
    if (prev > budget)
        throw SchemaError("schedule length " + std::to_string(prev) +
                          " exceeds the sampling budget " + std::to_string(budget));

    WSchedule sched;
    sched.map = map;
    sched.policy = policy;

    // tempered-distortion diagnostic: the ambient map's rho_n at the switch
    // times, extrapolated from measurable depths along the log(n)/n trend
    double rho_coeff = 0.0;
    if (!map->is_linear()) {
        CylinderEngine probe(map, 0, {}, 5);
        int top = std::min(probe.max_depth(), 12);
        int cnt = 0;
        for (int n : {top, top - 3, top - 6}) {
            if (n < 4) continue;
            rho_coeff += probe.rho_hat(n) * n / std::log(static_cast<double>(n));
            ++cnt;
        }
        if (cnt > 0) rho_coeff /= cnt;
    }

    int prev_level = 0;
    for (std::size_t i = 0; i < switch_times.size(); ++i) {
        const StageSpec& spec = specs[i % specs.size()];
        if (map->is_parabolic()) {
            if (i == 0)
                prev_level = spec.level;
            else if (spec.level < prev_level)
                throw SchemaError("truncation levels must be nondecreasing along the schedule");
            prev_level = spec.level;
        }
        Stage st;
        st.spec = spec;
        st.switch_time = switch_times[i];
        PressureHost host = stage_host(map, spec);
        if (spec.alpha && spec.q)
            throw SchemaError("stage " + std::to_string(i + 1) + ": give q or alpha, not both");
        if (spec.alpha)
            st.measure = equilibrium_for_exponent(host, *spec.alpha);
        else
            st.measure = gibbs_measure(host, spec.q.value_or(0.0));
        if (!(st.measure.exponent > 0))
            throw SchemaError("stage " + std::to_string(i + 1) +
                              " has nonpositive exponent; unusable for the construction");
        double m = static_cast<double>(st.switch_time);
        st.rho_diag = m > 1.0 ? rho_coeff * std::log(m) / m : rho_coeff;
        sched.stages.push_back(std::move(st));
    }

    // rho/chi must trend down toward zero on parabolic hosts
    if (map->is_parabolic()) {
        double prev_ratio = kInf;
        for (const Stage& st : sched.stages) {
            double ratio = st.rho_diag / st.measure.exponent;
            if (ratio > prev_ratio * 1.05 + 1e-12)
                throw SchemaError("tempered-distortion schedule diagnostic failed: "
                                  "rho/chi is not trending down");
            prev_ratio = std::min(prev_ratio, ratio);
        }
    }
    return sched;
}

const Checkpoint& WSampleTrace::at_time(long long m) const {
    for (const Checkpoint& c : checkpoints)
        if (c.m == m) return c;
    throw DomainError("no checkpoint at time " + std::to_string(m));
}

namespace {

std::vector<long long> window_checkpoints(long long lo, long long hi, int count) {
    // geometric grid on (lo, hi], always including hi
    std::vector<long long> out;
    double a = static_cast<double>(std::max<long long>(lo, 1));
    double b = static_cast<double>(hi);
    for (int k = 1; k <= count; ++k) {
        double t = a * std::pow(b / a, static_cast<double>(k) / count);
        long long m = static_cast<long long>(std::llround(t));
        m = std::min(m, hi);
        if (m > lo && (out.empty() || m > out.back())) out.push_back(m);
    }
    if (out.empty() || out.back() != hi) out.push_back(hi);
    return out;
}

}  // namespace

WSampleTrace sample_w_word(const WSchedule& schedule, std::uint64_t seed,
                           int checkpoints_per_stage) {
    const MapModel& map = *schedule.map;
    const bool linear = map.is_linear();
    WSampleTrace trace;
    trace.seed = seed;
    std::mt19937_64 rng(seed);

    const long long total = schedule.stages.back().switch_time;
    trace.symbols.reserve(static_cast<std::size_t>(total));

    // checkpoint plan
    std::vector<long long> plan;
    long long prev = 0;
    for (const Stage& st : schedule.stages) {
        long long lo = prev == 0 ? std::min<long long>(std::max<long long>(st.switch_time / 64, 8),
                                                       st.switch_time)
                                 : prev;
        auto cps = window_checkpoints(prev == 0 ? std::min(lo, st.switch_time) : prev,
                                      st.switch_time, checkpoints_per_stage);
        for (long long m : cps) plan.push_back(m);
        prev = st.switch_time;
    }
    std::sort(plan.begin(), plan.end());
    plan.erase(std::unique(plan.begin(), plan.end()), plan.end());

    double logp = 0.0;       // log mu(Delta_{emitted})
    double lin_sum = 0.0;    // running sum of log slopes (linear maps)
    std::size_t plan_pos = 0;
    int trailing_run = 0;    // trailing parabolic-symbol run of the emitted word
    int trailing_sym = -1;

    auto emit = [&](int sym, double logp_increment, int stage_index) {
        trace.symbols.push_back(static_cast<std::int8_t>(sym));
        logp += logp_increment;
        if (linear) lin_sum += std::log(map.branch(sym).slope);
        if (sym_parabolic(map, sym)) {
            trailing_run = (sym == trailing_sym) ? trailing_run + 1 : 1;
        } else {
            trailing_run = 0;
        }
        trailing_sym = sym;
        const long long m = static_cast<long long>(trace.symbols.size());
        if (plan_pos < plan.size() && plan[plan_pos] == m) {
            Checkpoint cp;
            cp.m = m;
            cp.H = -logp / static_cast<double>(m);
            if (linear) {
                cp.L = lin_sum / static_cast<double>(m);
            } else {
                Word w(trace.symbols.begin(), trace.symbols.end());
                Interval c = cylinder(map, w);
                cp.L = log_deriv_sum_word(map, c.midpoint(), w) / static_cast<double>(m);
            }
            cp.stage_index = stage_index;
            trace.checkpoints.push_back(cp);
            ++plan_pos;
        }
    };

    for (std::size_t si = 0; si < schedule.stages.size(); ++si) {
        const Stage& stage = schedule.stages[si];
        const MarkovChainMeasure& chain = stage.measure.chain;
        const int stage_index = static_cast<int>(si) + 1;
        const int forbid = stage.spec.level;  // 0 or the truncation level
        int cur_state = -1;

        // initial atom: the first chain state of this stage, conditioned on
        // junction admissibility when there is a preceding block
        {
            std::vector<int> cand;
            std::vector<double> weight;
            for (int u = 0; u < chain.state_count(); ++u) {
                const Word& sw = chain.state_words[static_cast<std::size_t>(u)];
                bool ok = true;
                if (!trace.symbols.empty())
                    ok = map.transitions().allowed(trace.symbols.back(), sw.front());
                if (ok && forbid > 0) {
                    int run = trailing_run;
                    int sym = trailing_sym;
                    for (int s : sw) {
                        if (sym_parabolic(map, s))
                            run = (s == sym) ? run + 1 : 1;
                        else
                            run = 0;
                        sym = s;
                        if (run >= forbid) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (ok && chain.initial[static_cast<std::size_t>(u)] > 0) {
                    cand.push_back(u);
                    weight.push_back(chain.initial[static_cast<std::size_t>(u)]);
                }
            }
            if (cand.empty())
                throw ConvergenceError("junction has no admissible continuation");
            double norm = 0.0;
            for (double w : weight) norm += w;
            if (!trace.symbols.empty()) trace.junction_log_norm.push_back(std::log(norm));

            double u01 = uniform01(rng) * norm;
            std::size_t pick = 0;
            double acc = 0.0;
            for (std::size_t k = 0; k < cand.size(); ++k) {
                acc += weight[k];
                if (u01 <= acc || k + 1 == cand.size()) {
                    pick = k;
                    break;
                }
            }
            cur_state = cand[pick];
            const Word& sw = chain.state_words[static_cast<std::size_t>(cur_state)];
            // emit the atom symbol by symbol with exact marginal increments
            double prev_marginal = norm;
            Word emitted;
            for (int s : sw) {
                emitted.push_back(s);
                double marg = 0.0;
                for (std::size_t k = 0; k < cand.size(); ++k) {
                    const Word& cw = chain.state_words[static_cast<std::size_t>(cand[k])];
                    bool match = true;
                    for (std::size_t j = 0; j < emitted.size(); ++j)
                        match = match && cw[j] == emitted[j];
                    if (match) marg += weight[k];
                }
                emit(s, std::log(marg) - std::log(prev_marginal), stage_index);
                prev_marginal = marg;
                if (static_cast<long long>(trace.symbols.size()) >= stage.switch_time) break;
            }
        }

        // per-symbol transitions until the switch time
        while (static_cast<long long>(trace.symbols.size()) < stage.switch_time) {
            double u01 = uniform01(rng);
            double acc = 0.0;
            int next = -1;
            for (int v = 0; v < chain.state_count(); ++v) {
                double p = chain.trans_at(cur_state, v);
                if (p <= 0) continue;
                acc += p;
                next = v;
                if (u01 <= acc) break;
            }
            if (next < 0) throw ConvergenceError("chain state has no outgoing transition");
            emit(chain.emit[static_cast<std::size_t>(next)],
                 std::log(chain.trans_at(cur_state, next)), stage_index);
            cur_state = next;
        }
    }
    trace.accumulated_log_prob = logp;
    return trace;
}

OscillationReport verify_oscillation(const WSampleTrace& trace, const WSchedule& schedule) {
    OscillationReport rep;
    const std::size_t ns = schedule.stages.size();
    for (std::size_t i = 0; i < ns; ++i) {
        const Stage& st = schedule.stages[i];
        StageObservation obs;
        obs.stage = static_cast<int>(i) + 1;
        obs.m = st.switch_time;
        obs.chi = st.measure.exponent;
        obs.h = st.measure.entropy;
        obs.dim = st.measure.dimension();
        const Checkpoint& cp = trace.at_time(st.switch_time);
        obs.L = cp.L;
        obs.H = cp.H;
        obs.rel_dev_L = std::fabs(cp.L - obs.chi) / obs.chi;
        obs.rel_dev_H = obs.h > 0 ? std::fabs(cp.H - obs.h) / obs.h : 0.0;
        rep.stages.push_back(obs);
        rep.min_stage_dim = std::min(rep.min_stage_dim, obs.dim);
        rep.realized_L_min = std::min(rep.realized_L_min, cp.L);
        rep.realized_L_max = std::max(rep.realized_L_max, cp.L);
    }

    for (const Checkpoint& cp : trace.checkpoints) {
        int i = cp.stage_index;  // window (m_{i-1}, m_i]
        if (i < 2) continue;     // no interpolation data before the first switch
        const Stage& prev = schedule.stages[static_cast<std::size_t>(i) - 2];
        const Stage& cur = schedule.stages[static_cast<std::size_t>(i) - 1];
        double mi = static_cast<double>(prev.switch_time);
        double m = static_cast<double>(cp.m);
        double interp_L =
            (mi / m) * prev.measure.exponent + ((m - mi) / m) * cur.measure.exponent;
        double interp_H = (mi / m) * prev.measure.entropy + ((m - mi) / m) * cur.measure.entropy;
        rep.max_window_residual_L =
            std::max(rep.max_window_residual_L, std::fabs(cp.L - interp_L));
        rep.max_window_residual_H =
            std::max(rep.max_window_residual_H, std::fabs(cp.H - interp_H));
        if (cp.L > 0) {
            double hl = cp.H / cp.L;
            rep.min_HL_ratio = std::min(rep.min_HL_ratio, hl);
            if (i >= 3) rep.min_HL_late = std::min(rep.min_HL_late, hl);
        }
    }
    return rep;
}

}  // namespace lyapspec
