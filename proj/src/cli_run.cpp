#include "lyapspec/cli_run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "lyapspec/config.hpp"
#include "lyapspec/csv.hpp"
#include "lyapspec/entropy.hpp"
#include "lyapspec/measures.hpp"
#include "lyapspec/pressure.hpp"
#include "lyapspec/selftest.hpp"
#include "lyapspec/spectrum.hpp"
#include "lyapspec/wmeasure.hpp"

namespace lyapspec {

namespace {

void write_manifest(const std::string& out_path, const json& config_echo,
                    const json& error_bars) {
    json m;
    m["config_hash"] = fnv1a_hex(config_echo.dump());
    m["tool_version"] = kToolVersion;
    m["error_bars"] = error_bars;
    std::ofstream f(out_path + ".manifest.json");
    if (!f) throw SchemaError("cannot open manifest file for " + out_path);
    f << m.dump(2) << "\n";
}

struct PressureArgs {
    std::string map_config, out;
    double d_min = -4.0, d_max = 4.0;
    int d_steps = 81;
    int depth = 0;
};

int cmd_pressure(const PressureArgs& a, std::ostream&) {
    MapConfig mc = load_map_config(a.map_config);
    PressureHost host = whole_map_host(mc.map, mc.grid_points);
    int n_max = a.depth > 0 ? a.depth : mc.n_max;
    PressureEvaluator ev(host, n_max);
    CurveOptions opt;
    opt.d_min = a.d_min;
    opt.d_max = a.d_max;
    opt.steps = a.d_steps;
    opt.n_max = n_max;
    opt.refine_near_root = false;
    opt.tail_to_big = false;
    PressureCurve curve = build_pressure_curve(ev, opt);

    CsvWriter csv(a.out, {"d", "P_lower", "P_upper", "P_extrapolated", "err", "depth"});
    double max_err = 0.0;
    for (const PressureCurvePoint& p : curve.points()) {
        csv.row().col(p.d).col(p.lower).col(p.upper).col(p.value).col(p.error).col(p.depth);
        max_err = std::max(max_err, p.error);
    }
    json echo = {{"command", "pressure"}, {"map", mc.raw},     {"d_min", a.d_min},
                 {"d_max", a.d_max},      {"d_steps", a.d_steps}, {"depth", n_max}};
    write_manifest(a.out, echo, json{{"pressure", max_err}});
    return 0;
}

struct SpectrumArgs {
    std::string map_config, out;
    int alpha_steps = 121;
    int depth = 0;
};

json spectrum_meta(const SpectrumCurve& sc) {
    json meta;
    meta["alpha_minus"] = sc.alpha_minus;
    meta["alpha_plus"] = sc.alpha_plus;
    meta["d0_lo"] = sc.d0.lo;
    meta["d0_hi"] = sc.d0.hi;
    meta["case"] = spectrum_case_name(sc.kind);
    if (sc.kind == SpectrumCase::parabolic_case_ii)
        meta["alpha_plateau"] = sc.alpha_plateau;
    else
        meta["alpha_plateau"] = nullptr;
    return meta;
}

void write_spectrum_csv(const std::string& path, const SpectrumCurve& sc) {
    CsvWriter csv(path, {"alpha", "F", "minimizer_d", "attained_flag"});
    for (const SpectrumPoint& p : sc.points)
        csv.row().col(p.alpha).col(p.F).col(p.minimizer_d).col(p.attained ? 1 : 0);
}

int cmd_spectrum(const SpectrumArgs& a, std::ostream&) {
    MapConfig mc = load_map_config(a.map_config);
    PressureHost host = whole_map_host(mc.map, mc.grid_points);
    SpectrumOptions opt;
    opt.alpha_steps = a.alpha_steps;
    opt.n_max = a.depth > 0 ? a.depth : mc.n_max;
    SpectrumCurve sc = spectrum_curve(host, opt);
    write_spectrum_csv(a.out, sc);
    std::ofstream side(a.out + ".meta.json");
    if (!side) throw SchemaError("cannot open side file for " + a.out);
    side << spectrum_meta(sc).dump(2) << "\n";
    json echo = {{"command", "spectrum"},
                 {"map", mc.raw},
                 {"alpha_steps", a.alpha_steps},
                 {"depth", opt.n_max}};
    write_manifest(a.out, echo,
                   json{{"d0_bracket_halfwidth", 0.5 * (sc.d0.hi - sc.d0.lo)}});
    return 0;
}

struct MeasureArgs {
    std::string map_config, out;
    double q = 0.0, alpha = 0.0, conformal_d = 0.0;
    bool has_q = false, has_alpha = false, has_conformal = false;
    int depth = 6;
    int subsystem = 0;
};

int cmd_measure(const MeasureArgs& a, std::ostream&) {
    MapConfig mc = load_map_config(a.map_config);
    PressureHost host = a.subsystem > 0 ? make_subsystem(mc.map, a.subsystem).host
                                        : whole_map_host(mc.map, mc.grid_points);
    CsvWriter csv(a.out, {"word", "mass_center", "mass_lo", "mass_hi"});
    double max_rel_width = 0.0;

    if (a.has_conformal) {
        PressureValue pv = pressure_extrapolated(host, a.conformal_d);
        double rho = host.engine->rho_hat(std::min(a.depth, host.engine->max_depth()));
        host.engine->visit_level(a.depth, [&](const Word& w, const CylStat&) {
            ConformalMassEntry e =
                conformal_mass(*mc.map, a.conformal_d, w, pv.value, rho);
            csv.row().col(word_to_string(w)).col(e.center).col(e.lower).col(e.upper);
            if (e.center > 0)
                max_rel_width = std::max(max_rel_width, (e.upper - e.lower) / e.center);
        });
        json echo = {{"command", "measure"}, {"map", mc.raw},   {"conformal_d", a.conformal_d},
                     {"depth", a.depth},     {"subsystem", a.subsystem}};
        write_manifest(a.out, echo,
                       json{{"conformal_rel_width", max_rel_width},
                            {"pressure", pv.error}});
        return 0;
    }

    GibbsMeasure g = a.has_alpha ? equilibrium_for_exponent(host, a.alpha)
                                 : gibbs_measure(host, a.q);
    const double log_hull = std::log(mc.map->hull().length());
    host.engine->visit_level(a.depth, [&](const Word& w, const CylStat& st) {
        double lm = g.log_mass(w);
        double mass = std::isfinite(lm) ? std::exp(lm) : 0.0;
        // Gibbs envelope around exp(-nP + S_n psi) at the mean-value point
        double psi_sum = -g.q * (log_hull - st.log_len);
        double envelope = std::exp(-static_cast<double>(w.size()) * g.pressure + psi_sum);
        csv.row()
            .col(word_to_string(w))
            .col(mass)
            .col(envelope / g.gibbs_constant)
            .col(envelope * g.gibbs_constant);
    });
    json echo = {{"command", "measure"},
                 {"map", mc.raw},
                 {"q", g.q},
                 {"depth", a.depth},
                 {"subsystem", a.subsystem}};
    write_manifest(a.out, echo,
                   json{{"gibbs_constant", g.gibbs_constant},
                        {"exact_chain", g.exact}});
    return 0;
}

struct WsampleArgs {
    std::string map_config, schedule_config, out;
    std::uint64_t seed = 0;
    int seeds = 1;
    int checkpoints = 8;
};

int cmd_wsample(const WsampleArgs& a, std::ostream&) {
    MapConfig mc = load_map_config(a.map_config);
    ScheduleConfig sc = load_schedule_config(a.schedule_config);
    WSchedule sched = build_schedule(mc.map, sc.stages, sc.switch_times, sc.policy);

    std::vector<WSampleTrace> traces(static_cast<std::size_t>(a.seeds));
    parallel_for(static_cast<std::size_t>(a.seeds), [&](std::size_t i) {
        traces[i] = sample_w_word(sched, a.seed + i, a.checkpoints);
    });

    std::vector<std::string> header = {"m", "L_m", "H_m", "stage_index"};
    if (a.seeds > 1) header.insert(header.begin(), "seed");
    CsvWriter csv(a.out, header);
    for (int s = 0; s < a.seeds; ++s)
        for (const Checkpoint& cp : traces[static_cast<std::size_t>(s)].checkpoints) {
            auto row = csv.row();
            if (a.seeds > 1) row.col(static_cast<long long>(a.seed + s));
            row.col(cp.m).col(cp.L).col(cp.H).col(cp.stage_index);
        }

    json summary;
    json stages = json::array();
    for (std::size_t i = 0; i < sched.stages.size(); ++i) {
        const Stage& st = sched.stages[i];
        stages.push_back(json{{"m", st.switch_time},
                              {"level", st.spec.level},
                              {"q", st.measure.q},
                              {"chi", st.measure.exponent},
                              {"h", st.measure.entropy},
                              {"dim", st.measure.dimension()},
                              {"rho_diag", st.rho_diag}});
    }
    summary["stages"] = stages;
    json ratios = json::array();
    for (std::size_t i = 1; i < sched.stages.size(); ++i)
        ratios.push_back(static_cast<double>(sched.stages[i].switch_time) /
                         static_cast<double>(sched.stages[i - 1].switch_time));
    summary["growth_ratios"] = ratios;
    summary["policy"] = json{{"min_ratio", sched.policy.min_ratio},
                             {"index_ratio", sched.policy.index_ratio},
                             {"budget", sched.policy.budget}};
    json per_seed = json::array();
    double max_dev = 0.0;
    for (int s = 0; s < a.seeds; ++s) {
        OscillationReport rep =
            verify_oscillation(traces[static_cast<std::size_t>(s)], sched);
        json dev = json::array();
        bool ok = true;
        for (const StageObservation& so : rep.stages) {
            dev.push_back(json{{"stage", so.stage},
                               {"L", so.L},
                               {"H", so.H},
                               {"rel_dev_L", so.rel_dev_L},
                               {"rel_dev_H", so.rel_dev_H}});
            if (so.stage >= 3 && so.rel_dev_L >= 0.10) ok = false;
            max_dev = std::max(max_dev, so.rel_dev_L);
        }
        per_seed.push_back(json{{"seed", a.seed + s},
                                {"stage_deviations", dev},
                                {"max_window_residual_L", rep.max_window_residual_L},
                                {"max_window_residual_H", rep.max_window_residual_H},
                                {"min_HL_late", rep.min_HL_late},
                                {"min_stage_dim", rep.min_stage_dim},
                                {"late_stages_within_10pct", ok}});
    }
    summary["per_seed"] = per_seed;
    std::ofstream sf(a.out + ".summary.json");
    if (!sf) throw SchemaError("cannot open summary file for " + a.out);
    sf << summary.dump(2) << "\n";

    json echo = {{"command", "wsample"}, {"map", mc.raw},       {"schedule", sc.raw},
                 {"seed", a.seed},       {"seeds", a.seeds},    {"checkpoints", a.checkpoints}};
    write_manifest(a.out, echo, json{{"max_stage_rel_dev_L", max_dev}});
    return 0;
}

struct EntropyArgs {
    std::string map_config, out;
    std::vector<double> epsilons;
    int depth_min = 6, depth_max = 16;
    bool report = false;
};

int cmd_entropy(const EntropyArgs& a, std::ostream&) {
    MapConfig mc = load_map_config(a.map_config);
    PressureHost host = whole_map_host(mc.map, mc.grid_points);
    std::vector<double> eps = a.epsilons;
    if (eps.empty()) eps = {0.2, 0.1, 0.05, 0.02};
    CsvWriter csv(a.out, {"epsilon", "n", "count", "bound"});
    for (double e : eps) {
        CoverCount cc = level0_cover_count(host, e, a.depth_min, a.depth_max);
        for (std::size_t i = 0; i < cc.depths.size(); ++i)
            csv.row().col(e).col(cc.depths[i]).col(cc.counts[i]).col(cc.slope_bound);
    }
    if (a.report) {
        ZeroExponentReport rep = zero_exponent_report(mc.map, eps, a.depth_min, a.depth_max);
        json r;
        r["parabolic"] = rep.parabolic;
        r["zero_exponent_set_empty"] = !rep.parabolic;
        r["d0_lo"] = rep.d0.lo;
        r["d0_hi"] = rep.d0.hi;
        r["F0"] = rep.d0.root;
        if (rep.dimension_known) r["known_dimension"] = rep.known_dimension;
        json ladder = json::array();
        for (const CoverCount& cc : rep.ladder)
            ladder.push_back(json{{"epsilon", cc.epsilon},
                                  {"slope", cc.slope},
                                  {"bound", cc.slope_bound},
                                  {"empty", cc.empty}});
        r["ladder"] = ladder;
        std::ofstream rf(a.out + ".report.json");
        if (!rf) throw SchemaError("cannot open report file for " + a.out);
        rf << r.dump(2) << "\n";
    }
    double max_slope = 0.0;
    for (double e : eps)
        max_slope = std::max(max_slope,
                             level0_cover_count(host, e, a.depth_min, a.depth_max).slope);
    json echo = {{"command", "entropy"},   {"map", mc.raw},
                 {"epsilons", eps},        {"depth_min", a.depth_min},
                 {"depth_max", a.depth_max}};
    write_manifest(a.out, echo, json{{"max_cover_slope", max_slope}});
    return 0;
}

struct FigureArgs {
    std::string map_config, out;
    int d_steps = 81;
    int alpha_steps = 121;
};

int cmd_figure_data(const FigureArgs& a, std::ostream&) {
    MapConfig mc = load_map_config(a.map_config);
    PressureHost host = whole_map_host(mc.map, mc.grid_points);
    SpectrumOptions sopt;
    sopt.alpha_steps = a.alpha_steps;
    sopt.n_max = mc.n_max;
    SpectrumCurve sc = spectrum_curve(host, sopt);  // refuses degenerate maps

    PressureEvaluator ev(host, mc.n_max);
    CurveOptions popt;
    popt.steps = a.d_steps;
    popt.n_max = mc.n_max;
    PressureCurve pc = build_pressure_curve(ev, popt);
    {
        CsvWriter csv(a.out + "_pressure.csv",
                      {"d", "P_lower", "P_upper", "P_extrapolated", "err", "depth"});
        for (const PressureCurvePoint& p : pc.points())
            csv.row().col(p.d).col(p.lower).col(p.upper).col(p.value).col(p.error).col(
                p.depth);
    }
    write_spectrum_csv(a.out + "_spectrum.csv", sc);
    std::ofstream ann(a.out + "_annotations.json");
    if (!ann) throw SchemaError("cannot open annotations file for " + a.out);
    ann << spectrum_meta(sc).dump(2) << "\n";
    json echo = {{"command", "figure-data"},
                 {"map", mc.raw},
                 {"d_steps", a.d_steps},
                 {"alpha_steps", a.alpha_steps}};
    write_manifest(a.out + "_pressure.csv", echo,
                   json{{"d0_bracket_halfwidth", 0.5 * (sc.d0.hi - sc.d0.lo)}});
    return 0;
}

int cmd_selftest(std::ostream& out) {
    std::vector<CheckResult> results = run_selftest();
    int fails = 0;
    for (const CheckResult& r : results) {
        out << (r.pass ? "[pass] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) out << " -- " << r.detail;
        out << "\n";
        if (!r.pass) ++fails;
    }
    out << results.size() << " checks, " << fails << " failures\n";
    return fails == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lyapunov dimension spectra of Markov interval maps"};
    app.require_subcommand(1);

    PressureArgs pa;
    CLI::App* pressure = app.add_subcommand(
        "pressure", "Sampled pressure curve d -> P(-d log|f'|) with brackets");
    pressure->add_option("--map-config", pa.map_config, "map config file")->required();
    pressure->add_option("--d-min", pa.d_min, "grid start");
    pressure->add_option("--d-max", pa.d_max, "grid end");
    pressure->add_option("--d-steps", pa.d_steps, "grid size");
    pressure->add_option("--depth", pa.depth, "ladder top (0 = auto)");
    pressure->add_option("--out", pa.out, "output CSV")->required();

    SpectrumArgs sa;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "Lyapunov spectrum F(alpha) and its side data");
    spectrum->add_option("--map-config", sa.map_config, "map config file")->required();
    spectrum->add_option("--alpha-steps", sa.alpha_steps, "grid size");
    spectrum->add_option("--depth", sa.depth, "ladder top (0 = auto)");
    spectrum->add_option("--out", sa.out, "output CSV")->required();

    MeasureArgs ma;
    CLI::App* measure =
        app.add_subcommand("measure", "Gibbs or conformal cylinder masses");
    measure->add_option("--map-config", ma.map_config, "map config file")->required();
    CLI::Option* oq = measure->add_option("--q", ma.q, "potential parameter");
    CLI::Option* oa = measure->add_option("--alpha", ma.alpha, "target exponent");
    CLI::Option* oc =
        measure->add_option("--conformal-d", ma.conformal_d, "conformal parameter d");
    measure->add_option("--depth", ma.depth, "cylinder depth");
    measure->add_option("--subsystem", ma.subsystem, "truncation level (0 = whole map)");
    measure->add_option("--out", ma.out, "output CSV")->required();

    WsampleArgs wa;
    CLI::App* wsample =
        app.add_subcommand("wsample", "Sample words of the stage-switching measure");
    wsample->add_option("--map-config", wa.map_config, "map config file")->required();
    wsample->add_option("--schedule-config", wa.schedule_config, "schedule config file")
        ->required();
    wsample->add_option("--seed", wa.seed, "RNG seed (required for sampling)")->required();
    wsample->add_option("--seeds", wa.seeds, "number of consecutive seeds");
    wsample->add_option("--checkpoints", wa.checkpoints, "checkpoints per stage");
    wsample->add_option("--out", wa.out, "output CSV")->required();

    EntropyArgs ea;
    CLI::App* entropy =
        app.add_subcommand("entropy", "Cover counts of slowly-contracting cylinders");
    entropy->add_option("--map-config", ea.map_config, "map config file")->required();
    entropy->add_option("--epsilon", ea.epsilons, "epsilon (repeatable)");
    entropy->add_option("--depth-min", ea.depth_min, "smallest depth");
    entropy->add_option("--depth-max", ea.depth_max, "largest depth");
    entropy->add_flag("--report", ea.report, "also write the zero-exponent report");
    entropy->add_option("--out", ea.out, "output CSV")->required();

    FigureArgs fa;
    CLI::App* figure = app.add_subcommand(
        "figure-data", "Aligned pressure and spectrum CSVs with annotations");
    figure->add_option("--map-config", fa.map_config, "map config file")->required();
    figure->add_option("--d-steps", fa.d_steps, "pressure grid size");
    figure->add_option("--alpha-steps", fa.alpha_steps, "spectrum grid size");
    figure->add_option("--out", fa.out, "output path prefix")->required();

    CLI::App* selftest = app.add_subcommand("selftest", "Run the invariant battery");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*pressure) return cmd_pressure(pa, out);
        if (*spectrum) return cmd_spectrum(sa, out);
        if (*measure) {
            ma.has_q = oq->count() > 0;
            ma.has_alpha = oa->count() > 0;
            ma.has_conformal = oc->count() > 0;
            if (!ma.has_q && !ma.has_alpha && !ma.has_conformal)
                throw SchemaError("measure: give --q, --alpha, or --conformal-d");
            if (ma.has_q && ma.has_alpha)
                throw SchemaError("measure: give --q or --alpha, not both");
            return cmd_measure(ma, out);
        }
        if (*wsample) return cmd_wsample(wa, out);
        if (*entropy) return cmd_entropy(ea, out);
        if (*figure) return cmd_figure_data(fa, out);
        if (*selftest) return cmd_selftest(out);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        // parameter errors from the command line read as schema violations
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegeneracyError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace lyapspec
