#include "lyapspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace lyapspec {

PressureSource PressureSource::oracle(PressureHost host) {
    PressureSource s;
    if (!host.linear()) throw DomainError("oracle pressure source requires a linear model");
    s.exact_ = true;
    s.f_ = [host](double d) { return pressure_matrix_oracle(host, d); };
    return s;
}

PressureSource PressureSource::curve(std::shared_ptr<const PressureCurve> c) {
    PressureSource s;
    s.exact_ = false;
    s.f_ = [c](double d) { return c->eval(d); };
    return s;
}

namespace {

// Golden-section minimum of a convex function on [a, b].
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a,
                                     double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace

LegendreValue legendre_transform(const PressureSource& pressure, double alpha,
                                 const AlphaBounds& bounds, double d_big, double tol_d) {
    if (!(alpha > 0)) throw DomainError("legendre_transform requires alpha > 0");
    LegendreValue out;
    const double tol_alpha = 1e-9 * (1.0 + std::fabs(bounds.alpha_plus));
    out.inside =
        alpha >= bounds.alpha_minus - tol_alpha && alpha <= bounds.alpha_plus + tol_alpha;
    if (!out.inside) return out;  // F = -inf sentinel

    auto objective = [&](double d) { return pressure(d) + alpha * d; };
    auto [dstar, val] = golden_min(objective, -d_big, d_big, tol_d);
    out.minimizer_d = dstar;
    out.F = val / alpha;
    // minimizers in the outer tenth of the window read as boundary limits
    out.attained = std::fabs(dstar) < 0.9 * d_big;
    return out;
}

const char* spectrum_case_name(SpectrumCase c) {
    switch (c) {
        case SpectrumCase::hyperbolic: return "hyperbolic";
        case SpectrumCase::parabolic_case_i: return "parabolic-I";
        case SpectrumCase::parabolic_case_ii: return "parabolic-II";
    }
    return "?";
}

SpectrumCurve spectrum_curve(const PressureHost& host, const SpectrumOptions& opt) {
    PressureEvaluator ev(host, opt.n_max);
    if (degeneracy_test(ev))
        throw DegeneracyError(
            "log|f'| is cohomologous to a constant (affine pressure); every orbit shares "
            "one exponent and the spectrum degenerates to a point");

    SpectrumCurve out;
    AlphaBounds bounds = alpha_bounds(ev);
    out.alpha_minus = bounds.alpha_minus;
    out.alpha_plus = bounds.alpha_plus;
    out.d0 = pressure_root(ev);
    out.F0 = out.d0.root;

    PressureSource source = [&] {
        if (host.linear() && opt.prefer_oracle) return PressureSource::oracle(host);
        CurveOptions copt;
        copt.n_max = opt.n_max;
        copt.d_big = opt.d_big;
        auto curve = std::make_shared<PressureCurve>(build_pressure_curve(ev, copt));
        return PressureSource::curve(curve);
    }();

    // case classification from the one-sided derivative at the pressure root
    if (!host.map->is_parabolic()) {
        out.kind = SpectrumCase::hyperbolic;
        out.left_derivative_at_root = 0.0;
        out.alpha_plateau = 0.0;
    } else {
        const double h = 1e-3;
        double deriv = (source(out.d0.root) - source(out.d0.root - h)) / h;
        out.left_derivative_at_root = deriv;
        if (std::fabs(deriv) < opt.case_threshold) {
            out.kind = SpectrumCase::parabolic_case_i;
            out.alpha_plateau = 0.0;
        } else {
            out.kind = SpectrumCase::parabolic_case_ii;
            out.alpha_plateau = -deriv;
        }
    }

    const double plateau =
        out.kind == SpectrumCase::parabolic_case_ii ? out.alpha_plateau : -kInf;
    auto eval = [source, bounds, plateau, F0 = out.F0, d_big = opt.d_big](double a) {
        if (a <= 0) return F0;  // limit value at the left end of a parabolic spectrum
        if (a <= plateau) return F0;
        LegendreValue lv = legendre_transform(source, a, bounds, d_big);
        if (!lv.inside) return -kInf;
        return std::max(lv.F, 0.0);
    };
    out.eval = eval;

    const int steps = std::max(opt.alpha_steps, 5);
    for (int i = 0; i < steps; ++i) {
        double a = out.alpha_minus +
                   (out.alpha_plus - out.alpha_minus) * i / static_cast<double>(steps - 1);
        SpectrumPoint pt;
        pt.alpha = a;
        if (a <= 0 || a <= plateau) {
            pt.F = out.F0;
            pt.minimizer_d = out.d0.root;
            pt.attained = false;
        } else {
            LegendreValue lv = legendre_transform(source, a, bounds, opt.d_big);
            pt.F = std::max(lv.F, 0.0);
            pt.minimizer_d = lv.minimizer_d;
            pt.attained = lv.attained;
        }
        out.points.push_back(pt);
    }

    // peak refinement: concave F, golden search around the grid argmax
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.points.size(); ++i)
        if (out.points[i].F > out.points[best].F) best = i;
    double lo = out.points[best > 0 ? best - 1 : 0].alpha;
    double hi = out.points[std::min(best + 1, out.points.size() - 1)].alpha;
    if (hi > lo) {
        auto [pa, pv] = golden_min([&](double a) { return -eval(a); }, std::max(lo, 1e-12),
                                   hi, 1e-9);
        out.peak_alpha = pa;
        out.peak_F = -pv;
    } else {
        out.peak_alpha = out.points[best].alpha;
        out.peak_F = out.points[best].F;
    }
    if (out.points[best].F > out.peak_F) {
        out.peak_alpha = out.points[best].alpha;
        out.peak_F = out.points[best].F;
    }
    return out;
}

std::pair<double, double> level_set_dimensions(const SpectrumCurve& curve, double a,
                                               double b) {
    if (!(a >= 0) || !(b >= a) || !(b > 0))
        throw DomainError("level set range requires 0 <= a <= b and b > 0");
    double lo = std::max(a, curve.alpha_minus);
    double hi = std::min(b, curve.alpha_plus);
    if (lo > hi + 1e-12)
        throw DomainError("level set is empty: the range misses the spectrum");
    hi = std::max(hi, lo);

    double fmax = -kInf, fmin = kInf;
    auto consider = [&](double f) {
        fmax = std::max(fmax, f);
        fmin = std::min(fmin, f);
    };
    consider(curve.eval(lo));
    consider(curve.eval(hi));
    for (const SpectrumPoint& pt : curve.points)
        if (pt.alpha >= lo - 1e-12 && pt.alpha <= hi + 1e-12) consider(pt.F);
    if (curve.peak_alpha >= lo && curve.peak_alpha <= hi) consider(curve.peak_F);
    return {fmax, fmin};
}

FmTable subsystem_spectrum_table(std::shared_ptr<const MapModel> map, double alpha,
                                 const std::vector<int>& m_ladder,
                                 const SpectrumOptions& opt) {
    if (!(alpha > 0)) throw DomainError("subsystem spectrum table requires alpha > 0");
    FmTable out;
    for (int m : m_ladder) {
        PressureHost host =
            map->is_parabolic() ? make_subsystem(map, m).host : whole_map_host(map);
        PressureEvaluator ev(host, opt.n_max);
        AlphaBounds bounds = alpha_bounds(ev);
        CurveOptions copt;
        copt.n_max = opt.n_max;
        copt.d_big = opt.d_big;
        copt.refine_near_root = false;
        auto curve = std::make_shared<PressureCurve>(build_pressure_curve(ev, copt));
        PressureSource src = PressureSource::curve(curve);
        FmRow row;
        row.m = m;
        row.value = legendre_transform(src, alpha, bounds, opt.d_big);
        out.rows.push_back(row);
    }
    PressureHost whole = whole_map_host(map);
    SpectrumOptions wopt = opt;
    SpectrumCurve full = spectrum_curve(whole, wopt);
    out.limit = full.eval(alpha);

    out.nondecreasing = true;
    double prev = -kInf;
    double last_finite = -kInf;
    for (const FmRow& r : out.rows) {
        double v = r.value.inside ? r.value.F : -kInf;
        if (v < prev - 1e-3) out.nondecreasing = false;
        prev = v;
        if (std::isfinite(v)) last_finite = v;
    }
    out.gap = out.limit - last_finite;
    return out;
}

}  // namespace lyapspec
