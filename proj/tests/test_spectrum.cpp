#include <doctest.h>

#include <cmath>

#include "lyapspec/models.hpp"
#include "lyapspec/spectrum.hpp"

using namespace lyapspec;

namespace {
const double kLn2 = std::log(2.0);
const double kLn4 = std::log(4.0);
}  // namespace

TEST_CASE("Legendre transform stationary values on gc24") {
    PressureHost h = whole_map_host(model_gc24());
    PressureSource src = PressureSource::oracle(h);
    PressureEvaluator ev(h);
    AlphaBounds bounds = alpha_bounds(ev);

    LegendreValue mid = legendre_transform(src, 1.5 * kLn2, bounds);
    CHECK(mid.inside);
    CHECK(mid.attained);
    CHECK(mid.F == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(std::fabs(mid.minimizer_d) < 1e-4);  // P'(0) = -1.5 log 2

    LegendreValue left = legendre_transform(src, kLn2, bounds);
    CHECK(left.inside);
    CHECK_FALSE(left.attained);  // infimum approached at the window edge
    CHECK(left.F >= 0.0);
    CHECK(left.F <= 1e-3);

    LegendreValue right = legendre_transform(src, kLn4, bounds);
    CHECK(right.F <= 1e-3);

    LegendreValue outside = legendre_transform(src, kLn4 + 0.1, bounds);
    CHECK_FALSE(outside.inside);
    CHECK(outside.F == -kInf);
}

TEST_CASE("degenerate map still transforms pointwise") {
    PressureHost h = whole_map_host(model_doubling());
    PressureSource src = PressureSource::oracle(h);
    PressureEvaluator ev(h);
    AlphaBounds bounds = alpha_bounds(ev);
    LegendreValue lv = legendre_transform(src, kLn2, bounds);
    CHECK(lv.F == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spectrum curve of a conformal repeller") {
    SpectrumCurve sc = spectrum_curve(whole_map_host(model_gc24()), {});
    CHECK(sc.kind == SpectrumCase::hyperbolic);
    CHECK(sc.alpha_minus == doctest::Approx(kLn2).epsilon(1e-9));
    CHECK(sc.alpha_plus == doctest::Approx(kLn4).epsilon(1e-9));
    CHECK(sc.peak_F >= sc.d0.lo - 1e-9);
    CHECK(sc.peak_F <= sc.d0.hi + 1e-9);

    // closed-form Bernoulli spectrum
    double worst = 0.0;
    for (int k = 1; k <= 20; ++k) {
        double p = k / 21.0;
        double alpha = p * kLn2 + (1 - p) * kLn4;
        double closed = -(p * std::log(p) + (1 - p) * std::log(1 - p)) / alpha;
        worst = std::max(worst, std::fabs(sc.eval(alpha) - closed));
    }
    CHECK(worst <= 1e-6);

    // concavity on the sampled grid
    const auto& pts = sc.points;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        double chord = 0.5 * (pts[i - 1].F + pts[i + 1].F);
        CHECK(pts[i].F >= chord - 1e-6);
    }
    for (const SpectrumPoint& p : pts) {
        CHECK(p.F >= 0.0);
        CHECK(p.F <= 1.0);
    }
}

TEST_CASE("spectrum refuses cohomologous-constant models") {
    CHECK_THROWS_AS(spectrum_curve(whole_map_host(model_doubling()), {}), DegeneracyError);
}

TEST_CASE("parabolic spectrum structure") {
    SpectrumCurve sc = spectrum_curve(whole_map_host(model_mp(1.0)), {});
    CHECK(sc.kind != SpectrumCase::hyperbolic);
    CHECK(sc.d0.lo <= 1.0);
    CHECK(1.0 <= sc.d0.hi);
    CHECK(sc.alpha_minus == 0.0);
    CHECK(sc.alpha_plus == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(sc.eval(0.0) == doctest::Approx(sc.F0));
    if (sc.kind == SpectrumCase::parabolic_case_ii) {
        CHECK(sc.alpha_plateau > 0.0);
        CHECK(sc.eval(0.5 * sc.alpha_plateau) == doctest::Approx(sc.F0).epsilon(1e-12));
        CHECK(sc.left_derivative_at_root < -1e-2);
    }
    // F decreases to 0 toward the right endpoint
    CHECK(sc.eval(sc.alpha_plus) <= 0.05);
}

TEST_CASE("level-set dimensions over exponent ranges") {
    SpectrumCurve sc = spectrum_curve(whole_map_host(model_gc24()), {});
    auto [dmax, dmin] = level_set_dimensions(sc, kLn2, kLn4);
    CHECK(dmax >= sc.d0.lo - 1e-6);
    CHECK(dmax <= sc.d0.hi + 1e-6);
    CHECK(dmin <= 1e-3);

    auto [s1, s2] = level_set_dimensions(sc, 1.0397, 1.0397);
    CHECK(s1 == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-3));

    CHECK_THROWS_AS(level_set_dimensions(sc, 0.05, 0.1), DomainError);  // misses spectrum
    CHECK_THROWS_AS(level_set_dimensions(sc, -1.0, 0.5), DomainError);

    SpectrumCurve sm = spectrum_curve(whole_map_host(model_mp(1.0)), {});
    auto [m1, m2] = level_set_dimensions(sm, 0.0, sm.alpha_plus);
    CHECK(m1 >= sm.d0.lo - 1e-6);
    CHECK(m1 <= sm.d0.hi + 1e-6);
    CHECK(m2 >= 0.0);
}

TEST_CASE("truncated spectra rise to the full spectrum inside their range") {
    auto mp = model_mp(1.0);
    FmTable t = subsystem_spectrum_table(mp, 1.0, {2, 3, 4, 5});
    REQUIRE(t.rows.size() == 4);
    double prev = -kInf;
    for (const FmRow& r : t.rows) {
        CHECK(r.value.inside);
        CHECK(r.value.F >= prev - 1e-9);
        prev = r.value.F;
    }
    CHECK(t.nondecreasing);
    CHECK(t.gap < 0.05);
    CHECK(t.gap > -0.01);
}

TEST_CASE("exponents below the truncated floor give the empty-set sentinel") {
    // the minimal exponent of the m <= 5 truncations exceeds 0.5, so the
    // level sets are empty there and the transform reports -inf
    auto mp = model_mp(1.0);
    FmTable t = subsystem_spectrum_table(mp, 0.5, {2, 3, 4, 5});
    for (const FmRow& r : t.rows) {
        CHECK_FALSE(r.value.inside);
        CHECK(r.value.F == -kInf);
    }
    CHECK(std::isfinite(t.limit));  // the full system does carry exponent 0.5
    CHECK(t.limit > 0.9);
}

TEST_CASE("hyperbolic maps need no truncation: F_m equals F") {
    auto gc24 = model_gc24();
    FmTable t = subsystem_spectrum_table(gc24, 1.0, {2, 4});
    for (const FmRow& r : t.rows) {
        CHECK(r.value.inside);
        CHECK(r.value.F == doctest::Approx(t.limit).epsilon(1e-4));
    }
    PmTable p = subsystem_pressure_table(gc24, 1.0, {2, 4});
    for (const PmRow& r : p.rows)
        CHECK(r.value.value == doctest::Approx(p.full.value).epsilon(1e-12));
}

TEST_CASE("intermittency below 1 yields a solid plateau") {
    SpectrumCurve sc = spectrum_curve(whole_map_host(model_mp(0.5)), {});
    CHECK(sc.kind == SpectrumCase::parabolic_case_ii);
    CHECK(sc.alpha_plateau > 0.1);
    CHECK(sc.eval(0.5 * sc.alpha_plateau) == doctest::Approx(sc.F0).epsilon(1e-12));
    CHECK(sc.d0.lo <= 1.0);
    CHECK(1.0 <= sc.d0.hi);
}
