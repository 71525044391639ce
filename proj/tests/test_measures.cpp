#include <doctest.h>

#include <cmath>

#include "lyapspec/measures.hpp"
#include "lyapspec/models.hpp"

using namespace lyapspec;

namespace {
const double kLn2 = std::log(2.0);
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const double kD0 = std::log(kPhi) / kLn2;  // root of 2^-d + 4^-d = 1
}  // namespace

TEST_CASE("maximal-entropy state on gc24") {
    PressureHost h = whole_map_host(model_gc24());
    GibbsMeasure g = gibbs_measure(h, 0.0);
    CHECK(g.exact);
    CHECK(g.chain.initial[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.entropy == doctest::Approx(kLn2).epsilon(1e-12));
    CHECK(g.exponent == doctest::Approx(1.5 * kLn2).epsilon(1e-12));
    CHECK(g.gibbs_constant == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.dimension() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("zero-pressure state carries the golden weights") {
    PressureHost h = whole_map_host(model_gc24());
    GibbsMeasure g = gibbs_measure(h, kD0);
    CHECK(g.chain.initial[0] == doctest::Approx(1.0 / kPhi).epsilon(1e-9));
    CHECK(g.chain.initial[1] == doctest::Approx(1.0 / (kPhi * kPhi)).epsilon(1e-9));
    CHECK(std::fabs(g.pressure) < 1e-12);
    CHECK(g.dimension() == doctest::Approx(kD0).epsilon(1e-9));
    // cylinder masses are Bernoulli products
    CHECK(std::exp(g.log_mass({0, 1, 0})) ==
          doctest::Approx(std::pow(1.0 / kPhi, 2) * (1.0 / (kPhi * kPhi))).epsilon(1e-9));
}

TEST_CASE("Parry measure of the golden-mean shift") {
    PressureHost h = whole_map_host(model_fibonacci());
    GibbsMeasure g = gibbs_measure(h, 0.0);
    CHECK(g.entropy == doctest::Approx(std::log(kPhi)).epsilon(1e-10));
    CHECK(g.chain.initial[0] ==
          doctest::Approx(kPhi * kPhi / (1.0 + kPhi * kPhi)).epsilon(1e-9));
    // level mass sums are exactly one
    double total = 0.0;
    for (const Word& w : enumerate_words(h.map->transitions(), 10))
        total += std::exp(g.log_mass(w));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    // Gibbs sandwich with the stored constant
    GibbsMeasure g1 = gibbs_measure(h, 1.0);
    for (const Word& w : enumerate_words(h.map->transitions(), 8)) {
        double envelope = -8.0 * g1.pressure - 1.0 * 8.0 * kLn2;  // S_n psi = -q n log 2
        double ratio = std::exp(g1.log_mass(w) - envelope);
        CHECK(ratio <= g1.gibbs_constant * (1 + 1e-9));
        CHECK(ratio >= 1.0 / g1.gibbs_constant * (1 - 1e-9));
    }
}

TEST_CASE("exponent-targeted equilibrium selection") {
    PressureHost h = whole_map_host(model_gc24());
    GibbsMeasure mid = equilibrium_for_exponent(h, 1.5 * kLn2);
    CHECK(std::fabs(mid.q) < 1e-6);
    CHECK(mid.chain.initial[0] == doctest::Approx(0.5).epsilon(1e-7));

    GibbsMeasure skew = equilibrium_for_exponent(h, 1.1 * kLn2);
    CHECK(skew.chain.initial[0] == doctest::Approx(0.9).epsilon(1e-7));
    CHECK(skew.q == doctest::Approx(std::log(9.0) / kLn2).epsilon(1e-6));

    CHECK_THROWS_AS(equilibrium_for_exponent(h, kLn2), DomainError);  // boundary
    CHECK_THROWS_AS(equilibrium_for_exponent(h, 0.1), DomainError);
}

TEST_CASE("dimension decreases toward the Dirac directions") {
    PressureHost h = whole_map_host(model_gc24());
    double prev = 1.0;
    for (double q : {5.0, 10.0, 20.0}) {
        double dim = gibbs_measure(h, q).dimension();
        CHECK(dim < prev);
        prev = dim;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("conformal masses") {
    auto dbl = model_doubling();
    for (int n : {1, 4, 9}) {
        ConformalMassEntry e = conformal_mass(*dbl, 1.0, repeated_word(0, n), 0.0, 0.0);
        CHECK(e.center == doctest::Approx(std::pow(2.0, -n)).epsilon(1e-12));
        CHECK(e.lower == e.center);
        CHECK(e.upper == e.center);
    }

    auto gc24 = model_gc24();
    ConformalMassEntry e0 = conformal_mass(*gc24, kD0, {0}, 0.0, 0.0);
    ConformalMassEntry e1 = conformal_mass(*gc24, kD0, {1}, 0.0, 0.0);
    CHECK(e0.center == doctest::Approx(1.0 / kPhi).epsilon(1e-9));
    CHECK(e1.center == doctest::Approx(1.0 / (kPhi * kPhi)).epsilon(1e-9));

    // parabolic tiling: level-8 bound sums bracket 1 at d = 1, P = 0
    auto mp = model_mp(1.0);
    PressureHost hm = whole_map_host(mp);
    double rho = hm.engine->rho_hat(8);
    double lo_sum = 0.0, hi_sum = 0.0;
    hm.engine->visit_level(8, [&](const Word& w, const CylStat&) {
        ConformalMassEntry e = conformal_mass(*mp, 1.0, w, 0.0, rho);
        lo_sum += e.lower;
        hi_sum += e.upper;
    });
    CHECK(lo_sum <= 1.0);
    CHECK(hi_sum >= 1.0);
}

TEST_CASE("equilibrium identity and the variational maximum") {
    for (auto map : {model_gc24(), model_eq_exponent_triple()}) {
        PressureHost h = whole_map_host(map);
        for (double q : {-1.0, 0.0, 0.5, 1.5}) {
            GibbsMeasure g = gibbs_measure(h, q);
            CHECK(std::fabs(g.entropy - q * g.exponent - g.pressure) < 1e-8);
        }
    }
}

TEST_CASE("restricted-alphabet hosts carry their own Gibbs states") {
    auto triple = model_eq_exponent_triple();
    PressureHost full = whole_map_host(triple);
    PressureHost sub = restricted_host(triple, {0, 2});
    GibbsMeasure ga = gibbs_measure(full, 0.0);
    GibbsMeasure gb = gibbs_measure(sub, 0.0);
    // distinct entropies at the same exponent 2 log 2
    CHECK(ga.exponent == doctest::Approx(2 * kLn2).epsilon(1e-10));
    CHECK(gb.exponent == doctest::Approx(2 * kLn2).epsilon(1e-10));
    CHECK(ga.entropy == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(gb.entropy == doctest::Approx(kLn2).epsilon(1e-10));
}

TEST_CASE("finite-depth representation on a nonlinear truncation") {
    auto mp = model_mp(1.0);
    Subsystem s3 = make_subsystem(mp, 3);
    GibbsMeasure g = gibbs_measure(s3.host, 0.8);
    CHECK_FALSE(g.exact);
    CHECK(g.exponent > 0.0);
    CHECK(g.gibbs_constant >= 1.0);
    // masses sum to one on every level
    for (int n : {4, 8, 10}) {
        double total = 0.0;
        s3.host.engine->visit_level(n, [&](const Word& w, const CylStat&) {
            total += std::exp(g.log_mass(w));
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    // approximate equilibrium identity at the measured invariants
    CHECK(std::fabs(g.entropy - 0.8 * g.exponent - g.pressure) < 0.05);
    // Gibbs measures need hyperbolic hosts
    CHECK_THROWS_AS(gibbs_measure(whole_map_host(mp), 0.8), DomainError);
}

TEST_CASE("dimension needs a positive exponent") {
    GibbsMeasure g = gibbs_measure(whole_map_host(model_gc24()), 0.0);
    g.exponent = 0.0;
    CHECK_THROWS_AS(g.dimension(), DomainError);
}
