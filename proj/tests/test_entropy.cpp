#include <doctest.h>

#include <cmath>

#include "lyapspec/entropy.hpp"
#include "lyapspec/models.hpp"

using namespace lyapspec;

TEST_CASE("slowly-contracting cylinder counts on a parabolic map") {
    PressureHost h = whole_map_host(model_mp(1.0));
    for (double eps : {0.2, 0.05}) {
        CoverCount cc = level0_cover_count(h, eps, 6, 14);
        CHECK(cc.slope <= std::log1p(eps) + 0.05);
        for (std::size_t i = 0; i < cc.depths.size(); ++i)
            CHECK(cc.counts[i] <= 2.0 * std::pow(1.0 + eps, cc.depths[i]));
    }
    CHECK_THROWS_AS(level0_cover_count(h, 0.0, 6, 14), DomainError);
}

TEST_CASE("uniformly expanding maps contract too fast to be counted") {
    PressureHost h = whole_map_host(model_doubling());
    CoverCount cc = level0_cover_count(h, 0.2, 4, 12);
    CHECK(cc.empty);
    for (double c : cc.counts) CHECK(c == 0.0);
    CHECK(cc.slope == 0.0);  // finite by convention on empty data
}

TEST_CASE("counts are monotone in epsilon") {
    PressureHost h = whole_map_host(model_mp(1.0));
    CoverCount wide = level0_cover_count(h, 0.25, 6, 14);
    CoverCount narrow = level0_cover_count(h, 0.1, 6, 14);
    for (std::size_t i = 0; i < wide.counts.size(); ++i)
        CHECK(narrow.counts[i] <= wide.counts[i]);
}

TEST_CASE("capacitive growth rates of cylinder families") {
    GrowthRates full = capacitive_entropy(
        whole_map_host(model_gc24()), [](const Word&, const CylStat&) { return true; }, 4,
        14);
    CHECK(full.central == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(full.lower == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(full.upper == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    GrowthRates fib = capacitive_entropy(
        whole_map_host(model_fibonacci()), [](const Word&, const CylStat&) { return true; },
        4, 16);
    CHECK(fib.central ==
          doctest::Approx(std::log((1.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-4));

    // half the tree: words starting with 0 still grow at full entropy
    GrowthRates half = capacitive_entropy(
        whole_map_host(model_gc24()),
        [](const Word& w, const CylStat&) { return w.front() == 0; }, 4, 14);
    CHECK(half.central == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("zero-exponent report for parabolic maps") {
    ZeroExponentReport rep = zero_exponent_report(model_mp(1.0));
    CHECK(rep.parabolic);
    CHECK(rep.d0.lo <= 1.0);
    CHECK(1.0 <= rep.d0.hi);
    CHECK(rep.dimension_known);
    CHECK(rep.known_dimension == 1.0);
    REQUIRE(rep.ladder.size() == 4);
    double prev_slope = kInf;
    double prev_bound = kInf;
    for (const CoverCount& cc : rep.ladder) {
        CHECK(cc.slope <= cc.slope_bound + 0.05);
        CHECK(cc.slope <= prev_slope + 1e-9);
        CHECK(cc.slope_bound < prev_bound);
        prev_slope = cc.slope;
        prev_bound = cc.slope_bound;
    }
}

TEST_CASE("zero-exponent report for hyperbolic maps") {
    ZeroExponentReport rep = zero_exponent_report(model_gc24());
    CHECK_FALSE(rep.parabolic);  // the zero-exponent set is empty
    CHECK(rep.ladder.empty());
    CHECK(rep.dimension_known);
    CHECK(rep.known_dimension == doctest::Approx(rep.d0.root));
}

TEST_CASE("zero-exponent report is stable across the intermittency parameter") {
    ZeroExponentReport rep = zero_exponent_report(model_mp(0.5), {0.2, 0.1}, 6, 12);
    CHECK(rep.parabolic);
    CHECK(rep.d0.lo <= 1.0);
    CHECK(1.0 <= rep.d0.hi);
}
