#include <doctest.h>

#include <cmath>

#include "lyapspec/models.hpp"

using namespace lyapspec;

namespace {
const double kSqrt5 = std::sqrt(5.0);
}

TEST_CASE("manneville_pomeau geometry at s=1") {
    auto mp = model_mp(1.0);
    double xstar = (kSqrt5 - 1.0) / 2.0;  // positive root of x + x^2 = 1
    CHECK(mp->branch(0).domain.hi == doctest::Approx(xstar).epsilon(1e-12));
    CHECK(mp->branch(1).domain.lo == doctest::Approx(xstar).epsilon(1e-12));
    CHECK(mp->is_parabolic());
    CHECK(mp->parabolic_points() == std::vector<double>{0.0});
    CHECK(mp->full_interval());
    // f'(x) = 1 + 2x on both branches
    CHECK(mp->branch(0).derivative(0.0) == doctest::Approx(1.0));
    CHECK(mp->branch(0).derivative(0.3) == doctest::Approx(1.6));
    CHECK(mp->branch(1).derivative(1.0) == doctest::Approx(3.0));
}

TEST_CASE("cylinders by inverse-branch composition") {
    auto gc24 = model_gc24();
    Interval c = cylinder(*gc24, {0, 1});
    CHECK(c.lo == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(c.hi == doctest::Approx(0.5).epsilon(1e-12));

    auto dbl = model_doubling();
    Interval d = cylinder(*dbl, {0, 1});
    CHECK(d.lo == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.hi == doctest::Approx(0.5).epsilon(1e-12));

    auto mp = model_mp(1.0);
    Interval m = cylinder(*mp, {0});
    CHECK(m.lo == doctest::Approx(0.0));
    CHECK(m.hi == doctest::Approx((kSqrt5 - 1.0) / 2.0).epsilon(1e-10));

    auto fib = model_fibonacci();
    CHECK_THROWS_AS(cylinder(*fib, {1, 1}), DomainError);
    CHECK_THROWS_AS(cylinder(*fib, {}), DomainError);
}

TEST_CASE("orbit derivative sums") {
    auto dbl = model_doubling();
    CHECK(log_deriv_sum(*dbl, 0.3141, 10).average == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    auto gc24 = model_gc24();
    CHECK(log_deriv_sum(*gc24, 1.0, 7).average == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    auto mp = model_mp(1.0);
    CHECK(log_deriv_sum(*mp, 0.0, 25).sum == doctest::Approx(0.0).epsilon(1e-14));

    // escape from a gap is an itinerary error
    CHECK_THROWS_AS(log_deriv_sum(*gc24, 0.6, 1), DomainError);
}

TEST_CASE("chain rule along orbits") {
    auto mp = model_mp(1.0);
    Word w;
    for (int k = 0; k < 16; ++k) w.push_back(k % 3 == 0 ? 1 : 0);
    double x = cylinder(*mp, w).midpoint();
    for (int n : {3, 7}) {
        DerivSum total = log_deriv_sum(*mp, x, n + 5);
        DerivSum head = log_deriv_sum(*mp, x, n);
        double y = x;
        for (int k = 0; k < n; ++k) y = mp->apply(y);
        DerivSum tail = log_deriv_sum(*mp, y, 5);
        CHECK(total.sum == doctest::Approx(head.sum + tail.sum).epsilon(1e-9));
    }
}

TEST_CASE("contraction rates of parabolic-block cylinders") {
    auto mp = model_mp(1.0);
    double r10 = cylinder_contraction_rate(*mp, repeated_word(0, 10));
    double r100 = cylinder_contraction_rate(*mp, repeated_word(0, 100));
    double r1000 = cylinder_contraction_rate(*mp, repeated_word(0, 1000));
    CHECK(r10 < 0);
    CHECK(r10 < r100);
    CHECK(r100 < r1000);
    CHECK(r1000 < 0);
    CHECK(r1000 > -0.02);  // |Delta_n(0)| decays polynomially (~1/n)

    auto dbl = model_doubling();
    CHECK(cylinder_contraction_rate(*dbl, {0, 1, 1, 0, 1}) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    auto gc24 = model_gc24();
    CHECK(cylinder_contraction_rate(*gc24, repeated_word(1, 9)) ==
          doctest::Approx(-std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("distortion estimates") {
    auto gc24 = model_gc24();
    DistortionEstimate dl = estimate_distortion(*gc24, {2, 5, 8});
    for (double r : dl.rho) CHECK(r == 0.0);

    auto mp = model_mp(1.0);
    DistortionEstimate de = estimate_distortion(*mp, {4, 16});
    // regression constant from the first run of the grid estimator (K = 5)
    CHECK(de.rho[0] == doctest::Approx(0.58641699481535958).epsilon(1e-9));
    CHECK(de.rho[1] > 0.0);
    CHECK(de.rho[1] < de.rho[0]);
}

TEST_CASE("cylinder engine counts and caps") {
    auto mp = model_mp(1.0);
    CylinderEngine sub3(mp, 3);
    CHECK(sub3.level_count(4) == 13.0);
    CHECK(sub3.level(4).size() == 13);
    CylinderEngine sub2(mp, 2);
    CHECK(sub2.level_count(4) == 8.0);  // Fibonacci
    CHECK_THROWS_AS(sub2.level(sub2.max_depth() + 1), ResourceLimitError);
}

TEST_CASE("tiling of full-interval models") {
    for (auto map : {model_mp(1.0), model_doubling()}) {
        CylinderEngine eng(map);
        double sum = 0.0;
        for (const CylStat& s : eng.level(10)) sum += std::exp(s.log_len);
        CHECK(sum == doctest::Approx(map->hull().length()).epsilon(1e-9));
    }
    CHECK_FALSE(model_gc24()->full_interval());
}

TEST_CASE("boundary points go to the left branch") {
    auto dbl = model_doubling();
    CHECK(dbl->branch_of(0.5) == 0);
    CHECK(dbl->branch_of(1.0) == 1);
    auto gc24 = model_gc24();
    CHECK(gc24->branch_of(0.6) == -1);  // gap
}

TEST_CASE("model validation errors") {
    CHECK_THROWS_AS(MapModel::linear_sft({1.0, 2.0}, TransitionMatrix::full(2),
                                         {{0.0, 0.5}, {0.5, 1.0}}),
                    SchemaError);  // slope <= 1 without a parabolic point
    CHECK_THROWS_AS(MapModel::linear_sft({3.0, 2.0}, TransitionMatrix::full(2),
                                         {{0.0, 0.5}, {0.5, 1.0}}),
                    SchemaError);  // slope inconsistent with a full branch
    CHECK_THROWS_AS(MapModel::linear_sft({2.0, 2.0}, TransitionMatrix::full(2),
                                         {{0.0, 0.6}, {0.5, 1.0}}),
                    SchemaError);  // overlapping interiors
    CHECK_THROWS_AS(MapModel::manneville_pomeau(0.0), SchemaError);
}

TEST_CASE("parabolic linear blend") {
    auto blend = model_blend(1.0);
    CHECK(blend->is_parabolic());
    CHECK(blend->parabolic_points() == std::vector<double>{0.0});
    CHECK_FALSE(blend->full_interval());  // gap (0.5, 0.6)
    CHECK(blend->branch(0).derivative(0.0) == doctest::Approx(1.0));
    CHECK(blend->branch(0).forward(0.5) == doctest::Approx(1.0));
    Word w{0, 1, 0};
    Interval outer = cylinder(*blend, {0, 1});
    Interval inner = cylinder(*blend, {0, 1, 0});
    CHECK(outer.contains(inner, 1e-12));
}

TEST_CASE("word-following derivative sums extend to cylinder boundaries") {
    auto mp = model_mp(1.0);
    Word w{0, 0, 1, 0};
    Interval c = cylinder(*mp, w);
    double at_mid = log_deriv_sum_word(*mp, c.midpoint(), w);
    double at_left = log_deriv_sum_word(*mp, c.lo, w);
    double at_right = log_deriv_sum_word(*mp, c.hi, w);
    CHECK(at_left <= at_mid);
    CHECK(at_mid <= at_right);  // derivative increases along each branch
}
