// Hand-rolled property tests: randomized inputs from a fixed seed.

#include <doctest.h>

#include <cmath>
#include <random>

#include "lyapspec/models.hpp"
#include "lyapspec/pressure.hpp"

using namespace lyapspec;

namespace {

// random mixing 0/1 matrix (rejection sampling)
TransitionMatrix random_mixing_matrix(std::mt19937_64& rng, int p) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<std::vector<int>> rows(p, std::vector<int>(p, 0));
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) rows[i][j] = (rng() >> 17) & 1;
        try {
            return TransitionMatrix(rows);
        } catch (const SchemaError&) {
        }
    }
    return TransitionMatrix::full(p);
}

Word random_admissible_word(std::mt19937_64& rng, const MapModel& m, int len) {
    Word w;
    while (static_cast<int>(w.size()) < len) {
        int s = static_cast<int>(rng() % m.symbol_count());
        if (!w.empty() && !m.transitions().allowed(w.back(), s)) continue;
        w.push_back(s);
    }
    return w;
}

}  // namespace

TEST_CASE("property: transfer counting equals enumeration on random matrices") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 12; ++trial) {
        int p = 2 + static_cast<int>(rng() % 3);
        TransitionMatrix a = random_mixing_matrix(rng, p);
        for (int n = 0; n <= 8; ++n)
            CHECK(count_words(a, n) ==
                  static_cast<double>(enumerate_words(a, n).size()));
        for (int n = 1; n <= 6; ++n)
            for (int m = 1; m <= 6; ++m)
                CHECK(count_words(a, n + m) <=
                      count_words(a, n) * count_words(a, m) + 1e-9);
    }
}

TEST_CASE("property: nesting, sandwich, and chain rule on random words") {
    std::mt19937_64 rng(7777);
    for (auto map : {model_gc24(), model_mp(1.0), model_blend(1.0)}) {
        const double log_hull = std::log(map->hull().length());
        for (int trial = 0; trial < 20; ++trial) {
            Word w = random_admissible_word(rng, *map, 9);
            Interval outer = cylinder(*map, w);
            Word wj = w;
            for (int s = 0; s < map->symbol_count(); ++s) {
                if (!map->transitions().allowed(w.back(), s)) continue;
                wj = w;
                wj.push_back(s);
                CHECK(outer.contains(cylinder(*map, wj), 1e-10));
            }
            // mean-value sandwich at the endpoints of the derivative range
            double smin = log_deriv_sum_word(*map, outer.lo, w);
            double smax = log_deriv_sum_word(*map, outer.hi, w);
            if (smin > smax) std::swap(smin, smax);
            double log_len = std::log(outer.length());
            CHECK(log_len <= log_hull - smin + 1e-9);
            CHECK(log_len >= log_hull - smax - 1e-9);
            // chain rule from the cylinder midpoint
            double x = outer.midpoint();
            int n = 3 + static_cast<int>(rng() % 4);
            DerivSum total = log_deriv_sum(*map, x, n + 3);
            DerivSum head = log_deriv_sum(*map, x, n);
            double y = x;
            for (int k = 0; k < n; ++k) y = map->apply(y);
            DerivSum tail = log_deriv_sum(*map, y, 3);
            CHECK(total.sum == doctest::Approx(head.sum + tail.sum).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: pressure brackets and convexity on random linear models") {
    std::mt19937_64 rng(314159);
    for (int trial = 0; trial < 6; ++trial) {
        int p = 2 + static_cast<int>(rng() % 2);
        TransitionMatrix a = random_mixing_matrix(rng, p);
        // random full-branch Cantor intervals tiling [0, 1] with gaps
        std::vector<double> pieces;  // p lengths interleaved with p-1 gaps
        double total = 0.0;
        for (int i = 0; i < 2 * p - 1; ++i) {
            double x = 0.2 + (rng() >> 11) * 0x1.0p-53;
            pieces.push_back(x);
            total += x;
        }
        std::vector<Interval> domains;
        std::vector<double> slopes;
        double left = 0.0;
        for (int i = 0; i < p; ++i) {
            double len = pieces[static_cast<std::size_t>(2 * i)] / total;
            domains.push_back({left, left + len});
            slopes.push_back(1.0 / len);
            left += len;
            if (i + 1 < p) left += pieces[static_cast<std::size_t>(2 * i + 1)] / total;
        }
        domains.back().hi = 1.0;
        slopes.back() = 1.0 / domains.back().length();
        MapModel model = MapModel::linear_sft(slopes, a, domains);
        PressureHost h = whole_map_host(std::make_shared<MapModel>(std::move(model)));
        for (double d : {-1.0, 0.0, 0.7, 1.3}) {
            PressureValue v = pressure_extrapolated(h, d, 14);
            double oracle = pressure_matrix_oracle(h, d);
            CHECK(v.cert_lower <= oracle);
            CHECK(oracle <= v.cert_upper);
            CHECK(std::fabs(v.value - oracle) <= std::max(v.error, 1e-9));
        }
        // convexity of the oracle pressure along a grid
        double prev2 = pressure_matrix_oracle(h, -2.0);
        double prev1 = pressure_matrix_oracle(h, -1.5);
        for (double d = -1.0; d <= 2.01; d += 0.5) {
            double cur = pressure_matrix_oracle(h, d);
            CHECK(prev1 <= 0.5 * (prev2 + cur) + 1e-9);
            prev2 = prev1;
            prev1 = cur;
        }
    }
}
