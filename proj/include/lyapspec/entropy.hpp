#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lyapspec/pressure.hpp"
#include "lyapspec/spectrum.hpp"

namespace lyapspec {

// Counts of depth-n cylinders with |Delta_n| >= (1+eps)^{-n}: the covers of
// the slowly-contracting set behind the zero-exponent entropy bound.
struct CoverCount {
    double epsilon = 0.0;
    std::vector<int> depths;
    std::vector<double> counts;
    double slope = 0.0;        // least-squares growth rate of log counts
    double slope_bound = 0.0;  // log(1+eps), the guaranteed rate
    bool empty = false;        // all counts zero
};

CoverCount level0_cover_count(const PressureHost& host, double epsilon, int n_min,
                              int n_max);

struct GrowthRates {
    double lower = 0.0;    // min single-step rate over the fitted range
    double upper = 0.0;    // max single-step rate
    double central = 0.0;  // least-squares slope
};

// Growth rates of log counts of depth-n cylinders selected by a predicate;
// the fit uses the top half of the depth range.
GrowthRates capacitive_entropy(const PressureHost& host,
                               const std::function<bool(const Word&, const CylStat&)>& keep,
                               int n_min, int n_max);

struct ZeroExponentReport {
    bool parabolic = false;      // when false the zero-exponent set is empty
    RootBracket d0;              // F(0) bracket
    double known_dimension = 0;  // dim of the ambient set for builtin families
    bool dimension_known = false;
    std::vector<CoverCount> ladder;  // one row per epsilon
};

// Combines the pressure root, F(0), and the cover-count ladder into the
// numerical witness for the zero-exponent set: full dimension, zero entropy.
ZeroExponentReport zero_exponent_report(std::shared_ptr<const MapModel> map,
                                        std::vector<double> epsilons = {0.2, 0.1, 0.05,
                                                                        0.02},
                                        int n_min = 6, int n_max = 16);

}  // namespace lyapspec
