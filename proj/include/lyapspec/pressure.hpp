#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lyapspec/maps.hpp"

namespace lyapspec {

// A map together with an optional hyperbolic truncation (forbidden parabolic
// run) and/or symbol restriction. The unit every pressure computation runs on.
struct PressureHost {
    std::shared_ptr<const MapModel> map;
    int forbid_run = 0;          // 0: whole system; m >= 2: runs of the parabolic
                                 // symbol of length >= m are removed
    std::vector<int> symbols;    // empty: all symbols
    std::shared_ptr<CylinderEngine> engine;

    bool linear() const { return map->is_linear(); }
    bool full_shift() const;
    std::string label() const;
};

PressureHost whole_map_host(std::shared_ptr<const MapModel> map, int grid_points = 5);
PressureHost restricted_host(std::shared_ptr<const MapModel> map, std::vector<int> symbols,
                             int grid_points = 5);

// Hyperbolic truncation: the subshift forbidding the parabolic symbol block
// of length m, carrying the parent map's metric structure.
struct Subsystem {
    PressureHost host;
    int level = 0;
    bool uniformly_hyperbolic = false;
    double min_derivative = 0.0;
};
Subsystem make_subsystem(std::shared_ptr<const MapModel> map, int m, int grid_points = 5);

// One-depth cylinder sums of phi_d = -d log|f'|:
//  upper/lower use the grid max/min of the Birkhoff sum over each cylinder,
//  intermediate evaluates at the mean-value point (cylinder length ratio).
struct PressureBracket {
    double upper = 0.0;
    double lower = 0.0;
    double intermediate = 0.0;
};
PressureBracket pressure_at(const PressureHost& host, double d, int depth);

// Certified one-sided bound from cyclic words (trace bound for linear hosts).
double certified_lower_at(const PressureHost& host, double d, int depth);

struct PressureValue {
    double value = 0.0;       // extrapolated intermediate sums
    double error = 0.0;       // fit residual + ladder stability + adjustments
    double cert_lower = 0.0;  // bracket; certified for linear and full-shift hosts
    double cert_upper = 0.0;
    bool lower_certified = false;
    int depth = 0;  // deepest ladder level
    bool warning = false;
    std::vector<int> depths;
    std::vector<PressureBracket> ladder;
};
PressureValue pressure_extrapolated(const PressureHost& host, double d, int n_max = 0);

// log of the spectral radius of M[i][j] = A[i][j] * lambda_i^{-d}; exact
// route for piecewise-linear hosts (and d = 0 word counting for any host).
double pressure_matrix_oracle(const PressureHost& host, double d, double rel_tol = 1e-13);

// Number of matrix states the oracle route uses (symbols, or blocks for
// run-constrained hosts).
int oracle_state_count(const PressureHost& host);

int default_ladder_top(const PressureHost& host);

// Memoizing P(d) evaluator shared by root finding, spectra and curves.
class PressureEvaluator {
public:
    explicit PressureEvaluator(PressureHost host, int n_max = 0);
    const PressureValue& at(double d) const;
    double value(double d) const { return at(d).value; }
    const PressureHost& host() const { return host_; }
    int ladder_top() const { return n_max_; }

private:
    PressureHost host_;
    int n_max_ = 0;
    mutable std::mutex mutex_;
    mutable std::map<double, PressureValue> memo_;
};

struct PressureCurvePoint {
    double d = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double value = 0.0;
    double error = 0.0;
    int depth = 0;
    bool warning = false;
};

// Sampled pressure curve; values are post-processed to be nonincreasing and
// convex and to stay inside the per-point brackets.
class PressureCurve {
public:
    PressureCurve() = default;
    explicit PressureCurve(std::vector<PressureCurvePoint> pts);

    const std::vector<PressureCurvePoint>& points() const { return pts_; }
    double d_min() const { return pts_.front().d; }
    double d_max() const { return pts_.back().d; }

    // Convex piecewise-linear interpolant with affine extension beyond the
    // sampled range.
    double eval(double d) const;

private:
    std::vector<PressureCurvePoint> pts_;
};

struct CurveOptions {
    double d_min = -4.0;
    double d_max = 4.0;
    int steps = 81;
    int n_max = 0;        // 0: host default
    bool refine_near_root = true;
    bool tail_to_big = true;  // add sparse points out to +-d_big
    double d_big = 40.0;
};
PressureCurve build_pressure_curve(const PressureEvaluator& ev, const CurveOptions& opt);

// Bracket for d0 = inf{d : P(-d log|f'|) = 0}.
struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
    double root = 0.0;
};
RootBracket pressure_root(const PressureEvaluator& ev, double width = 1e-3);

struct AlphaBounds {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
    bool degenerate = false;
};
AlphaBounds alpha_bounds(const PressureEvaluator& ev, double d_big = 40.0);

// True when the pressure is affine on the test grid, i.e. log|f'| is
// cohomologous to a constant and all level sets are trivial.
bool degeneracy_test(const PressureEvaluator& ev);

struct PmRow {
    int m = 0;
    PressureValue value;
};
struct PmTable {
    std::vector<PmRow> rows;
    PressureValue full;
    bool nondecreasing_within_error = false;
    double gap_to_full = 0.0;
};
PmTable subsystem_pressure_table(std::shared_ptr<const MapModel> map, double d,
                                 const std::vector<int>& m_ladder, int n_max = 0);

}  // namespace lyapspec
