#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lyapspec/common.hpp"
#include "lyapspec/symbolic.hpp"

namespace lyapspec {

// One monotone branch f_i : I_i -> I with its derivative and inverse.
struct Branch {
    Interval domain;                             // I_i
    std::function<double(double)> forward;       // f_i, maps domain onto the hull
    std::function<double(double)> derivative;    // f_i'
    std::function<double(double)> inverse;       // g_i : hull -> I_i
    bool increasing = true;
    bool linear = false;
    double slope = 0.0;                          // |f_i'| when linear
};

// A Markov interval map: branch geometry, transition structure, and the list
// of parabolic fixed points (|f'| = 1). Immutable after construction.
class MapModel {
public:
    static MapModel manneville_pomeau(double s);
    static MapModel linear_sft(std::vector<double> slopes, TransitionMatrix a,
                               std::vector<Interval> domains);
    static MapModel parabolic_linear_blend(double s, std::vector<Interval> domains,
                                           std::optional<TransitionMatrix> a = std::nullopt);

    int symbol_count() const { return static_cast<int>(branches_.size()); }
    const TransitionMatrix& transitions() const { return a_; }
    const Branch& branch(int i) const { return branches_.at(static_cast<std::size_t>(i)); }
    Interval hull() const { return hull_; }
    bool full_interval() const { return full_interval_; }
    bool is_linear() const { return linear_; }
    bool is_parabolic() const { return !parabolic_points_.empty(); }
    const std::vector<double>& parabolic_points() const { return parabolic_points_; }
    const std::vector<int>& parabolic_symbols() const { return parabolic_symbols_; }
    const std::string& family() const { return family_; }
    const std::string& label() const { return label_; }

    // Index of the branch whose domain contains x; shared endpoints go to
    // the left branch. Returns -1 inside a gap.
    int branch_of(double x) const;
    double apply(double x, int* symbol_out = nullptr) const;
    double log_abs_derivative(double x, int symbol) const;

    // Unique fixed point of branch i (iterating the inverse branch); the
    // parabolic point itself for parabolic branches.
    double branch_fixed_point(int i) const;

private:
    MapModel() : a_(TransitionMatrix::full(2)) {}
    void validate() const;

    std::vector<Branch> branches_;
    TransitionMatrix a_;
    Interval hull_;
    std::vector<double> parabolic_points_;
    std::vector<int> parabolic_symbols_;
    bool full_interval_ = false;
    bool linear_ = false;
    std::string family_;
    std::string label_;
};

// Cylinder interval of an admissible word: the right-to-left composition of
// inverse branches applied to the last symbol's domain.
Interval cylinder(const MapModel& map, const Word& w);

struct DerivSum {
    double sum = 0.0;      // S_n log|f'|
    double average = 0.0;  // sum / n
};

// Birkhoff sum of log|f'| along the forward orbit of x using the pointwise
// itinerary. Throws DomainError if the orbit leaves all branch domains.
DerivSum log_deriv_sum(const MapModel& map, double x, int n);

// Same sum but following a prescribed branch word (continuous extension to
// cylinder boundary points).
double log_deriv_sum_word(const MapModel& map, double x, const Word& w);

// (1/n) log|cylinder(w)|; the finite-depth contraction rate whose trend
// toward zero witnesses membership in the zero-exponent set.
double cylinder_contraction_rate(const MapModel& map, const Word& w);

struct DistortionEstimate {
    std::vector<int> depths;
    std::vector<double> rho;  // per-depth sup of (1/n)(max-min of S_n log|f'|)
};

// Per-cylinder stats used by pressure sums, entropy counts and distortion:
//   s_min/s_max: extremes of S_n log|f'| over a grid with endpoints included,
//   log_len:     log of the cylinder length.
struct CylStat {
    double s_min = 0.0;
    double s_max = 0.0;
    double log_len = 0.0;
};

// Enumerates admissible depth-n cylinders (optionally with a forbidden
// parabolic run and/or a symbol restriction) and caches their stats.
// Deterministic lexicographic order throughout.
class CylinderEngine {
public:
    CylinderEngine(std::shared_ptr<const MapModel> map, int forbid_run = 0,
                   std::vector<int> symbols = {}, int grid_points = 5);

    const MapModel& map() const { return *map_; }
    int forbid_run() const { return forbid_run_; }
    const std::vector<int>& symbols() const { return symbols_; }
    int grid_points() const { return grid_points_; }

    // Largest depth the engine will materialize (count-aware work cap).
    int max_depth() const;
    double level_count(int depth) const;

    const std::vector<CylStat>& level(int depth) const;
    double rho_hat(int depth) const;

    // Visit each depth-n word with its stats, lexicographic order.
    void visit_level(int depth,
                     const std::function<void(const Word&, const CylStat&)>& fn) const;

    // Cyclically admissible depth-n words evaluated at s_min (used by trace-
    // style lower bounds); returns log of the sum of exp(-d*s_min) terms.
    double cyclic_min_sum(int depth, double d) const;

    bool run_constrained() const { return forbid_run_ > 0; }
    bool parabolic_run_symbol(int* symbol_out) const;

private:
    struct LevelEntry {
        double lo, hi;
        std::int32_t parent;
        std::uint8_t sym;
        std::uint8_t lead;  // leading run of the first symbol when parabolic
    };
    const std::vector<CylStat>& built_level(int depth) const;
    void build_nonlinear_level(int depth, std::vector<CylStat>& out) const;
    void build_linear_level(int depth, std::vector<CylStat>& out) const;
    void ensure_entries(int depth) const;

    std::shared_ptr<const MapModel> map_;
    int forbid_run_ = 0;
    std::vector<int> symbols_;  // subset of the alphabet in increasing order
    int grid_points_ = 5;
    mutable std::mutex mutex_;
    mutable std::map<int, std::vector<CylStat>> cache_;
    mutable std::map<int, std::vector<LevelEntry>> entries_;
    mutable int max_depth_ = -1;
};

bool is_admissible(const MapModel& map, const Word& w);

DistortionEstimate estimate_distortion(const MapModel& map, const std::vector<int>& depths,
                                       int grid_points = 5);

}  // namespace lyapspec
