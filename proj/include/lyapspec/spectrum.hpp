#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "lyapspec/pressure.hpp"

namespace lyapspec {

// P(d) callable backing the Legendre transform: either the matrix oracle
// (linear hosts) or a sampled convex curve.
class PressureSource {
public:
    static PressureSource oracle(PressureHost host);
    static PressureSource curve(std::shared_ptr<const PressureCurve> c);
    double operator()(double d) const { return f_(d); }
    bool exact() const { return exact_; }

private:
    std::function<double(double)> f_;
    bool exact_ = false;
};

struct LegendreValue {
    double F = -kInf;       // -inf sentinel outside the spectrum
    double minimizer_d = 0.0;
    bool attained = false;  // minimizer interior to the search window
    bool inside = false;    // alpha within [alpha_minus - tol, alpha_plus + tol]
};

// F(alpha) = (1/alpha) inf_d (P(d) + alpha d) by golden-section search on the
// convex objective over [-d_big, d_big], refined to tol_d in d.
LegendreValue legendre_transform(const PressureSource& pressure, double alpha,
                                 const AlphaBounds& bounds, double d_big = 40.0,
                                 double tol_d = 1e-10);

enum class SpectrumCase {
    hyperbolic,
    parabolic_case_i,   // pressure differentiable at the root; no plateau
    parabolic_case_ii,  // kink at the root; plateau F(alpha) = F(0)
};
const char* spectrum_case_name(SpectrumCase c);

struct SpectrumPoint {
    double alpha = 0.0;
    double F = 0.0;
    double minimizer_d = 0.0;
    bool attained = false;
};

struct SpectrumCurve {
    std::vector<SpectrumPoint> points;
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
    RootBracket d0;
    double F0 = 0.0;  // = d0.root
    SpectrumCase kind = SpectrumCase::hyperbolic;
    double alpha_plateau = 0.0;            // meaningful only in case II
    double left_derivative_at_root = 0.0;  // measured P'(d0-)
    double peak_alpha = 0.0;
    double peak_F = 0.0;
    std::function<double(double)> eval;  // F(alpha) with plateau rule applied
};

struct SpectrumOptions {
    int alpha_steps = 121;
    int n_max = 0;
    bool prefer_oracle = true;  // matrix-oracle source for linear hosts
    double d_big = 40.0;
    double case_threshold = 1e-2;  // |P'(d0-)| below this reads as case I
};

SpectrumCurve spectrum_curve(const PressureHost& host, const SpectrumOptions& opt = {});

// Hausdorff dimensions of the level sets with exponent pairs in [a, b]:
// (sup-type set, inf-type set) = (max F, min F) over the intersection with
// the spectrum. DomainError when the intersection is empty.
std::pair<double, double> level_set_dimensions(const SpectrumCurve& curve, double a, double b);

struct FmRow {
    int m = 0;
    LegendreValue value;
};
struct FmTable {
    std::vector<FmRow> rows;
    double limit = 0.0;  // F(alpha) for the whole system
    bool nondecreasing = false;
    double gap = 0.0;  // limit - last finite row
};
FmTable subsystem_spectrum_table(std::shared_ptr<const MapModel> map, double alpha,
                                 const std::vector<int>& m_ladder,
                                 const SpectrumOptions& opt = {});

}  // namespace lyapspec
