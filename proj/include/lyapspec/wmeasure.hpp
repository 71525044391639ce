#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lyapspec/measures.hpp"

namespace lyapspec {

struct StageSpec {
    int level = 0;  // 0: whole (hyperbolic) map; m >= 2: truncation level
    std::optional<double> q;
    std::optional<double> alpha;            // resolved via equilibrium_for_exponent
    std::vector<int> restrict_symbols;      // optional sub-alphabet (level 0 only)
};

struct GrowthPolicy {
    double min_ratio = 10.0;       // m_{i+1} >= min_ratio * m_i
    bool index_ratio = true;       // and m_{i+1} >= i * m_i
    long long budget = 10000000;   // total word length cap
    long long nonlinear_budget = 200000;
};

struct Stage {
    StageSpec spec;
    long long switch_time = 0;  // m_i
    GibbsMeasure measure;
    double rho_diag = 0.0;  // rho_hat at the deepest measurable level (<= m_i)
};

struct WSchedule {
    std::shared_ptr<const MapModel> map;
    std::vector<Stage> stages;
    GrowthPolicy policy;

    double chi(int i) const { return stages[static_cast<std::size_t>(i)].measure.exponent; }
    double h(int i) const { return stages[static_cast<std::size_t>(i)].measure.entropy; }
    double dim(int i) const {
        return stages[static_cast<std::size_t>(i)].measure.dimension();
    }
};

// Validates stage data, growth policy, nondecreasing truncation levels and
// the rho/chi diagnostic, and resolves every stage measure (pressure-
// normalized by construction of the chains).
WSchedule build_schedule(std::shared_ptr<const MapModel> map,
                         const std::vector<StageSpec>& specs,
                         const std::vector<long long>& switch_times,
                         const GrowthPolicy& policy = {});

struct Checkpoint {
    long long m = 0;
    double L = 0.0;
    double H = 0.0;
    int stage_index = 0;  // 1-based stage whose window contains m
};

struct WSampleTrace {
    std::uint64_t seed = 0;
    std::vector<std::int8_t> symbols;          // the sampled word, length m_N
    std::vector<Checkpoint> checkpoints;       // includes every switch time
    std::vector<double> junction_log_norm;     // log of the admissible-mass
                                               // normalizer at each junction
    double accumulated_log_prob = 0.0;         // log mu(Delta_{word})

    const Checkpoint& at_time(long long m) const;
};

WSampleTrace sample_w_word(const WSchedule& schedule, std::uint64_t seed,
                           int checkpoints_per_stage = 8);

struct StageObservation {
    int stage = 0;  // 1-based
    long long m = 0;
    double chi = 0.0, h = 0.0, dim = 0.0;
    double L = 0.0, H = 0.0;
    double rel_dev_L = 0.0, rel_dev_H = 0.0;
};

struct OscillationReport {
    std::vector<StageObservation> stages;
    double max_window_residual_L = 0.0;  // vs (m_i/m) chi_i + ((m-m_i)/m) chi_{i+1}
    double max_window_residual_H = 0.0;
    double min_HL_ratio = kInf;          // over interior windows
    double min_HL_late = kInf;           // over windows with stage index >= 3
    double min_stage_dim = kInf;         // min_i d_i
    double realized_L_min = kInf, realized_L_max = -kInf;  // stage-end values
};

OscillationReport verify_oscillation(const WSampleTrace& trace, const WSchedule& schedule);

}  // namespace lyapspec
