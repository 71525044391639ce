#pragma once

#include <memory>
#include <vector>

#include "lyapspec/pressure.hpp"

namespace lyapspec {

// Stationary Markov chain over SFT states (symbols, or blocks for truncated
// hosts); each state emits the last symbol of its word. Cylinder masses of
// symbol words are exact chain probabilities.
struct MarkovChainMeasure {
    int block = 1;                        // state word length r
    std::vector<Word> state_words;        // lexicographic
    std::vector<int> emit;                // last symbol per state
    std::vector<double> initial;          // stationary distribution
    std::vector<double> trans;            // row-stochastic, state x state

    int state_count() const { return static_cast<int>(state_words.size()); }
    double trans_at(int u, int v) const {
        return trans[static_cast<std::size_t>(u) * state_count() + v];
    }
    // State whose word equals w (length == block); -1 if absent.
    int state_of(const Word& w) const;
    // log of the chain mass of the cylinder of a symbol word (any length >= 1).
    double log_mass(const Word& w) const;
};

// Equilibrium state of phi_q = -q log|f'| on a uniformly hyperbolic host.
// Exact eigendata representation for linear hosts; finite-depth normalized
// weight-ratio representation otherwise.
struct GibbsMeasure {
    PressureHost host;
    double q = 0.0;
    double pressure = 0.0;  // P_host(phi_q)
    double entropy = 0.0;
    double exponent = 0.0;  // chi = int log|f'|
    double gibbs_constant = 1.0;
    bool exact = false;
    MarkovChainMeasure chain;

    double dimension() const;  // entropy / exponent; DomainError when chi <= 0
    double log_mass(const Word& w) const { return chain.log_mass(w); }
};

GibbsMeasure gibbs_measure(const PressureHost& host, double q, int n_max = 0);

// Solves chi(gibbs_measure(q)) = alpha by bisection; alpha must lie strictly
// inside the host's exponent interval.
GibbsMeasure equilibrium_for_exponent(const PressureHost& host, double alpha,
                                      double tol = 1e-8);

struct ConformalMassEntry {
    double center = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

// Cylinder mass of the e^{P - phi_d}-conformal measure, with distortion
// envelope exp(+-n rho_n).
ConformalMassEntry conformal_mass(const MapModel& map, double d, const Word& w,
                                  double pressure_value, double rho_n);

}  // namespace lyapspec
