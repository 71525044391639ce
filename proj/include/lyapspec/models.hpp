#pragma once

#include <memory>

#include "lyapspec/maps.hpp"

namespace lyapspec {

// Canonical desk models used by the self test, the test suites, and the docs.

inline std::shared_ptr<MapModel> model_gc24() {
    return std::make_shared<MapModel>(MapModel::linear_sft(
        {2.0, 4.0}, TransitionMatrix::full(2), {{0.0, 0.5}, {0.75, 1.0}}));
}

inline std::shared_ptr<MapModel> model_doubling() {
    return std::make_shared<MapModel>(MapModel::linear_sft(
        {2.0, 2.0}, TransitionMatrix::full(2), {{0.0, 0.5}, {0.5, 1.0}}));
}

inline std::shared_ptr<MapModel> model_fibonacci() {
    return std::make_shared<MapModel>(MapModel::linear_sft(
        {2.0, 2.0}, TransitionMatrix({{1, 1}, {1, 0}}), {{0.0, 0.5}, {0.5, 1.0}}));
}

inline std::shared_ptr<MapModel> model_mp(double s) {
    return std::make_shared<MapModel>(MapModel::manneville_pomeau(s));
}

// Three full branches with slopes (2,4,8): the full shift and its {0,2}
// restriction carry distinct Gibbs states sharing the exponent 2 log 2.
inline std::shared_ptr<MapModel> model_eq_exponent_triple() {
    return std::make_shared<MapModel>(MapModel::linear_sft(
        {2.0, 4.0, 8.0}, TransitionMatrix::full(3),
        {{0.0, 0.5}, {0.5, 0.75}, {0.875, 1.0}}));
}

inline std::shared_ptr<MapModel> model_blend(double s) {
    return std::make_shared<MapModel>(
        MapModel::parabolic_linear_blend(s, {{0.0, 0.5}, {0.6, 1.0}}));
}

}  // namespace lyapspec
