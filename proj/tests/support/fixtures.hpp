#pragma once

// Hand-written models used across the suites.

#include "imcergo/model.hpp"
#include "support/random_models.hpp"

namespace imcergo::testing {

inline CredalRow delta_row(std::size_t n, std::size_t s) { return CredalRow::vertices({Pmf::degenerate(n, s)}); }

inline CredalRow deltas_row(std::size_t n, std::initializer_list<std::size_t> states) {
    std::vector<Pmf> vs;
    for (std::size_t s : states) vs.push_back(Pmf::degenerate(n, s));
    return CredalRow::vertices(std::move(vs));
}

/// Single matrix [[0,1],[1,0]].
inline TransitionModel swap_model() { return TransitionModel(labels(2), {delta_row(2, 1), delta_row(2, 0)}); }

/// Row a vacuous, row b = delta_a.
inline TransitionModel vacuous_return_model() {
    return TransitionModel(labels(2), {CredalRow::intervals({0, 0}, {1, 1}), delta_row(2, 0)});
}

/// Vacuous-return model with the vacuous row replaced by its vertices.
inline TransitionModel vacuous_return_vertices() {
    return TransitionModel(labels(2), {deltas_row(2, {0, 1}), delta_row(2, 0)});
}

inline TransitionModel two_absorbing_model() {
    return TransitionModel(labels(2), {delta_row(2, 0), delta_row(2, 1)});
}

/// a: {delta_a}, b: {delta_a, delta_b}; b can stay in b forever.
inline TransitionModel confining_model() {
    return TransitionModel(labels(2), {delta_row(2, 0), deltas_row(2, {0, 1})});
}

} // namespace imcergo::testing
