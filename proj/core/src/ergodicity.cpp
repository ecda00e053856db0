#include "imcergo/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace imcergo {

double solver_tolerance(const Gamble& f, const SolverOptions& options) {
    return options.tol_scale * std::max(1.0, f.sup_norm());
}

namespace {

// f|S + (upper h^)|S, where h^ extends h (indexed by S) with zeros.
Gamble restricted_topical(const UpperTransitionOperator& op, const Gamble& f, const StateSet& states,
                          const Gamble& h) {
    std::vector<double> extended(op.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i) extended[states[i]] = h[i];
    const Gamble full(std::move(extended));
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::size_t x = states[i];
        out[i] = f[x] + row_upper_expectation(op.model().row(x), full);
    }
    return Gamble(std::move(out));
}

void require_closed(const AccessibilityGraph& graph, const StateSet& set, const StateSpace& labels) {
    const auto inside = to_mask(graph.size(), set);
    for (std::size_t x : set) {
        for (std::size_t y : graph.successors(x)) {
            if (!inside[y]) {
                throw Error(Errc::SubsetNotClosed, "state '" + labels.label(x) + "' has an edge to '" +
                                                       labels.label(y) + "' outside the set");
            }
        }
    }
}

StateSet checked_set(const StateSet& set, std::size_t n) {
    if (set.empty()) throw Error(Errc::EmptySubset, "state set must be non-empty");
    StateSet sorted = set;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(Errc::InvalidArgument, "state set has duplicates");
    }
    if (sorted.back() >= n) throw Error(Errc::DimensionMismatch, "state index out of range");
    return sorted;
}

EigenEstimate iterate_eigen(const UpperTransitionOperator& op, const Gamble& f, const StateSet& states,
                            const SolverOptions& options, const std::optional<Gamble>& start) {
    const double tol = solver_tolerance(f, options);
    Gamble h = start ? *start : Gamble::zero(states.size());
    if (h.size() != states.size()) {
        throw Error(Errc::DimensionMismatch, "start vector does not match the restriction");
    }
    h -= h.min();
    double residual = 0.0;
    for (std::size_t it = 0; it <= options.iter_cap; ++it) {
        Gamble t = restricted_topical(op, f, states, h);
        const Gamble d = t - h;
        const double mu = d.mean();
        residual = 0.0;
        for (double v : d.values()) residual = std::max(residual, std::abs(v - mu));
        if (residual <= tol) {
            return {mu, h, states, residual, it, d.min(), d.max()};
        }
        h += t;
        h *= 0.5;
        h -= h.min();
    }
    throw NoConvergence("eigenvalue iteration reached the cap of " + std::to_string(options.iter_cap) +
                            " iterations",
                        options.iter_cap, residual);
}

EigenEstimate estimate_with_graph(const UpperTransitionOperator& op, const Gamble& f,
                                  const AccessibilityGraph& graph, const StateSet& states,
                                  const SolverOptions& options, const std::optional<Gamble>& start) {
    if (!is_strongly_connected(graph, states)) {
        throw Error(Errc::NotStronglyConnected, "restriction does not induce a strongly connected subgraph");
    }
    require_closed(graph, states, op.model().states());
    return iterate_eigen(op, f, states, options, start);
}

std::optional<LimitEstimate> limit_upper_impl(const UpperTransitionOperator& op, const Gamble& f,
                                              const AccessibilityReport& accessibility,
                                              const SolverOptions& options) {
    if (!accessibility.ergodic()) return std::nullopt;
    const double tol = solver_tolerance(f, options);
    Gamble g = f;
    double seminorm = g.hilbert_seminorm();
    for (std::size_t k = 0; k <= options.iter_cap; ++k) {
        Gamble next = op.apply_upper(g);
        const double change = sup_distance(next, g);
        seminorm = next.hilbert_seminorm();
        g = std::move(next);
        if (seminorm <= tol && change <= tol) return LimitEstimate{g.mean(), k + 1, seminorm};
    }
    throw NoConvergence("limit upper expectation did not settle within " + std::to_string(options.iter_cap) +
                            " iterations",
                        options.iter_cap, seminorm);
}

void require_communication_class(const ClassDecomposition& d, const StateSet& cls) {
    const std::size_t c = d.class_of.at(cls.front());
    if (d.classes[c] != cls) {
        throw Error(Errc::SubsetNotCommunicating, "set is not a communication class");
    }
    if (!d.closed[c]) throw Error(Errc::SubsetNotClosed, "communication class is not closed");
}

} // namespace

EigenEstimate estimate_eigenvalue(const UpperTransitionOperator& op, const Gamble& f,
                                  const std::optional<StateSet>& restriction, const SolverOptions& options,
                                  const std::optional<Gamble>& start) {
    if (f.size() != op.size()) throw Error(Errc::DimensionMismatch, "gamble does not match the model");
    StateSet states;
    if (restriction) {
        states = checked_set(*restriction, op.size());
    } else {
        states.resize(op.size());
        std::iota(states.begin(), states.end(), 0);
    }
    const AccessibilityGraph graph = build_graph(op.model());
    return estimate_with_graph(op, f, graph, states, options, start);
}

EigenEstimate per_class_estimate(const UpperTransitionOperator& op, const Gamble& f, const StateSet& cls,
                                 const SolverOptions& options) {
    if (f.size() != op.size()) throw Error(Errc::DimensionMismatch, "gamble does not match the model");
    const StateSet states = checked_set(cls, op.size());
    const AccessibilityGraph graph = build_graph(op.model());
    require_communication_class(decompose(graph), states);
    return iterate_eigen(op, f, states, options, std::nullopt);
}

double per_class_limit(const UpperTransitionOperator& op, const Gamble& f, const StateSet& cls,
                       const SolverOptions& options) {
    return per_class_estimate(op, f, cls, options).mu;
}

std::optional<LimitEstimate> limit_upper_estimate(const UpperTransitionOperator& op, const Gamble& f,
                                                  const AccessibilityReport& accessibility,
                                                  const SolverOptions& options) {
    if (f.size() != op.size()) throw Error(Errc::DimensionMismatch, "gamble does not match the model");
    return limit_upper_impl(op, f, accessibility, options);
}

std::optional<double> limit_upper_expectation(const UpperTransitionOperator& op, const Gamble& f,
                                              const SolverOptions& options) {
    auto est = limit_upper_estimate(op, f, classify(op.model()), options);
    if (!est) return std::nullopt;
    return est->value;
}

std::optional<double> weak_ergodic_limit(const UpperTransitionOperator& op, const Gamble& f,
                                         const SolverOptions& options) {
    if (f.size() != op.size()) throw Error(Errc::DimensionMismatch, "gamble does not match the model");
    const AccessibilityReport acc = classify(op.model());
    if (!acc.tca.absorbing) return std::nullopt;
    const StateSet& top = acc.decomposition.classes[*acc.decomposition.top_class];
    return iterate_eigen(op, f, top, options, std::nullopt).mu;
}

ErgodicityReport full_report(const UpperTransitionOperator& op, const Gamble& f, const SolverOptions& options) {
    if (f.size() != op.size()) throw Error(Errc::DimensionMismatch, "gamble does not match the model");
    ErgodicityReport report;
    report.accessibility = classify(op.model());
    const auto& acc = report.accessibility;
    report.ergodic = acc.ergodic();
    report.weakly_ergodic = acc.weakly_ergodic();

    if (auto up = limit_upper_impl(op, f, acc, options)) {
        report.limit_upper = up->value;
        report.diagnostics.limit_upper_iterations = up->iterations;
        report.diagnostics.limit_upper_residual = up->residual;
    }
    if (auto lo = limit_upper_impl(op, -f, acc, options)) {
        report.limit_lower = -lo->value;
        report.diagnostics.limit_lower_iterations = lo->iterations;
        report.diagnostics.limit_lower_residual = lo->residual;
    }

    const Gamble neg = -f;
    for (std::size_t c : acc.decomposition.closed_classes()) {
        const StateSet& cls = acc.decomposition.classes[c];
        const EigenEstimate up = iterate_eigen(op, f, cls, options, std::nullopt);
        const EigenEstimate lo = iterate_eigen(op, neg, cls, options, std::nullopt);
        report.per_class_limits.push_back({c, cls, up.mu, -lo.mu, std::max(up.iterations, lo.iterations),
                                           std::max(up.residual, lo.residual)});
        if (acc.tca.absorbing && acc.decomposition.top_class == c) {
            report.limit_avg_upper = up.mu;
            report.limit_avg_lower = -lo.mu;
        }
    }

    report.diagnostics.horizon = options.diagnostic_horizon;
    if (options.diagnostic_horizon > 0) {
        report.diagnostics.avg_upper_at_horizon = op.average_recursion(f, options.diagnostic_horizon).m_bar;
        report.diagnostics.avg_lower_at_horizon = -op.average_recursion(neg, options.diagnostic_horizon).m_bar;
    }
    return report;
}

} // namespace imcergo
