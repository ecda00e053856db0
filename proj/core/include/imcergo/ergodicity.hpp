#pragma once

// Limit inferences: limit upper expectations and limit upper expected time
// averages, per closed class and globally.
//
// The time-average limits are additive eigenvalues of the topical map
// h -> f + upper(h), restricted to a closed communication class. They are
// estimated by iterating the averaged map h -> (h + f + upper(h)) / 2 with
// min-normalization; its eigenvectors are those of the original map and the
// self-averaging removes oscillation on periodic classes.

#include "imcergo/graph.hpp"
#include "imcergo/operator.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace imcergo {

struct SolverOptions {
    /// Tolerances are tol_scale * max(1, |f|_inf).
    double tol_scale = 1e-9;
    std::size_t iter_cap = 100000;
    /// Horizon for the finite-k diagnostics in full_report.
    std::size_t diagnostic_horizon = 1000;
};

double solver_tolerance(const Gamble& f, const SolverOptions& options);

struct EigenEstimate {
    double mu = 0.0;
    /// Eigenvector on `states`, normalized to min 0.
    Gamble eigvec;
    StateSet states;
    /// |f + upper(eigvec) - eigvec - mu|_inf on `states`.
    double residual = 0.0;
    std::size_t iterations = 0;
    /// min and max of the increments f + upper(eigvec) - eigvec; they bracket mu.
    double mu_lower = 0.0;
    double mu_upper = 0.0;
};

/// Additive eigenvalue of f + upper(.) on `restriction` (default: all
/// states). `start`, when given, is indexed like the restriction.
///
/// The restriction must be closed and strongly connected in the upper
/// accessibility graph; otherwise NotStronglyConnected / SubsetNotClosed.
/// Throws NoConvergence when the cap is hit.
EigenEstimate estimate_eigenvalue(const UpperTransitionOperator& op, const Gamble& f,
                                  const std::optional<StateSet>& restriction = std::nullopt,
                                  const SolverOptions& options = {},
                                  const std::optional<Gamble>& start = std::nullopt);

/// Limit of the upper expected time average from any state of the closed
/// communication class `cls`.
EigenEstimate per_class_estimate(const UpperTransitionOperator& op, const Gamble& f, const StateSet& cls,
                                 const SolverOptions& options = {});
double per_class_limit(const UpperTransitionOperator& op, const Gamble& f, const StateSet& cls,
                       const SolverOptions& options = {});

struct LimitEstimate {
    double value = 0.0;
    std::size_t iterations = 0;
    /// Hilbert seminorm of the last iterate.
    double residual = 0.0;
};

/// lim upper^k f when the operator is ergodic, absent otherwise.
std::optional<LimitEstimate> limit_upper_estimate(const UpperTransitionOperator& op, const Gamble& f,
                                                  const AccessibilityReport& accessibility,
                                                  const SolverOptions& options = {});
std::optional<double> limit_upper_expectation(const UpperTransitionOperator& op, const Gamble& f,
                                              const SolverOptions& options = {});

/// Common limit of the upper expected time averages when the top class is
/// absorbing, absent otherwise.
std::optional<double> weak_ergodic_limit(const UpperTransitionOperator& op, const Gamble& f,
                                         const SolverOptions& options = {});

struct ClassLimit {
    std::size_t class_id = 0;
    StateSet states;
    double upper = 0.0;
    /// Conjugate: -(upper limit of -f).
    double lower = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct ErgodicityReport {
    AccessibilityReport accessibility;
    bool ergodic = false;
    bool weakly_ergodic = false;
    std::optional<double> limit_upper;
    std::optional<double> limit_lower;
    std::optional<double> limit_avg_upper;
    std::optional<double> limit_avg_lower;
    /// One entry per closed communication class, in class-id order.
    std::vector<ClassLimit> per_class_limits;

    struct Diagnostics {
        std::size_t limit_upper_iterations = 0;
        double limit_upper_residual = 0.0;
        std::size_t limit_lower_iterations = 0;
        double limit_lower_residual = 0.0;
        std::size_t horizon = 0;
        /// Upper and lower expected time averages at `horizon`.
        Gamble avg_upper_at_horizon;
        Gamble avg_lower_at_horizon;
    } diagnostics;
};

ErgodicityReport full_report(const UpperTransitionOperator& op, const Gamble& f,
                             const SolverOptions& options = {});

} // namespace imcergo
