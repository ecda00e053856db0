#pragma once

// Brute-force reference computations over precise Markov chains built from
// the vertices of the model rows. Intended for small models (n <= 4, short
// horizons); everything here is independent of the nonlinear recursions it
// is used to check.

#include "imcergo/ergodicity.hpp"
#include "imcergo/model.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace imcergo {

/// One row-stochastic matrix whose rows are taken from the model rows.
class PreciseChain {
public:
    PreciseChain(std::size_t n, std::vector<double> matrix, std::vector<std::size_t> choice = {});

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t x, std::size_t y) const { return matrix_[x * n_ + y]; }
    /// Vertex index chosen for each row; empty for sampled chains.
    const std::vector<std::size_t>& choice() const noexcept { return choice_; }

    /// (T h)(x) = sum_y T(x,y) h(y)
    Gamble apply(const Gamble& h) const;

private:
    std::size_t n_;
    std::vector<double> matrix_;
    std::vector<std::size_t> choice_;
};

/// Largest state count accepted by the interval vertex enumerator.
inline constexpr std::size_t max_interval_vertex_states = 6;

/// Extreme points of a (normalized) probability-interval row: one greedy
/// allocation per ordering of the states, deduplicated within 1e-12.
std::vector<Pmf> interval_vertices(const IntervalRow& row);

/// Same model with every interval row replaced by its vertex list.
TransitionModel vertexize(const TransitionModel& model);

/// Number of homogeneous chains, i.e. the product of the vertex counts.
/// Throws IntervalRowsPresent for interval rows; saturates at SIZE_MAX.
std::size_t homogeneous_count(const TransitionModel& model);

/// Cartesian product of the row vertices, lexicographic by (state, vertex).
std::vector<PreciseChain> enumerate_homogeneous(const TransitionModel& model, std::size_t cap = 1'000'000);

/// Chain taking, in every row, the first vertex maximizing the expectation of h.
PreciseChain maximizing_chain(const TransitionModel& model, const Gamble& h);

/// E[(f(X_1) + ... + f(X_k)) / k | X_1 = x] for the homogeneous chain.
double precise_time_average(const PreciseChain& chain, const Gamble& f, std::size_t x, std::size_t k);
/// Same for every start state at once.
Gamble precise_time_averages(const PreciseChain& chain, const Gamble& f, std::size_t k);

struct OracleResult {
    double value = 0.0;
    std::string argmax;
    std::size_t count = 0;
};

struct OracleOptions {
    std::size_t cap = 1'000'000;
    /// Random interior chains added to the vertex enumeration.
    std::size_t samples = 200;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct RiResult {
    OracleResult vertex;
    /// Best sampled chain; count == 0 when no samples were requested.
    OracleResult sampled;

    double value() const;
};

/// Lower bound on the sup over homogeneous compatible chains of the expected
/// time average: the vertex maximum, plus random convex combinations of row
/// vertices. Requires vertex rows.
RiResult ri_upper_average(const TransitionModel& model, const Gamble& f, std::size_t x, std::size_t k,
                          const OracleOptions& options = {});

/// Exact maximum over all time-inhomogeneous sequences (T_1, ..., T_{k-1}) of
/// vertex chains of the expected time average from x.
OracleResult ci_upper_average_bruteforce(const TransitionModel& model, const Gamble& f, std::size_t x,
                                         std::size_t k, std::size_t cap = 1'000'000);

struct RiLimitReport {
    double limit = 0.0;
    std::vector<std::size_t> horizons;
    /// values[h][x]: ri_upper_average at horizons[h] from state x.
    std::vector<std::vector<double>> values;
    /// At the last horizon every value lies in [limit - lower_slack, limit + upper_slack].
    bool within_bounds = false;
    /// At every state the last horizon is at least as close to the limit as the first.
    bool approaches = false;
    double lower_slack = 1e-2;
    double upper_slack = 1e-9;
};

/// Compares repetition-independent time averages at k = 100 and 1000 with the
/// weak-ergodic limit. Requires a top-class-absorbing vertex model.
RiLimitReport ri_limit_check(const TransitionModel& model, const Gamble& f, const OracleOptions& options = {},
                             const SolverOptions& solver = {});

} // namespace imcergo
