#include "imcergo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace imcergo {

PreciseChain::PreciseChain(std::size_t n, std::vector<double> matrix, std::vector<std::size_t> choice)
    : n_(n), matrix_(std::move(matrix)), choice_(std::move(choice)) {
    if (matrix_.size() != n * n) throw Error(Errc::DimensionMismatch, "chain matrix must be n x n");
    for (std::size_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            if (at(x, y) < 0.0) throw Error(Errc::PmfMass, "negative transition probability");
            s += at(x, y);
        }
        if (std::abs(s - 1.0) > tol_mass) throw Error(Errc::PmfMass, "chain row does not sum to 1");
    }
}

Gamble PreciseChain::apply(const Gamble& h) const {
    if (h.size() != n_) throw Error(Errc::DimensionMismatch, "gamble does not match the chain");
    std::vector<double> out(n_, 0.0);
    for (std::size_t x = 0; x < n_; ++x) {
        for (std::size_t y = 0; y < n_; ++y) out[x] += at(x, y) * h[y];
    }
    return Gamble(std::move(out));
}

// ---------------------------------------------------------------------------
// Vertices

std::vector<Pmf> interval_vertices(const IntervalRow& row) {
    const std::size_t n = row.lower.size();
    if (n > max_interval_vertex_states) {
        throw Error(Errc::CapExceeded, "interval vertex enumeration supports at most " +
                                           std::to_string(max_interval_vertex_states) + " states");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<double>> found;
    const double base = std::accumulate(row.lower.begin(), row.lower.end(), 0.0);
    do {
        std::vector<double> p = row.lower;
        double free_mass = 1.0 - base;
        for (std::size_t y : perm) {
            if (free_mass <= 0.0) break;
            const double add = std::min(row.upper[y] - row.lower[y], free_mass);
            p[y] += add;
            free_mass -= add;
        }
        const bool dup = std::any_of(found.begin(), found.end(), [&](const std::vector<double>& q) {
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(p[i] - q[i]) > 1e-12) return false;
            }
            return true;
        });
        if (!dup) found.push_back(std::move(p));
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<Pmf> out;
    out.reserve(found.size());
    for (auto& p : found) out.emplace_back(std::move(p));
    return out;
}

TransitionModel vertexize(const TransitionModel& model) {
    std::vector<CredalRow> rows;
    for (const auto& row : model.rows()) {
        if (row.is_vertex_list()) {
            rows.push_back(row);
        } else {
            rows.push_back(CredalRow::vertices(interval_vertices(std::get<IntervalRow>(row.repr()))));
        }
    }
    return TransitionModel(model.states(), std::move(rows));
}

namespace {

const std::vector<Pmf>& row_vertices(const TransitionModel& model, std::size_t x) {
    const auto* v = std::get_if<VertexRow>(&model.row(x).repr());
    if (!v) {
        throw Error(Errc::IntervalRowsPresent,
                    "row '" + model.states().label(x) + "' is an interval row; vertexize the model first");
    }
    return v->vertices;
}

std::vector<std::size_t> vertex_counts(const TransitionModel& model) {
    std::vector<std::size_t> counts;
    for (std::size_t x = 0; x < model.size(); ++x) counts.push_back(row_vertices(model, x).size());
    return counts;
}

std::size_t saturating_product(const std::vector<std::size_t>& counts) {
    std::size_t total = 1;
    for (std::size_t c : counts) {
        if (c != 0 && total > std::numeric_limits<std::size_t>::max() / c) {
            return std::numeric_limits<std::size_t>::max();
        }
        total *= c;
    }
    return total;
}

// Mixed-radix decode; state 0 is the most significant digit so that index
// order is lexicographic by (state, vertex).
std::vector<std::size_t> decode(std::size_t index, const std::vector<std::size_t>& counts) {
    std::vector<std::size_t> choice(counts.size());
    for (std::size_t i = counts.size(); i-- > 0;) {
        choice[i] = index % counts[i];
        index /= counts[i];
    }
    return choice;
}

PreciseChain build_chain(const TransitionModel& model, const std::vector<std::size_t>& choice) {
    const std::size_t n = model.size();
    std::vector<double> m(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        const Pmf& p = row_vertices(model, x)[choice[x]];
        for (std::size_t y = 0; y < n; ++y) m[x * n + y] = p[y];
    }
    return PreciseChain(n, std::move(m), choice);
}

std::string describe_choice(const TransitionModel& model, const std::vector<std::size_t>& choice) {
    std::ostringstream os;
    for (std::size_t x = 0; x < choice.size(); ++x) {
        if (x) os << ' ';
        os << model.states().label(x) << ":v" << choice[x];
    }
    return os.str();
}

void check_state(const TransitionModel& model, const Gamble& f, std::size_t x, std::size_t k) {
    if (f.size() != model.size()) throw Error(Errc::DimensionMismatch, "gamble does not match the model");
    if (x >= model.size()) throw Error(Errc::DimensionMismatch, "start state out of range");
    if (k == 0) throw Error(Errc::InvalidArgument, "horizon k must be >= 1");
}

struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t index = 0;
};

// Best over indices [0, total) of eval(index); lowest index wins ties.
// Work is split into contiguous blocks and merged in block order.
template <typename Eval>
Best parallel_argmax(std::size_t total, unsigned threads, Eval eval) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    std::vector<Best> partial(threads);
    auto work = [&](unsigned t) {
        const std::size_t begin = total * t / threads;
        const std::size_t end = total * (t + 1) / threads;
        Best b;
        for (std::size_t i = begin; i < end; ++i) {
            const double v = eval(i);
            if (v > b.value) b = {v, i};
        }
        partial[t] = b;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    Best best;
    for (const auto& b : partial) {
        if (b.value > best.value) best = b;
    }
    return best;
}

} // namespace

std::size_t homogeneous_count(const TransitionModel& model) { return saturating_product(vertex_counts(model)); }

std::vector<PreciseChain> enumerate_homogeneous(const TransitionModel& model, std::size_t cap) {
    const auto counts = vertex_counts(model);
    const std::size_t total = saturating_product(counts);
    if (total > cap) {
        throw Error(Errc::CapExceeded, std::to_string(total) + " homogeneous chains exceed the cap of " +
                                           std::to_string(cap));
    }
    std::vector<PreciseChain> chains;
    chains.reserve(total);
    for (std::size_t i = 0; i < total; ++i) chains.push_back(build_chain(model, decode(i, counts)));
    return chains;
}

PreciseChain maximizing_chain(const TransitionModel& model, const Gamble& h) {
    std::vector<std::size_t> choice(model.size(), 0);
    for (std::size_t x = 0; x < model.size(); ++x) {
        const auto& vs = row_vertices(model, x);
        double best = vs[0].expectation(h);
        for (std::size_t j = 1; j < vs.size(); ++j) {
            const double v = vs[j].expectation(h);
            if (v > best) {
                best = v;
                choice[x] = j;
            }
        }
    }
    return build_chain(model, choice);
}

Gamble precise_time_averages(const PreciseChain& chain, const Gamble& f, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidArgument, "horizon k must be >= 1");
    Gamble g = f;
    Gamble sum = f;
    for (std::size_t i = 1; i < k; ++i) {
        g = chain.apply(g);
        sum += g;
    }
    return sum / static_cast<double>(k);
}

double precise_time_average(const PreciseChain& chain, const Gamble& f, std::size_t x, std::size_t k) {
    if (x >= chain.size()) throw Error(Errc::DimensionMismatch, "start state out of range");
    return precise_time_averages(chain, f, k)[x];
}

double RiResult::value() const {
    return sampled.count > 0 ? std::max(vertex.value, sampled.value) : vertex.value;
}

RiResult ri_upper_average(const TransitionModel& model, const Gamble& f, std::size_t x, std::size_t k,
                          const OracleOptions& options) {
    check_state(model, f, x, k);
    const auto counts = vertex_counts(model);
    const std::size_t total = saturating_product(counts);
    if (total > options.cap) {
        throw Error(Errc::CapExceeded, std::to_string(total) + " homogeneous chains exceed the cap of " +
                                           std::to_string(options.cap));
    }
    RiResult result;
    const Best best = parallel_argmax(total, options.threads, [&](std::size_t i) {
        return precise_time_average(build_chain(model, decode(i, counts)), f, x, k);
    });
    result.vertex = {best.value, describe_choice(model, decode(best.index, counts)), total};

    if (options.samples > 0) {
        const std::size_t n = model.size();
        std::mt19937_64 rng(options.seed);
        std::exponential_distribution<double> weight(1.0);
        result.sampled.value = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < options.samples; ++s) {
            std::vector<double> m(n * n, 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                const auto& vs = row_vertices(model, r);
                std::vector<double> w(vs.size());
                for (double& wi : w) wi = weight(rng);
                const double total_w = std::accumulate(w.begin(), w.end(), 0.0);
                for (std::size_t j = 0; j < vs.size(); ++j) {
                    for (std::size_t y = 0; y < n; ++y) m[r * n + y] += w[j] / total_w * vs[j][y];
                }
            }
            const double v = precise_time_average(PreciseChain(n, std::move(m)), f, x, k);
            if (v > result.sampled.value) {
                result.sampled.value = v;
                result.sampled.argmax = "sample " + std::to_string(s);
            }
        }
        result.sampled.count = options.samples;
    }
    return result;
}

OracleResult ci_upper_average_bruteforce(const TransitionModel& model, const Gamble& f, std::size_t x,
                                         std::size_t k, std::size_t cap) {
    check_state(model, f, x, k);
    const auto counts = vertex_counts(model);
    const std::size_t per_step = saturating_product(counts);
    std::size_t total = 1;
    for (std::size_t i = 1; i < k; ++i) {
        if (total > cap / std::max<std::size_t>(per_step, 1)) {
            throw Error(Errc::CapExceeded, "matrix sequences exceed the cap of " + std::to_string(cap));
        }
        total *= per_step;
    }
    if (total > cap) throw Error(Errc::CapExceeded, "matrix sequences exceed the cap of " + std::to_string(cap));

    const std::size_t n = model.size();
    std::vector<PreciseChain> chains;
    chains.reserve(per_step);
    for (std::size_t i = 0; i < per_step; ++i) chains.push_back(build_chain(model, decode(i, counts)));

    // Depth-first over sequences, carrying the distribution of X_{i+1} and
    // the accumulated sum of E f(X_1..X_{i+1}).
    OracleResult result;
    result.value = -std::numeric_limits<double>::infinity();
    result.count = total;
    std::vector<std::size_t> seq;
    std::vector<std::size_t> best_seq;
    auto dot = [&](const std::vector<double>& r) {
        double s = 0.0;
        for (std::size_t y = 0; y < n; ++y) s += r[y] * f[y];
        return s;
    };
    auto dfs = [&](auto&& self, const std::vector<double>& dist, double acc) -> void {
        if (seq.size() + 1 == k) {
            const double v = acc / static_cast<double>(k);
            if (v > result.value) {
                result.value = v;
                best_seq = seq;
            }
            return;
        }
        for (std::size_t c = 0; c < per_step; ++c) {
            std::vector<double> next(n, 0.0);
            for (std::size_t u = 0; u < n; ++u) {
                if (dist[u] == 0.0) continue;
                for (std::size_t y = 0; y < n; ++y) next[y] += dist[u] * chains[c].at(u, y);
            }
            seq.push_back(c);
            self(self, next, acc + dot(next));
            seq.pop_back();
        }
    };
    std::vector<double> start(n, 0.0);
    start[x] = 1.0;
    dfs(dfs, start, f[x]);

    std::ostringstream os;
    for (std::size_t i = 0; i < best_seq.size(); ++i) {
        os << (i ? " | " : "") << "T" << (i + 1) << "=" << describe_choice(model, decode(best_seq[i], counts));
    }
    result.argmax = best_seq.empty() ? "(no transitions)" : os.str();
    return result;
}

RiLimitReport ri_limit_check(const TransitionModel& model, const Gamble& f, const OracleOptions& options,
                             const SolverOptions& solver) {
    const UpperTransitionOperator op(model);
    const auto limit = weak_ergodic_limit(op, f, solver);
    if (!limit) throw Error(Errc::InvalidArgument, "ri_limit_check requires a top-class-absorbing model");

    RiLimitReport report;
    report.limit = *limit;
    report.horizons = {100, 1000};
    for (std::size_t k : report.horizons) {
        std::vector<double> row;
        for (std::size_t x = 0; x < model.size(); ++x) row.push_back(ri_upper_average(model, f, x, k, options).value());
        report.values.push_back(std::move(row));
    }
    const auto& first = report.values.front();
    const auto& last = report.values.back();
    report.within_bounds = true;
    report.approaches = true;
    for (std::size_t x = 0; x < model.size(); ++x) {
        if (last[x] > report.limit + report.upper_slack || last[x] < report.limit - report.lower_slack) {
            report.within_bounds = false;
        }
        if (std::abs(last[x] - report.limit) > std::abs(first[x] - report.limit) + report.upper_slack) {
            report.approaches = false;
        }
    }
    return report;
}

} // namespace imcergo
