#include "imcergo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace imcergo {

namespace {

// Normalized bounds closer than this to 0 or 1 are snapped, so that exact
// support logic is not disturbed by cancellation in 1 - sum(...).
constexpr double snap_eps = 1e-12;

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw Error(Errc::DimensionMismatch, std::string(what) + ": expected size " +
                                                 std::to_string(want) + ", got " +
                                                 std::to_string(got));
    }
}

double snap(double v) {
    if (std::abs(v) < snap_eps) return 0.0;
    if (std::abs(v - 1.0) < snap_eps) return 1.0;
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// StateSpace

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw Error(Errc::SchemaViolation, "state space must not be empty");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw Error(Errc::DuplicateLabel, "duplicate state label '" + l + "'");
    }
}

std::optional<std::size_t> StateSpace::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

// ---------------------------------------------------------------------------
// Gamble

Gamble::Gamble(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "gamble entries must be finite");
    }
}

Gamble::Gamble(std::initializer_list<double> values) : Gamble(std::vector<double>(values)) {}

Gamble Gamble::constant(std::size_t n, double c) { return Gamble(std::vector<double>(n, c)); }

Gamble Gamble::indicator(std::size_t n, const StateSet& set) {
    std::vector<double> v(n, 0.0);
    for (std::size_t s : set) v.at(s) = 1.0;
    return Gamble(std::move(v));
}

double Gamble::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Gamble::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Gamble::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Gamble::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

Gamble& Gamble::operator+=(const Gamble& other) {
    require_size(other.size(), size(), "gamble addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Gamble& Gamble::operator-=(const Gamble& other) {
    require_size(other.size(), size(), "gamble subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Gamble& Gamble::operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
}

Gamble& Gamble::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Gamble& Gamble::operator/=(double c) {
    for (double& v : values_) v /= c;
    return *this;
}

double sup_distance(const Gamble& a, const Gamble& b) {
    require_size(b.size(), a.size(), "sup_distance");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// ---------------------------------------------------------------------------
// Pmf

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw Error(Errc::PmfMass, "pmf must not be empty");
    double total = 0.0;
    for (double& p : probs_) {
        if (!std::isfinite(p) || p < -tol_mass || p > 1.0 + tol_mass) {
            throw Error(Errc::PmfMass, "pmf entry out of [0,1]: " + std::to_string(p));
        }
        if (p < 0.0) p = 0.0;
        total += p;
    }
    if (std::abs(total - 1.0) > tol_mass) {
        throw Error(Errc::PmfMass, "pmf entries sum to " + std::to_string(total));
    }
}

Pmf Pmf::degenerate(std::size_t n, std::size_t state) {
    std::vector<double> p(n, 0.0);
    p.at(state) = 1.0;
    return Pmf(std::move(p));
}

double Pmf::expectation(const Gamble& h) const {
    require_size(h.size(), size(), "pmf expectation");
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) s += probs_[i] * h[i];
    return s;
}

// ---------------------------------------------------------------------------
// CredalRow

CredalRow CredalRow::vertices(std::vector<Pmf> vertices) {
    if (vertices.empty()) throw Error(Errc::SchemaViolation, "vertex row needs at least one pmf");
    const std::size_t n = vertices.front().size();
    for (const auto& v : vertices) require_size(v.size(), n, "vertex pmf");
    return CredalRow(VertexRow{std::move(vertices)}, n);
}

CredalRow CredalRow::intervals(std::vector<double> lower, std::vector<double> upper,
                               std::vector<BoundChange>* changes) {
    const std::size_t n = lower.size();
    if (n == 0) throw Error(Errc::SchemaViolation, "interval row must not be empty");
    require_size(upper.size(), n, "interval upper bounds");
    double sum_lower = 0.0;
    double sum_upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] < 0.0 ||
            upper[i] > 1.0 || lower[i] > upper[i]) {
            throw Error(Errc::IncoherentIntervals,
                        "bounds must satisfy 0 <= lower <= upper <= 1 at position " + std::to_string(i));
        }
        sum_lower += lower[i];
        sum_upper += upper[i];
    }
    if (sum_lower > 1.0 + tol_mass) {
        throw Error(Errc::IncoherentIntervals, "sum of lower bounds " + std::to_string(sum_lower) + " exceeds 1");
    }
    if (sum_upper < 1.0 - tol_mass) {
        throw Error(Errc::IncoherentIntervals, "sum of upper bounds " + std::to_string(sum_upper) + " below 1");
    }

    // Reachability: every bound must be attained by some pmf in the set.
    std::vector<double> lo(n), up(n);
    for (std::size_t y = 0; y < n; ++y) {
        const double others_upper = sum_upper - upper[y];
        const double others_lower = sum_lower - lower[y];
        lo[y] = std::max(lower[y], snap(1.0 - others_upper));
        up[y] = std::min(upper[y], snap(1.0 - others_lower));
    }
    for (std::size_t y = 0; y < n; ++y) {
        if (lo[y] - lower[y] > snap_eps) {
            if (changes) changes->push_back({y, true, lower[y], lo[y]});
            lower[y] = lo[y];
        }
        if (upper[y] - up[y] > snap_eps) {
            if (changes) changes->push_back({y, false, upper[y], up[y]});
            upper[y] = up[y];
        }
    }
    return CredalRow(IntervalRow{std::move(lower), std::move(upper)}, n);
}

bool CredalRow::can_reach(std::size_t y) const {
    if (y >= size_) throw Error(Errc::DimensionMismatch, "state index out of range");
    if (const auto* v = std::get_if<VertexRow>(&repr_)) {
        return std::any_of(v->vertices.begin(), v->vertices.end(),
                           [y](const Pmf& p) { return p[y] > 0.0; });
    }
    return std::get<IntervalRow>(repr_).upper[y] > 0.0;
}

// ---------------------------------------------------------------------------
// TransitionModel

TransitionModel::TransitionModel(StateSpace states, std::vector<CredalRow> rows)
    : states_(std::move(states)), rows_(std::move(rows)) {
    require_size(rows_.size(), states_.size(), "model rows");
    for (const auto& r : rows_) require_size(r.size(), states_.size(), "credal row");
}

// ---------------------------------------------------------------------------
// Row expectations

double row_upper_expectation(const CredalRow& row, const Gamble& h) {
    require_size(h.size(), row.size(), "row_upper_expectation");
    if (const auto* v = std::get_if<VertexRow>(&row.repr())) {
        double best = v->vertices.front().expectation(h);
        for (std::size_t i = 1; i < v->vertices.size(); ++i) {
            best = std::max(best, v->vertices[i].expectation(h));
        }
        return best;
    }
    const auto& iv = std::get<IntervalRow>(row.repr());
    const std::size_t n = h.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&h](std::size_t a, std::size_t b) { return h[a] > h[b]; });

    double free_mass = 1.0;
    double value = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
        free_mass -= iv.lower[y];
        value += iv.lower[y] * h[y];
    }
    for (std::size_t y : order) {
        if (free_mass <= 0.0) break;
        const double add = std::min(iv.upper[y] - iv.lower[y], free_mass);
        value += add * h[y];
        free_mass -= add;
    }
    return value;
}

double row_lower_expectation(const CredalRow& row, const Gamble& h) {
    return -row_upper_expectation(row, -h);
}

bool row_can_confine(const CredalRow& row, const StateSet& set) {
    if (set.empty()) throw Error(Errc::EmptySubset, "confinement set must be non-empty");
    const auto inside = to_mask(row.size(), set);
    if (const auto* v = std::get_if<VertexRow>(&row.repr())) {
        return std::any_of(v->vertices.begin(), v->vertices.end(), [&](const Pmf& p) {
            for (std::size_t y = 0; y < p.size(); ++y) {
                if (!inside[y] && p[y] > 0.0) return false;
            }
            return true;
        });
    }
    const auto& iv = std::get<IntervalRow>(row.repr());
    double upper_inside = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
        if (inside[y]) {
            upper_inside += iv.upper[y];
        } else if (iv.lower[y] > 0.0) {
            return false;
        }
    }
    return upper_inside >= 1.0 - tol_mass;
}

TransitionModel restrict_model(const TransitionModel& model, const StateSet& set) {
    if (set.empty()) throw Error(Errc::EmptySubset, "restriction set must be non-empty");
    const std::size_t n = model.size();
    const auto inside = to_mask(n, set);

    std::vector<std::string> labels;
    std::vector<CredalRow> rows;
    for (std::size_t x : set) {
        labels.push_back(model.states().label(x));
        const CredalRow& row = model.row(x);
        for (std::size_t y = 0; y < n; ++y) {
            if (!inside[y] && row.can_reach(y)) {
                throw Error(Errc::SubsetNotClosed, "state '" + model.states().label(x) +
                                                       "' can move outside the restriction set");
            }
        }
        if (const auto* v = std::get_if<VertexRow>(&row.repr())) {
            std::vector<Pmf> sub;
            for (const auto& p : v->vertices) {
                std::vector<double> q;
                for (std::size_t y : set) q.push_back(p[y]);
                sub.emplace_back(std::move(q));
            }
            rows.push_back(CredalRow::vertices(std::move(sub)));
        } else {
            const auto& iv = std::get<IntervalRow>(row.repr());
            std::vector<double> lo, up;
            for (std::size_t y : set) {
                lo.push_back(iv.lower[y]);
                up.push_back(iv.upper[y]);
            }
            rows.push_back(CredalRow::intervals(std::move(lo), std::move(up)));
        }
    }
    return TransitionModel(StateSpace(std::move(labels)), std::move(rows));
}

std::vector<bool> to_mask(std::size_t n, const StateSet& set) {
    std::vector<bool> mask(n, false);
    for (std::size_t s : set) {
        if (s >= n) throw Error(Errc::DimensionMismatch, "state index out of range");
        mask[s] = true;
    }
    return mask;
}

StateSet from_mask(const std::vector<bool>& mask) {
    StateSet set;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) set.push_back(i);
    }
    return set;
}

} // namespace imcergo
