#pragma once

// State space, gambles and separately specified credal transition rows.
//
// A TransitionModel holds one credal row per state. Rows are independent
// objects, so any combination of per-row choices is a member of the set of
// transition matrices the model describes.

#include "imcergo/errors.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace imcergo {

/// Mass tolerance for pmf validation and interval coherence.
inline constexpr double tol_mass = 1e-9;

/// Sorted, duplicate-free list of state indices.
using StateSet = std::vector<std::size_t>;

/// Ordered list of distinct state labels.
class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    bool operator==(const StateSpace&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Real-valued function on the state space. Entries are always finite.
class Gamble {
public:
    Gamble() = default;
    explicit Gamble(std::vector<double> values);
    Gamble(std::initializer_list<double> values);

    static Gamble constant(std::size_t n, double c);
    static Gamble zero(std::size_t n) { return constant(n, 0.0); }
    static Gamble indicator(std::size_t n, const StateSet& set);
    static Gamble indicator(std::size_t n, std::size_t state) { return indicator(n, StateSet{state}); }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    double min() const;
    double max() const;
    double sup_norm() const;
    /// max - min
    double hilbert_seminorm() const { return max() - min(); }
    double mean() const;

    Gamble& operator+=(const Gamble& other);
    Gamble& operator-=(const Gamble& other);
    Gamble& operator+=(double c);
    Gamble& operator-=(double c) { return *this += -c; }
    Gamble& operator*=(double c);
    Gamble& operator/=(double c);

    friend Gamble operator+(Gamble a, const Gamble& b) { return a += b; }
    friend Gamble operator-(Gamble a, const Gamble& b) { return a -= b; }
    friend Gamble operator+(Gamble a, double c) { return a += c; }
    friend Gamble operator+(double c, Gamble a) { return a += c; }
    friend Gamble operator-(Gamble a, double c) { return a -= c; }
    friend Gamble operator*(double c, Gamble a) { return a *= c; }
    friend Gamble operator*(Gamble a, double c) { return a *= c; }
    friend Gamble operator/(Gamble a, double c) { return a /= c; }
    friend Gamble operator-(Gamble a) { return a *= -1.0; }

    bool operator==(const Gamble&) const = default;

private:
    std::vector<double> values_;
};

double sup_distance(const Gamble& a, const Gamble& b);

/// Probability mass function. Entries within tol_mass below zero are clamped to 0.
class Pmf {
public:
    explicit Pmf(std::vector<double> probs);

    static Pmf degenerate(std::size_t n, std::size_t state);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }
    double expectation(const Gamble& h) const;

private:
    std::vector<double> probs_;
};

struct VertexRow {
    std::vector<Pmf> vertices;
};

/// Probability intervals; bounds are reachable after construction.
struct IntervalRow {
    std::vector<double> lower;
    std::vector<double> upper;
};

/// One bound tightened by reachability normalization.
struct BoundChange {
    std::size_t state;
    bool is_lower;
    double before;
    double after;
};

/// Credal set of next-state pmfs for one state: a vertex list or probability intervals.
class CredalRow {
public:
    static CredalRow vertices(std::vector<Pmf> vertices);
    /// Validates coherence and applies reachability normalization. Changed
    /// bounds are appended to `changes` when it is non-null.
    static CredalRow intervals(std::vector<double> lower, std::vector<double> upper,
                               std::vector<BoundChange>* changes = nullptr);

    std::size_t size() const noexcept { return size_; }
    bool is_vertex_list() const noexcept { return std::holds_alternative<VertexRow>(repr_); }
    const std::variant<VertexRow, IntervalRow>& repr() const noexcept { return repr_; }

    /// Exact test for a strictly positive upper probability of moving to `y`.
    bool can_reach(std::size_t y) const;

private:
    CredalRow(std::variant<VertexRow, IntervalRow> repr, std::size_t n)
        : repr_(std::move(repr)), size_(n) {}

    std::variant<VertexRow, IntervalRow> repr_;
    std::size_t size_;
};

class TransitionModel {
public:
    TransitionModel(StateSpace states, std::vector<CredalRow> rows);

    std::size_t size() const noexcept { return states_.size(); }
    const StateSpace& states() const noexcept { return states_; }
    const CredalRow& row(std::size_t x) const { return rows_.at(x); }
    const std::vector<CredalRow>& rows() const noexcept { return rows_; }

private:
    StateSpace states_;
    std::vector<CredalRow> rows_;
};

/// Supremum of the expectation of `h` over the row's credal set.
///
/// Vertex lists take the best vertex. Probability intervals use the greedy
/// natural extension: states are visited by decreasing `h` (ties by
/// ascending index) and each gets as much of the free mass above its lower
/// bound as its upper bound allows.
double row_upper_expectation(const CredalRow& row, const Gamble& h);

/// Conjugate lower expectation, `-row_upper_expectation(row, -h)`.
double row_lower_expectation(const CredalRow& row, const Gamble& h);

/// Exact test whether some member of the row puts all of its mass in `set`.
bool row_can_confine(const CredalRow& row, const StateSet& set);

/// Sub-model on a set of states that no row inside the set can leave.
/// Throws SubsetNotClosed when some row has positive upper mass outside.
TransitionModel restrict_model(const TransitionModel& model, const StateSet& set);

std::vector<bool> to_mask(std::size_t n, const StateSet& set);
StateSet from_mask(const std::vector<bool>& mask);

} // namespace imcergo
