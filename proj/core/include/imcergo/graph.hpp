#pragma once

// Upper accessibility graph and the structural conditions derived from it.
//
// Edge x -> y exists iff the upper probability of moving from x to y in one
// step is strictly positive. All decisions here use exact support logic on
// the model rows; no floating-point thresholds are involved.

#include "imcergo/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace imcergo {

class AccessibilityGraph {
public:
    explicit AccessibilityGraph(std::size_t n = 0);

    std::size_t size() const noexcept { return n_; }
    bool edge(std::size_t x, std::size_t y) const { return adj_[x * n_ + y] != 0; }
    void set_edge(std::size_t x, std::size_t y);
    /// Reflexive-transitive accessibility: x == y or a directed path x ~> y.
    bool reaches(std::size_t x, std::size_t y) const { return reach_[x * n_ + y] != 0; }
    std::vector<std::size_t> successors(std::size_t x) const;

    /// Recomputes the reachability closure; called by build_graph.
    void close();

private:
    std::size_t n_;
    std::vector<char> adj_;
    std::vector<char> reach_;
};

AccessibilityGraph build_graph(const TransitionModel& model);

struct ClassDecomposition {
    /// Communication classes, numbered by ascending minimal state index.
    std::vector<StateSet> classes;
    std::vector<std::size_t> class_of;
    /// precedes[a][b]: class a reaches class b (reflexive partial order).
    std::vector<std::vector<bool>> precedes;
    std::vector<bool> closed;
    std::optional<std::size_t> top_class;

    std::vector<std::size_t> closed_classes() const;
};

/// Strongly connected components (lowlink DFS), their order, closedness and
/// the top class, computed as the set of states reachable from every state.
ClassDecomposition decompose(const AccessibilityGraph& graph);

struct TcrResult {
    bool regular = false;
    /// gcd of cycle lengths inside the top class; 0 without a top class.
    std::size_t period = 0;
};

TcrResult check_tcr(const AccessibilityGraph& graph, const ClassDecomposition& decomposition);

struct TcaResult {
    bool absorbing = false;
    /// Non-empty set outside the top class that some row choice never leaves.
    StateSet confining_set;
    std::string reason;
    /// Rounds of the set iteration until it stabilized.
    std::size_t rounds = 0;
};

/// Starts from the complement of the top class and repeatedly drops the
/// states whose row cannot keep all mass inside the current set. The fixed
/// point is empty iff the top class is absorbing.
TcaResult check_tca(const TransitionModel& model, const ClassDecomposition& decomposition);

struct AccessibilityReport {
    AccessibilityGraph graph;
    ClassDecomposition decomposition;
    TcrResult tcr;
    TcaResult tca;

    bool ergodic() const noexcept { return tcr.regular && tca.absorbing; }
    bool weakly_ergodic() const noexcept { return tca.absorbing; }
};

AccessibilityReport classify(const TransitionModel& model);

/// Graphviz rendering; closed classes are boxed, top-class states filled.
std::string to_dot(const AccessibilityGraph& graph, const StateSpace& states,
                   const ClassDecomposition& decomposition);

/// True iff the states of `set` are mutually accessible using only states of `set`.
bool is_strongly_connected(const AccessibilityGraph& graph, const StateSet& set);

} // namespace imcergo
