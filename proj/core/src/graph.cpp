#include "imcergo/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace imcergo {

AccessibilityGraph::AccessibilityGraph(std::size_t n) : n_(n), adj_(n * n, 0), reach_(n * n, 0) {
    for (std::size_t x = 0; x < n; ++x) reach_[x * n + x] = 1;
}

void AccessibilityGraph::set_edge(std::size_t x, std::size_t y) {
    if (x >= n_ || y >= n_) throw Error(Errc::DimensionMismatch, "edge endpoint out of range");
    adj_[x * n_ + y] = 1;
}

std::vector<std::size_t> AccessibilityGraph::successors(std::size_t x) const {
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < n_; ++y) {
        if (edge(x, y)) out.push_back(y);
    }
    return out;
}

void AccessibilityGraph::close() {
    std::fill(reach_.begin(), reach_.end(), 0);
    for (std::size_t x = 0; x < n_; ++x) {
        reach_[x * n_ + x] = 1;
        for (std::size_t y = 0; y < n_; ++y) {
            if (edge(x, y)) reach_[x * n_ + y] = 1;
        }
    }
    // Warshall
    for (std::size_t k = 0; k < n_; ++k) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (!reach_[i * n_ + k]) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (reach_[k * n_ + j]) reach_[i * n_ + j] = 1;
            }
        }
    }
}

AccessibilityGraph build_graph(const TransitionModel& model) {
    const std::size_t n = model.size();
    AccessibilityGraph g(n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (model.row(x).can_reach(y)) g.set_edge(x, y);
        }
    }
    g.close();
    return g;
}

namespace {

struct Tarjan {
    const AccessibilityGraph& g;
    std::vector<long> index, lowlink;
    std::vector<bool> on_stack;
    std::vector<std::size_t> stack;
    std::vector<StateSet> components;
    long counter = 0;

    explicit Tarjan(const AccessibilityGraph& graph)
        : g(graph), index(graph.size(), -1), lowlink(graph.size(), 0), on_stack(graph.size(), false) {}

    void visit(std::size_t v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : g.successors(v)) {
            if (index[w] < 0) {
                visit(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (on_stack[w]) {
                lowlink[v] = std::min(lowlink[v], index[w]);
            }
        }
        if (lowlink[v] == index[v]) {
            StateSet comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }
    }
};

} // namespace

std::vector<std::size_t> ClassDecomposition::closed_classes() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < closed.size(); ++c) {
        if (closed[c]) out.push_back(c);
    }
    return out;
}

ClassDecomposition decompose(const AccessibilityGraph& graph) {
    const std::size_t n = graph.size();
    Tarjan tarjan(graph);
    for (std::size_t v = 0; v < n; ++v) {
        if (tarjan.index[v] < 0) tarjan.visit(v);
    }

    ClassDecomposition d;
    d.classes = std::move(tarjan.components);
    std::sort(d.classes.begin(), d.classes.end(),
              [](const StateSet& a, const StateSet& b) { return a.front() < b.front(); });
    d.class_of.assign(n, 0);
    for (std::size_t c = 0; c < d.classes.size(); ++c) {
        for (std::size_t x : d.classes[c]) d.class_of[x] = c;
    }

    const std::size_t m = d.classes.size();
    d.precedes.assign(m, std::vector<bool>(m, false));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            d.precedes[a][b] = graph.reaches(d.classes[a].front(), d.classes[b].front());
        }
    }
    d.closed.assign(m, true);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (graph.edge(x, y) && d.class_of[x] != d.class_of[y]) d.closed[d.class_of[x]] = false;
        }
    }

    StateSet reachable_from_all;
    for (std::size_t x = 0; x < n; ++x) {
        bool all = true;
        for (std::size_t y = 0; y < n && all; ++y) all = graph.reaches(y, x);
        if (all) reachable_from_all.push_back(x);
    }
    if (!reachable_from_all.empty()) d.top_class = d.class_of[reachable_from_all.front()];
    return d;
}

TcrResult check_tcr(const AccessibilityGraph& graph, const ClassDecomposition& decomposition) {
    if (!decomposition.top_class) return {};
    const StateSet& top = decomposition.classes[*decomposition.top_class];
    const std::size_t n = graph.size();
    const auto inside = to_mask(n, top);

    // BFS levels from the first top-class state; every intra-class edge u->v
    // closes a cycle whose length is congruent to level(u) + 1 - level(v).
    std::vector<long> level(n, -1);
    std::queue<std::size_t> queue;
    level[top.front()] = 0;
    queue.push(top.front());
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop();
        for (std::size_t v : graph.successors(u)) {
            if (inside[v] && level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push(v);
            }
        }
    }
    std::size_t period = 0;
    for (std::size_t u : top) {
        for (std::size_t v : graph.successors(u)) {
            if (!inside[v]) continue;
            const long diff = level[u] + 1 - level[v];
            period = std::gcd(period, static_cast<std::size_t>(diff < 0 ? -diff : diff));
        }
    }
    return {period == 1, period};
}

TcaResult check_tca(const TransitionModel& model, const ClassDecomposition& decomposition) {
    TcaResult result;
    if (!decomposition.top_class) {
        result.reason = "no top class";
        return result;
    }
    const std::size_t n = model.size();
    std::vector<bool> current(n, true);
    for (std::size_t x : decomposition.classes[*decomposition.top_class]) current[x] = false;

    StateSet set = from_mask(current);
    while (!set.empty()) {
        ++result.rounds;
        StateSet next;
        for (std::size_t x : set) {
            if (row_can_confine(model.row(x), set)) next.push_back(x);
        }
        if (next == set) break;
        set = std::move(next);
    }
    if (set.empty()) {
        result.absorbing = true;
        result.reason = "top class absorbing";
    } else {
        result.confining_set = std::move(set);
        result.reason = "confining set outside the top class";
    }
    return result;
}

AccessibilityReport classify(const TransitionModel& model) {
    AccessibilityGraph graph = build_graph(model);
    ClassDecomposition decomposition = decompose(graph);
    TcrResult tcr = check_tcr(graph, decomposition);
    TcaResult tca = check_tca(model, decomposition);
    return {std::move(graph), std::move(decomposition), tcr, std::move(tca)};
}

std::string to_dot(const AccessibilityGraph& graph, const StateSpace& states,
                   const ClassDecomposition& decomposition) {
    std::ostringstream os;
    os << "digraph accessibility {\n";
    for (std::size_t c = 0; c < decomposition.classes.size(); ++c) {
        os << "  subgraph cluster_" << c << " {\n";
        os << "    label=\"class " << c << (decomposition.closed[c] ? " (closed)" : "") << "\";\n";
        if (decomposition.closed[c]) os << "    style=bold;\n";
        for (std::size_t x : decomposition.classes[c]) {
            os << "    \"" << states.label(x) << "\"";
            if (decomposition.top_class == c) os << " [style=filled]";
            os << ";\n";
        }
        os << "  }\n";
    }
    for (std::size_t x = 0; x < graph.size(); ++x) {
        for (std::size_t y : graph.successors(x)) {
            os << "  \"" << states.label(x) << "\" -> \"" << states.label(y) << "\";\n";
        }
    }
    os << "}\n";
    return os.str();
}

bool is_strongly_connected(const AccessibilityGraph& graph, const StateSet& set) {
    if (set.empty()) return false;
    auto all_reached = [&](bool reverse) {
        std::vector<bool> seen(graph.size(), false);
        std::vector<std::size_t> stack{set.front()};
        seen[set.front()] = true;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : set) {
                const bool e = reverse ? graph.edge(v, u) : graph.edge(u, v);
                if (e && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        return std::all_of(set.begin(), set.end(), [&](std::size_t s) { return seen[s]; });
    };
    return all_reached(false) && all_reached(true);
}

} // namespace imcergo
