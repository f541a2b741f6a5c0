#include "wkam/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/critical.hpp"
#include "wkam/errors.hpp"
#include "wkam/simplex.hpp"
#include "wkam/util.hpp"

namespace wkam {

double ClosedMeasure::total() const {
    KahanSum s;
    for (double w : weights) s.add(w);
    return s.value();
}

double ClosedMeasure::closedness_residual(const CostGraph& graph) const {
    std::vector<double> balance(static_cast<std::size_t>(graph.node_count()), 0.0);
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
        const Edge& e = graph.edges[static_cast<std::size_t>(edge_ids[i])];
        balance[static_cast<std::size_t>(e.to)] += weights[i];
        balance[static_cast<std::size_t>(e.from)] -= weights[i];
    }
    double residual = 0.0;
    for (double b : balance) residual = std::max(residual, std::fabs(b));
    return residual;
}

double ClosedMeasure::max_speed(const CostGraph& graph) const {
    double speed = 0.0;
    for (std::size_t i = 0; i < edge_ids.size(); ++i)
        if (weights[i] > 0.0)
            speed = std::max(speed,
                             std::fabs(graph.edges[static_cast<std::size_t>(edge_ids[i])].velocity));
    return speed;
}

double action(const ClosedMeasure& mu, const CostGraph& graph,
              const std::function<double(const Edge&)>& weight_fn) {
    KahanSum s;
    for (std::size_t i = 0; i < mu.edge_ids.size(); ++i)
        s.add(mu.weights[i] * weight_fn(graph.edges[static_cast<std::size_t>(mu.edge_ids[i])]));
    return s.value();
}

double critical_action(const ClosedMeasure& mu, const CostGraph& graph) {
    const double tau = graph.scheme.tau;
    return action(mu, graph, [tau](const Edge& e) { return e.cost / tau; });
}

namespace {

// Johnson's elementary-circuit enumeration restricted to a masked subgraph.
class CycleEnumerator {
public:
    CycleEnumerator(const CostGraph& graph, const std::vector<char>& mask, std::size_t cap)
        : graph_(graph), cap_(cap) {
        const int n = graph.node_count();
        adjacency_.resize(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < graph.edges.size(); ++i) {
            if (!mask[i]) continue;
            adjacency_[static_cast<std::size_t>(graph.edges[i].from)].push_back(graph.edges[i].to);
        }
        for (auto& list : adjacency_) std::sort(list.begin(), list.end());
        blocked_.assign(static_cast<std::size_t>(n), 0);
        block_lists_.resize(static_cast<std::size_t>(n));
    }

    std::vector<std::vector<int>> run() {
        const int n = graph_.node_count();
        for (int s = 0; s < n; ++s) {
            root_ = s;
            for (int v = s; v < n; ++v) {
                blocked_[static_cast<std::size_t>(v)] = 0;
                block_lists_[static_cast<std::size_t>(v)].clear();
            }
            path_.clear();
            circuit(s);
        }
        std::sort(cycles_.begin(), cycles_.end(), [](const auto& a, const auto& b) {
            if (a.front() != b.front()) return a.front() < b.front();
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        return std::move(cycles_);
    }

private:
    bool circuit(int v) {
        bool found = false;
        path_.push_back(v);
        blocked_[static_cast<std::size_t>(v)] = 1;
        for (int w : adjacency_[static_cast<std::size_t>(v)]) {
            if (w < root_) continue; // nodes below the root belong to earlier passes
            if (w == root_) {
                record();
                found = true;
            } else if (!blocked_[static_cast<std::size_t>(w)]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : adjacency_[static_cast<std::size_t>(v)]) {
                if (w < root_) continue;
                auto& list = block_lists_[static_cast<std::size_t>(w)];
                if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
            }
        }
        path_.pop_back();
        return found;
    }

    void unblock(int v) {
        blocked_[static_cast<std::size_t>(v)] = 0;
        auto list = std::move(block_lists_[static_cast<std::size_t>(v)]);
        block_lists_[static_cast<std::size_t>(v)].clear();
        for (int w : list)
            if (blocked_[static_cast<std::size_t>(w)]) unblock(w);
    }

    void record() {
        if (cycles_.size() >= cap_) {
            std::ostringstream msg;
            msg << "simple_cycles: more than " << cap_
                << " cycles in the critical subgraph (degenerate model?)";
            throw CycleExplosion(msg.str());
        }
        cycles_.push_back(path_);
    }

    const CostGraph& graph_;
    std::size_t cap_;
    int root_ = 0;
    std::vector<std::vector<int>> adjacency_;
    std::vector<char> blocked_;
    std::vector<std::vector<int>> block_lists_;
    std::vector<int> path_;
    std::vector<std::vector<int>> cycles_;
};

} // namespace

std::vector<std::vector<int>> simple_cycles(const CostGraph& graph, const std::vector<char>& mask,
                                            std::size_t cap) {
    CycleEnumerator enumerator(graph, mask, cap);
    return enumerator.run();
}

ClosedMeasure uniform_cycle_measure(const CostGraph& graph, const std::vector<int>& cycle) {
    ClosedMeasure mu;
    const double w = 1.0 / static_cast<double>(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int from = cycle[i];
        const int to = cycle[(i + 1) % cycle.size()];
        int diff = graph.scheme.wrap(to - from);
        if (diff > graph.scheme.n / 2) diff -= graph.scheme.n;
        mu.edge_ids.push_back(graph.edge_index(from, diff));
        mu.weights.push_back(w);
    }
    return mu;
}

std::vector<ClosedMeasure> extreme_mather_measures(const CostGraph& graph, double c,
                                                   std::size_t cycle_cap) {
    return extreme_mather_measures(graph, c, cycle_cap, aubry_tolerance(graph.scheme));
}

std::vector<ClosedMeasure> extreme_mather_measures(const CostGraph& graph, double c,
                                                   std::size_t cycle_cap, double tol) {
    const std::vector<double> pi = bellman_ford_potentials(graph, c);
    const std::vector<char> mask = tight_edge_mask(graph, c, pi, tol);
    const auto cycles = simple_cycles(graph, mask, cycle_cap);
    std::vector<ClosedMeasure> measures;
    measures.reserve(cycles.size());
    for (const auto& cycle : cycles) measures.push_back(uniform_cycle_measure(graph, cycle));
    return measures;
}

LpCertificate mather_lp_certificate(const CostGraph& graph) {
    const int n = graph.node_count();
    const int m = graph.edge_count();

    // Rows: flow conservation per node, then total mass = 1.
    Matrix a(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(m), 0.0);
    for (int e = 0; e < m; ++e) {
        const Edge& edge = graph.edges[static_cast<std::size_t>(e)];
        a(static_cast<std::size_t>(edge.to), static_cast<std::size_t>(e)) += 1.0;
        a(static_cast<std::size_t>(edge.from), static_cast<std::size_t>(e)) -= 1.0;
        a(static_cast<std::size_t>(n), static_cast<std::size_t>(e)) = 1.0;
    }
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[static_cast<std::size_t>(n)] = 1.0;
    std::vector<double> cost(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) cost[static_cast<std::size_t>(e)] = graph.edges[static_cast<std::size_t>(e)].cost;

    const StandardLpResult lp = solve_standard_lp(a, b, cost);

    LpCertificate cert;
    cert.value = lp.value;
    cert.reduced_costs = lp.reduced_costs;
    for (int e = 0; e < m; ++e) {
        if (lp.x[static_cast<std::size_t>(e)] > 1e-14) {
            cert.measure.edge_ids.push_back(e);
            cert.measure.weights.push_back(lp.x[static_cast<std::size_t>(e)]);
        }
    }
    return cert;
}

} // namespace wkam
