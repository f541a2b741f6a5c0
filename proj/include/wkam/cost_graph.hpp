#pragma once

#include <vector>

#include "wkam/model.hpp"
#include "wkam/scheme.hpp"

namespace wkam {

// One admissible transition y -> x of the discrete dynamics.
struct Edge {
    int from = 0;
    int to = 0;
    int move = 0;        // cell offset, in [-window, window]
    double velocity = 0; // displacement(move)/tau
    double cost = 0;     // tau * L_G(x_from, velocity)
};

// Transition graph of the critical Lagrangian: N*(2W+1) edges, one self-loop
// per node. Edge order is node-major, move from -W to +W.
struct CostGraph {
    DiscreteScheme scheme;
    std::vector<Edge> edges;

    int node_count() const { return scheme.n; }
    int edge_count() const { return static_cast<int>(edges.size()); }

    int edge_index(int node, int move) const {
        return node * scheme.moves() + (move + scheme.window);
    }
    const Edge& edge(int node, int move) const {
        return edges[static_cast<std::size_t>(edge_index(node, move))];
    }
};

CostGraph build_cost_graph(const HamiltonianModel& model, const DiscreteScheme& scheme);

// L_u(source, ., 0) per edge, in edge order.
std::vector<double> edge_lu0_weights(const HamiltonianModel& model, const CostGraph& graph);

} // namespace wkam
