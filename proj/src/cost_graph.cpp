#include "wkam/cost_graph.hpp"

namespace wkam {

CostGraph build_cost_graph(const HamiltonianModel& model, const DiscreteScheme& scheme) {
    scheme.validate();
    CostGraph graph;
    graph.scheme = scheme;
    graph.edges.reserve(static_cast<std::size_t>(scheme.n) * scheme.moves());
    for (int i = 0; i < scheme.n; ++i) {
        const double x = scheme.position(i);
        for (int k = -scheme.window; k <= scheme.window; ++k) {
            Edge e;
            e.from = i;
            e.to = scheme.wrap(i + k);
            e.move = k;
            e.velocity = scheme.velocity(k);
            e.cost = scheme.tau * model.critical_lagrangian(x, e.velocity);
            graph.edges.push_back(e);
        }
    }
    return graph;
}

std::vector<double> edge_lu0_weights(const HamiltonianModel& model, const CostGraph& graph) {
    std::vector<double> w(graph.edges.size());
    for (std::size_t i = 0; i < graph.edges.size(); ++i)
        w[i] = model.weight_lu0(graph.scheme.position(graph.edges[i].from));
    return w;
}

} // namespace wkam
