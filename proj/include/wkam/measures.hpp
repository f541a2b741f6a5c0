#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wkam/cost_graph.hpp"
#include "wkam/util.hpp"

namespace wkam {

// Probability weights on graph edges; closed when flow-conserving at every node.
struct ClosedMeasure {
    std::vector<int> edge_ids;
    std::vector<double> weights; // parallel to edge_ids, nonnegative

    double total() const;
    // max_x |inflow(x) - outflow(x)|
    double closedness_residual(const CostGraph& graph) const;
    double max_speed(const CostGraph& graph) const;
};

double action(const ClosedMeasure& mu, const CostGraph& graph,
              const std::function<double(const Edge&)>& weight_fn);

// Action against L_G, i.e. edge cost / tau.
double critical_action(const ClosedMeasure& mu, const CostGraph& graph);

// Simple cycles of the masked subgraph (Johnson), each as a node sequence
// starting at its smallest node. Canonical order: smallest node, then length,
// then lexicographic. Throws CycleExplosion beyond the cap.
std::vector<std::vector<int>> simple_cycles(const CostGraph& graph, const std::vector<char>& mask,
                                            std::size_t cap);

// Extreme points of the Mather set: uniform-in-time edge occupation measures
// of the simple cycles of the critical subgraph.
std::vector<ClosedMeasure> extreme_mather_measures(const CostGraph& graph, double c,
                                                   std::size_t cycle_cap = 10000);
std::vector<ClosedMeasure> extreme_mather_measures(const CostGraph& graph, double c,
                                                   std::size_t cycle_cap, double tol);

// Linear program  min sum_e cost(e) mu(e)  over flow-conserving probability
// edge weights; value/tau must equal -c at the optimum.
struct LpCertificate {
    double value = 0.0;
    ClosedMeasure measure;
    std::vector<double> reduced_costs; // per edge, from the final tableau
};

LpCertificate mather_lp_certificate(const CostGraph& graph);

ClosedMeasure uniform_cycle_measure(const CostGraph& graph, const std::vector<int>& cycle);

} // namespace wkam
