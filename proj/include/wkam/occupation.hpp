#pragma once

#include <vector>

#include "wkam/bellman.hpp"
#include "wkam/cost_graph.hpp"
#include "wkam/measures.hpp"
#include "wkam/value_function.hpp"

namespace wkam {

// Discounted edge occupation of the backward minimizing chain from a node.
// Step k carries the cumulative factor w_k = prod_{j<k} (1 + lambda tau Lu0_j),
// the first-order-exact discretization of exp(lambda int L_u): it keeps the
// telescoping identity sum_k lambda tau w_k Lu0_k = w_end - 1 exact, which the
// normalization diagnostics rely on.
struct OccupationMeasure {
    ClosedMeasure measure; // normalized edge weights
    int source_node = 0;
    double lambda = 0.0;
    double tail_mass_dropped = 0.0; // relative mass of the discarded tail
    double raw_total = 0.0;         // sum_k tau w_k before normalization
    double raw_lu0_total = 0.0;     // sum_k tau w_k Lu0_k before normalization
};

OccupationMeasure occupation_measure(const HamiltonianModel& model, const CostGraph& graph,
                                     const ValueFunction& u_lambda, double lambda, int start,
                                     double level, double eps_tail = 1e-12, double tol = 1e-9);

struct DiagnosticsRow {
    double lambda = 0.0;
    double closedness_residual = 0.0;
    double action_gap = 0.0; // |action(mu, L_G) + c|
    double tv_to_hull = 0.0; // total variation to the Mather convex hull
};

struct DiagnosticsTable {
    std::vector<DiagnosticsRow> rows;
    bool monotone_ok = true; // each column nonincreasing within 20% slack
};

DiagnosticsTable weak_convergence_diagnostics(const std::vector<OccupationMeasure>& occupations,
                                              const std::vector<ClosedMeasure>& extreme_measures,
                                              const CostGraph& graph, double c);

// Nearest convex combination of the extreme measures in least squares; returns
// the total variation distance (1/2 L1) of the residual.
double nearest_hull_distance(const ClosedMeasure& mu, const std::vector<ClosedMeasure>& extreme,
                             const CostGraph& graph);

struct SelectionReport {
    double min_value = 0.0;
    bool pass = false;
};

// min over extreme measures of  sum_e Lu0(e) u_star(src e) mu(e);  the limit
// candidate passes when the minimum is >= -tol.
SelectionReport check_selection_inequality(const ValueFunction& u_star,
                                           const std::vector<ClosedMeasure>& measures,
                                           const CostGraph& graph,
                                           const std::vector<double>& lu0_edges,
                                           double tol = 1e-8);

// [sum_e Lu0 w(src) mu] / [sum_e Lu0 mu] for a node function w.
double weighted_ratio(const std::vector<double>& w_nodes, const ClosedMeasure& mu,
                      const CostGraph& graph, const std::vector<double>& lu0_edges);

} // namespace wkam
