#pragma once

#include <vector>

#include "wkam/cost_graph.hpp"
#include "wkam/model.hpp"
#include "wkam/util.hpp"

namespace wkam {

// tol_A = 1e-8 * N * tau: rounding budget for one cycle traversal.
double aubry_tolerance(const DiscreteScheme& scheme);

// Critical value via Karp's minimum mean cycle: c = -(min mean cycle)/tau.
double critical_value(const CostGraph& graph);

// Node potentials of the reduced costs cost + tau*c from a virtual source.
// Throws NegativeCycle when c is below critical.
std::vector<double> bellman_ford_potentials(const CostGraph& graph, double c);

// Edges left tight by the potentials: reduced cost + pi(from) - pi(to) <= tol.
std::vector<char> tight_edge_mask(const CostGraph& graph, double c,
                                  const std::vector<double>& potentials, double tol);

// Mane potential Phi(y,x): cheapest reduced-cost path y -> x with >= 1 edge.
Matrix mane_potential(const CostGraph& graph, double c);

std::vector<int> aubry_set(const CostGraph& graph, double c);
std::vector<int> aubry_set(const CostGraph& graph, double c, double tol);

// Peierls barrier through the Aubry set: h(y,x) = min_{z in A} Phi(y,z) + Phi(z,x).
Matrix peierls_barrier(const Matrix& phi, const std::vector<int>& aubry);

struct BarrierData {
    double c = 0.0;
    Matrix phi;
    Matrix h;
    std::vector<int> aubry;

    bool computed() const { return !h.empty(); }
};

BarrierData compute_barrier_data(const CostGraph& graph);

// Uniform family bounds from the critical data; throws NotYetComputed when the
// barrier has not been assembled yet.
AprioriConstants apriori_constants(const HamiltonianModel& model, const DiscreteScheme& scheme,
                                   const BarrierData& barrier);

} // namespace wkam
