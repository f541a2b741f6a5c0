#pragma once

#include <memory>
#include <vector>

#include "wkam/critical.hpp"
#include "wkam/measures.hpp"
#include "wkam/simplex.hpp"
#include "wkam/value_function.hpp"

namespace wkam {

// Weighted-barrier route: at each node take the worst extreme measure of the
// linear-fractional functional
//   x -> [sum_e Lu0(e) h(src e, x) mu(e)] / [sum_e Lu0(e) mu(e)].
// The denominator is strictly negative, so the infimum over the convex hull
// of Mather measures is attained at an extreme point; scanning the extreme
// list is exact.
ValueFunction limit_by_barrier(const Matrix& h, const std::vector<ClosedMeasure>& measures,
                               const CostGraph& graph, const std::vector<double>& lu0_edges);

// Constrained-subsolution route: per node x0 solve
//   max w(x0)  s.t.  w(x) - w(y) <= cost(y,x) + tau c on every edge,
//                    sum_e Lu0(e) w(src e) mu_k(e) >= 0 for each extreme measure.
// Free w is split as w = a - b*1 with a, b >= 0; the all-slack basis is
// feasible because reduced edge costs are nonnegative for the built-in
// families. One dictionary serves all nodes: only the objective changes.
class SubsolutionLp {
public:
    SubsolutionLp(const CostGraph& graph, double c, const std::vector<ClosedMeasure>& measures,
                  const std::vector<double>& lu0_edges);

    double solve_at(int node);          // optimal w(node)
    std::vector<double> witness() const; // w attaining the last optimum
    long pivots() const;

private:
    int n_;
    std::unique_ptr<InequalitySimplex> lp_;
};

double limit_by_subsolution_sup(int node, SubsolutionLp& lp);

// Aubry-minimum formula u0(x) = min_{y in A} h(y,x); valid when constants are
// critical subsolutions, i.e. G(x,0) <= c on the torus (checked on a finer
// sampling than the grid).
ValueFunction limit_special_case(const HamiltonianModel& model, const BarrierData& barrier,
                                 const DiscreteScheme& scheme, double tol = 1e-9);

struct ConvergenceRow {
    double lambda = 0.0;
    double sup_error = 0.0;
    double lipschitz = 0.0;
    double norm = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

// Error table of a solved discounted family against a limit candidate.
ConvergenceTable build_convergence_table(
    const std::vector<std::pair<double, ValueFunction>>& solutions, const ValueFunction& u0);

// Empty when the error column is nonincreasing (within the slack) and the
// final error meets eps_conv; otherwise lists the offending rows.
std::string convergence_violations(const ConvergenceTable& table, double eps_conv,
                                   double slack = 0.10);

// Same checks, throwing ConvergenceFailure on violation.
ConvergenceTable verify_convergence(const std::vector<std::pair<double, ValueFunction>>& solutions,
                                    const ValueFunction& u0, double eps_conv, double slack = 0.10);

} // namespace wkam
