#pragma once

#include <limits>
#include <vector>

#include "wkam/model.hpp"
#include "wkam/scheme.hpp"
#include "wkam/value_function.hpp"

namespace wkam {

// Discrete Lax-Oleinik operator with the discount evaluated at the departure
// point (explicit scheme):
//   T[u](x) = min_y [ u(y) + tau L(y, (x-y)/tau, lambda u(y)) + tau c ].
// Monotone and a sup-norm contraction with factor <= 1 - tau*lambda*B1 as long
// as tau*lambda*B < 1, B = max |L_u(.,.,0)| over the grid.
class LaxOleinik {
public:
    LaxOleinik(const HamiltonianModel& model, const DiscreteScheme& scheme, double level,
               double lambda);

    void apply(const std::vector<double>& in, std::vector<double>& out) const;
    ValueFunction apply(const ValueFunction& u) const;

    double lambda() const { return lambda_; }
    double level() const { return level_; }
    double lu0_max() const { return lu0_max_; }  // B
    double lu0_min() const { return lu0_min_; }  // B1
    const DiscreteScheme& scheme() const { return scheme_; }

private:
    friend class TrajectoryWalker;
    const HamiltonianModel& model_;
    DiscreteScheme scheme_;
    double level_;
    double lambda_;
    double lu0_max_ = 0.0, lu0_min_ = 0.0;
    std::vector<double> critical_cost_; // tau * L_G(x_i, v_k), node-major
};

// Deterministic backward minimizing step of a solved fixed point; the argmin
// is tie-broken toward the smallest node index and the calibration identity
// u(x) = u(y) + tau L(y,v,lambda u(y)) + tau c is checked per step.
class TrajectoryWalker {
public:
    TrajectoryWalker(const HamiltonianModel& model, const DiscreteScheme& scheme,
                     const ValueFunction& u, double lambda, double level, double tol = 1e-9);

    int step(int node) const; // throws NotAFixedPoint beyond 10*tol

private:
    LaxOleinik op_;
    const ValueFunction& u_;
    std::vector<double> departure_;
    double tol_;
};

struct SolveOptions {
    double tol = 1e-9;
    long max_iter = 0; // 0: derived from the contraction rate
    double alpha0 = std::numeric_limits<double>::infinity(); // guard when known
};

// Fixed point of the operator for lambda in (0, alpha0); geometric convergence,
// stops when the step residual drops below tol * tau * lambda * B1 so the
// fixed-point error is below tol.
ValueFunction solve_discounted(const HamiltonianModel& model, const DiscreteScheme& scheme,
                               double lambda, double level, const SolveOptions& options = {});

// Backward minimizing chain xi_0 = start, xi_{k+1} = argmin of the operator
// body at xi_k (ties to the smallest node index). Checks the per-step
// calibration identity against 10*tol.
std::vector<int> extract_trajectory(const HamiltonianModel& model, const DiscreteScheme& scheme,
                                    const ValueFunction& u, double lambda, int start, int steps,
                                    double level, double tol = 1e-9);

} // namespace wkam
