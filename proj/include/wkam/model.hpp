#pragma once

#include <string>
#include <vector>

#include "wkam/fourier.hpp"
#include "wkam/scheme.hpp"

namespace wkam {

// Closed-form contact Hamiltonian families on the 1-D torus. All three share
// the kinetic part p^2/2 + V(x) and differ in how the unknown u enters:
//   SeparatedLinear:     H = u + p^2/2 + V(x)
//   SeparatedNonlinear:  H = g(u) + p^2/2 + V(x)
//   StateWeighted:       H = a(x)(e^u - 1) + p^2/2 + V(x)
enum class Family { SeparatedLinear, SeparatedNonlinear, StateWeighted };

std::string family_name(Family f);

// g(u) = sum_k coeffs[k] * u^(k+1); no constant term, so g(0) = 0 always.
struct GSpec {
    std::vector<double> coeffs{1.0};

    double operator()(double u) const;
    double derivative(double u) const;
    double derivative_at_zero() const { return coeffs.empty() ? 0.0 : coeffs[0]; }
};

struct HamiltonianModel {
    Family family = Family::SeparatedLinear;
    FourierSeries potential;       // V, period 1
    FourierSeries weight;          // a(x), StateWeighted only
    GSpec g;                       // SeparatedNonlinear only
    double r0 = 10.0;              // coercivity shift constant

    double potential_at(double x) const { return potential(x); }

    // The u-dependent term of H; H(x,p,u) = p^2/2 + V(x) + u_term(x,u).
    double u_term(double x, double u) const;
    double u_term_derivative(double x, double u) const;

    double hamiltonian(double x, double p, double u) const {
        return 0.5 * p * p + potential(x) + u_term(x, u);
    }

    // Closed-form Fenchel conjugate; requires u > -r0.
    double lagrangian(double x, double v, double u) const;

    // L_G(x,v) = L(x,v,0) = v^2/2 - V(x).
    double critical_lagrangian(double x, double v) const {
        return 0.5 * v * v - potential(x);
    }

    // L_u(x,v,0) = -H_u(x,p,0); independent of p for these families.
    double weight_lu0(double x) const { return -u_term_derivative(x, 0.0); }
};

struct LagrangianEval {
    double value = 0.0;    // L(x,v,u)
    double argmax_p = 0.0; // Fenchel argmax momentum
    double lu0 = 0.0;      // L_u(x,v,0)
};

LagrangianEval legendre_transform(const HamiltonianModel& model, double x, double v, double u);

// Grid for the generic numeric conjugate: symmetric in [-radius, radius].
struct MomentumGrid {
    double radius = 8.0;
    int points = 2049;
};

// Maximizes p*v - H(x,p,u) over the grid; ties resolve to the smallest p.
// Throws ResolutionError when the argmax lands on the grid boundary.
LagrangianEval legendre_transform_numeric(const HamiltonianModel& model, double x, double v,
                                          double u, const MomentumGrid& grid = {});

double compute_lu0(const HamiltonianModel& model, double x, double v);

struct SampleBudget {
    int per_axis = 16;
};

struct AssumptionCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AssumptionReport {
    AssumptionCheck convexity;    // p -> H convex (midpoint probe)
    AssumptionCheck coercivity;   // H(x,p,-r0) >= |p|/r + H(x,0,-r0) beyond a radius r
    AssumptionCheck monotonicity; // u -> H strictly increasing
    AssumptionCheck u_derivative; // difference quotients settle at H_u(x,p,0) > 0

    bool all_passed() const {
        return convexity.passed && coercivity.passed && monotonicity.passed &&
               u_derivative.passed;
    }
    std::vector<const AssumptionCheck*> checks() const {
        return {&convexity, &coercivity, &monotonicity, &u_derivative};
    }
};

AssumptionReport verify_assumptions(const HamiltonianModel& model, const SampleBudget& budget = {});

// Uniform bounds for the whole discounted family, derived from the critical
// data: sup-norm bound C0, Lipschitz bound M0, admissible discount threshold
// alpha0 = r0/C0, minimizer speed bound sigma0, subsolution slope bound rho_c.
struct AprioriConstants {
    double c0 = 0.0;
    double m0 = 0.0;
    double alpha0 = 0.0;
    double sigma0 = 0.0;
    double rho_c = 0.0;
};

} // namespace wkam
