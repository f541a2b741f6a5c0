#include "wkam/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/errors.hpp"

namespace wkam {

std::string family_name(Family f) {
    switch (f) {
        case Family::SeparatedLinear: return "separated_linear";
        case Family::SeparatedNonlinear: return "separated_nonlinear";
        case Family::StateWeighted: return "state_weighted";
    }
    return "unknown";
}

double GSpec::operator()(double u) const {
    // Horner on g(u)/u, then multiply back; keeps g(0) = 0 exact.
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * u + coeffs[k];
    return acc * u;
}

double GSpec::derivative(double u) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;)
        acc = acc * u + coeffs[k] * static_cast<double>(k + 1);
    return acc;
}

double HamiltonianModel::u_term(double x, double u) const {
    switch (family) {
        case Family::SeparatedLinear: return u;
        case Family::SeparatedNonlinear: return g(u);
        case Family::StateWeighted: return weight(x) * std::expm1(u);
    }
    return 0.0;
}

double HamiltonianModel::u_term_derivative(double x, double u) const {
    switch (family) {
        case Family::SeparatedLinear: return 1.0;
        case Family::SeparatedNonlinear: return g.derivative(u);
        case Family::StateWeighted: return weight(x) * std::exp(u);
    }
    return 0.0;
}

double HamiltonianModel::lagrangian(double x, double v, double u) const {
    if (u <= -r0)
        throw DomainError("lagrangian: u <= -r0, conjugate may be +infinity");
    // sup_p (p v - p^2/2) = v^2/2 at p = v; the u-term passes through with a sign flip.
    return 0.5 * v * v - potential(x) - u_term(x, u);
}

LagrangianEval legendre_transform(const HamiltonianModel& model, double x, double v, double u) {
    if (u <= -model.r0)
        throw DomainError("legendre_transform: u <= -r0");
    return LagrangianEval{model.lagrangian(x, v, u), v, model.weight_lu0(x)};
}

LagrangianEval legendre_transform_numeric(const HamiltonianModel& model, double x, double v,
                                          double u, const MomentumGrid& grid) {
    if (u <= -model.r0)
        throw DomainError("legendre_transform_numeric: u <= -r0");
    if (grid.points < 3)
        throw std::invalid_argument("legendre_transform_numeric: need at least 3 grid points");

    const double step = 2.0 * grid.radius / (grid.points - 1);
    double best = -std::numeric_limits<double>::infinity();
    int best_idx = -1;
    for (int i = 0; i < grid.points; ++i) {
        const double p = -grid.radius + step * i;
        const double candidate = p * v - model.hamiltonian(x, p, u);
        if (candidate > best) { // strict: ties keep the smallest p
            best = candidate;
            best_idx = i;
        }
    }
    if (best_idx == 0 || best_idx == grid.points - 1) {
        std::ostringstream msg;
        msg << "legendre_transform_numeric: argmax on grid boundary (radius " << grid.radius
            << "), sup not bracketed";
        throw ResolutionError(msg.str());
    }
    return LagrangianEval{best, -grid.radius + step * best_idx, model.weight_lu0(x)};
}

double compute_lu0(const HamiltonianModel& model, double x, double v) {
    (void)v; // H_u is momentum-independent for the built-in families
    return model.weight_lu0(x);
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return out;
}

} // namespace

AssumptionReport verify_assumptions(const HamiltonianModel& model, const SampleBudget& budget) {
    if (budget.per_axis < 10)
        throw std::invalid_argument("verify_assumptions: budget must be >= 10 samples per axis");

    AssumptionReport report;
    const int n = budget.per_axis;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    const double u_lo = -std::min(model.r0 * 0.9, 2.0);
    const std::vector<double> us = linspace(u_lo, 2.0, n);
    const std::vector<double> ps = linspace(-6.0, 6.0, n);

    // (H1) midpoint convexity in p on sampled (x,u).
    {
        bool ok = true;
        std::ostringstream detail;
        for (double x : xs) {
            for (double u : us) {
                for (int i = 0; i < n && ok; ++i) {
                    for (int j = i + 1; j < n && ok; ++j) {
                        const double p1 = ps[static_cast<std::size_t>(i)];
                        const double p2 = ps[static_cast<std::size_t>(j)];
                        const double mid = model.hamiltonian(x, 0.5 * (p1 + p2), u);
                        const double avg = 0.5 * (model.hamiltonian(x, p1, u) +
                                                  model.hamiltonian(x, p2, u));
                        if (mid > avg + 1e-10 * (1.0 + std::fabs(avg))) {
                            ok = false;
                            detail << "midpoint convexity violated at x=" << x << " u=" << u;
                        }
                    }
                }
            }
        }
        report.convexity = {"H1 convexity", ok, ok ? "midpoint convexity holds on samples"
                                                   : detail.str()};
    }

    // (H3) strict monotonicity in u on sampled (x,p) pairs.
    {
        bool ok = true;
        std::ostringstream detail;
        for (double x : xs) {
            for (double p : ps) {
                for (int i = 0; i + 1 < n && ok; ++i) {
                    const double h1 = model.hamiltonian(x, p, us[static_cast<std::size_t>(i)]);
                    const double h2 = model.hamiltonian(x, p, us[static_cast<std::size_t>(i + 1)]);
                    if (!(h2 > h1)) {
                        ok = false;
                        detail << "H not strictly increasing in u at x=" << x << " p=" << p
                               << " u=" << us[static_cast<std::size_t>(i)];
                    }
                }
            }
        }
        report.monotonicity = {"H3 monotonicity", ok,
                               ok ? "strictly increasing in u on samples" : detail.str()};
    }

    // (H2) probe. First locate a radius r with H(x,p,0) > max_x H(x,0,0) + 2 on |p| = r,
    // then check the linear lower bound H(x,p,-r0) >= |p|/r + H(x,0,-r0) for |p| > r,
    // which is what convexity plus coercivity at u=0 guarantee.
    {
        double h00_max = -std::numeric_limits<double>::infinity();
        for (double x : xs) h00_max = std::max(h00_max, model.hamiltonian(x, 0.0, 0.0));

        double r = -1.0;
        for (double cand = 0.25; cand <= 64.0; cand += 0.25) {
            bool big_enough = true;
            for (double x : xs) {
                if (model.hamiltonian(x, cand, 0.0) <= h00_max + 2.0 ||
                    model.hamiltonian(x, -cand, 0.0) <= h00_max + 2.0) {
                    big_enough = false;
                    break;
                }
            }
            if (big_enough) {
                r = cand;
                break;
            }
        }

        bool ok = r > 0.0;
        std::ostringstream detail;
        if (!ok) {
            detail << "no radius r <= 64 with H(x,p,0) > max_x H(x,0,0) + 2 on |p| = r";
        } else {
            const std::vector<double> radii = linspace(r * 1.05, r + 8.0, n);
            for (double x : xs) {
                const double base = model.hamiltonian(x, 0.0, -model.r0);
                for (double rad : radii) {
                    for (double p : {rad, -rad}) {
                        const double lhs = model.hamiltonian(x, p, -model.r0);
                        if (lhs < std::fabs(p) / r + base - 1e-9) {
                            ok = false;
                            detail << "lower bound fails at x=" << x << " p=" << p;
                        }
                    }
                }
            }
            if (ok) detail << "linear growth verified beyond r=" << r;
        }
        report.coercivity = {"H2 coercivity", ok, detail.str()};
    }

    // (H4) difference quotients through u in {1e-2, 1e-3, 1e-4}, both signs, against
    // the analytic H_u(x,p,0); the limit must be positive above a floor.
    {
        bool ok = true;
        std::ostringstream detail;
        const double quotient_floor = 1e-6;
        for (double x : xs) {
            for (double p : ps) {
                const double hu0 = model.u_term_derivative(x, 0.0);
                if (hu0 <= quotient_floor) {
                    ok = false;
                    detail << "H_u(x,p,0)=" << hu0 << " <= floor " << quotient_floor
                           << " at x=" << x;
                    break;
                }
                const double h0 = model.hamiltonian(x, p, 0.0);
                // Cancellation in (H(u)-H(0))/u grows like eps*|H|/u as u
                // shrinks; below this floor the quotients carry no signal.
                const double noise = 1e-8 * (1.0 + std::fabs(h0));
                double prev_err = std::numeric_limits<double>::infinity();
                for (double step : {1e-2, 1e-3, 1e-4}) {
                    double err = 0.0;
                    for (double u : {step, -step}) {
                        const double q = (model.hamiltonian(x, p, u) - h0) / u;
                        err = std::max(err, std::fabs(q - hu0));
                    }
                    if (err > prev_err + 1e-12 && err > noise) {
                        ok = false;
                        detail << "difference quotients diverge at x=" << x << " p=" << p;
                    }
                    prev_err = err;
                }
                if (prev_err > 1e-3 * (1.0 + std::fabs(hu0))) {
                    ok = false;
                    detail << "quotient at u=1e-4 off by " << prev_err << " at x=" << x;
                }
                if (!ok) break;
            }
            if (!ok) break;
        }
        report.u_derivative = {"H4 u-derivative", ok,
                               ok ? "difference quotients settle at H_u(x,p,0) > 0"
                                  : detail.str()};
    }

    return report;
}

} // namespace wkam
