#include "wkam/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/errors.hpp"

namespace wkam {

LaxOleinik::LaxOleinik(const HamiltonianModel& model, const DiscreteScheme& scheme, double level,
                       double lambda)
    : model_(model), scheme_(scheme), level_(level), lambda_(lambda) {
    scheme.validate();
    if (lambda < 0.0) throw std::invalid_argument("LaxOleinik: lambda must be >= 0");

    lu0_max_ = 0.0;
    lu0_min_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scheme.n; ++i) {
        const double b = std::fabs(model.weight_lu0(scheme.position(i)));
        lu0_max_ = std::max(lu0_max_, b);
        lu0_min_ = std::min(lu0_min_, b);
    }
    if (scheme.tau * lambda * lu0_max_ >= 1.0) {
        std::ostringstream msg;
        msg << "LaxOleinik: tau*lambda*B = " << scheme.tau * lambda * lu0_max_
            << " >= 1 breaks the contraction";
        throw ContractionViolation(msg.str());
    }

    const int moves = scheme.moves();
    critical_cost_.resize(static_cast<std::size_t>(scheme.n) * moves);
    for (int i = 0; i < scheme.n; ++i) {
        const double x = scheme.position(i);
        for (int k = -scheme.window; k <= scheme.window; ++k)
            critical_cost_[static_cast<std::size_t>(i * moves + k + scheme.window)] =
                scheme.tau * model.critical_lagrangian(x, scheme.velocity(k));
    }
}

void LaxOleinik::apply(const std::vector<double>& in, std::vector<double>& out) const {
    const int n = scheme_.n;
    const int w = scheme_.window;
    const int moves = scheme_.moves();
    out.resize(static_cast<std::size_t>(n));

    // m(y) = u(y) + tau*(c - u_term(y, lambda u(y))); the u-term of L enters
    // with a sign flip through the conjugate and depends only on the departure
    // node, so one pass suffices.
    static thread_local std::vector<double> departure;
    departure.resize(static_cast<std::size_t>(n));
    const double tau = scheme_.tau;
    for (int i = 0; i < n; ++i) {
        const double u = in[static_cast<std::size_t>(i)];
        departure[static_cast<std::size_t>(i)] =
            u + tau * (level_ - model_.u_term(scheme_.position(i), lambda_ * u));
    }

    for (int j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = -w; k <= w; ++k) {
            const int i = scheme_.wrap(j - k);
            const double cand = departure[static_cast<std::size_t>(i)] +
                                critical_cost_[static_cast<std::size_t>(i * moves + k + w)];
            best = std::min(best, cand);
        }
        out[static_cast<std::size_t>(j)] = best;
    }
}

ValueFunction LaxOleinik::apply(const ValueFunction& u) const {
    ValueFunction out(scheme_);
    apply(u.values, out.values);
    return out;
}

ValueFunction solve_discounted(const HamiltonianModel& model, const DiscreteScheme& scheme,
                               double lambda, double level, const SolveOptions& options) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("solve_discounted: lambda must be positive");
    if (lambda >= options.alpha0) {
        std::ostringstream msg;
        msg << "solve_discounted: lambda=" << lambda << " >= alpha0=" << options.alpha0;
        throw DiscountTooLarge(msg.str());
    }

    LaxOleinik op(model, scheme, level, lambda);
    const double rate = scheme.tau * lambda * op.lu0_min();
    const double target = options.tol * rate;

    long max_iter = options.max_iter;
    if (max_iter <= 0) {
        // Geometric convergence at factor <= 1 - rate from a bounded start.
        const double burn = std::log(1e3 / target) / rate;
        max_iter = static_cast<long>(2.0 * burn) + 1000;
    }

    ValueFunction u(scheme);
    std::vector<double> next(static_cast<std::size_t>(scheme.n));
    double residual = std::numeric_limits<double>::infinity();
    for (long it = 0; it < max_iter; ++it) {
        op.apply(u.values, next);
        residual = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i)
            residual = std::max(residual, std::fabs(next[i] - u.values[i]));
        u.values.swap(next);
        if (residual < target) return u;
    }
    std::ostringstream msg;
    msg << "solve_discounted: residual " << residual << " above target " << target << " after "
        << max_iter << " iterations";
    throw MaxIterExceeded(msg.str(), residual);
}

TrajectoryWalker::TrajectoryWalker(const HamiltonianModel& model, const DiscreteScheme& scheme,
                                   const ValueFunction& u, double lambda, double level, double tol)
    : op_(model, scheme, level, lambda), u_(u), tol_(tol) {
    const double tau = scheme.tau;
    departure_.resize(static_cast<std::size_t>(scheme.n));
    for (int i = 0; i < scheme.n; ++i) {
        const double ui = u.values[static_cast<std::size_t>(i)];
        departure_[static_cast<std::size_t>(i)] =
            ui + tau * (level - model.u_term(scheme.position(i), lambda * ui));
    }
}

int TrajectoryWalker::step(int node) const {
    const DiscreteScheme& scheme = op_.scheme_;
    const int w = scheme.window;
    const int moves = scheme.moves();
    double best = std::numeric_limits<double>::infinity();
    int best_node = -1;
    for (int k = -w; k <= w; ++k) {
        const int y = scheme.wrap(node - k);
        const double cand = departure_[static_cast<std::size_t>(y)] +
                            op_.critical_cost_[static_cast<std::size_t>(y * moves + k + w)];
        if (cand < best || (cand == best && y < best_node)) {
            best = cand;
            best_node = y;
        }
    }
    const double residual = std::fabs(u_.values[static_cast<std::size_t>(node)] - best);
    if (residual > 10.0 * tol_) {
        std::ostringstream msg;
        msg << "trajectory step: calibration residual " << residual << " at node " << node
            << " exceeds " << 10.0 * tol_ << " (not a fixed point?)";
        throw NotAFixedPoint(msg.str());
    }
    return best_node;
}

std::vector<int> extract_trajectory(const HamiltonianModel& model, const DiscreteScheme& scheme,
                                    const ValueFunction& u, double lambda, int start, int steps,
                                    double level, double tol) {
    TrajectoryWalker walker(model, scheme, u, lambda, level, tol);
    std::vector<int> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    path.push_back(start);
    int node = start;
    for (int step = 0; step < steps; ++step) {
        node = walker.step(node);
        path.push_back(node);
    }
    return path;
}

} // namespace wkam
