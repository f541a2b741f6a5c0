#include "wkam/limit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/errors.hpp"

namespace wkam {

ValueFunction limit_by_barrier(const Matrix& h, const std::vector<ClosedMeasure>& measures,
                               const CostGraph& graph, const std::vector<double>& lu0_edges) {
    if (measures.empty())
        throw std::invalid_argument("limit_by_barrier: need at least one Mather measure");

    const int n = graph.node_count();
    ValueFunction u0(graph.scheme, std::numeric_limits<double>::infinity());

    for (const ClosedMeasure& mu : measures) {
        KahanSum denom_acc;
        for (std::size_t i = 0; i < mu.edge_ids.size(); ++i)
            denom_acc.add(lu0_edges[static_cast<std::size_t>(mu.edge_ids[i])] * mu.weights[i]);
        const double denom = denom_acc.value();
        if (denom >= -1e-12) {
            std::ostringstream msg;
            msg << "limit_by_barrier: measure weight integral " << denom
                << " not strictly negative";
            throw DegenerateWeight(msg.str());
        }
        for (int x = 0; x < n; ++x) {
            KahanSum numer;
            for (std::size_t i = 0; i < mu.edge_ids.size(); ++i) {
                const Edge& e = graph.edges[static_cast<std::size_t>(mu.edge_ids[i])];
                numer.add(lu0_edges[static_cast<std::size_t>(mu.edge_ids[i])] * mu.weights[i] *
                          h(static_cast<std::size_t>(e.from), static_cast<std::size_t>(x)));
            }
            u0[x] = std::min(u0[x], numer.value() / denom);
        }
    }
    return u0;
}

SubsolutionLp::SubsolutionLp(const CostGraph& graph, double c,
                             const std::vector<ClosedMeasure>& measures,
                             const std::vector<double>& lu0_edges)
    : n_(graph.node_count()) {
    const std::size_t n = static_cast<std::size_t>(n_);
    const std::size_t m = graph.edges.size();
    const std::size_t k = measures.size();
    const double shift = graph.scheme.tau * c;

    // Variables: a_0..a_{n-1}, then the shift b. Rows: one per edge, then one
    // per extreme measure.
    Matrix a(m + k, n + 1, 0.0);
    std::vector<double> rhs(m + k, 0.0);
    for (std::size_t e = 0; e < m; ++e) {
        const Edge& edge = graph.edges[e];
        if (edge.from != edge.to) {
            a(e, static_cast<std::size_t>(edge.to)) += 1.0;
            a(e, static_cast<std::size_t>(edge.from)) -= 1.0;
        }
        const double reduced = edge.cost + shift;
        if (reduced < 0.0)
            throw std::invalid_argument("SubsolutionLp: negative reduced edge cost; "
                                        "slack start would be infeasible");
        rhs[e] = reduced;
    }
    for (std::size_t j = 0; j < k; ++j) {
        // sum_e Lu0 w(src) mu >= 0  becomes  sum_i alpha_i a_i - (sum_i alpha_i) b <= 0
        // with alpha_i = -sum_{src e = i} Lu0(e) mu(e) >= 0.
        double alpha_total = 0.0;
        for (std::size_t i = 0; i < measures[j].edge_ids.size(); ++i) {
            const Edge& e = graph.edges[static_cast<std::size_t>(measures[j].edge_ids[i])];
            const double alpha = -lu0_edges[static_cast<std::size_t>(measures[j].edge_ids[i])] *
                                 measures[j].weights[i];
            a(m + j, static_cast<std::size_t>(e.from)) += alpha;
            alpha_total += alpha;
        }
        a(m + j, n) = -alpha_total;
        rhs[m + j] = 0.0;
    }
    lp_ = std::make_unique<InequalitySimplex>(a, rhs);
}

double SubsolutionLp::solve_at(int node) {
    std::vector<double> c(static_cast<std::size_t>(n_) + 1, 0.0);
    c[static_cast<std::size_t>(node)] = 1.0;
    c[static_cast<std::size_t>(n_)] = -1.0;
    lp_->set_objective(c);
    return lp_->maximize();
}

std::vector<double> SubsolutionLp::witness() const {
    const std::vector<double> x = lp_->solution();
    std::vector<double> w(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        w[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] -
                                         x[static_cast<std::size_t>(n_)];
    return w;
}

long SubsolutionLp::pivots() const { return lp_->pivots(); }

double limit_by_subsolution_sup(int node, SubsolutionLp& lp) { return lp.solve_at(node); }

ValueFunction limit_special_case(const HamiltonianModel& model, const BarrierData& barrier,
                                 const DiscreteScheme& scheme, double tol) {
    if (!barrier.computed())
        throw NotYetComputed("limit_special_case: barrier not computed");

    // Constants are critical subsolutions iff G(x,0) = V(x) <= c everywhere;
    // sample finer than the grid so off-node maxima are not missed.
    const int fine = 10 * scheme.n;
    for (int i = 0; i < fine; ++i) {
        const double x = static_cast<double>(i) / fine;
        const double g0 = model.hamiltonian(x, 0.0, 0.0);
        if (g0 > barrier.c + tol) {
            std::ostringstream msg;
            msg << "limit_special_case: G(x,0) = " << g0 << " > c = " << barrier.c << " at x=" << x
                << "; the Aubry-minimum formula does not apply";
            throw PreconditionFailed(msg.str());
        }
    }
    if (barrier.aubry.empty())
        throw EmptyAubry("limit_special_case: empty Aubry set");

    ValueFunction u0(scheme, std::numeric_limits<double>::infinity());
    for (int x = 0; x < scheme.n; ++x)
        for (int y : barrier.aubry)
            u0[x] = std::min(u0[x], barrier.h(static_cast<std::size_t>(y),
                                              static_cast<std::size_t>(x)));
    return u0;
}

ConvergenceTable build_convergence_table(
    const std::vector<std::pair<double, ValueFunction>>& solutions, const ValueFunction& u0) {
    ConvergenceTable table;
    for (const auto& [lambda, u] : solutions) {
        ConvergenceRow row;
        row.lambda = lambda;
        row.sup_error = u.sup_distance(u0);
        row.lipschitz = u.discrete_lipschitz();
        row.norm = u.sup_norm();
        table.rows.push_back(row);
    }
    return table;
}

std::string convergence_violations(const ConvergenceTable& table, double eps_conv, double slack) {
    std::ostringstream violations;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        if (table.rows[i + 1].lambda >= table.rows[i].lambda)
            throw std::invalid_argument("convergence table: lambdas must be strictly decreasing");
        if (table.rows[i + 1].sup_error > table.rows[i].sup_error * (1.0 + slack) + 1e-12)
            violations << "error rose from " << table.rows[i].sup_error << " (lambda "
                       << table.rows[i].lambda << ") to " << table.rows[i + 1].sup_error
                       << " (lambda " << table.rows[i + 1].lambda << "); ";
    }
    if (!table.rows.empty() && table.rows.back().sup_error > eps_conv)
        violations << "final error " << table.rows.back().sup_error << " exceeds " << eps_conv;
    return violations.str();
}

ConvergenceTable verify_convergence(const std::vector<std::pair<double, ValueFunction>>& solutions,
                                    const ValueFunction& u0, double eps_conv, double slack) {
    ConvergenceTable table = build_convergence_table(solutions, u0);
    const std::string text = convergence_violations(table, eps_conv, slack);
    if (!text.empty()) throw ConvergenceFailure("verify_convergence: " + text);
    return table;
}

} // namespace wkam
