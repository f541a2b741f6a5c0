#include "wkam/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/errors.hpp"

namespace wkam {

OccupationMeasure occupation_measure(const HamiltonianModel& model, const CostGraph& graph,
                                     const ValueFunction& u_lambda, double lambda, int start,
                                     double level, double eps_tail, double tol) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("occupation_measure: lambda must be positive");
    const DiscreteScheme& scheme = graph.scheme;
    const double tau = scheme.tau;

    std::vector<double> lu0(static_cast<std::size_t>(scheme.n));
    for (int i = 0; i < scheme.n; ++i) lu0[static_cast<std::size_t>(i)] = model.weight_lu0(scheme.position(i));

    // Guard horizon: 1000/lambda time units; a healthy weight with
    // Lu0 <= -B1 < 0 decays below any eps_tail well inside it.
    const long max_steps = static_cast<long>(std::ceil(1000.0 / (lambda * tau))) + 1;

    std::vector<double> dense(graph.edges.size(), 0.0);
    KahanSum total, lu0_total;

    // One backward step at a time; the chain is deterministic, so it is
    // walked incrementally instead of storing the whole path.
    TrajectoryWalker walker(model, scheme, u_lambda, lambda, level, tol);
    int node = start;
    double w = 1.0;
    long k = 0;
    double last_ratio = 1.0;
    bool decayed = false;
    while (k < max_steps) {
        if (w < eps_tail) {
            decayed = true;
            break;
        }
        const int next = walker.step(node);
        int diff = scheme.wrap(node - next);
        if (diff > scheme.n / 2) diff -= scheme.n;
        const int edge_id = graph.edge_index(next, diff); // departure = next, arrival = node

        dense[static_cast<std::size_t>(edge_id)] += tau * w;
        total.add(tau * w);
        const double edge_lu0 = lu0[static_cast<std::size_t>(next)];
        lu0_total.add(tau * w * edge_lu0);

        last_ratio = 1.0 + lambda * tau * edge_lu0;
        w *= last_ratio;
        node = next;
        ++k;
    }
    if (!decayed) {
        std::ostringstream msg;
        msg << "occupation_measure: weight still " << w << " after time horizon "
            << 1000.0 / lambda << " (L_u(.,.,0) not negatively bounded?)";
        throw TailNotDecaying(msg.str());
    }

    OccupationMeasure occ;
    occ.source_node = start;
    occ.lambda = lambda;
    occ.raw_total = total.value();
    occ.raw_lu0_total = lu0_total.value();

    // Geometric bound on the discarded tail, then renormalize what was kept.
    const double tail = (last_ratio < 1.0) ? tau * w / (1.0 - last_ratio) : 0.0;
    occ.tail_mass_dropped = tail / (occ.raw_total + tail);

    const double inv = 1.0 / occ.raw_total;
    for (std::size_t e = 0; e < dense.size(); ++e) {
        if (dense[e] > 0.0) {
            occ.measure.edge_ids.push_back(static_cast<int>(e));
            occ.measure.weights.push_back(dense[e] * inv);
        }
    }
    return occ;
}

double nearest_hull_distance(const ClosedMeasure& mu, const std::vector<ClosedMeasure>& extreme,
                             const CostGraph& graph) {
    if (extreme.empty())
        throw std::invalid_argument("nearest_hull_distance: no extreme measures");
    const std::size_t k = extreme.size();

    // Dense copies over the union support keep the least squares small.
    std::vector<int> support;
    {
        std::vector<char> seen(graph.edges.size(), 0);
        auto mark = [&](const ClosedMeasure& m) {
            for (int id : m.edge_ids)
                if (!seen[static_cast<std::size_t>(id)]) {
                    seen[static_cast<std::size_t>(id)] = 1;
                    support.push_back(id);
                }
        };
        mark(mu);
        for (const auto& m : extreme) mark(m);
        std::sort(support.begin(), support.end());
    }
    const std::size_t s = support.size();
    auto densify = [&](const ClosedMeasure& m) {
        std::vector<double> out(s, 0.0);
        for (std::size_t i = 0; i < m.edge_ids.size(); ++i) {
            const auto it = std::lower_bound(support.begin(), support.end(), m.edge_ids[i]);
            out[static_cast<std::size_t>(it - support.begin())] += m.weights[i];
        }
        return out;
    };
    const std::vector<double> target = densify(mu);
    std::vector<std::vector<double>> columns;
    columns.reserve(k);
    for (const auto& m : extreme) columns.push_back(densify(m));

    // Projected gradient on the simplex for min ||target - M theta||^2.
    std::vector<double> theta(k, 1.0 / static_cast<double>(k));
    double lipschitz = 0.0;
    for (const auto& col : columns) {
        double norm2 = 0.0;
        for (double v : col) norm2 += v * v;
        lipschitz += norm2;
    }
    lipschitz = std::max(lipschitz, 1e-12);
    const double step = 1.0 / lipschitz;

    std::vector<double> residual(s), grad(k), trial(k);
    for (int iter = 0; iter < 2000; ++iter) {
        for (std::size_t i = 0; i < s; ++i) {
            double fit = 0.0;
            for (std::size_t j = 0; j < k; ++j) fit += theta[j] * columns[j][i];
            residual[i] = fit - target[i];
        }
        for (std::size_t j = 0; j < k; ++j) {
            double g = 0.0;
            for (std::size_t i = 0; i < s; ++i) g += residual[i] * columns[j][i];
            grad[j] = g;
        }
        for (std::size_t j = 0; j < k; ++j) trial[j] = theta[j] - step * grad[j];

        // Euclidean projection onto the probability simplex: threshold at the
        // largest j with sorted_j > (cumsum_j - 1)/j.
        std::vector<double> sorted(trial);
        std::sort(sorted.begin(), sorted.end(), std::greater<double>());
        double running = 0.0, threshold = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            running += sorted[j];
            const double candidate = (running - 1.0) / static_cast<double>(j + 1);
            if (sorted[j] - candidate > 0.0) threshold = candidate;
        }
        double change = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double nv = std::max(trial[j] - threshold, 0.0);
            change = std::max(change, std::fabs(nv - theta[j]));
            theta[j] = nv;
        }
        if (change < 1e-14) break;
    }

    double l1 = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < k; ++j) fit += theta[j] * columns[j][i];
        l1 += std::fabs(target[i] - fit);
    }
    return 0.5 * l1;
}

DiagnosticsTable weak_convergence_diagnostics(const std::vector<OccupationMeasure>& occupations,
                                              const std::vector<ClosedMeasure>& extreme_measures,
                                              const CostGraph& graph, double c) {
    DiagnosticsTable table;
    for (const OccupationMeasure& occ : occupations) {
        DiagnosticsRow row;
        row.lambda = occ.lambda;
        row.closedness_residual = occ.measure.closedness_residual(graph);
        row.action_gap = std::fabs(critical_action(occ.measure, graph) + c);
        row.tv_to_hull = nearest_hull_distance(occ.measure, extreme_measures, graph);
        table.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const auto& a = table.rows[i];
        const auto& b = table.rows[i + 1];
        const double slack = 1.20;
        const double floor = 1e-12;
        if (b.closedness_residual > a.closedness_residual * slack + floor ||
            b.action_gap > a.action_gap * slack + floor ||
            b.tv_to_hull > a.tv_to_hull * slack + floor)
            table.monotone_ok = false;
    }
    return table;
}

SelectionReport check_selection_inequality(const ValueFunction& u_star,
                                           const std::vector<ClosedMeasure>& measures,
                                           const CostGraph& graph,
                                           const std::vector<double>& lu0_edges, double tol) {
    SelectionReport report;
    report.min_value = std::numeric_limits<double>::infinity();
    for (const ClosedMeasure& mu : measures) {
        KahanSum sum;
        for (std::size_t i = 0; i < mu.edge_ids.size(); ++i) {
            const Edge& e = graph.edges[static_cast<std::size_t>(mu.edge_ids[i])];
            sum.add(lu0_edges[static_cast<std::size_t>(mu.edge_ids[i])] * mu.weights[i] *
                    u_star[e.from]);
        }
        report.min_value = std::min(report.min_value, sum.value());
    }
    report.pass = report.min_value >= -tol;
    return report;
}

double weighted_ratio(const std::vector<double>& w_nodes, const ClosedMeasure& mu,
                      const CostGraph& graph, const std::vector<double>& lu0_edges) {
    KahanSum numer, denom;
    for (std::size_t i = 0; i < mu.edge_ids.size(); ++i) {
        const Edge& e = graph.edges[static_cast<std::size_t>(mu.edge_ids[i])];
        const double lw = lu0_edges[static_cast<std::size_t>(mu.edge_ids[i])] * mu.weights[i];
        numer.add(lw * w_nodes[static_cast<std::size_t>(e.from)]);
        denom.add(lw);
    }
    return numer.value() / denom.value();
}

} // namespace wkam
