#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "wkam/bellman.hpp"
#include "wkam/critical.hpp"
#include "wkam/errors.hpp"
#include "wkam/limit.hpp"
#include "wkam/measures.hpp"
#include "wkam/occupation.hpp"

using namespace wkam;

namespace {

HamiltonianModel linear_model(FourierSeries v) {
    HamiltonianModel m;
    m.family = Family::SeparatedLinear;
    m.potential = std::move(v);
    return m;
}

struct OccupationSetup {
    HamiltonianModel model;
    DiscreteScheme scheme;
    CostGraph graph;
    BarrierData barrier;
    std::vector<ClosedMeasure> measures;
    std::vector<double> lu0;

    OccupationSetup(HamiltonianModel m, const DiscreteScheme& s)
        : model(std::move(m)), scheme(s), graph(build_cost_graph(model, scheme)),
          barrier(compute_barrier_data(graph)),
          measures(extreme_mather_measures(graph, barrier.c)),
          lu0(edge_lu0_weights(model, graph)) {}

    ValueFunction solve(double lambda, double tol = 1e-11) const {
        SolveOptions opts;
        opts.tol = tol;
        return solve_discounted(model, scheme, lambda, barrier.c, opts);
    }
};

} // namespace

TEST_CASE("occupation from an Aubry point is the rest measure") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    for (double lambda : {0.4, 0.1, 0.025}) {
        const ValueFunction u = setup.solve(lambda);
        const OccupationMeasure occ = occupation_measure(setup.model, setup.graph, u, lambda, 0,
                                                         setup.barrier.c);
        REQUIRE(occ.measure.edge_ids.size() == 1);
        CHECK(occ.measure.edge_ids[0] == setup.graph.edge_index(0, 0));
        CHECK(occ.measure.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(occ.measure.closedness_residual(setup.graph) <= 1e-10);
    }
}

TEST_CASE("linear family weights are the exact geometric sequence") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    const double lambda = 0.2;
    const double eps_tail = 1e-12;
    const ValueFunction u = setup.solve(lambda);
    const OccupationMeasure occ = occupation_measure(setup.model, setup.graph, u, lambda, 16,
                                                     setup.barrier.c, eps_tail);

    // independent reconstruction: walk the chain, accumulate tau (1 - tau lambda)^k
    std::map<int, double> expected;
    TrajectoryWalker walker(setup.model, setup.scheme, u, lambda, setup.barrier.c, 1e-9);
    int node = 16;
    double w = 1.0;
    double total = 0.0;
    while (w >= eps_tail) {
        const int next = walker.step(node);
        int diff = setup.scheme.wrap(node - next);
        if (diff > setup.scheme.n / 2) diff -= setup.scheme.n;
        expected[setup.graph.edge_index(next, diff)] += setup.scheme.tau * w;
        total += setup.scheme.tau * w;
        w *= 1.0 - lambda * setup.scheme.tau;
        node = next;
    }
    REQUIRE(occ.measure.edge_ids.size() == expected.size());
    for (std::size_t i = 0; i < occ.measure.edge_ids.size(); ++i) {
        const double want = expected.at(occ.measure.edge_ids[i]) / total;
        CHECK(std::fabs(occ.measure.weights[i] - want) <= 1e-10);
    }
}

TEST_CASE("normalization identity of the raw weights") {
    // lambda * sum_k tau w_k Lu0_k telescopes to w_end - 1.
    OccupationSetup setup(linear_model(FourierSeries::two_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    const double eps_tail = 1e-12;
    for (double lambda : {0.3, 0.05}) {
        const ValueFunction u = setup.solve(lambda);
        for (int start : {0, 5, 16, 25}) {
            const OccupationMeasure occ = occupation_measure(setup.model, setup.graph, u, lambda,
                                                             start, setup.barrier.c, eps_tail);
            CHECK(std::fabs(lambda * occ.raw_lu0_total + 1.0) <= eps_tail + 1e-9);
            CHECK(std::fabs(occ.measure.total() - 1.0) <= 1e-10);
            CHECK(occ.tail_mass_dropped <= 1e-10);
        }
    }
}

TEST_CASE("mass concentrates near the Aubry point as the discount vanishes") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    const double lambda = 0.05;
    const ValueFunction u = setup.solve(lambda);
    const OccupationMeasure occ = occupation_measure(setup.model, setup.graph, u, lambda, 16,
                                                     setup.barrier.c);
    double near = 0.0;
    for (std::size_t i = 0; i < occ.measure.edge_ids.size(); ++i) {
        const Edge& e = setup.graph.edges[static_cast<std::size_t>(occ.measure.edge_ids[i])];
        if (oracles::circular_node_distance(setup.scheme, e.from, 0) <= 2 * setup.scheme.window)
            near += occ.measure.weights[i];
    }
    CHECK(near > 0.9);
}

TEST_CASE("support obeys the velocity bound") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    const AprioriConstants k = apriori_constants(setup.model, setup.scheme, setup.barrier);
    for (double lambda : {0.2, 0.05}) {
        const ValueFunction u = setup.solve(lambda);
        const OccupationMeasure occ = occupation_measure(setup.model, setup.graph, u, lambda, 10,
                                                         setup.barrier.c);
        CHECK(occ.measure.max_speed(setup.graph) <= k.sigma0);
    }
}

TEST_CASE("a weight with vanishing u-derivative never decays") {
    HamiltonianModel stalled;
    stalled.family = Family::SeparatedNonlinear;
    stalled.potential = FourierSeries::zero();
    stalled.g.coeffs = {1e-9}; // Lu0 = -1e-9, decay time far beyond the guard horizon
    const DiscreteScheme scheme{16, 1.0 / 16, 5};
    const CostGraph graph = build_cost_graph(stalled, scheme);
    const ValueFunction zero(scheme); // exact fixed point for the flat potential
    CHECK_THROWS_AS((void)occupation_measure(stalled, graph, zero, 0.2, 3, 0.0),
                    TailNotDecaying);
}

TEST_CASE("weak-convergence diagnostics on the pendulum") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    std::vector<OccupationMeasure> occupations;
    const std::vector<double> lambdas{0.4, 0.2, 0.1, 0.05, 0.025};
    for (double lambda : lambdas) {
        const ValueFunction u = setup.solve(lambda);
        occupations.push_back(occupation_measure(setup.model, setup.graph, u, lambda, 16,
                                                 setup.barrier.c));
    }
    const DiagnosticsTable table = weak_convergence_diagnostics(occupations, setup.measures,
                                                                setup.graph, setup.barrier.c);
    REQUIRE(table.rows.size() == lambdas.size());
    CHECK(table.monotone_ok);
    CHECK(table.rows.back().action_gap <= 0.05);
    CHECK(table.rows.back().tv_to_hull <= 0.1);
    CHECK(table.rows.back().closedness_residual <= 10.0 * lambdas.back());

    SUBCASE("closedness residual scales like lambda") {
        // log-log slope over the ladder
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const auto n = static_cast<double>(table.rows.size());
        for (const auto& row : table.rows) {
            const double lx = std::log(row.lambda), ly = std::log(row.closedness_residual);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope >= 0.8);
        CHECK(slope <= 1.2);
    }
}

TEST_CASE("diagnostics from an Aubry start are exact at every discount") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    std::vector<OccupationMeasure> occupations;
    for (double lambda : {0.4, 0.1, 0.025}) {
        const ValueFunction u = setup.solve(lambda);
        occupations.push_back(occupation_measure(setup.model, setup.graph, u, lambda, 0,
                                                 setup.barrier.c));
    }
    const DiagnosticsTable table = weak_convergence_diagnostics(occupations, setup.measures,
                                                                setup.graph, setup.barrier.c);
    for (const auto& row : table.rows) {
        CHECK(row.closedness_residual <= 1e-10);
        CHECK(row.action_gap <= 1e-10);
        CHECK(row.tv_to_hull <= 1e-10);
    }
}

TEST_CASE("selection inequality for limit candidates") {
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});
    const ValueFunction u0 = limit_by_barrier(setup.barrier.h, setup.measures, setup.graph,
                                              setup.lu0);

    SUBCASE("the limit passes with value zero") {
        const SelectionReport report = check_selection_inequality(u0, setup.measures, setup.graph,
                                                                  setup.lu0);
        CHECK(report.pass);
        CHECK(std::fabs(report.min_value) <= 1e-12);
    }
    SUBCASE("a positive constant fails with value -1") {
        ValueFunction ones(setup.scheme, 1.0);
        const SelectionReport report = check_selection_inequality(ones, setup.measures,
                                                                  setup.graph, setup.lu0);
        CHECK_FALSE(report.pass);
        CHECK(report.min_value == doctest::Approx(-1.0));
    }
    SUBCASE("two-well weighted limit vanishes on both Aubry points") {
        OccupationSetup twowell(
            [] {
                HamiltonianModel m;
                m.family = Family::StateWeighted;
                m.potential = FourierSeries::two_well();
                m.weight = FourierSeries{2.0, {1.0}, {}};
                return m;
            }(),
            DiscreteScheme{32, 1.0 / 32, 5});
        const ValueFunction u0w = limit_by_barrier(twowell.barrier.h, twowell.measures,
                                                   twowell.graph, twowell.lu0);
        for (const auto& mu : twowell.measures) {
            double integral = 0.0;
            for (std::size_t i = 0; i < mu.edge_ids.size(); ++i) {
                const Edge& e = twowell.graph.edges[static_cast<std::size_t>(mu.edge_ids[i])];
                integral += twowell.lu0[static_cast<std::size_t>(mu.edge_ids[i])] *
                            mu.weights[i] * u0w[e.from];
            }
            CHECK(std::fabs(integral) <= 1e-10);
        }
    }
}

TEST_CASE("discounted solutions dominate the subsolution lower bound") {
    // u^lambda(x) >= w(x) - ratio(w, mu_x^lambda) - rho(lambda) for critical
    // subsolutions w; the violation rho shrinks with lambda.
    OccupationSetup setup(linear_model(FourierSeries::cosine_well()),
                          DiscreteScheme{32, 1.0 / 32, 5});

    std::vector<std::vector<double>> battery;
    battery.emplace_back(static_cast<std::size_t>(setup.scheme.n), 0.0); // constants
    for (int y : {0, 8, 16}) {
        std::vector<double> column(static_cast<std::size_t>(setup.scheme.n));
        for (int x = 0; x < setup.scheme.n; ++x)
            column[static_cast<std::size_t>(x)] =
                -setup.barrier.h(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        battery.push_back(std::move(column));
    }

    double previous = std::numeric_limits<double>::infinity();
    for (double lambda : {0.4, 0.1, 0.025}) {
        const ValueFunction u = setup.solve(lambda);
        double violation = 0.0;
        for (int x : {0, 5, 16, 27}) {
            const OccupationMeasure occ = occupation_measure(setup.model, setup.graph, u, lambda,
                                                             x, setup.barrier.c);
            for (const auto& w : battery) {
                const double ratio = weighted_ratio(w, occ.measure, setup.graph, setup.lu0);
                violation = std::max(violation,
                                     w[static_cast<std::size_t>(x)] - ratio - u[x]);
            }
        }
        CHECK(violation <= std::max(previous, 1e-12) * 1.2 + 1e-12);
        previous = std::max(violation, 1e-12);
    }
    CHECK(previous <= 0.05);
}
