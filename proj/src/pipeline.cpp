#include "wkam/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "wkam/bellman.hpp"
#include "wkam/critical.hpp"
#include "wkam/csv.hpp"
#include "wkam/errors.hpp"
#include "wkam/limit.hpp"
#include "wkam/measures.hpp"
#include "wkam/occupation.hpp"

namespace wkam {

namespace {

StageRecord make_record(const std::string& stage, const std::string& check, bool pass,
                        double value, double threshold, const std::string& detail = "") {
    return StageRecord{stage, check, pass, value, threshold, detail};
}

std::string lambda_tag(double lambda) {
    std::ostringstream out;
    out << lambda;
    return out.str();
}

// Literal long-horizon barrier on a small copy of the model: liminf of the
// k-step action, read off as the minimum over the tail window.
double liminf_barrier_gap(const HamiltonianModel& model, int n, int window, int horizon) {
    DiscreteScheme small{n, 1.0 / n, window};
    const CostGraph graph = build_cost_graph(model, small);
    const BarrierData barrier = compute_barrier_data(graph);
    const double shift = small.tau * barrier.c;

    const std::size_t nn = static_cast<std::size_t>(n);
    Matrix hmin(nn, nn, std::numeric_limits<double>::infinity());
    for (std::size_t y = 0; y < nn; ++y) {
        std::vector<double> row(nn, std::numeric_limits<double>::infinity());
        row[y] = 0.0;
        std::vector<double> next(nn);
        for (int k = 1; k <= horizon; ++k) {
            std::fill(next.begin(), next.end(), std::numeric_limits<double>::infinity());
            for (const Edge& e : graph.edges) {
                const double base = row[static_cast<std::size_t>(e.from)];
                if (base == std::numeric_limits<double>::infinity()) continue;
                double& slot = next[static_cast<std::size_t>(e.to)];
                slot = std::min(slot, base + e.cost + shift);
            }
            row.swap(next);
            if (k > horizon / 2)
                for (std::size_t x = 0; x < nn; ++x) hmin(y, x) = std::min(hmin(y, x), row[x]);
        }
    }
    double gap = 0.0;
    for (std::size_t y = 0; y < nn; ++y)
        for (std::size_t x = 0; x < nn; ++x)
            gap = std::max(gap, std::fabs(hmin(y, x) - barrier.h(y, x)));
    return gap;
}

} // namespace

PipelineResult run_pipeline(const ExperimentConfig& config, const std::string& out_dir) {
    PipelineResult result;
    std::filesystem::create_directories(out_dir);
    const auto artifact = [&](const std::string& name) { return out_dir + "/" + name; };

    // Stage: assumption verification. A failed assumption stops the run; the
    // solver contracts downstream rely on monotonicity and coercivity.
    const AssumptionReport assumptions = verify_assumptions(config.model);
    for (const AssumptionCheck* check : assumptions.checks())
        result.records.push_back(make_record("assumptions", check->name, check->passed, 0.0, 0.0,
                                             check->detail));
    if (!assumptions.all_passed()) {
        write_summary(artifact("summary.txt"), result.records);
        return result;
    }

    // Stage: transition graph and critical value.
    const CostGraph graph = build_cost_graph(config.model, config.scheme);
    const BarrierData barrier = compute_barrier_data(graph);
    csv::write_scalar(artifact("critical_value.csv"), "c", barrier.c);
    csv::write_matrix(artifact("mane_potential.csv"), barrier.phi);
    csv::write_matrix(artifact("peierls_barrier.csv"), barrier.h);
    csv::write_index_list(artifact("aubry_set.csv"), barrier.aubry);
    result.records.push_back(make_record("critical", "aubry_nonempty", !barrier.aubry.empty(),
                                         static_cast<double>(barrier.aubry.size()), 1.0));

    const AprioriConstants constants = apriori_constants(config.model, config.scheme, barrier);
    {
        std::ostringstream detail;
        detail << "C0=" << constants.c0 << " M0=" << constants.m0 << " alpha0=" << constants.alpha0
               << " sigma0=" << constants.sigma0 << " rho_c=" << constants.rho_c;
        result.records.push_back(make_record("critical", "apriori_constants", true, 0.0, 0.0,
                                             detail.str()));
    }

    for (double lambda : config.lambdas)
        if (lambda >= constants.alpha0)
            result.records.push_back(make_record("critical", "lambda_below_alpha0", false, lambda,
                                                 constants.alpha0));

    // Stage: Mather measures.
    std::vector<ClosedMeasure> measures;
    try {
        measures = extreme_mather_measures(graph, barrier.c, config.cycle_cap);
    } catch (const CycleExplosion& e) {
        result.records.push_back(make_record("mather", "extreme_measures", false,
                                             static_cast<double>(config.cycle_cap),
                                             static_cast<double>(config.cycle_cap), e.what()));
        write_summary(artifact("summary.txt"), result.records);
        return result;
    }
    result.records.push_back(make_record("mather", "extreme_measures_found", !measures.empty(),
                                         static_cast<double>(measures.size()), 1.0));
    const double action_tol = 1e-8;
    double worst_action_gap = 0.0, worst_closedness = 0.0;
    for (std::size_t k = 0; k < measures.size(); ++k) {
        worst_action_gap = std::max(worst_action_gap,
                                    std::fabs(critical_action(measures[k], graph) + barrier.c));
        worst_closedness = std::max(worst_closedness, measures[k].closedness_residual(graph));
        if (k < 64) csv::write_measure(artifact("measure_" + std::to_string(k) + ".csv"),
                                       measures[k], graph);
    }
    result.records.push_back(make_record("mather", "extreme_action_at_minus_c",
                                         worst_action_gap <= action_tol, worst_action_gap,
                                         action_tol));
    result.records.push_back(make_record("mather", "extreme_closedness",
                                         worst_closedness <= 1e-10, worst_closedness, 1e-10));

    const std::vector<double> lu0_edges = edge_lu0_weights(config.model, graph);

    // Stage: discounted solutions.
    SolveOptions solve_options;
    solve_options.tol = config.solver_tol;
    solve_options.alpha0 = constants.alpha0;
    std::vector<std::pair<double, ValueFunction>> solutions;
    bool solved_all = true;
    for (double lambda : config.lambdas) {
        try {
            ValueFunction u = solve_discounted(config.model, config.scheme, lambda, barrier.c,
                                               solve_options);
            csv::write_value_function(artifact("u_lambda_" + lambda_tag(lambda) + ".csv"), u);
            const double norm_bound = constants.c0 * 1.1 + 1e-6;
            result.records.push_back(make_record("bellman", "norm_bound_lambda_" +
                                                 lambda_tag(lambda),
                                                 u.sup_norm() <= norm_bound, u.sup_norm(),
                                                 norm_bound));
            solutions.emplace_back(lambda, std::move(u));
        } catch (const Error& e) {
            solved_all = false;
            result.records.push_back(make_record("bellman", "solve_lambda_" + lambda_tag(lambda),
                                                 false, lambda, 0.0, e.what()));
        }
    }

    // Stage: limit routes.
    const ValueFunction u0_barrier = limit_by_barrier(barrier.h, measures, graph, lu0_edges);
    csv::write_value_function(artifact("u0_barrier.csv"), u0_barrier);

    {
        SubsolutionLp lp(graph, barrier.c, measures, lu0_edges);
        ValueFunction u0_sup(config.scheme);
        for (int x = 0; x < config.scheme.n; ++x) u0_sup[x] = limit_by_subsolution_sup(x, lp);
        csv::write_value_function(artifact("u0_subsolution_sup.csv"), u0_sup);
        const double route_tol = config.route_agreement_tol + 1e-7;
        const double gap = u0_barrier.sup_distance(u0_sup);
        result.records.push_back(make_record("limit", "route_agreement_sup", gap <= route_tol, gap,
                                             route_tol));
    }

    try {
        const ValueFunction u0_special = limit_special_case(config.model, barrier, config.scheme);
        csv::write_value_function(artifact("u0_aubry_min.csv"), u0_special);
        const double gap = u0_barrier.sup_distance(u0_special);
        result.records.push_back(make_record("limit", "route_agreement_special", gap <= 1e-9, gap,
                                             1e-9));
    } catch (const PreconditionFailed& e) {
        result.records.push_back(make_record("limit", "special_case_not_applicable", true, 0.0,
                                             0.0, e.what()));
    }

    const SelectionReport selection =
        check_selection_inequality(u0_barrier, measures, graph, lu0_edges);
    result.records.push_back(make_record("limit", "selection_inequality", selection.pass,
                                         selection.min_value, -1e-8));

    // Stage: occupation diagnostics at x = N/2.
    if (solved_all && !solutions.empty()) {
        try {
            std::vector<OccupationMeasure> occupations;
            for (const auto& [lambda, u] : solutions)
                occupations.push_back(occupation_measure(config.model, graph, u, lambda,
                                                         config.scheme.n / 2, barrier.c,
                                                         config.eps_tail, config.solver_tol));
            const DiagnosticsTable diagnostics =
                weak_convergence_diagnostics(occupations, measures, graph, barrier.c);
            csv::write_diagnostics(artifact("occupation_diagnostics.csv"), diagnostics);
            result.records.push_back(make_record("occupation", "diagnostics_monotone",
                                                 diagnostics.monotone_ok, 0.0, 0.0));
            double worst_speed = 0.0;
            for (const auto& occ : occupations)
                worst_speed = std::max(worst_speed, occ.measure.max_speed(graph));
            result.records.push_back(make_record("occupation", "support_speed_bound",
                                                 worst_speed <= constants.sigma0, worst_speed,
                                                 constants.sigma0));
        } catch (const Error& e) {
            result.records.push_back(make_record("occupation", "diagnostics", false, 0.0, 0.0,
                                                 e.what()));
        }

        // Stage: convergence table against the barrier-route limit.
        const ConvergenceTable table = build_convergence_table(solutions, u0_barrier);
        csv::write_convergence(artifact("convergence.csv"), table);
        const std::string violations = convergence_violations(table, config.conv_eps);
        result.records.push_back(make_record("limit", "theorem_convergence", violations.empty(),
                                             table.rows.empty() ? 0.0
                                                                : table.rows.back().sup_error,
                                             config.conv_eps, violations));
    }

    // Optional oracles: small-grid brute-force cross checks.
    if (config.oracles) {
        const LpCertificate certificate = mather_lp_certificate(graph);
        const double agreement_tol = 1e-9 * config.scheme.n;
        const double karp_lp_gap =
            std::fabs(certificate.value / config.scheme.tau + barrier.c);
        result.records.push_back(make_record("oracle", "karp_lp_agreement",
                                             karp_lp_gap <= agreement_tol, karp_lp_gap,
                                             agreement_tol));

        // u_n + n tau c stays bounded along the undiscounted iteration.
        LaxOleinik undiscounted(config.model, config.scheme, barrier.c, 0.0);
        ValueFunction orbit(config.scheme);
        std::vector<double> next(static_cast<std::size_t>(config.scheme.n));
        double orbit_norm = 0.0;
        for (int it = 0; it < 2000; ++it) {
            undiscounted.apply(orbit.values, next);
            orbit.values.swap(next);
            orbit_norm = orbit.sup_norm();
        }
        const double orbit_bound = constants.c0 + 1.0;
        result.records.push_back(make_record("oracle", "critical_orbit_bounded",
                                             orbit_norm <= orbit_bound, orbit_norm, orbit_bound));

        const double liminf_gap = liminf_barrier_gap(config.model, 32,
                                                     std::min(config.scheme.window, 7), 2000);
        result.records.push_back(make_record("oracle", "liminf_barrier_small_grid",
                                             liminf_gap <= 1e-8, liminf_gap, 1e-8));
    }

    write_summary(artifact("summary.txt"), result.records);
    return result;
}

RefinementReport run_refinement(const ExperimentConfig& config, int levels,
                                const std::string& out_dir) {
    if (levels < 2) throw ConfigError("refine: need at least 2 levels");
    std::filesystem::create_directories(out_dir);

    const bool closed_form = config.model.potential.cos_coeffs == std::vector<double>{1.0} &&
                             config.model.potential.sin_coeffs.empty() &&
                             config.model.potential.c0 == -1.0;

    struct LevelData {
        int n;
        double c;
        std::vector<double> h_row; // h(y0, .) restricted later
        std::vector<double> u0;
    };
    std::vector<LevelData> data;

    // The time step stays at the base level's 1/N while the spatial grid and
    // the velocity window double, so the velocity lattice refines: its spacing
    // 1/(N tau) halves per level while the speed range W/(N tau) is preserved.
    const int n0 = config.scheme.n;
    double aubry_position = 0.0;
    for (int level = 0; level < levels; ++level) {
        const int n = n0 << level;
        DiscreteScheme scheme{n, config.scheme.tau, config.scheme.window << level};
        const CostGraph graph = build_cost_graph(config.model, scheme);
        const BarrierData barrier = compute_barrier_data(graph);
        const std::vector<ClosedMeasure> measures =
            extreme_mather_measures(graph, barrier.c, config.cycle_cap);
        const std::vector<double> lu0_edges = edge_lu0_weights(config.model, graph);
        const ValueFunction u0 = limit_by_barrier(barrier.h, measures, graph, lu0_edges);

        if (level == 0) aubry_position = scheme.position(barrier.aubry.front());
        const int y0 = static_cast<int>(std::lround(aubry_position * n));

        LevelData d;
        d.n = n;
        d.c = barrier.c;
        d.h_row.resize(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x)
            d.h_row[static_cast<std::size_t>(x)] =
                barrier.h(static_cast<std::size_t>(y0), static_cast<std::size_t>(x));
        d.u0 = u0.values;
        data.push_back(std::move(d));
    }

    // Errors on the coarse grid; node i of level 0 is node i*2^level upstairs.
    RefinementReport report;
    report.closed_form_reference = closed_form;
    const auto closed_h = [](double x) {
        const double arg = std::min(x, 1.0 - x);
        return (2.0 / std::numbers::pi) * (1.0 - std::cos(std::numbers::pi * arg));
    };
    const int compare_levels = closed_form ? levels : levels - 1;
    for (int level = 0; level < compare_levels; ++level) {
        const LevelData& d = data[static_cast<std::size_t>(level)];
        RefinementLevel row;
        row.n = d.n;
        if (closed_form) {
            row.err_c = std::fabs(d.c - 0.0);
            for (int i = 0; i < n0; ++i) {
                const double x = static_cast<double>(i) / n0;
                const std::size_t idx = static_cast<std::size_t>(i << level);
                row.err_h = std::max(row.err_h, std::fabs(d.h_row[idx] - closed_h(x)));
                row.err_u0 = std::max(row.err_u0, std::fabs(d.u0[idx] - closed_h(x)));
            }
        } else {
            const LevelData& fine = data.back();
            row.err_c = std::fabs(d.c - fine.c);
            const int fine_shift = levels - 1;
            for (int i = 0; i < n0; ++i) {
                const std::size_t idx = static_cast<std::size_t>(i << level);
                const std::size_t fidx = static_cast<std::size_t>(i << fine_shift);
                row.err_h = std::max(row.err_h, std::fabs(d.h_row[idx] - fine.h_row[fidx]));
                row.err_u0 = std::max(row.err_u0, std::fabs(d.u0[idx] - fine.u0[fidx]));
            }
        }
        report.levels.push_back(row);
    }

    std::ostringstream violations;
    for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
        const auto check = [&](double coarse, double fine, const char* what) {
            if (fine > coarse + 1e-12)
                violations << what << " error rose from " << coarse << " (n="
                           << report.levels[i].n << ") to " << fine << "; ";
        };
        check(report.levels[i].err_c, report.levels[i + 1].err_c, "critical value");
        check(report.levels[i].err_h, report.levels[i + 1].err_h, "barrier");
        check(report.levels[i].err_u0, report.levels[i + 1].err_u0, "limit");
    }
    report.violations = violations.str();

    std::ofstream out(out_dir + "/refinement.csv");
    out << "n,err_c,err_h,err_u0\n";
    for (const auto& row : report.levels)
        out << row.n << ',' << csv::format(row.err_c) << ',' << csv::format(row.err_h) << ','
            << csv::format(row.err_u0) << '\n';

    return report;
}

void write_summary(const std::string& path, const std::vector<StageRecord>& records) {
    std::ofstream out(path);
    for (const auto& r : records) {
        out << "RESULT stage=" << r.stage << " check=" << r.check
            << " status=" << (r.pass ? "PASS" : "FAIL") << " value=" << csv::format(r.value)
            << " threshold=" << csv::format(r.threshold);
        if (!r.detail.empty()) out << " detail=\"" << r.detail << '"';
        out << '\n';
    }
}

} // namespace wkam
