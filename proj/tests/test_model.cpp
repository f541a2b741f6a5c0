#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wkam/critical.hpp"
#include "wkam/errors.hpp"
#include "wkam/model.hpp"

using namespace wkam;

namespace {

HamiltonianModel pendulum_linear() {
    HamiltonianModel m;
    m.family = Family::SeparatedLinear;
    m.potential = FourierSeries::cosine_well();
    return m;
}

HamiltonianModel pendulum_cubic() {
    HamiltonianModel m;
    m.family = Family::SeparatedNonlinear;
    m.potential = FourierSeries::cosine_well();
    m.g.coeffs = {1.0, 0.0, 1.0}; // g(u) = u + u^3
    return m;
}

HamiltonianModel pendulum_stateweight() {
    HamiltonianModel m;
    m.family = Family::StateWeighted;
    m.potential = FourierSeries::cosine_well();
    m.weight = FourierSeries{2.0, {}, {1.0}}; // a(x) = 2 + sin(2 pi x)
    return m;
}

} // namespace

TEST_CASE("closed-form Legendre transform of the quadratic families") {
    const HamiltonianModel linear = pendulum_linear();

    // rest point of the cosine well
    auto at_origin = legendre_transform(linear, 0.0, 0.0, 0.0);
    CHECK(at_origin.value == doctest::Approx(0.0).epsilon(0.0));
    CHECK(at_origin.argmax_p == 0.0);

    // x=1/4, v=1: L = 1/2 - (cos(pi/2) - 1) = 3/2
    auto quarter = legendre_transform(linear, 0.25, 1.0, 0.0);
    CHECK(quarter.value == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(quarter.argmax_p == doctest::Approx(1.0));

    // state-weighted at u=0.1: L = -V(0) - a(0)(e^0.1 - 1)
    const HamiltonianModel weighted = pendulum_stateweight();
    auto shifted = legendre_transform(weighted, 0.0, 0.0, 0.1);
    CHECK(shifted.value == doctest::Approx(-2.0 * std::expm1(0.1)).epsilon(1e-14));
    CHECK(shifted.value == doctest::Approx(-0.21034).epsilon(1e-4));
}

TEST_CASE("numeric momentum-grid conjugate matches the closed forms") {
    const MomentumGrid grid{8.0, 2049};
    const HamiltonianModel weighted = pendulum_stateweight();
    auto numeric = legendre_transform_numeric(weighted, 0.0, 0.0, 0.1, grid);
    auto closed = legendre_transform(weighted, 0.0, 0.0, 0.1);
    CHECK(std::fabs(numeric.value - closed.value) <= 1e-8);
    CHECK(numeric.argmax_p == doctest::Approx(0.0));

    // argmax p=v=1 lies on the grid (radius 8, 2048 intervals), so agreement is exact
    const HamiltonianModel linear = pendulum_linear();
    auto numeric_quarter = legendre_transform_numeric(linear, 0.25, 1.0, 0.0, grid);
    CHECK(std::fabs(numeric_quarter.value - 1.5) <= 1e-12);
    CHECK(numeric_quarter.argmax_p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Legendre transform domain and resolution errors") {
    const HamiltonianModel linear = pendulum_linear();
    CHECK_THROWS_AS((void)legendre_transform(linear, 0.1, 0.5, -linear.r0), DomainError);
    CHECK_THROWS_AS((void)legendre_transform_numeric(linear, 0.1, 0.5, -linear.r0 - 1.0),
                    DomainError);
    // velocity beyond the grid radius pushes the argmax onto the boundary
    CHECK_THROWS_AS((void)legendre_transform_numeric(linear, 0.1, 9.0, 0.0, {8.0, 513}),
                    ResolutionError);
}

TEST_CASE("weight L_u(.,.,0) per family") {
    CHECK(compute_lu0(pendulum_linear(), 0.37, 1.3) == doctest::Approx(-1.0));
    CHECK(compute_lu0(pendulum_stateweight(), 0.25, 0.0) == doctest::Approx(-3.0));

    // central difference of L in u for the cubic family
    const HamiltonianModel cubic = pendulum_cubic();
    const double lu0 = compute_lu0(cubic, 0.1, 0.7);
    CHECK(lu0 == doctest::Approx(-1.0));
    const double eps = 1e-5;
    const double central = (cubic.lagrangian(0.1, 0.7, eps) - cubic.lagrangian(0.1, 0.7, -eps)) /
                           (2.0 * eps);
    CHECK(std::fabs(lu0 - central) <= 1e-6);
}

TEST_CASE("assumption verification") {
    SUBCASE("pendulum passes all four") {
        const AssumptionReport report = verify_assumptions(pendulum_linear());
        CHECK(report.all_passed());
    }
    SUBCASE("cubic and state-weighted families pass") {
        CHECK(verify_assumptions(pendulum_cubic()).all_passed());
        CHECK(verify_assumptions(pendulum_stateweight()).all_passed());
    }
    SUBCASE("sign-changing weight breaks monotonicity") {
        HamiltonianModel bad = pendulum_stateweight();
        bad.weight = FourierSeries{0.0, {}, {1.0}}; // a(x) = sin(2 pi x) < 0 on half the torus
        const AssumptionReport report = verify_assumptions(bad);
        CHECK_FALSE(report.monotonicity.passed);
    }
    SUBCASE("g(u) = u^3 has vanishing derivative at zero") {
        HamiltonianModel flat_g = pendulum_cubic();
        flat_g.g.coeffs = {0.0, 0.0, 1.0};
        const AssumptionReport report = verify_assumptions(flat_g);
        CHECK_FALSE(report.u_derivative.passed);
        // the quotient itself sits at u^2 = 1e-8, below the positivity floor
        CHECK((flat_g.hamiltonian(0.1, 0.2, 1e-4) - flat_g.hamiltonian(0.1, 0.2, 0.0)) / 1e-4 ==
              doctest::Approx(1e-8));
    }
    SUBCASE("budget precondition") {
        CHECK_THROWS_AS((void)verify_assumptions(pendulum_linear(), SampleBudget{5}),
                        std::invalid_argument);
    }
}

TEST_CASE("a-priori constants from the critical data") {
    const HamiltonianModel model = pendulum_linear();
    const DiscreteScheme scheme{200, 1.0 / 200, 8};
    const CostGraph graph = build_cost_graph(model, scheme);
    const BarrierData barrier = compute_barrier_data(graph);
    const AprioriConstants k = apriori_constants(model, scheme, barrier);

    // rho_c = sqrt(2(c - V)) peaks at the well bottom x = 1/2 where V = -2
    CHECK(k.rho_c == doctest::Approx(2.0).epsilon(1e-12));
    // C0 = 2 osc h(0,.) ~ 2 * 2/pi up to the scheme error
    CHECK(k.c0 == doctest::Approx(4.0 / std::numbers::pi).epsilon(0.06));
    CHECK(k.alpha0 == doctest::Approx(model.r0 / k.c0));
    CHECK(k.m0 == doctest::Approx(std::sqrt(2.0 * (model.r0 + 2.0))).epsilon(1e-12));
    CHECK(k.sigma0 > 0.0);

    SUBCASE("flat potential floors C0 and caps alpha0") {
        HamiltonianModel flat;
        flat.family = Family::SeparatedLinear;
        flat.potential = FourierSeries::zero();
        const DiscreteScheme small{32, 1.0 / 32, 4};
        const CostGraph g = build_cost_graph(flat, small);
        const AprioriConstants kf = apriori_constants(flat, small, compute_barrier_data(g));
        CHECK(kf.c0 == doctest::Approx(1e-9));
        CHECK(kf.alpha0 == doctest::Approx(1e6));
    }
    SUBCASE("missing barrier throws") {
        CHECK_THROWS_AS((void)apriori_constants(model, scheme, BarrierData{}), NotYetComputed);
    }
}

TEST_CASE("Fenchel-Young inequality with equality at the argmax") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> xs(0.0, 1.0), ps(-6.0, 6.0), vs(-6.0, 6.0),
        us(-1.5, 2.0);
    const HamiltonianModel models[] = {pendulum_linear(), pendulum_cubic(),
                                       pendulum_stateweight()};
    for (const auto& model : models) {
        for (int i = 0; i < 2000; ++i) {
            const double x = xs(rng), p = ps(rng), v = vs(rng), u = us(rng);
            const auto eval = legendre_transform(model, x, v, u);
            CHECK(eval.value + model.hamiltonian(x, p, u) >= p * v - 1e-12);
            CHECK(std::fabs(eval.value + model.hamiltonian(x, eval.argmax_p, u) -
                            eval.argmax_p * v) <= 1e-12);
        }
    }
}

TEST_CASE("L is strictly decreasing in u") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(0.0, 1.0), vs(-5.0, 5.0), us(-1.5, 2.0);
    const HamiltonianModel models[] = {pendulum_linear(), pendulum_cubic(),
                                       pendulum_stateweight()};
    for (const auto& model : models) {
        for (int i = 0; i < 500; ++i) {
            const double x = xs(rng), v = vs(rng);
            double u1 = us(rng), u2 = us(rng);
            if (u1 == u2) continue;
            if (u1 > u2) std::swap(u1, u2);
            CHECK(model.lagrangian(x, v, u1) > model.lagrangian(x, v, u2));
        }
    }
}

TEST_CASE("superlinearity: L(x,v,0)/|v| clears any slope beyond a threshold") {
    const HamiltonianModel model = pendulum_linear();
    for (double slope : {1.0, 2.0, 4.0}) {
        // v_K = 2(K + max V - min V) suffices for L/|v| = |v|/2 - V/|v| >= K
        const double v_threshold = 2.0 * (slope + 2.0);
        for (double v : {v_threshold, v_threshold + 1.0, 4.0 * v_threshold}) {
            for (double x : {0.0, 0.25, 0.5, 0.77}) {
                CHECK(model.critical_lagrangian(x, v) / v >= slope);
                CHECK(model.critical_lagrangian(x, -v) / v >= slope);
            }
        }
    }
}
