#include "wkam/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "wkam/errors.hpp"

namespace wkam {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double aubry_tolerance(const DiscreteScheme& scheme) { return 1e-8 * scheme.n * scheme.tau; }

double critical_value(const CostGraph& graph) {
    const int n = graph.node_count();
    // D[k][v] = cheapest k-edge walk from node 0 to v. The graph is strongly
    // connected (window >= 1) and every node has a self-loop, so D[n][v] is
    // finite for all v.
    Matrix d(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n), kInf);
    d(0, 0) = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (const Edge& e : graph.edges) {
            const double base = d(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(e.from));
            if (base == kInf) continue;
            double& slot = d(static_cast<std::size_t>(k), static_cast<std::size_t>(e.to));
            slot = std::min(slot, base + e.cost);
        }
    }

    // Karp: min mean cycle = min_v max_k (D[n][v] - D[k][v]) / (n - k).
    double mean = kInf;
    for (int v = 0; v < n; ++v) {
        const double dn = d(static_cast<std::size_t>(n), static_cast<std::size_t>(v));
        if (dn == kInf) continue;
        double worst = -kInf;
        for (int k = 0; k < n; ++k) {
            const double dk = d(static_cast<std::size_t>(k), static_cast<std::size_t>(v));
            if (dk == kInf) continue;
            worst = std::max(worst, (dn - dk) / (n - k));
        }
        if (worst != -kInf) mean = std::min(mean, worst);
    }
    return -mean / graph.scheme.tau;
}

std::vector<double> bellman_ford_potentials(const CostGraph& graph, double c) {
    const int n = graph.node_count();
    const double shift = graph.scheme.tau * c;
    double scale = 1.0;
    for (const Edge& e : graph.edges) scale = std::max(scale, std::fabs(e.cost + shift));
    const double eps = 1e-13 * scale;

    std::vector<double> pi(static_cast<std::size_t>(n), 0.0); // virtual source to all
    bool changed = true;
    for (int round = 0; round < n && changed; ++round) {
        changed = false;
        for (const Edge& e : graph.edges) {
            const double cand = pi[static_cast<std::size_t>(e.from)] + e.cost + shift;
            if (cand < pi[static_cast<std::size_t>(e.to)] - eps) {
                pi[static_cast<std::size_t>(e.to)] = cand;
                changed = true;
            }
        }
    }
    if (changed) {
        for (const Edge& e : graph.edges) {
            const double cand = pi[static_cast<std::size_t>(e.from)] + e.cost + shift;
            if (cand < pi[static_cast<std::size_t>(e.to)] - eps)
                throw NegativeCycle("bellman_ford_potentials: reduced costs admit a negative "
                                    "cycle; level is below critical");
        }
    }
    return pi;
}

std::vector<char> tight_edge_mask(const CostGraph& graph, double c,
                                  const std::vector<double>& potentials, double tol) {
    const double shift = graph.scheme.tau * c;
    std::vector<char> mask(graph.edges.size(), 0);
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        const Edge& e = graph.edges[i];
        const double reduced = e.cost + shift + potentials[static_cast<std::size_t>(e.from)] -
                               potentials[static_cast<std::size_t>(e.to)];
        if (reduced <= tol) mask[i] = 1;
    }
    return mask;
}

namespace {

// All-pairs shortest paths of the reduced costs, nonnegative after the
// potential reweighting (Johnson). dist(y,y) = 0 (empty path allowed).
Matrix all_pairs_shortest(const CostGraph& graph, double c, const std::vector<double>& pi) {
    const int n = graph.node_count();
    const double shift = graph.scheme.tau * c;
    const int moves = graph.scheme.moves();

    std::vector<double> reweighted(graph.edges.size());
    double scale = 1.0;
    for (const Edge& e : graph.edges) scale = std::max(scale, std::fabs(e.cost + shift));
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        const Edge& e = graph.edges[i];
        double w = e.cost + shift + pi[static_cast<std::size_t>(e.from)] -
                   pi[static_cast<std::size_t>(e.to)];
        if (w < 0.0) {
            if (w < -1e-9 * scale)
                throw NegativeCycle("all_pairs_shortest: reweighted cost significantly negative");
            w = 0.0;
        }
        reweighted[i] = w;
    }

    Matrix dist(static_cast<std::size_t>(n), static_cast<std::size_t>(n), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(d.begin(), d.end(), kInf);
        d[static_cast<std::size_t>(s)] = 0.0;
        heap.push({0.0, s});
        while (!heap.empty()) {
            const auto [du, u] = heap.top();
            heap.pop();
            if (du > d[static_cast<std::size_t>(u)]) continue;
            const int base = u * moves;
            for (int k = 0; k < moves; ++k) {
                const Edge& e = graph.edges[static_cast<std::size_t>(base + k)];
                const double cand = du + reweighted[static_cast<std::size_t>(base + k)];
                if (cand < d[static_cast<std::size_t>(e.to)]) {
                    d[static_cast<std::size_t>(e.to)] = cand;
                    heap.push({cand, e.to});
                }
            }
        }
        for (int v = 0; v < n; ++v)
            dist(static_cast<std::size_t>(s), static_cast<std::size_t>(v)) =
                d[static_cast<std::size_t>(v)] - pi[static_cast<std::size_t>(s)] +
                pi[static_cast<std::size_t>(v)];
    }
    return dist;
}

} // namespace

Matrix mane_potential(const CostGraph& graph, double c) {
    const int n = graph.node_count();
    const double shift = graph.scheme.tau * c;
    const std::vector<double> pi = bellman_ford_potentials(graph, c);
    const Matrix dist = all_pairs_shortest(graph, c, pi);

    // Off the diagonal any path has >= 1 edge, so Phi = dist. On the diagonal
    // force at least one edge: Phi(y,y) = min over first edges y->z of
    // reduced(y,z) + dist(z,y).
    Matrix phi = dist;
    const int moves = graph.scheme.moves();
    for (int y = 0; y < n; ++y) {
        double best = kInf;
        const int base = y * moves;
        for (int k = 0; k < moves; ++k) {
            const Edge& e = graph.edges[static_cast<std::size_t>(base + k)];
            best = std::min(best, e.cost + shift +
                                      dist(static_cast<std::size_t>(e.to),
                                           static_cast<std::size_t>(y)));
        }
        phi(static_cast<std::size_t>(y), static_cast<std::size_t>(y)) = best;
    }
    return phi;
}

namespace {

// Tarjan over the tight subgraph; a node is Aubry iff its strongly connected
// component carries an internal tight edge (a tight self-loop counts).
struct SccFinder {
    const CostGraph& graph;
    const std::vector<char>& mask;
    std::vector<int> index, lowlink, component;
    std::vector<char> on_stack;
    std::vector<int> stack;
    int next_index = 0, next_component = 0;

    SccFinder(const CostGraph& g, const std::vector<char>& m)
        : graph(g), mask(m), index(static_cast<std::size_t>(g.node_count()), -1),
          lowlink(static_cast<std::size_t>(g.node_count()), 0),
          component(static_cast<std::size_t>(g.node_count()), -1),
          on_stack(static_cast<std::size_t>(g.node_count()), 0) {}

    void run() {
        for (int v = 0; v < graph.node_count(); ++v)
            if (index[static_cast<std::size_t>(v)] < 0) strongconnect(v);
    }

    // Iterative Tarjan; the grid can be a few hundred nodes deep.
    void strongconnect(int root) {
        struct Frame {
            int node;
            int move;
        };
        std::vector<Frame> frames{{root, 0}};
        begin(root);
        const int moves = graph.scheme.moves();
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            while (f.move < moves) {
                const int eid = f.node * moves + f.move;
                ++f.move;
                if (!mask[static_cast<std::size_t>(eid)]) continue;
                const int w = graph.edges[static_cast<std::size_t>(eid)].to;
                if (index[static_cast<std::size_t>(w)] < 0) {
                    begin(w);
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)])
                    lowlink[static_cast<std::size_t>(f.node)] =
                        std::min(lowlink[static_cast<std::size_t>(f.node)],
                                 index[static_cast<std::size_t>(w)]);
            }
            if (descended) continue;
            const int v = f.node;
            frames.pop_back();
            if (!frames.empty())
                lowlink[static_cast<std::size_t>(frames.back().node)] =
                    std::min(lowlink[static_cast<std::size_t>(frames.back().node)],
                             lowlink[static_cast<std::size_t>(v)]);
            if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    component[static_cast<std::size_t>(w)] = next_component;
                    if (w == v) break;
                }
                ++next_component;
            }
        }
    }

    void begin(int v) {
        index[static_cast<std::size_t>(v)] = lowlink[static_cast<std::size_t>(v)] = next_index++;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = 1;
    }
};

} // namespace

std::vector<int> aubry_set(const CostGraph& graph, double c) {
    return aubry_set(graph, c, aubry_tolerance(graph.scheme));
}

std::vector<int> aubry_set(const CostGraph& graph, double c, double tol) {
    const std::vector<double> pi = bellman_ford_potentials(graph, c);
    const std::vector<char> mask = tight_edge_mask(graph, c, pi, tol);

    SccFinder scc(graph, mask);
    scc.run();

    std::vector<char> cyclic(static_cast<std::size_t>(scc.next_component), 0);
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        if (!mask[i]) continue;
        const Edge& e = graph.edges[i];
        const int cf = scc.component[static_cast<std::size_t>(e.from)];
        if (cf == scc.component[static_cast<std::size_t>(e.to)])
            cyclic[static_cast<std::size_t>(cf)] = 1;
    }
    std::vector<int> aubry;
    for (int v = 0; v < graph.node_count(); ++v)
        if (cyclic[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)])])
            aubry.push_back(v);
    return aubry;
}

Matrix peierls_barrier(const Matrix& phi, const std::vector<int>& aubry) {
    if (aubry.empty())
        throw EmptyAubry("peierls_barrier: empty Aubry set signals an upstream bug");
    const std::size_t n = phi.rows;
    Matrix h(n, n, kInf);
    for (std::size_t y = 0; y < n; ++y) {
        for (int z : aubry) {
            const double through = phi(y, static_cast<std::size_t>(z));
            for (std::size_t x = 0; x < n; ++x)
                h(y, x) = std::min(h(y, x), through + phi(static_cast<std::size_t>(z), x));
        }
    }
    return h;
}

BarrierData compute_barrier_data(const CostGraph& graph) {
    BarrierData data;
    data.c = critical_value(graph);
    data.phi = mane_potential(graph, data.c);
    data.aubry = aubry_set(graph, data.c);
    data.h = peierls_barrier(data.phi, data.aubry);
    return data;
}

AprioriConstants apriori_constants(const HamiltonianModel& model, const DiscreteScheme& scheme,
                                   const BarrierData& barrier) {
    if (!barrier.computed() || barrier.aubry.empty())
        throw NotYetComputed("apriori_constants: critical value and barrier required first");

    AprioriConstants k;
    const double c = barrier.c;

    // rho_c = max_x sup{ |p| : G(x,p) <= c }, closed form for quadratic fibers.
    for (int i = 0; i < scheme.n; ++i) {
        const double gap = c - model.potential_at(scheme.position(i));
        if (gap > 0.0) k.rho_c = std::max(k.rho_c, std::sqrt(2.0 * gap));
    }

    // C0 from the oscillation of the critical solution h(y0, .) at the first
    // Aubry node; floored so that alpha0 stays finite for flat potentials.
    const std::size_t y0 = static_cast<std::size_t>(barrier.aubry.front());
    double lo = barrier.h(y0, 0), hi = barrier.h(y0, 0);
    for (std::size_t x = 0; x < barrier.h.cols; ++x) {
        lo = std::min(lo, barrier.h(y0, x));
        hi = std::max(hi, barrier.h(y0, x));
    }
    k.c0 = std::max(2.0 * (hi - lo), 1e-9);
    k.alpha0 = std::min(model.r0 / k.c0, 1e6);

    // M0: slope bound at level c for the shifted Hamiltonian H(.,.,-r0).
    for (int i = 0; i < scheme.n; ++i) {
        const double x = scheme.position(i);
        const double gap = c - model.potential_at(x) - model.u_term(x, -model.r0);
        if (gap > 0.0) k.m0 = std::max(k.m0, std::sqrt(2.0 * gap));
    }

    // sigma0: smallest constant with L(x,v,r0) + c >= (M0+1)|v| - sigma0 on the
    // velocity window.
    double sigma = 0.0;
    for (int i = 0; i < scheme.n; ++i) {
        const double x = scheme.position(i);
        for (int m = -scheme.window; m <= scheme.window; ++m) {
            const double v = scheme.velocity(m);
            const double slack = (k.m0 + 1.0) * std::fabs(v) -
                                 model.lagrangian(x, v, model.r0) - c;
            sigma = std::max(sigma, slack);
        }
    }
    k.sigma0 = std::max(sigma, 1e-9);
    return k;
}

} // namespace wkam
