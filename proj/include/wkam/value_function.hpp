#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wkam/scheme.hpp"

namespace wkam {

// Grid-indexed real function on the torus.
struct ValueFunction {
    DiscreteScheme scheme;
    std::vector<double> values;

    ValueFunction() = default;
    explicit ValueFunction(const DiscreteScheme& s, double fill = 0.0)
        : scheme(s), values(static_cast<std::size_t>(s.n), fill) {}

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    int size() const { return scheme.n; }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }

    // max_i |u(x_{i+1}) - u(x_i)| * N, indices periodic.
    double discrete_lipschitz() const {
        double m = 0.0;
        for (int i = 0; i < scheme.n; ++i) {
            const double d = std::fabs(values[static_cast<std::size_t>(scheme.wrap(i + 1))] -
                                       values[static_cast<std::size_t>(i)]);
            m = std::max(m, d);
        }
        return m * scheme.n;
    }

    double oscillation() const {
        double lo = values[0], hi = values[0];
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    }

    double sup_distance(const ValueFunction& other) const {
        double m = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            m = std::max(m, std::fabs(values[i] - other.values[i]));
        return m;
    }
};

} // namespace wkam
