#pragma once

#include <cmath>
#include <stdexcept>

namespace wkam {

// Uniform N-point grid on the 1-D torus [0,1) with positions x_i = i/N,
// explicit time step tau, and a velocity window: one move covers k grid
// cells with k in [-window, window], giving velocity k/(N*tau).
struct DiscreteScheme {
    int n = 200;
    double tau = 1.0 / 200.0;
    int window = 8;

    double position(int i) const { return static_cast<double>(i) / n; }

    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }

    // Minimal periodic displacement of a move of k cells, in (-1/2, 1/2].
    // Ties at exactly 1/2 resolve to +1/2.
    double displacement(int k) const {
        int d = ((k % n) + n) % n; // in [0, n)
        if (2 * d > n) d -= n;     // (-n/2, n/2]
        return static_cast<double>(d) / n;
    }

    double velocity(int k) const { return displacement(k) / tau; }

    int moves() const { return 2 * window + 1; }

    double max_speed() const { return static_cast<double>(window) / (n * tau); }

    void validate() const {
        if (n < 8) throw std::invalid_argument("DiscreteScheme: n must be >= 8");
        if (window < 1) throw std::invalid_argument("DiscreteScheme: window must be >= 1");
        if (2 * window >= n)
            throw std::invalid_argument("DiscreteScheme: window must satisfy 2*window < n");
        if (!(tau > 0.0)) throw std::invalid_argument("DiscreteScheme: tau must be positive");
    }
};

inline double torus_distance(double x, double y) {
    double d = std::fabs(x - y);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

} // namespace wkam
