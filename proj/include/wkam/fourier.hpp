#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace wkam {

// Real trigonometric polynomial with period 1:
//   f(x) = c0 + sum_k cos_coeffs[k-1] * cos(2*pi*k*x) + sin_coeffs[k-1] * sin(2*pi*k*x)
// Exactly periodic by construction; all built-in potentials and state weights
// are instances of this.
struct FourierSeries {
    double c0 = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double operator()(double x) const {
        const double w = 2.0 * std::numbers::pi * x;
        double value = c0;
        for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
            value += cos_coeffs[k] * std::cos(w * static_cast<double>(k + 1));
        for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
            value += sin_coeffs[k] * std::sin(w * static_cast<double>(k + 1));
        return value;
    }

    bool is_zero() const {
        if (c0 != 0.0) return false;
        for (double c : cos_coeffs)
            if (c != 0.0) return false;
        for (double s : sin_coeffs)
            if (s != 0.0) return false;
        return true;
    }

    // V(x) = cos(2*pi*x) - 1, single maximum at x = 0.
    static FourierSeries cosine_well() {
        return FourierSeries{-1.0, {1.0}, {}};
    }

    // V(x) = -(1 - cos(4*pi*x))/2, maxima at x = 0 and x = 1/2.
    static FourierSeries two_well() {
        return FourierSeries{-0.5, {0.0, 0.5}, {}};
    }

    static FourierSeries zero() { return FourierSeries{}; }

    static FourierSeries constant(double value) { return FourierSeries{value, {}, {}}; }
};

} // namespace wkam
