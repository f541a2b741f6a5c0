#pragma once

#include <vector>

#include "wkam/util.hpp"

namespace wkam {

// Dense tableau simplex for  max c'x  s.t.  Ax <= b, x >= 0  with b >= 0,
// so the all-slack basis is feasible from the start. Bland's smallest-label
// rule throughout (no degeneracy cycling), pivot tolerance 1e-10.
//
// The dictionary survives objective swaps: set_objective recomputes the
// reduced-cost row under the current basis, so a sequence of problems that
// differ only in c re-optimizes from the previous optimal vertex.
class InequalitySimplex {
public:
    InequalitySimplex(const Matrix& a, const std::vector<double>& b);

    void set_objective(const std::vector<double>& c); // size = structural count
    double maximize();                                // throws LpUnbounded
    std::vector<double> solution() const;
    long pivots() const { return pivots_; }

private:
    void pivot(std::size_t row, std::size_t col);

    std::size_t rows_, structurals_;
    Matrix t_;                    // (rows+1) x (structurals+1); last row objective, last col rhs
    std::vector<int> basis_;      // label per row
    std::vector<int> nonbasic_;   // label per tableau column
    std::vector<double> cost_;    // cost per label (slacks zero)
    long pivots_ = 0;
};

// Dense two-phase simplex for  min c'x  s.t.  Ax = b, x >= 0.
// reduced_costs holds the final phase-2 reduced cost of every structural
// column; complementary slackness reads optimal-face membership off it.
struct StandardLpResult {
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> reduced_costs;
};

StandardLpResult solve_standard_lp(const Matrix& a, const std::vector<double>& b,
                                   const std::vector<double>& c);

} // namespace wkam
