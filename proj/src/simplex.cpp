#include "wkam/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wkam/errors.hpp"

namespace wkam {

namespace {
constexpr double kPivotTol = 1e-10;
}

InequalitySimplex::InequalitySimplex(const Matrix& a, const std::vector<double>& b)
    : rows_(a.rows), structurals_(a.cols), t_(a.rows + 1, a.cols + 1, 0.0) {
    if (b.size() != a.rows) throw std::invalid_argument("InequalitySimplex: size mismatch");
    for (double bi : b)
        if (bi < 0.0) throw std::invalid_argument("InequalitySimplex: requires b >= 0");

    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < structurals_; ++j) t_(i, j) = a(i, j);
        t_(i, structurals_) = b[i];
    }
    basis_.resize(rows_);
    nonbasic_.resize(structurals_);
    for (std::size_t j = 0; j < structurals_; ++j) nonbasic_[j] = static_cast<int>(j);
    for (std::size_t i = 0; i < rows_; ++i) basis_[i] = static_cast<int>(structurals_ + i);
    cost_.assign(structurals_ + rows_, 0.0);
}

void InequalitySimplex::set_objective(const std::vector<double>& c) {
    if (c.size() != structurals_) throw std::invalid_argument("set_objective: size mismatch");
    for (std::size_t j = 0; j < structurals_; ++j) cost_[j] = c[j];
    for (std::size_t i = 0; i < rows_; ++i) cost_[structurals_ + i] = 0.0;

    // Reduced costs under the current basis: r_j = c_Nj - sum_i c_Bi * T_ij.
    // The objective value is stored NEGATED in the rhs slot so the whole row
    // updates uniformly under pivots (z0 gains +r_s * bhat while coefficients
    // lose r_s * T(row,.)).
    double z0 = 0.0;
    for (std::size_t j = 0; j <= structurals_; ++j) t_(rows_, j) = 0.0;
    for (std::size_t j = 0; j < structurals_; ++j)
        t_(rows_, j) = cost_[static_cast<std::size_t>(nonbasic_[j])];
    for (std::size_t i = 0; i < rows_; ++i) {
        const double cb = cost_[static_cast<std::size_t>(basis_[i])];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < structurals_; ++j) t_(rows_, j) -= cb * t_(i, j);
        z0 += cb * t_(i, structurals_);
    }
    t_(rows_, structurals_) = -z0;
}

void InequalitySimplex::pivot(std::size_t row, std::size_t col) {
    ++pivots_;
    const double inv = 1.0 / t_(row, col);
    for (std::size_t j = 0; j <= structurals_; ++j) t_(row, j) *= inv;
    t_(row, col) = inv;
    for (std::size_t i = 0; i <= rows_; ++i) {
        if (i == row) continue;
        const double factor = t_(i, col);
        if (factor == 0.0) continue;
        for (std::size_t j = 0; j <= structurals_; ++j) t_(i, j) -= factor * t_(row, j);
        t_(i, col) = -factor * inv;
    }
    std::swap(basis_[row], nonbasic_[col]);
}

double InequalitySimplex::maximize() {
    while (true) {
        // Bland: entering column with improving reduced cost and smallest label.
        std::size_t col = structurals_;
        int best_label = std::numeric_limits<int>::max();
        for (std::size_t j = 0; j < structurals_; ++j) {
            if (t_(rows_, j) > kPivotTol && nonbasic_[j] < best_label) {
                best_label = nonbasic_[j];
                col = j;
            }
        }
        if (col == structurals_) break; // optimal

        std::size_t row = rows_;
        double best_ratio = std::numeric_limits<double>::infinity();
        int best_row_label = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < rows_; ++i) {
            if (t_(i, col) <= kPivotTol) continue;
            const double ratio = t_(i, structurals_) / t_(i, col);
            if (ratio < best_ratio || (ratio == best_ratio && basis_[i] < best_row_label)) {
                best_ratio = ratio;
                best_row_label = basis_[i];
                row = i;
            }
        }
        if (row == rows_)
            throw LpUnbounded("InequalitySimplex: objective unbounded (missing constraint?)");
        pivot(row, col);
    }
    return -t_(rows_, structurals_);
}

std::vector<double> InequalitySimplex::solution() const {
    std::vector<double> x(structurals_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        if (basis_[i] < static_cast<int>(structurals_))
            x[static_cast<std::size_t>(basis_[i])] = t_(i, structurals_);
    return x;
}

namespace {

// Full-tableau two-phase simplex, Bland's rule, artificial columns kept so the
// final reduced-cost row covers every structural column.
class StandardTableau {
public:
    StandardTableau(const Matrix& a, const std::vector<double>& b, const std::vector<double>& c)
        : m_(a.rows), n_(a.cols), cols_(a.cols + a.rows + 1),
          t_(a.rows + 1, a.cols + a.rows + 1, 0.0), basis_(a.rows), cost_(c) {
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign * a(i, j);
            t_(i, n_ + i) = 1.0;
            t_(i, cols_ - 1) = sign * b[i];
            basis_[i] = static_cast<int>(n_ + i);
        }
    }

    StandardLpResult solve() {
        // Phase 1: minimize the artificial mass.
        phase_objective(true);
        run(true);
        if (t_(m_, cols_ - 1) > 1e-7)
            throw LpInfeasible("solve_standard_lp: phase 1 left positive artificial mass");

        // Phase 2 over the original cost, artificials barred from entering.
        phase_objective(false);
        run(false);

        StandardLpResult result;
        result.value = t_(m_, cols_ - 1);
        result.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < static_cast<int>(n_))
                result.x[static_cast<std::size_t>(basis_[i])] = t_(i, cols_ - 1);
        result.reduced_costs.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) result.reduced_costs[j] = -t_(m_, j);
        return result;
    }

private:
    // Objective row holds negated reduced costs so pivoting updates it like
    // any other row; entering test is t(m,j) > tol.
    void phase_objective(bool phase1) {
        for (std::size_t j = 0; j < cols_; ++j) t_(m_, j) = 0.0;
        if (phase1) {
            for (std::size_t j = 0; j < n_ + m_; ++j) t_(m_, j) = is_artificial(j) ? -1.0 : 0.0;
        } else {
            for (std::size_t j = 0; j < n_; ++j) t_(m_, j) = -cost_[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = basic_cost(basis_[i], phase1);
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) t_(m_, j) += cb * t_(i, j);
        }
    }

    double basic_cost(int label, bool phase1) const {
        if (phase1) return is_artificial(static_cast<std::size_t>(label)) ? 1.0 : 0.0;
        return label < static_cast<int>(n_) ? cost_[static_cast<std::size_t>(label)] : 0.0;
    }

    bool is_artificial(std::size_t label) const { return label >= n_; }

    void run(bool phase1) {
        while (true) {
            std::size_t col = cols_;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (!phase1 && is_artificial(j)) continue;
                if (t_(m_, j) > kPivotTol) { // Bland: labels scanned in order
                    col = j;
                    break;
                }
            }
            if (col == cols_) return; // optimal

            std::size_t row = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            int best_label = std::numeric_limits<int>::max();
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_(i, col) <= kPivotTol) continue;
                const double ratio = t_(i, cols_ - 1) / t_(i, col);
                if (ratio < best_ratio || (ratio == best_ratio && basis_[i] < best_label)) {
                    best_ratio = ratio;
                    best_label = basis_[i];
                    row = i;
                }
            }
            if (row == m_) {
                if (phase1)
                    throw LpInfeasible("solve_standard_lp: phase 1 unbounded");
                throw LpUnbounded("solve_standard_lp: unbounded objective");
            }
            pivot(row, col);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double inv = 1.0 / t_(row, col);
        for (std::size_t j = 0; j < cols_; ++j) t_(row, j) *= inv;
        t_(row, col) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row) continue;
            const double factor = t_(i, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) t_(i, j) -= factor * t_(row, j);
            t_(i, col) = 0.0;
        }
        basis_[row] = static_cast<int>(col);
    }

    std::size_t m_, n_, cols_;
    Matrix t_;
    std::vector<int> basis_;
    std::vector<double> cost_;
};

} // namespace

StandardLpResult solve_standard_lp(const Matrix& a, const std::vector<double>& b,
                                   const std::vector<double>& c) {
    if (b.size() != a.rows || c.size() != a.cols)
        throw std::invalid_argument("solve_standard_lp: size mismatch");
    StandardTableau tableau(a, b, c);
    return tableau.solve();
}

} // namespace wkam
