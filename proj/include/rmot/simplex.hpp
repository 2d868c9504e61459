#pragma once

#include <cstdint>
#include <vector>

namespace rmot {

/// A linear program in equality standard form:
///     minimize    cost . x
///     subject to  A x = rhs,   x >= 0,
/// with A given by sparse columns and rhs >= 0.
struct LpProblem {
    int n_rows = 0;
    std::vector<int> col_ptr{0};    ///< CSR-style column starts (size n_cols+1)
    std::vector<int> col_rows;      ///< row indices, ascending within a column
    std::vector<double> col_vals;   ///< matching coefficients
    std::vector<double> cost;       ///< objective coefficients (size n_cols)
    std::vector<double> rhs;        ///< right-hand side (size n_rows), >= 0

    int n_cols() const { return static_cast<int>(cost.size()); }
    void add_column(const std::vector<std::pair<int, double>>& entries, double c);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct SimplexOptions {
    double optimality_tol = 1e-10;  ///< reduced-cost threshold for entering
    double feasibility_tol = 1e-9;  ///< phase-1 residual / basic-value tolerance
    double pivot_tol = 1e-10;       ///< smallest acceptable pivot magnitude
    int refactor_interval = 60;     ///< basis-inverse rebuild cadence
    long max_iterations = 2000000;
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    std::vector<std::pair<int, double>> x; ///< basic variables > 0, sorted by index
    std::vector<double> duals;             ///< one multiplier per row
    long iterations = 0;                   ///< total pivots (both phases)
    long phase1_iterations = 0;
    int redundant_rows = 0;                ///< dependent equalities detected
};

/// Two-phase revised simplex with an explicit basis inverse, periodic
/// refactorization, Dantzig pricing, and a lexicographic ratio test (the
/// leaving row minimizes (x_B, rows of the basis inverse) / pivot
/// lexicographically), which rules out cycling without stalling through
/// index-order pricing.  Deterministic: scans are in fixed index order and
/// remaining ties break toward the smallest row index.
LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& options = {});

} // namespace rmot
