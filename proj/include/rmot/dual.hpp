#pragma once

#include <cstdint>
#include <vector>

#include "rmot/cost.hpp"
#include "rmot/measure.hpp"
#include "rmot/primal.hpp"

namespace rmot {

/// Symmetric Kantorovich potential: one value per atom of the marginal.
/// Feasibility means  sum_k u[i_k] <= c(x_{i_1}, ..., x_{i_N})  for every
/// index tuple (vacuous when the tuple cost is infinite).

/// Average the per-axis LP multipliers into a single symmetric potential,
/// u_i = (1/N) * sum_k y_{k,i}.  The result of an optimal solve is feasible
/// and attains the same dual objective as the unaveraged multipliers.
std::vector<double> extract_dual(const PrimalSolution& sol,
                                 const DiscreteMeasure& mu);

/// Dual objective  N * sum_i w_i u_i.
double dual_value(const std::vector<double>& u, const DiscreteMeasure& mu,
                  int N);

struct DualCheck {
    bool feasible = false;
    double max_violation = 0.0; ///< max over finite tuples of sum u - cost
    std::vector<int> worst_tuple;
};

/// Exhaustive feasibility scan over all m^N index tuples.
DualCheck check_dual_feasibility(const std::vector<double>& u,
                                 const DiscreteMeasure& mu, const CostModel& f,
                                 int N, const CostMode& mode = CostMode::exact(),
                                 double tol = 1e-9,
                                 std::int64_t max_tuples = 5000000);

/// One in-place Gauss-Seidel pass of exact coordinate maximization:
///   u_i <- min over (j_2..j_N) of
///          ( c(x_i, x_{j_2}, .., x_{j_N}) - sum_{j_l != i} u_{j_l} ) / q,
/// where q = 1 + #{l : j_l = i} counts how often atom i appears in the
/// constraint.  Starting from any vector the result is feasible; starting
/// from a feasible vector every coordinate weakly increases and the result
/// is already a fixed point of the pass.  Throws solver_error if some atom
/// lies in no finite-cost tuple (the coordinate maximum is unbounded).
std::vector<double> c_transform_sweep(std::vector<double> u,
                                      const DiscreteMeasure& mu,
                                      const CostModel& f, int N,
                                      const CostMode& mode = CostMode::exact());

struct CanonicalizeResult {
    std::vector<double> u;
    int sweeps = 0;
    bool converged = false;
    double last_change = 0.0; ///< sup-norm change of the final pass
};

/// Repeat c_transform_sweep until the sup-norm change drops to tol
/// (default 1e-12) or max_sweeps passes have run.  Two passes suffice in
/// exact arithmetic: the first restores feasibility, the second lands on a
/// fixed point.
CanonicalizeResult canonicalize_dual(std::vector<double> u,
                                     const DiscreteMeasure& mu,
                                     const CostModel& f, int N,
                                     const CostMode& mode = CostMode::exact(),
                                     int max_sweeps = 50, double tol = 1e-12);

struct DualReport {
    std::vector<double> u;
    double value = 0.0;       ///< N * sum w_i u_i
    double primal_cost = 0.0;
    double gap = 0.0;         ///< primal_cost - value
    bool feasible = false;
    double max_violation = 0.0;
};

/// Extract, check, and score the potential carried by a solve.
DualReport make_dual_report(const PrimalSolution& sol,
                            const DiscreteMeasure& mu, const CostModel& f);

struct LipschitzReport {
    double alpha = 0.0;
    double empirical = 0.0;   ///< max |u_i - u_j| / d(x_i, x_j)
    double theoretical = 0.0; ///< (N - 1) * sup_{t >= alpha} |f'(t)|
    bool ok = false;
};

/// Compare the largest difference quotient of u on the support against the
/// modulus (N-1) * sup_{t >= alpha} |f'(t)| that canonical potentials of
/// plans supported at pair distance >= alpha must satisfy.
LipschitzReport lipschitz_report(const std::vector<double>& u,
                                 const DiscreteMeasure& mu, const CostModel& f,
                                 int N, double alpha);

} // namespace rmot
