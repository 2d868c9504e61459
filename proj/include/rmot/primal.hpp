#pragma once

#include <cstdint>
#include <vector>

#include "rmot/coupling.hpp"
#include "rmot/cost.hpp"
#include "rmot/measure.hpp"
#include "rmot/simplex.hpp"

namespace rmot {

/// Size / effort limits for a solve.
struct SolveBudget {
    std::int64_t max_variables = 5000000; ///< admissible tuple count m^N
    long max_iterations = 2000000;        ///< simplex pivot limit
};

struct SolveDiagnostics {
    std::int64_t tuple_count = 0;   ///< m^N
    std::int64_t finite_columns = 0; ///< variables after removing infinite tuples
    int lp_rows = 0;
    long iterations = 0;
    long phase1_iterations = 0;
    int redundant_rows = 0;
};

/// An optimal plan for the symmetric N-marginal problem together with the
/// multiplier certificate produced by the same solve.
struct PrimalSolution {
    Coupling coupling;
    int N = 0;
    CostMode mode;
    double cost = 0.0;              ///< sum of mass * tuple cost over the plan
    std::vector<double> row_duals;  ///< one multiplier per (axis, atom) constraint
    double dual_value = 0.0;        ///< multipliers . right-hand side
    double gap = 0.0;               ///< cost - dual_value
    SolveDiagnostics diagnostics;
};

/// Exact minimizer of  sum_{pairs} f(d(x_a, x_b))  over plans in Gamma(mu)
/// with N equal marginals, as a finite linear program over all finite-cost
/// index tuples.  Throws solver_error("infeasible-finite-cost ...") when the
/// marginals cannot be met using finite-cost tuples (for instance m < N with
/// an uncapped singularity) and solver_error("tuple budget exceeded ...")
/// when m^N passes the variable budget.
PrimalSolution solve_mot(const DiscreteMeasure& mu, const CostModel& f, int N,
                         const CostMode& mode = CostMode::exact(),
                         const SolveBudget& budget = {});

struct OracleBudget {
    std::int64_t max_nodes = 20000000; ///< basis-enumeration search nodes
};

/// Independent reference optimum for small instances (m^N <= 64): enumerates
/// every basic feasible solution of the marginal-constraint system (all
/// independent column sets of full rank, solving each square system and
/// keeping the non-negative ones).  Uniform two-marginal instances use the
/// equivalent enumeration of permutation matrices, the vertices of the
/// scaled bistochastic polytope.  Shares no code with the simplex path.
double brute_force_oracle(const DiscreteMeasure& mu, const CostModel& f, int N,
                          const CostMode& mode = CostMode::exact(),
                          const OracleBudget& budget = {});

} // namespace rmot
