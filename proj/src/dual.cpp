#include "rmot/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmot/errors.hpp"
#include "rmot/geometry.hpp"
#include "rmot/indexing.hpp"

namespace rmot {

namespace {

void require_potential_size(const std::vector<double>& u,
                            const DiscreteMeasure& mu) {
    if (u.size() != mu.size())
        throw validation_error("potential length does not match atom count");
    for (double v : u)
        if (!std::isfinite(v))
            throw validation_error("potential entries must be finite");
}

double tuple_cost_from_table(const std::vector<double>& pc, int m,
                             const std::vector<int>& tuple) {
    double c = 0.0;
    const int N = static_cast<int>(tuple.size());
    for (int a = 0; a < N && !std::isinf(c); ++a)
        for (int b = a + 1; b < N; ++b) {
            c += pc[static_cast<std::size_t>(tuple[a]) * m + tuple[b]];
            if (std::isinf(c)) break;
        }
    return c;
}

} // namespace

std::vector<double> extract_dual(const PrimalSolution& sol,
                                 const DiscreteMeasure& mu) {
    const int m = static_cast<int>(mu.size());
    const int N = sol.N;
    if (sol.row_duals.size() != static_cast<std::size_t>(N) * m)
        throw validation_error("multiplier vector does not match N * m rows");
    std::vector<double> u(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int k = 0; k < N; ++k)
            s += sol.row_duals[static_cast<std::size_t>(k) * m + i];
        u[static_cast<std::size_t>(i)] = s / static_cast<double>(N);
    }
    return u;
}

double dual_value(const std::vector<double>& u, const DiscreteMeasure& mu,
                  int N) {
    require_potential_size(u, mu);
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weight(i) * u[i];
    return static_cast<double>(N) * s;
}

DualCheck check_dual_feasibility(const std::vector<double>& u,
                                 const DiscreteMeasure& mu, const CostModel& f,
                                 int N, const CostMode& mode, double tol,
                                 std::int64_t max_tuples) {
    require_potential_size(u, mu);
    if (N < 2) throw validation_error("feasibility check requires N >= 2");
    const int m = static_cast<int>(mu.size());
    checked_tuple_count(m, N, max_tuples);
    const auto pc = pair_cost_table(f, mu.points(), mode);
    TupleIndexer indexer(m, N);

    DualCheck out;
    out.max_violation = -std::numeric_limits<double>::infinity();
    std::vector<int> tuple(static_cast<std::size_t>(N), 0);
    const std::int64_t total = indexer.total();
    for (std::int64_t flat = 0; flat < total; ++flat) {
        const double c = tuple_cost_from_table(pc, m, tuple);
        if (!std::isinf(c)) {
            double s = 0.0;
            for (int k = 0; k < N; ++k) s += u[static_cast<std::size_t>(tuple[k])];
            const double viol = s - c;
            if (viol > out.max_violation) {
                out.max_violation = viol;
                out.worst_tuple = tuple;
            }
        }
        indexer.next(tuple);
    }
    if (out.worst_tuple.empty())
        throw solver_error("infeasible-finite-cost: every index tuple has "
                           "infinite cost");
    out.feasible = out.max_violation <= tol;
    return out;
}

std::vector<double> c_transform_sweep(std::vector<double> u,
                                      const DiscreteMeasure& mu,
                                      const CostModel& f, int N,
                                      const CostMode& mode) {
    require_potential_size(u, mu);
    if (N < 2) throw validation_error("c-transform requires N >= 2");
    const int m = static_cast<int>(mu.size());
    checked_tuple_count(m, N, 5000000);
    const auto pc = pair_cost_table(f, mu.points(), mode);
    TupleIndexer rest(m, N - 1);
    const std::int64_t total = rest.total();

    for (int i = 0; i < m; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<int> js(static_cast<std::size_t>(N - 1), 0);
        for (std::int64_t flat = 0; flat < total; ++flat) {
            // cost of the tuple (i, j_2, .., j_N)
            double c = 0.0;
            for (int a = 0; a < N - 1 && !std::isinf(c); ++a) {
                c += pc[static_cast<std::size_t>(i) * m + js[static_cast<std::size_t>(a)]];
                for (int b = a + 1; b < N - 1; ++b) {
                    c += pc[static_cast<std::size_t>(js[static_cast<std::size_t>(a)]) * m +
                            js[static_cast<std::size_t>(b)]];
                    if (std::isinf(c)) break;
                }
            }
            if (!std::isinf(c)) {
                double others = 0.0;
                int q = 1;
                for (int a = 0; a < N - 1; ++a) {
                    const int j = js[static_cast<std::size_t>(a)];
                    if (j == i)
                        ++q;
                    else
                        others += u[static_cast<std::size_t>(j)];
                }
                best = std::min(best, (c - others) / static_cast<double>(q));
            }
            rest.next(js);
        }
        if (std::isinf(best))
            throw solver_error("dual coordinate unbounded: atom " +
                               std::to_string(i) +
                               " lies in no finite-cost tuple");
        u[static_cast<std::size_t>(i)] = best;
    }
    return u;
}

CanonicalizeResult canonicalize_dual(std::vector<double> u,
                                     const DiscreteMeasure& mu,
                                     const CostModel& f, int N,
                                     const CostMode& mode, int max_sweeps,
                                     double tol) {
    CanonicalizeResult out;
    out.u = std::move(u);
    for (int s = 0; s < max_sweeps; ++s) {
        std::vector<double> next = c_transform_sweep(out.u, mu, f, N, mode);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i)
            change = std::max(change, std::abs(next[i] - out.u[i]));
        out.u = std::move(next);
        out.sweeps = s + 1;
        out.last_change = change;
        if (change <= tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

DualReport make_dual_report(const PrimalSolution& sol,
                            const DiscreteMeasure& mu, const CostModel& f) {
    DualReport out;
    out.u = extract_dual(sol, mu);
    out.value = dual_value(out.u, mu, sol.N);
    out.primal_cost = sol.cost;
    out.gap = out.primal_cost - out.value;
    DualCheck check = check_dual_feasibility(out.u, mu, f, sol.N, sol.mode);
    out.feasible = check.feasible;
    out.max_violation = check.max_violation;
    return out;
}

LipschitzReport lipschitz_report(const std::vector<double>& u,
                                 const DiscreteMeasure& mu, const CostModel& f,
                                 int N, double alpha) {
    require_potential_size(u, mu);
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw validation_error("lipschitz_report requires alpha > 0");
    LipschitzReport out;
    out.alpha = alpha;
    out.theoretical = static_cast<double>(N - 1) * f.slope_bound(alpha);
    double emp = 0.0;
    const int m = static_cast<int>(mu.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double d = distance(mu.point(i), mu.point(j));
            emp = std::max(emp, std::abs(u[static_cast<std::size_t>(i)] -
                                         u[static_cast<std::size_t>(j)]) /
                                    d);
        }
    out.empirical = emp;
    out.ok = emp <= out.theoretical * (1.0 + 1e-9) + 1e-12;
    return out;
}

} // namespace rmot
