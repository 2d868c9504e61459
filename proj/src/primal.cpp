#include "rmot/primal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rmot/errors.hpp"
#include "rmot/indexing.hpp"

namespace rmot {

namespace {

struct MotLp {
    LpProblem lp;
    std::vector<std::int64_t> tuple_of_column; // flat tuple id per LP variable
};

// Build the flattened LP: one variable per finite-cost index tuple, one
// equality row per (axis, atom) pair fixing the axis marginal to mu.
MotLp build_mot_lp(const DiscreteMeasure& mu, const CostModel& f, int N,
                   const CostMode& mode, const SolveBudget& budget) {
    const int m = static_cast<int>(mu.size());
    checked_tuple_count(m, N, budget.max_variables);
    TupleIndexer indexer(m, N);

    const auto pair_costs = pair_cost_table(f, mu.points(), mode);

    MotLp out;
    out.lp.n_rows = N * m;
    out.lp.rhs.resize(static_cast<std::size_t>(N) * m);
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < m; ++i)
            out.lp.rhs[static_cast<std::size_t>(k) * m + i] = mu.weight(i);

    std::vector<int> tuple(static_cast<std::size_t>(N), 0);
    std::vector<std::pair<int, double>> col(static_cast<std::size_t>(N));
    const std::int64_t total = indexer.total();
    for (std::int64_t flat = 0; flat < total; ++flat) {
        double c = 0.0;
        for (int a = 0; a < N && !std::isinf(c); ++a)
            for (int b = a + 1; b < N; ++b) {
                c += pair_costs[static_cast<std::size_t>(tuple[a]) * m + tuple[b]];
                if (std::isinf(c)) break;
            }
        if (!std::isinf(c)) {
            for (int k = 0; k < N; ++k)
                col[static_cast<std::size_t>(k)] = {k * m + tuple[k], 1.0};
            out.lp.add_column(col, c);
            out.tuple_of_column.push_back(flat);
        }
        indexer.next(tuple);
    }
    return out;
}

bool weights_uniform(const DiscreteMeasure& mu) {
    const double w0 = 1.0 / static_cast<double>(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (std::abs(mu.weight(i) - w0) > 1e-15) return false;
    return true;
}

// Reference optimum for uniform two-marginal instances: the vertices of the
// polytope { X >= 0 : row sums = col sums = 1/m } are exactly the scaled
// permutation matrices, so the optimum is a minimum over permutations.
double permutation_oracle(const DiscreteMeasure& mu, const CostModel& f,
                          const CostMode& mode) {
    const int m = static_cast<int>(mu.size());
    const auto pc = pair_cost_table(f, mu.points(), mode);
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (int i = 0; i < m && !std::isinf(c); ++i)
            c += pc[static_cast<std::size_t>(i) * m + perm[static_cast<std::size_t>(i)]];
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (std::isinf(best))
        throw solver_error("infeasible-finite-cost: every permutation pairing "
                           "meets an infinite-cost tuple");
    return best / static_cast<double>(m);
}

// Enumerates maximal independent column subsets by depth-first search with
// incremental Gaussian elimination; each full-rank subset is one basis, and
// its (unique) solution is kept when non-negative.
class BasisEnumerator {
  public:
    BasisEnumerator(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const std::vector<double>& cost, std::int64_t max_nodes)
        : A_(A), cost_(cost), max_nodes_(max_nodes) {
        rows_ = static_cast<int>(A.rows());
        cols_ = static_cast<int>(A.cols());
        rank_ = compute_rank_and_check(b);
        reduced_.assign(static_cast<std::size_t>(rank_) + 1, A_);
        bred_.assign(static_cast<std::size_t>(rank_) + 1, b);
        T_ = Eigen::MatrixXd::Zero(rank_, rank_);
        c_.resize(static_cast<std::size_t>(rank_), 0.0);
        pivot_row_.resize(static_cast<std::size_t>(rank_), -1);
        chosen_.resize(static_cast<std::size_t>(rank_), -1);
    }

    double best() {
        best_ = std::numeric_limits<double>::infinity();
        nodes_ = 0;
        search(0, 0);
        return best_;
    }

  private:
    int compute_rank_and_check(const Eigen::VectorXd& b) {
        Eigen::MatrixXd R = A_;
        Eigen::VectorXd br = b;
        int rank = 0;
        for (int j = 0; j < cols_; ++j) {
            int p;
            const double mag = R.col(j).cwiseAbs().maxCoeff(&p);
            if (mag <= kIndepTol) continue;
            const Eigen::VectorXd u = R.col(j) / R(p, j);
            for (int k = j + 1; k < cols_; ++k) R.col(k) -= u * R(p, k);
            br -= u * br(p);
            R.col(j).setZero();
            ++rank;
        }
        if (br.cwiseAbs().maxCoeff() > 1e-9)
            throw solver_error(
                "infeasible-finite-cost: the marginal constraints are "
                "inconsistent over the finite-cost tuples");
        return rank;
    }

    void search(int depth, int start) {
        if (depth == rank_) {
            evaluate_leaf();
            return;
        }
        for (int j = start; cols_ - j >= rank_ - depth; ++j) {
            if (++nodes_ > max_nodes_)
                throw solver_error("oracle budget exceeded: too many candidate "
                                   "bases to enumerate");
            const Eigen::MatrixXd& R = reduced_[static_cast<std::size_t>(depth)];
            int p;
            const double mag = R.col(j).cwiseAbs().maxCoeff(&p);
            if (mag <= kIndepTol) continue; // dependent on current pivots

            // record the triangular relation between chosen columns and the
            // elimination basis, then reduce everything one level further
            const double alpha = R(p, j);
            for (int l = 0; l < depth; ++l)
                T_(l, depth) = reduced_[static_cast<std::size_t>(l)](
                    pivot_row_[static_cast<std::size_t>(l)], j);
            T_(depth, depth) = alpha;
            chosen_[static_cast<std::size_t>(depth)] = j;
            pivot_row_[static_cast<std::size_t>(depth)] = p;

            const Eigen::VectorXd u = R.col(j) / alpha;
            Eigen::MatrixXd& Rn = reduced_[static_cast<std::size_t>(depth) + 1];
            Rn = R;
            for (int k = j + 1; k < cols_; ++k) Rn.col(k) -= u * R(p, k);
            for (int k = 0; k <= j; ++k) Rn.col(k).setZero();
            c_[static_cast<std::size_t>(depth)] = bred_[static_cast<std::size_t>(depth)](p);
            bred_[static_cast<std::size_t>(depth) + 1] =
                bred_[static_cast<std::size_t>(depth)] - u * c_[static_cast<std::size_t>(depth)];
            search(depth + 1, j + 1);
        }
    }

    void evaluate_leaf() {
        // b = sum_l c_l u_l and column_k = sum_{l<=k} T(l,k) u_l, so the
        // basis solution solves the upper-triangular system T x = c.
        Eigen::VectorXd x(rank_);
        for (int k = rank_ - 1; k >= 0; --k) {
            double v = c_[static_cast<std::size_t>(k)];
            for (int l = k + 1; l < rank_; ++l) v -= T_(k, l) * x(l);
            x(k) = v / T_(k, k);
        }
        double cost = 0.0;
        for (int k = 0; k < rank_; ++k) {
            if (x(k) < -1e-11) return; // not a feasible vertex
            cost += std::max(x(k), 0.0) * cost_[static_cast<std::size_t>(chosen_[static_cast<std::size_t>(k)])];
        }
        best_ = std::min(best_, cost);
    }

    static constexpr double kIndepTol = 1e-9;

    Eigen::MatrixXd A_;
    std::vector<double> cost_;
    std::int64_t max_nodes_;
    int rows_ = 0, cols_ = 0, rank_ = 0;

    std::vector<Eigen::MatrixXd> reduced_; // per-depth reduced column pool
    std::vector<Eigen::VectorXd> bred_;    // per-depth reduced right-hand side
    Eigen::MatrixXd T_;                    // triangular change of basis
    std::vector<double> c_;
    std::vector<int> pivot_row_;
    std::vector<int> chosen_;
    std::int64_t nodes_ = 0;
    double best_ = 0.0;
};

} // namespace

PrimalSolution solve_mot(const DiscreteMeasure& mu, const CostModel& f, int N,
                         const CostMode& mode, const SolveBudget& budget) {
    if (N < 2) throw validation_error("solve_mot requires N >= 2 marginals");
    const int m = static_cast<int>(mu.size());
    MotLp mot = build_mot_lp(mu, f, N, mode, budget);
    if (mot.lp.n_cols() == 0)
        throw solver_error("infeasible-finite-cost: every index tuple has "
                           "infinite cost");

    SimplexOptions opts;
    opts.max_iterations = budget.max_iterations;
    LpSolution sol = solve_lp(mot.lp, opts);
    if (sol.status == LpStatus::Infeasible)
        throw solver_error("infeasible-finite-cost: the marginals cannot be "
                           "matched using finite-cost tuples only");
    if (sol.status == LpStatus::IterationLimit)
        throw solver_error("simplex iteration limit reached");
    if (sol.status != LpStatus::Optimal)
        throw solver_error("simplex failed to reach optimality");

    std::vector<CouplingEntry> entries;
    entries.reserve(sol.x.size());
    double cost = 0.0;
    for (const auto& [var, mass] : sol.x) {
        entries.push_back({mot.tuple_of_column[static_cast<std::size_t>(var)], mass});
        cost += mass * mot.lp.cost[static_cast<std::size_t>(var)];
    }

    PrimalSolution out{
        Coupling(m, N, std::move(entries), mu.weights()),
        N,
        mode,
        cost,
        sol.duals,
        0.0,
        0.0,
        {},
    };
    double dual = 0.0;
    for (std::size_t r = 0; r < sol.duals.size(); ++r)
        dual += sol.duals[r] * mot.lp.rhs[r];
    out.dual_value = dual;
    out.gap = cost - dual;
    out.diagnostics.tuple_count = TupleIndexer(m, N).total();
    out.diagnostics.finite_columns = static_cast<std::int64_t>(mot.lp.n_cols());
    out.diagnostics.lp_rows = mot.lp.n_rows;
    out.diagnostics.iterations = sol.iterations;
    out.diagnostics.phase1_iterations = sol.phase1_iterations;
    out.diagnostics.redundant_rows = sol.redundant_rows;
    return out;
}

double brute_force_oracle(const DiscreteMeasure& mu, const CostModel& f, int N,
                          const CostMode& mode, const OracleBudget& budget) {
    if (N < 2) throw validation_error("brute_force_oracle requires N >= 2");
    const int m = static_cast<int>(mu.size());
    double tuples = std::pow(static_cast<double>(m), N);
    if (tuples > 64.0 + 0.5)
        throw validation_error("brute_force_oracle only supports m^N <= 64");

    if (N == 2 && weights_uniform(mu) && m <= 9)
        return permutation_oracle(mu, f, mode);

    SolveBudget sb;
    MotLp mot = build_mot_lp(mu, f, N, mode, sb);
    if (mot.lp.n_cols() == 0)
        throw solver_error("infeasible-finite-cost: every index tuple has "
                           "infinite cost");

    const int rows = mot.lp.n_rows;
    const int cols = mot.lp.n_cols();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int k = mot.lp.col_ptr[static_cast<std::size_t>(j)];
             k < mot.lp.col_ptr[static_cast<std::size_t>(j) + 1]; ++k)
            A(mot.lp.col_rows[static_cast<std::size_t>(k)], j) =
                mot.lp.col_vals[static_cast<std::size_t>(k)];
    Eigen::VectorXd b(rows);
    for (int r = 0; r < rows; ++r) b(r) = mot.lp.rhs[static_cast<std::size_t>(r)];

    BasisEnumerator en(A, b, mot.lp.cost, budget.max_nodes);
    const double best = en.best();
    if (std::isinf(best))
        throw solver_error("infeasible-finite-cost: no non-negative basic "
                           "solution exists over finite-cost tuples");
    return best;
}

} // namespace rmot
