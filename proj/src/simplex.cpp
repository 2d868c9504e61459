#include "rmot/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rmot/errors.hpp"

namespace rmot {

void LpProblem::add_column(const std::vector<std::pair<int, double>>& entries, double c) {
    for (const auto& [row, val] : entries) {
        if (row < 0 || row >= n_rows) {
            throw validation_error("lp column entry row out of range");
        }
        col_rows.push_back(row);
        col_vals.push_back(val);
    }
    col_ptr.push_back(static_cast<int>(col_rows.size()));
    cost.push_back(c);
}

namespace {

/// Internal signal: recomputing x_B from a fresh factorization exposed a
/// negative basic value beyond tolerance.  solve_lp retries once with a
/// near-pivot-by-pivot refactorization cadence before reporting failure.
struct feasibility_lost {};

class RevisedSimplex {
public:
    RevisedSimplex(const LpProblem& lp, const SimplexOptions& opt)
        : lp_(lp), opt_(opt), rows_(lp.n_rows), n_(lp.n_cols()),
          basic_(static_cast<std::size_t>(rows_)),
          in_basis_(static_cast<std::size_t>(n_ + rows_), 0),
          binv_(Eigen::MatrixXd::Identity(rows_, rows_)),
          xb_(Eigen::VectorXd::Zero(rows_)), b_(Eigen::VectorXd::Zero(rows_)) {
        for (int r = 0; r < rows_; ++r) {
            const double v = lp_.rhs[static_cast<std::size_t>(r)];
            if (!(std::isfinite(v) && v >= 0.0)) {
                throw validation_error("lp right-hand side must be finite and non-negative");
            }
            b_(r) = v;
            basic_[static_cast<std::size_t>(r)] = n_ + r; // artificial start basis
            in_basis_[static_cast<std::size_t>(n_ + r)] = 1;
        }
        xb_ = b_;
    }

    LpSolution run() {
        LpSolution sol;
        phase_ = 1;
        const LpStatus ph1 = iterate();
        sol.phase1_iterations = iterations_;
        if (ph1 == LpStatus::Unbounded) {
            throw solver_error("simplex phase 1 became unbounded (numerical breakdown)");
        }
        if (ph1 == LpStatus::IterationLimit) {
            sol.status = ph1;
            sol.iterations = iterations_;
            return sol;
        }
        if (phase_objective() > opt_.feasibility_tol) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = iterations_;
            return sol;
        }
        sol.redundant_rows = drive_out_artificials();
        phase_ = 2;
        const LpStatus ph2 = iterate();
        sol.status = ph2;
        sol.iterations = iterations_;
        if (ph2 != LpStatus::Optimal) {
            return sol;
        }
        refactor();
        sol.objective = phase_objective();
        const Eigen::VectorXd y = dual_vector();
        sol.duals.assign(y.data(), y.data() + rows_);
        for (int r = 0; r < rows_; ++r) {
            const int var = basic_[static_cast<std::size_t>(r)];
            const double v = xb_(r);
            if (var < n_ && v > 1e-12) {
                sol.x.emplace_back(var, v);
            }
            if (v < -opt_.feasibility_tol) {
                throw feasibility_lost{};
            }
        }
        std::sort(sol.x.begin(), sol.x.end());
        return sol;
    }

private:
    double var_cost(int var) const {
        if (phase_ == 1) {
            return var < n_ ? 0.0 : 1.0;
        }
        return var < n_ ? lp_.cost[static_cast<std::size_t>(var)] : 0.0;
    }

    double phase_objective() const {
        double obj = 0.0;
        for (int r = 0; r < rows_; ++r) {
            obj += var_cost(basic_[static_cast<std::size_t>(r)]) * xb_(r);
        }
        return obj;
    }

    Eigen::VectorXd dual_vector() const {
        Eigen::VectorXd cb(rows_);
        for (int r = 0; r < rows_; ++r) {
            cb(r) = var_cost(basic_[static_cast<std::size_t>(r)]);
        }
        return binv_.transpose() * cb;
    }

    double price(int j, const Eigen::VectorXd& y) const {
        double d = lp_.cost[static_cast<std::size_t>(j)];
        if (phase_ == 1) {
            d = 0.0;
        }
        for (int k = lp_.col_ptr[static_cast<std::size_t>(j)];
             k < lp_.col_ptr[static_cast<std::size_t>(j) + 1]; ++k) {
            d -= lp_.col_vals[static_cast<std::size_t>(k)] *
                 y(lp_.col_rows[static_cast<std::size_t>(k)]);
        }
        return d;
    }

    Eigen::VectorXd ftran(int j) const {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(rows_);
        for (int k = lp_.col_ptr[static_cast<std::size_t>(j)];
             k < lp_.col_ptr[static_cast<std::size_t>(j) + 1]; ++k) {
            w += lp_.col_vals[static_cast<std::size_t>(k)] *
                 binv_.col(lp_.col_rows[static_cast<std::size_t>(k)]);
        }
        return w;
    }

    void refactor() {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows_, rows_);
        for (int r = 0; r < rows_; ++r) {
            const int var = basic_[static_cast<std::size_t>(r)];
            if (var >= n_) {
                B(var - n_, r) = 1.0;
            } else {
                for (int k = lp_.col_ptr[static_cast<std::size_t>(var)];
                     k < lp_.col_ptr[static_cast<std::size_t>(var) + 1]; ++k) {
                    B(lp_.col_rows[static_cast<std::size_t>(k)], r) =
                        lp_.col_vals[static_cast<std::size_t>(k)];
                }
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        binv_ = lu.inverse();
        xb_ = lu.solve(b_);
        for (int r = 0; r < rows_; ++r) {
            if (xb_(r) < -opt_.feasibility_tol) {
                throw feasibility_lost{};
            }
            if (xb_(r) < 0.0) {
                xb_(r) = 0.0;
            }
        }
        pivots_since_refactor_ = 0;
    }

    /// One pivot: variable `entering` replaces the basic variable of row
    /// `leave`, with direction w = binv * A_entering and step t.
    void pivot(int entering, int leave, const Eigen::VectorXd& w, double t) {
        const double piv = w(leave);
        for (int r = 0; r < rows_; ++r) {
            if (r != leave) {
                xb_(r) -= t * w(r);
                if (xb_(r) < 0.0 && xb_(r) >= -opt_.feasibility_tol) {
                    xb_(r) = 0.0;
                }
            }
        }
        xb_(leave) = t;
        binv_.row(leave) /= piv;
        for (int r = 0; r < rows_; ++r) {
            if (r != leave && w(r) != 0.0) {
                binv_.row(r) -= w(r) * binv_.row(leave);
            }
        }
        in_basis_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(leave)])] = 0;
        basic_[static_cast<std::size_t>(leave)] = entering;
        in_basis_[static_cast<std::size_t>(entering)] = 1;
        ++pivots_since_refactor_;
        ++iterations_;
    }

    /// Entering variable under Dantzig pricing (most negative reduced cost,
    /// ties toward the smaller index), or -1 if the basis prices out optimal.
    int choose_entering(const Eigen::VectorXd& y) const {
        int best = -1;
        double best_d = -opt_.optimality_tol;
        for (int j = 0; j < n_; ++j) {
            if (in_basis_[static_cast<std::size_t>(j)]) {
                continue;
            }
            const double d = price(j, y);
            if (d < best_d) {
                best = j;
                best_d = d;
            }
        }
        return best;
    }

    /// Is eligible row a lexicographically smaller than eligible row b once
    /// both are scaled by their pivot element?  Compares the basic value
    /// first, then the basis-inverse rows column by column; remaining ties
    /// break toward the smaller row index.
    bool lex_less(int a, int b, const Eigen::VectorXd& w) const {
        const double wa = w(a);
        const double wb = w(b);
        double va = std::max(xb_(a), 0.0) / wa;
        double vb = std::max(xb_(b), 0.0) / wb;
        double scale = std::max({1.0, std::fabs(va), std::fabs(vb)});
        if (std::fabs(va - vb) > 1e-12 * scale) {
            return va < vb;
        }
        for (int c = 0; c < rows_; ++c) {
            va = binv_(a, c) / wa;
            vb = binv_(b, c) / wb;
            scale = std::max({1.0, std::fabs(va), std::fabs(vb)});
            if (std::fabs(va - vb) > 1e-12 * scale) {
                return va < vb;
            }
        }
        return a < b;
    }

    /// Leaving row for step length t: among the rows attaining the minimum
    /// ratio (within a relative tie window) pick the lexicographically
    /// smallest scaled row.  Keeping that order strictly decreasing is the
    /// classical guarantee that no basis ever repeats, so degenerate runs
    /// terminate without a separate anti-cycling mode.
    int choose_leaving(const Eigen::VectorXd& w, double t) const {
        const double tie = t + 1e-12 * (1.0 + t);
        int leave = -1;
        for (int r = 0; r < rows_; ++r) {
            if (w(r) <= opt_.pivot_tol ||
                std::max(xb_(r), 0.0) / w(r) > tie) {
                continue;
            }
            if (leave < 0 || lex_less(r, leave, w)) {
                leave = r;
            }
        }
        return leave;
    }

    LpStatus iterate() {
        bool verified = false; // optimality confirmed on a fresh factorization
        while (iterations_ < opt_.max_iterations) {
            if (pivots_since_refactor_ >= opt_.refactor_interval) {
                refactor();
            }
            const Eigen::VectorXd y = dual_vector();
            const int entering = choose_entering(y);
            if (entering < 0) {
                if (verified || pivots_since_refactor_ == 0) {
                    return LpStatus::Optimal;
                }
                refactor();
                verified = true;
                continue;
            }
            verified = false;
            const Eigen::VectorXd w = ftran(entering);
            double t = -1.0;
            for (int r = 0; r < rows_; ++r) {
                if (w(r) > opt_.pivot_tol) {
                    const double ratio = std::max(xb_(r), 0.0) / w(r);
                    if (t < 0.0 || ratio < t) {
                        t = ratio;
                    }
                }
            }
            if (t < 0.0) {
                return LpStatus::Unbounded;
            }
            pivot(entering, choose_leaving(w, t), w, t);
        }
        return LpStatus::IterationLimit;
    }

    /// After phase 1: replace basic artificials at level zero by independent
    /// original columns (zero-length pivots); rows admitting none are
    /// dependent equalities whose artificial stays basic at zero forever.
    int drive_out_artificials() {
        refactor();
        int redundant = 0;
        for (int r = 0; r < rows_; ++r) {
            if (basic_[static_cast<std::size_t>(r)] < n_) {
                continue;
            }
            xb_(r) = 0.0;
            const Eigen::VectorXd row = binv_.row(r);
            int found = -1;
            for (int j = 0; j < n_ && found < 0; ++j) {
                if (in_basis_[static_cast<std::size_t>(j)]) {
                    continue;
                }
                double d = 0.0;
                for (int k = lp_.col_ptr[static_cast<std::size_t>(j)];
                     k < lp_.col_ptr[static_cast<std::size_t>(j) + 1]; ++k) {
                    d += lp_.col_vals[static_cast<std::size_t>(k)] *
                         row(lp_.col_rows[static_cast<std::size_t>(k)]);
                }
                if (std::fabs(d) > opt_.pivot_tol) {
                    found = j;
                }
            }
            if (found >= 0) {
                pivot(found, r, ftran(found), 0.0);
            } else {
                ++redundant;
            }
        }
        return redundant;
    }

    const LpProblem& lp_;
    SimplexOptions opt_;
    int rows_;
    int n_;
    int phase_ = 1;
    std::vector<int> basic_;
    std::vector<char> in_basis_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    Eigen::VectorXd b_;
    long iterations_ = 0;
    int pivots_since_refactor_ = 0;
};

} // namespace

LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& options) {
    if (lp.cost.size() + 1 != lp.col_ptr.size() ||
        lp.rhs.size() != static_cast<std::size_t>(lp.n_rows)) {
        throw validation_error("lp problem arrays are inconsistent");
    }
    try {
        RevisedSimplex solver(lp, options);
        return solver.run();
    } catch (const feasibility_lost&) {
        // drift between refactorizations corrupted the basic values; retry
        // deterministically with a near-pivot-by-pivot rebuild cadence
        SimplexOptions tight = options;
        tight.refactor_interval = std::max(1, std::min(options.refactor_interval, 8));
        try {
            RevisedSimplex solver(lp, tight);
            return solver.run();
        } catch (const feasibility_lost&) {
            throw solver_error("simplex lost primal feasibility beyond tolerance");
        }
    }
}

} // namespace rmot
