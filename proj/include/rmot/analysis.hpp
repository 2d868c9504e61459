#pragma once

#include <vector>

#include "rmot/cost.hpp"
#include "rmot/coupling.hpp"
#include "rmot/dual.hpp"
#include "rmot/measure.hpp"
#include "rmot/primal.hpp"

namespace rmot {

struct AlphaBound {
    double beta = 0.0;
    double f_beta = 0.0;    ///< f(beta)
    double threshold = 0.0; ///< (N^2 (N-1) / 2) * f(beta)
    double alpha_star = 0.0; ///< f^{-1}(threshold); 0 when vacuous
    bool vacuous = false;    ///< f(beta) <= 0 or alpha underflows to 0
};

/// Separation radius guaranteed for optimal supports: any two points of a
/// supported tuple lie at distance >= alpha_star = f^{-1}((N^2(N-1)/2) f(beta)),
/// provided closed beta-balls carry mass < 1/(N(N-1)^2).  When f(beta) <= 0
/// the bound degenerates and is flagged vacuous instead of evaluated.
AlphaBound alpha_bound(const CostModel& f, int N, double beta);

struct BetaSelection {
    double beta = 0.0;
    int exponent = 0;       ///< beta = 2^{-exponent}
    double ball_mass = 0.0; ///< worst-case closed-ball mass at that beta
    double threshold = 0.0; ///< 1 / (N (N-1)^2)
};

/// Largest radius on the geometric grid {2^{-k}, k >= 1} whose closed balls
/// centred at support points all carry mass < 1/(N(N-1)^2).  Throws
/// validation_error when no atom-mass margin exists (the largest atom
/// already reaches the threshold, so every radius fails).
BetaSelection select_beta(const DiscreteMeasure& mu, int N);

/// Non-throwing variant; returns false when the concentration condition
/// fails.
bool try_select_beta(const DiscreteMeasure& mu, int N, BetaSelection& out);

struct OffDiagonalCheck {
    double alpha = 0.0;
    double min_support_pair_distance = 0.0;
    bool passed = false; ///< min distance >= alpha * (1 - 1e-12)
};

/// Scan the support of a plan (entries with mass > mass_threshold) for its
/// smallest within-tuple pair distance and compare against alpha.
OffDiagonalCheck verify_off_diagonal(const Coupling& gamma,
                                     const DiscreteMeasure& mu, double alpha,
                                     double mass_threshold = 1e-10);

struct CostBoundCheck {
    double beta = 0.0;
    double bound = 0.0; ///< (N^3 (N-1)^2 / 4) * f(beta)
    double cost = 0.0;
    bool vacuous = false; ///< f(beta) <= 0: no positive bound is claimed
    bool ok = false;      ///< cost <= bound + 1e-9 (true when vacuous)
};

/// A-priori upper bound on the optimal cost in terms of the concentration
/// radius beta.
CostBoundCheck cost_upper_bound_check(const CostModel& f, int N, double beta,
                                      double solved_cost);

struct TruncationEquality {
    double alpha = 0.0;
    double level = 0.0;      ///< f(alpha), the cap applied to the cost
    double cost_exact = 0.0;
    double cost_capped = 0.0;
    double difference = 0.0;
    bool equal = false;       ///< |difference| <= 1e-9
    double transfer_gap = 0.0; ///< cost_exact - dual value of the capped potential
    bool potential_transfers = false; ///< capped dual is feasible and tight
                                      ///  for the exact problem (<= 1e-9)
};

/// Solve both the exact problem and the problem with the cost capped at
/// level f(alpha); optimal plans stay clear of the singularity, so the two
/// optima agree and the capped potential certifies the exact primal.
TruncationEquality truncated_equality_check(const DiscreteMeasure& mu,
                                            const CostModel& f, int N,
                                            double alpha,
                                            const SolveBudget& budget = {});

struct SweepPoint {
    double R = 0.0;
    double cost = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points; ///< ordered by increasing R
    double exact_cost = 0.0;
    double diameter = 0.0;
    bool non_increasing = false; ///< costs weakly decrease along the grid
    bool tail_exact = false;     ///< cost == exact_cost (bitwise) once R >= diameter
};

/// Optimal values of the tail-flattened problems (f frozen at f(R) beyond
/// radius R) along an increasing grid of radii.  Individual solves are
/// independent and may run on several threads; assembly is ordered by R.
SweepResult gamma_sweep(const DiscreteMeasure& mu, const CostModel& f, int N,
                        const std::vector<double>& radii,
                        const SolveBudget& budget = {}, int threads = 1);

/// Equal-mass discretizer for simple reference densities.
class DensitySampler {
  public:
    static DensitySampler uniform_1d(double a, double b);
    /// Uniform on [ax, bx] x [ay, by]; discretize(m) needs m = n^2.
    static DensitySampler uniform_2d(double ax, double bx, double ay,
                                     double by);

    int dim() const { return dim_; }
    /// m equal-weight atoms: midpoint quantiles in 1D, cell centres in 2D.
    DiscreteMeasure discretize(int m) const;
    /// Cost of the continuum cyclic-map plan x -> x + range/N (wrapping),
    /// integrated by exact midpoint quadrature on the N smooth cells.  Only
    /// available in 1D.
    double continuum_cyclic_cost(const CostModel& f, int N) const;
    bool has_continuum_oracle() const { return dim_ == 1; }

  private:
    DensitySampler() = default;
    int dim_ = 1;
    double ax_ = 0.0, bx_ = 1.0, ay_ = 0.0, by_ = 1.0;
};

struct ContinuityResult {
    std::vector<int> sizes;
    std::vector<double> costs;
    std::vector<double> doubling_diffs; ///< |cost[k+1] - cost[k]|
    bool diffs_decreasing = false;      ///< non-increasing within 1e-12
    bool has_continuum_value = false;
    double continuum_value = 0.0;
    double final_error = 0.0; ///< |last cost - continuum_value| when available
};

/// Optimal cost along a sequence of refinements of a density; reports the
/// Cauchy behaviour of the values and, in 1D, the distance to the
/// continuum cyclic-map value.
ContinuityResult marginal_continuity_experiment(const DensitySampler& sampler,
                                                const CostModel& f, int N,
                                                const std::vector<int>& sizes,
                                                const SolveBudget& budget = {});

struct CanonicalizationCheck {
    int sweeps = 0;
    bool converged = false;
    bool pointwise_nondecreasing = false; ///< final u >= initial u - 1e-12
    bool objective_nondecreasing = false;
    double objective_before = 0.0;
    double objective_after = 0.0;
};

struct DiagonalCertificate {
    BetaSelection beta;
    AlphaBound alpha;
    double cost = 0.0;
    OffDiagonalCheck off_diagonal;
    CostBoundCheck cost_bound;
    TruncationEquality truncation;
    LipschitzReport lipschitz;
    CanonicalizationCheck canonicalization;
    bool vacuous = false;
    bool passed = false;
};

/// Full certificate chain for one instance: pick beta, derive alpha_star,
/// solve, and verify support separation, the cost bound, truncated-cost
/// equality, potential transfer, canonicalization monotonicity, and the
/// potential's Lipschitz modulus.  Throws validation_error when the
/// concentration condition fails (no beta exists).
DiagonalCertificate diagonal_certificate(const DiscreteMeasure& mu,
                                         const CostModel& f, int N,
                                         const SolveBudget& budget = {});

} // namespace rmot
