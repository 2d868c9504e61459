#pragma once

#include <vector>

#include "rmot/coupling.hpp"
#include "rmot/geometry.hpp"
#include "rmot/measure.hpp"

namespace rmot {

/// Left-continuous quantile of a 1D discrete measure: the smallest atom
/// (in increasing order) whose cumulative weight reaches p, with a 1e-12
/// tolerance on the comparison.  Returns the atom index.  p must lie in
/// [0, 1] up to 1e-12.
int quantile_index(const DiscreteMeasure& mu, double p);

struct CyclicMap1D {
    int N = 0;                 ///< number of marginals the map was built for
    std::vector<int> order;    ///< atom indices in increasing position
    std::vector<double> cdf;   ///< cumulative weights in that order
    std::vector<int> target;   ///< target[i] = atom index of T(x_i)
    bool pushforward_ok = false;  ///< T#mu == mu within 1e-9
    bool n_cycle_identity = false; ///< T^N == identity on atom indices
};

/// The interval-exchange construction T = F^{-1}(F(x) + 1/N mod 1) on the
/// atoms of a 1D measure: mass in the lower (N-1)/N quantile range moves up
/// by 1/N, the top 1/N wraps to the bottom.  For uniform weights with N | m
/// this is the index shift j -> (j + m/N) mod m in sorted order and both
/// flags hold; for general weights the flags report whether the atom map
/// still permutes the measure.
CyclicMap1D cyclic_map_1d(const DiscreteMeasure& mu, int N);

/// The order-N Monge plan generated by iterating the cyclic map:
/// each atom j contributes mass w_j to the tuple (j, T(j), ..., T^{N-1}(j)).
/// Requires pushforward_ok (otherwise the tuple measure does not have mu as
/// its marginals and this throws validation_error).
Coupling plan_from_cyclic_map(const DiscreteMeasure& mu, int N,
                              const CyclicMap1D& map);

struct MapRecovery {
    std::vector<Point> gradient; ///< finite-difference gradient of u
    std::vector<Point> target;   ///< T(x) = x + grad / |grad|^2
    std::vector<bool> defined;   ///< false where the gradient is ambiguous
    int undefined_count = 0;
    double gradient_floor = 0.0;
};

/// Reconstruct the two-marginal transport map from a potential sampled on
/// the atoms, using the first-order condition of the logarithmic pair cost:
/// at an interior maximum of  u(y) + log|x - y|  the gradient satisfies
/// grad u(x) = (y - x)/|y - x|^2, hence  T(x) = x + grad u / |grad u|^2.
///
/// The gradient uses central differences on a 1D sorted axis or a complete
/// 2D tensor grid (one-sided at boundaries).  A point is marked undefined
/// rather than extrapolated when the finite differences are unreliable:
///  - in 1D, when the two one-sided target estimates x + 1/fwd and
///    x + 1/bwd disagree by more than 1.5 local grid spacings (at a kink
///    of u the map jumps, and the one-sided slopes belong to different
///    branches);
///  - in 2D, when forward and backward slopes along an axis disagree by
///    more than half their magnitude;
///  - in any dimension, when |grad u| falls below a floor of
///    1e-8 * max(1, range of u), where the target formula diverges.
MapRecovery recover_map_n2(const DiscreteMeasure& mu,
                           const std::vector<double>& u);

} // namespace rmot
