#pragma once

#include <cstddef>
#include <vector>

#include "rmot/cost.hpp"
#include "rmot/geometry.hpp"

namespace rmot {

/// A finitely supported probability measure on R^d.
///
/// Invariants enforced at construction (the object is immutable afterwards):
///   * at least one atom, all atoms share the same dimension and are finite;
///   * atoms are pairwise distinct (positive distance);
///   * weights are strictly positive and sum to 1 within 1e-12.
/// Inputs violating the weight-sum tolerance are rejected, not renormalized;
/// use normalized_weights / merge_duplicate_points to repair raw data first.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<Point> points, std::vector<double> weights);

    /// Equal weights 1/m on the given atoms.
    static DiscreteMeasure uniform(std::vector<Point> points);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return points_.front().dim(); }
    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const Point& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    double max_atom_mass() const;

    /// Mass of the closed ball of the given radius around a point.
    double ball_mass(const Point& center, double radius) const;

    /// max over support points of ball_mass(atom, radius); closed balls
    /// centered at atoms give a conservative concentration estimate.
    double max_closed_ball_mass(double radius) const;

    /// Smallest distance between two distinct atoms (positive by invariant).
    double min_pair_distance() const;

    /// Largest distance between two atoms (0 for a single atom).
    double diameter() const;

    /// Indices of the atoms sorted by coordinate; requires dim() == 1.
    std::vector<std::size_t> sorted_order_1d() const;

private:
    std::vector<Point> points_;
    std::vector<double> weights_;
};

/// Scales raw weights so they sum to exactly 1 (high-precision accumulation).
/// Throws validation_error if any weight is non-positive or non-finite.
std::vector<double> normalized_weights(const std::vector<double>& weights);

/// Merges exactly coincident points, summing their weights.  Returns the
/// deduplicated (points, weights) pair, preserving first-occurrence order.
std::pair<std::vector<Point>, std::vector<double>>
merge_duplicate_points(std::vector<Point> points, std::vector<double> weights);

/// Result of the tail-moment check: value of the truncated interaction sum
/// sum_{d(x,o) >= r0} w(x) f(2 d(x,o)) and whether it is finite.
struct MomentCheck {
    bool ok = false;
    double value = 0.0;
};

/// Concentration and moment diagnostics for an N-body problem on a measure.
struct AssumptionReport {
    int N = 0;
    double max_atom_mass = 0.0;
    double concentration_threshold = 0.0; ///< 1 / (N (N-1)^2)
    bool condition_a_ok = false;          ///< max_atom_mass < threshold

    bool has_moment = false; ///< whether the fields below were evaluated
    Point base_point;        ///< reference point o of the moment check
    double moment_radius = 0.0;
    double moment_value = 0.0;
    bool condition_b_ok = false;
};

/// Small-concentration check: every atom must carry less than
/// 1/(N (N-1)^2) of the total mass.  Requires N >= 2.
AssumptionReport check_small_concentration(const DiscreteMeasure& mu, int N);

/// Tail-moment check around base point o with cutoff radius r0 > 0.
MomentCheck check_moment_condition(const DiscreteMeasure& mu, const CostModel& f,
                                   const Point& o, double r0);

/// Both checks combined into one report.
AssumptionReport check_assumptions(const DiscreteMeasure& mu, const CostModel& f,
                                   int N, const Point& o, double r0);

} // namespace rmot
