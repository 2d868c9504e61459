#pragma once

#include <cstdint>
#include <vector>

#include "rmot/cost.hpp"
#include "rmot/indexing.hpp"
#include "rmot/measure.hpp"

namespace rmot {

/// One atom of a coupling: a flat tuple identifier and its mass.
struct CouplingEntry {
    std::int64_t flat = 0;
    double mass = 0.0;
};

/// A sparse N-plan over {0..m-1}^N whose every marginal equals a prescribed
/// weight vector.
///
/// Invariants enforced at construction:
///   * entries are sorted by flat identifier and unique, masses positive;
///   * each of the N marginals matches the reference weights within 1e-9
///     per atom, hence total mass is 1 within 1e-9.
class Coupling {
public:
    Coupling(std::size_t m, int N, std::vector<CouplingEntry> entries,
             std::vector<double> reference_weights, double marginal_tol = 1e-9);

    std::size_t m() const { return m_; }
    int N() const { return N_; }
    const std::vector<CouplingEntry>& entries() const { return entries_; }
    const std::vector<double>& reference_weights() const { return weights_; }
    const TupleIndexer& indexer() const { return indexer_; }

    double total_mass() const;

    /// Marginal along one axis as a dense weight vector of length m.
    std::vector<double> marginal(int axis) const;

    /// Plan cost sum_entries mass * tuple_cost under the given profile/mode;
    /// +infinity if any charged tuple has infinite cost.
    double cost(const CostModel& f, const DiscreteMeasure& mu,
                const CostMode& mode = CostMode::exact()) const;

    /// Entries with mass strictly above the threshold, decoded to tuples.
    std::vector<std::pair<std::vector<int>, double>>
    support(double threshold = 1e-10) const;

    /// Symmetrized plan: average of the N! coordinate permutations.
    /// Marginals and cost (for symmetric tuple costs) are preserved.
    Coupling symmetrized() const;

private:
    std::size_t m_;
    int N_;
    TupleIndexer indexer_;
    std::vector<CouplingEntry> entries_;
    std::vector<double> weights_;
};

} // namespace rmot
