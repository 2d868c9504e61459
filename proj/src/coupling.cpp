#include "rmot/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rmot/errors.hpp"

namespace rmot {

Coupling::Coupling(std::size_t m, int N, std::vector<CouplingEntry> entries,
                   std::vector<double> reference_weights, double marginal_tol)
    : m_(m), N_(N), indexer_(m, N), entries_(std::move(entries)),
      weights_(std::move(reference_weights)) {
    if (weights_.size() != m_) {
        throw validation_error("coupling: reference weight vector has wrong length");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& e = entries_[k];
        if (e.flat < 0 || e.flat >= indexer_.total()) {
            throw validation_error("coupling: tuple identifier out of range");
        }
        if (!(std::isfinite(e.mass) && e.mass > 0.0)) {
            throw validation_error("coupling: masses must be strictly positive");
        }
        if (k > 0 && entries_[k - 1].flat >= e.flat) {
            throw validation_error("coupling: entries must be sorted and unique");
        }
    }
    for (int axis = 0; axis < N_; ++axis) {
        const std::vector<double> got = marginal(axis);
        for (std::size_t i = 0; i < m_; ++i) {
            if (std::fabs(got[i] - weights_[i]) > marginal_tol) {
                throw validation_error("coupling: a marginal deviates from the reference weights");
            }
        }
    }
}

double Coupling::total_mass() const {
    long double s = 0.0L;
    for (const auto& e : entries_) {
        s += e.mass;
    }
    return static_cast<double>(s);
}

std::vector<double> Coupling::marginal(int axis) const {
    if (axis < 0 || axis >= N_) {
        throw validation_error("coupling: marginal axis out of range");
    }
    std::vector<double> out(m_, 0.0);
    for (const auto& e : entries_) {
        out[static_cast<std::size_t>(indexer_.axis_index(e.flat, axis))] += e.mass;
    }
    return out;
}

double Coupling::cost(const CostModel& f, const DiscreteMeasure& mu,
                      const CostMode& mode) const {
    if (mu.size() != m_) {
        throw validation_error("coupling: measure size mismatch");
    }
    const std::vector<double> table = pair_cost_table(f, mu.points(), mode);
    std::vector<int> tuple;
    double total = 0.0;
    for (const auto& e : entries_) {
        indexer_.decode(e.flat, tuple);
        double c = 0.0;
        for (int a = 0; a + 1 < N_; ++a) {
            for (int b = a + 1; b < N_; ++b) {
                c += table[static_cast<std::size_t>(tuple[a]) * m_ +
                           static_cast<std::size_t>(tuple[b])];
            }
        }
        total += e.mass * c;
    }
    return total;
}

std::vector<std::pair<std::vector<int>, double>>
Coupling::support(double threshold) const {
    std::vector<std::pair<std::vector<int>, double>> out;
    for (const auto& e : entries_) {
        if (e.mass > threshold) {
            out.emplace_back(indexer_.decode(e.flat), e.mass);
        }
    }
    return out;
}

Coupling Coupling::symmetrized() const {
    // enumerate the N! coordinate permutations once
    std::vector<int> perm(static_cast<std::size_t>(N_));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const double scale = 1.0 / static_cast<double>(perms.size());
    std::map<std::int64_t, double> acc;
    std::vector<int> tuple, image(static_cast<std::size_t>(N_));
    for (const auto& e : entries_) {
        indexer_.decode(e.flat, tuple);
        for (const auto& p : perms) {
            for (int k = 0; k < N_; ++k) {
                image[static_cast<std::size_t>(k)] =
                    tuple[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])];
            }
            acc[indexer_.encode(image)] += e.mass * scale;
        }
    }
    std::vector<CouplingEntry> entries;
    entries.reserve(acc.size());
    for (const auto& [flat, mass] : acc) {
        if (mass > 0.0) {
            entries.push_back({flat, mass});
        }
    }
    return Coupling(m_, N_, std::move(entries), weights_);
}

} // namespace rmot
