#pragma once

#include <cstdint>
#include <vector>

#include "rmot/errors.hpp"

namespace rmot {

/// m^N as a 64-bit integer; throws solver_error("tuple budget exceeded")
/// when the product passes the given limit.
inline std::int64_t checked_tuple_count(std::size_t m, int N, std::int64_t limit) {
    std::int64_t total = 1;
    for (int k = 0; k < N; ++k) {
        if (total > limit / static_cast<std::int64_t>(m)) {
            throw solver_error("tuple budget exceeded: m^N is larger than the variable budget");
        }
        total *= static_cast<std::int64_t>(m);
    }
    if (total > limit) {
        throw solver_error("tuple budget exceeded: m^N is larger than the variable budget");
    }
    return total;
}

/// Bijection between index tuples in {0..m-1}^N and flat identifiers in
/// [0, m^N), row-major with axis 0 most significant.  The flat order is the
/// canonical deterministic ordering used for serialized couplings.
class TupleIndexer {
public:
    TupleIndexer(std::size_t m, int N, std::int64_t limit = (std::int64_t{1} << 62))
        : m_(static_cast<std::int64_t>(m)), N_(N),
          total_(checked_tuple_count(m, N, limit)) {
        if (m == 0 || N < 1) {
            throw validation_error("tuple indexer needs m >= 1 and N >= 1");
        }
    }

    std::int64_t m() const { return m_; }
    int N() const { return N_; }
    std::int64_t total() const { return total_; }

    std::int64_t encode(const std::vector<int>& tuple) const {
        std::int64_t flat = 0;
        for (int k = 0; k < N_; ++k) {
            flat = flat * m_ + tuple[static_cast<std::size_t>(k)];
        }
        return flat;
    }

    void decode(std::int64_t flat, std::vector<int>& tuple) const {
        tuple.resize(static_cast<std::size_t>(N_));
        for (int k = N_ - 1; k >= 0; --k) {
            tuple[static_cast<std::size_t>(k)] = static_cast<int>(flat % m_);
            flat /= m_;
        }
    }

    std::vector<int> decode(std::int64_t flat) const {
        std::vector<int> tuple;
        decode(flat, tuple);
        return tuple;
    }

    /// Index at a single axis without decoding the whole tuple.
    int axis_index(std::int64_t flat, int axis) const {
        for (int k = N_ - 1; k > axis; --k) {
            flat /= m_;
        }
        return static_cast<int>(flat % m_);
    }

    /// Advances an index tuple in flat (row-major) order.
    /// Returns false once the tuple wraps past the last one.
    bool next(std::vector<int>& tuple) const {
        for (int k = N_ - 1; k >= 0; --k) {
            auto& v = tuple[static_cast<std::size_t>(k)];
            if (++v < m_) {
                return true;
            }
            v = 0;
        }
        return false;
    }

private:
    std::int64_t m_;
    int N_;
    std::int64_t total_;
};

} // namespace rmot
