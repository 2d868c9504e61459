#include "rmot/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "rmot/errors.hpp"
#include "rmot/indexing.hpp"

namespace rmot {

namespace {

constexpr double kQuantileTol = 1e-12;

std::vector<int> sorted_order_int(const DiscreteMeasure& mu) {
    const auto order = mu.sorted_order_1d();
    return std::vector<int>(order.begin(), order.end());
}

std::vector<double> cumulative_weights(const DiscreteMeasure& mu,
                                       const std::vector<int>& order) {
    std::vector<double> cdf(order.size());
    long double acc = 0.0L;
    for (std::size_t r = 0; r < order.size(); ++r) {
        acc += mu.weight(order[r]);
        cdf[r] = static_cast<double>(acc);
    }
    return cdf;
}

int quantile_rank(const std::vector<double>& cdf, double p) {
    for (std::size_t r = 0; r < cdf.size(); ++r)
        if (cdf[r] >= p - kQuantileTol) return static_cast<int>(r);
    return static_cast<int>(cdf.size()) - 1; // p == 1 up to rounding
}

} // namespace

int quantile_index(const DiscreteMeasure& mu, double p) {
    if (mu.dim() != 1)
        throw validation_error("quantile_index requires a 1D measure");
    if (!(p >= -kQuantileTol) || !(p <= 1.0 + kQuantileTol))
        throw validation_error("quantile argument must lie in [0, 1]");
    const auto order = sorted_order_int(mu);
    const auto cdf = cumulative_weights(mu, order);
    return order[static_cast<std::size_t>(quantile_rank(cdf, p))];
}

CyclicMap1D cyclic_map_1d(const DiscreteMeasure& mu, int N) {
    if (mu.dim() != 1)
        throw validation_error("cyclic_map_1d requires a 1D measure");
    if (N < 2) throw validation_error("cyclic_map_1d requires N >= 2");

    CyclicMap1D out;
    out.N = N;
    out.order = sorted_order_int(mu);
    out.cdf = cumulative_weights(mu, out.order);
    const int m = static_cast<int>(mu.size());
    out.target.assign(static_cast<std::size_t>(m), -1);

    const double wrap_threshold = static_cast<double>(N - 1) / N;
    for (int r = 0; r < m; ++r) {
        const double F = out.cdf[static_cast<std::size_t>(r)];
        double p;
        if (F <= wrap_threshold + kQuantileTol)
            p = F + 1.0 / N;
        else
            p = F + 1.0 / N - 1.0;
        const int tr = quantile_rank(out.cdf, p);
        out.target[static_cast<std::size_t>(out.order[static_cast<std::size_t>(r)])] =
            out.order[static_cast<std::size_t>(tr)];
    }

    // push-forward check: sum of source weights landing on each atom
    std::vector<double> pushed(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
        pushed[static_cast<std::size_t>(out.target[static_cast<std::size_t>(i)])] +=
            mu.weight(i);
    out.pushforward_ok = true;
    for (int i = 0; i < m; ++i)
        if (std::abs(pushed[static_cast<std::size_t>(i)] - mu.weight(i)) > 1e-9) {
            out.pushforward_ok = false;
            break;
        }

    // N-fold iteration should return every atom to itself
    out.n_cycle_identity = true;
    for (int i = 0; i < m; ++i) {
        int j = i;
        for (int k = 0; k < N; ++k) j = out.target[static_cast<std::size_t>(j)];
        if (j != i) {
            out.n_cycle_identity = false;
            break;
        }
    }
    return out;
}

Coupling plan_from_cyclic_map(const DiscreteMeasure& mu, int N,
                              const CyclicMap1D& map) {
    if (!map.pushforward_ok)
        throw validation_error("cyclic map does not push the marginal onto "
                               "itself; no valid plan exists");
    const int m = static_cast<int>(mu.size());
    if (map.target.size() != static_cast<std::size_t>(m))
        throw validation_error("cyclic map size does not match the measure");
    TupleIndexer indexer(m, N);
    std::vector<CouplingEntry> entries;
    entries.reserve(static_cast<std::size_t>(m));
    std::vector<int> tuple(static_cast<std::size_t>(N));
    for (int i = 0; i < m; ++i) {
        int j = i;
        for (int k = 0; k < N; ++k) {
            tuple[static_cast<std::size_t>(k)] = j;
            j = map.target[static_cast<std::size_t>(j)];
        }
        entries.push_back({indexer.encode(tuple), mu.weight(i)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const CouplingEntry& a, const CouplingEntry& b) {
                  return a.flat < b.flat;
              });
    return Coupling(m, N, std::move(entries), mu.weights());
}

namespace {

struct AxisDiff {
    double fwd = std::numeric_limits<double>::quiet_NaN();
    double bwd = std::numeric_limits<double>::quiet_NaN();
    double spacing = 0.0; // larger of the two adjacent grid spacings
};

// central difference with kink detection; one-sided at the two ends
bool axis_gradient(const AxisDiff& d, double floor, bool one_dim,
                   double& grad) {
    const bool has_f = !std::isnan(d.fwd);
    const bool has_b = !std::isnan(d.bwd);
    if (has_f && has_b) {
        grad = 0.5 * (d.fwd + d.bwd);
        if (one_dim) {
            // In 1D the slope's reciprocal IS the transport displacement,
            // so test reliability in target space: the two one-sided target
            // estimates must agree to within 1.5 grid cells.  At a kink of u
            // the one-sided slopes belong to different branches and their
            // targets disagree by many cells.
            const double af = std::abs(d.fwd), ab = std::abs(d.bwd);
            if (af <= floor || ab <= floor)
                return std::max(af, ab) <= floor; // let the norm floor decide
            return std::abs(1.0 / d.fwd - 1.0 / d.bwd) <= 1.5 * d.spacing;
        }
        // 2D: per-axis reciprocals are not displacements; flag only a
        // clear slope-branch mix
        return std::abs(d.fwd - d.bwd) <=
               0.5 * std::max({std::abs(d.fwd), std::abs(d.bwd), floor});
    }
    grad = has_f ? d.fwd : d.bwd;
    return true;
}

} // namespace

MapRecovery recover_map_n2(const DiscreteMeasure& mu,
                           const std::vector<double>& u) {
    if (u.size() != mu.size())
        throw validation_error("potential length does not match atom count");
    for (double v : u)
        if (!std::isfinite(v))
            throw validation_error("potential entries must be finite");
    const int dim = static_cast<int>(mu.dim());
    if (dim != 1 && dim != 2)
        throw validation_error("recover_map_n2 supports dimensions 1 and 2");
    const int m = static_cast<int>(mu.size());

    double umin = u[0], umax = u[0];
    for (double v : u) {
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }
    const double floor = 1e-8 * std::max(1.0, umax - umin);

    // per-atom, per-axis forward and backward difference quotients
    std::vector<std::vector<AxisDiff>> diffs(
        static_cast<std::size_t>(m),
        std::vector<AxisDiff>(static_cast<std::size_t>(dim)));

    if (dim == 1) {
        const auto order = sorted_order_int(mu);
        for (int r = 0; r + 1 < m; ++r) {
            const int a = order[static_cast<std::size_t>(r)];
            const int b = order[static_cast<std::size_t>(r) + 1];
            const double dx = mu.point(b)[0] - mu.point(a)[0];
            const double slope = (u[static_cast<std::size_t>(b)] -
                                  u[static_cast<std::size_t>(a)]) /
                                 dx;
            AxisDiff& da = diffs[static_cast<std::size_t>(a)][0];
            AxisDiff& db = diffs[static_cast<std::size_t>(b)][0];
            da.fwd = slope;
            db.bwd = slope;
            da.spacing = std::max(da.spacing, dx);
            db.spacing = std::max(db.spacing, dx);
        }
    } else {
        // the atoms must form a complete axis-aligned tensor grid
        std::map<double, int> xs, ys;
        for (int i = 0; i < m; ++i) {
            xs.emplace(mu.point(i)[0], 0);
            ys.emplace(mu.point(i)[1], 0);
        }
        int cx = 0, cy = 0;
        for (auto& kv : xs) kv.second = cx++;
        for (auto& kv : ys) kv.second = cy++;
        if (static_cast<std::int64_t>(cx) * cy != m)
            throw validation_error("atoms do not form a complete tensor grid");
        std::vector<int> atom_at(static_cast<std::size_t>(m), -1);
        for (int i = 0; i < m; ++i) {
            const int ix = xs[mu.point(i)[0]];
            const int iy = ys[mu.point(i)[1]];
            atom_at[static_cast<std::size_t>(ix) * cy + iy] = i;
        }
        for (int idx = 0; idx < m; ++idx)
            if (atom_at[static_cast<std::size_t>(idx)] < 0)
                throw validation_error("atoms do not form a complete tensor grid");

        auto link = [&](int a, int b, int axis) {
            const double dx = mu.point(b)[axis] - mu.point(a)[axis];
            const double slope =
                (u[static_cast<std::size_t>(b)] - u[static_cast<std::size_t>(a)]) / dx;
            diffs[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)].fwd = slope;
            diffs[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)].bwd = slope;
        };
        for (int ix = 0; ix < cx; ++ix)
            for (int iy = 0; iy < cy; ++iy) {
                const int a = atom_at[static_cast<std::size_t>(ix) * cy + iy];
                if (ix + 1 < cx)
                    link(a, atom_at[static_cast<std::size_t>(ix + 1) * cy + iy], 0);
                if (iy + 1 < cy)
                    link(a, atom_at[static_cast<std::size_t>(ix) * cy + iy + 1], 1);
            }
    }

    MapRecovery out;
    out.gradient_floor = floor;
    out.gradient.reserve(static_cast<std::size_t>(m));
    out.target.reserve(static_cast<std::size_t>(m));
    out.defined.assign(static_cast<std::size_t>(m), true);
    for (int i = 0; i < m; ++i) {
        Point g;
        g.coords.assign(static_cast<std::size_t>(dim), 0.0);
        bool ok = true;
        for (int a = 0; a < dim; ++a)
            ok = ok && axis_gradient(diffs[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(a)],
                                     floor, dim == 1,
                                     g.coords[static_cast<std::size_t>(a)]);
        double norm2 = 0.0;
        for (double c : g.coords) norm2 += c * c;
        if (norm2 <= floor * floor) ok = false; // map target at infinity

        Point t = mu.point(i);
        if (ok)
            for (int a = 0; a < dim; ++a)
                t.coords[static_cast<std::size_t>(a)] +=
                    g.coords[static_cast<std::size_t>(a)] / norm2;
        out.gradient.push_back(std::move(g));
        out.target.push_back(std::move(t));
        out.defined[static_cast<std::size_t>(i)] = ok;
        if (!ok) ++out.undefined_count;
    }
    return out;
}

} // namespace rmot
