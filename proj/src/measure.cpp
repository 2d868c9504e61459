#include "rmot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmot/errors.hpp"

namespace rmot {

namespace {

constexpr double kWeightSumTol = 1e-12;

long double sum_weights(const std::vector<double>& w) {
    long double s = 0.0L;
    for (double v : w) {
        s += v;
    }
    return s;
}

void validate_weight_entries(const std::vector<double>& weights) {
    for (double w : weights) {
        if (!(std::isfinite(w) && w > 0.0)) {
            throw validation_error("weights must be strictly positive and finite");
        }
    }
}

} // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty()) {
        throw validation_error("a measure needs at least one atom");
    }
    if (points_.size() != weights_.size()) {
        throw validation_error("points and weights differ in length");
    }
    const std::size_t d = points_.front().dim();
    if (d == 0) {
        throw validation_error("atoms must have dimension >= 1");
    }
    for (const Point& p : points_) {
        if (p.dim() != d) {
            throw validation_error("all atoms must share one dimension");
        }
        validate_finite(p);
    }
    validate_weight_entries(weights_);
    const long double total = sum_weights(weights_);
    if (std::fabs(static_cast<double>(total - 1.0L)) > kWeightSumTol) {
        throw validation_error("weights must sum to 1 within 1e-12 (normalize first)");
    }
    // distinctness: equal points are lexicographic neighbours after sorting
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points_[a].coords < points_[b].coords;
    });
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        if (points_[order[k]] == points_[order[k + 1]]) {
            throw validation_error("atoms must be pairwise distinct (merge duplicates first)");
        }
    }
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> points) {
    const std::size_t m = points.size();
    if (m == 0) {
        throw validation_error("a measure needs at least one atom");
    }
    std::vector<double> w(m, 1.0 / static_cast<double>(m));
    return DiscreteMeasure(std::move(points), std::move(w));
}

double DiscreteMeasure::max_atom_mass() const {
    return *std::max_element(weights_.begin(), weights_.end());
}

double DiscreteMeasure::ball_mass(const Point& center, double radius) const {
    if (!(std::isfinite(radius) && radius >= 0.0)) {
        throw validation_error("ball radius must be finite and non-negative");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (distance(points_[i], center) <= radius) {
            mass += weights_[i];
        }
    }
    return mass;
}

double DiscreteMeasure::max_closed_ball_mass(double radius) const {
    double best = 0.0;
    for (const Point& p : points_) {
        best = std::max(best, ball_mass(p, radius));
    }
    return best;
}

double DiscreteMeasure::min_pair_distance() const {
    if (points_.size() < 2) {
        return plus_infinity();
    }
    double best = plus_infinity();
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            best = std::min(best, distance(points_[i], points_[j]));
        }
    }
    return best;
}

double DiscreteMeasure::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            best = std::max(best, distance(points_[i], points_[j]));
        }
    }
    return best;
}

std::vector<std::size_t> DiscreteMeasure::sorted_order_1d() const {
    if (dim() != 1) {
        throw validation_error("sorted_order_1d requires a one-dimensional measure");
    }
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points_[a][0] < points_[b][0];
    });
    return order;
}

std::vector<double> normalized_weights(const std::vector<double>& weights) {
    if (weights.empty()) {
        throw validation_error("cannot normalize an empty weight vector");
    }
    validate_weight_entries(weights);
    const long double total = sum_weights(weights);
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out[i] = static_cast<double>(weights[i] / total);
    }
    return out;
}

std::pair<std::vector<Point>, std::vector<double>>
merge_duplicate_points(std::vector<Point> points, std::vector<double> weights) {
    if (points.size() != weights.size()) {
        throw validation_error("points and weights differ in length");
    }
    std::vector<Point> out_p;
    std::vector<double> out_w;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool merged = false;
        for (std::size_t k = 0; k < out_p.size(); ++k) {
            if (out_p[k] == points[i]) {
                out_w[k] += weights[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            out_p.push_back(std::move(points[i]));
            out_w.push_back(weights[i]);
        }
    }
    return {std::move(out_p), std::move(out_w)};
}

AssumptionReport check_small_concentration(const DiscreteMeasure& mu, int N) {
    if (N < 2) {
        throw validation_error("the marginal count N must be at least 2");
    }
    AssumptionReport report;
    report.N = N;
    report.max_atom_mass = mu.max_atom_mass();
    const double n = static_cast<double>(N);
    report.concentration_threshold = 1.0 / (n * (n - 1.0) * (n - 1.0));
    report.condition_a_ok = report.max_atom_mass < report.concentration_threshold;
    return report;
}

MomentCheck check_moment_condition(const DiscreteMeasure& mu, const CostModel& f,
                                   const Point& o, double r0) {
    if (!(std::isfinite(r0) && r0 > 0.0)) {
        throw validation_error("moment cutoff r0 must be positive and finite");
    }
    validate_finite(o);
    if (o.dim() != mu.dim()) {
        throw validation_error("moment base point dimension mismatch");
    }
    MomentCheck check;
    double value = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double d = distance(mu.point(i), o);
        if (d >= r0) {
            value += mu.weight(i) * f.eval(2.0 * d);
        }
    }
    check.value = value;
    check.ok = std::isfinite(value);
    return check;
}

AssumptionReport check_assumptions(const DiscreteMeasure& mu, const CostModel& f,
                                   int N, const Point& o, double r0) {
    AssumptionReport report = check_small_concentration(mu, N);
    const MomentCheck moment = check_moment_condition(mu, f, o, r0);
    report.has_moment = true;
    report.base_point = o;
    report.moment_radius = r0;
    report.moment_value = moment.value;
    report.condition_b_ok = moment.ok;
    return report;
}

} // namespace rmot
