#include "rmot/cost.hpp"

#include <algorithm>
#include <cmath>

#include "rmot/errors.hpp"

namespace rmot {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_positive_finite(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw validation_error(std::string(name) + " must be positive and finite");
    }
}

} // namespace

CostModel CostModel::log_cost() {
    CostModel m;
    m.family_ = CostFamily::Log;
    return m;
}

CostModel CostModel::riesz(double s) {
    require_positive_finite(s, "riesz exponent s");
    CostModel m;
    m.family_ = CostFamily::Riesz;
    m.s_ = s;
    return m;
}

CostModel CostModel::wire(double eps0, double s0) {
    require_positive_finite(eps0, "wire eps0");
    require_positive_finite(s0, "wire s0");
    CostModel m;
    m.family_ = CostFamily::Wire;
    m.eps0_ = eps0;
    m.s0_ = s0;
    m.wire_k_ = 1.0 / (2.0 * kPi * eps0);
    return m;
}

CostModel CostModel::tabulated(std::vector<double> t, std::vector<double> f) {
    if (t.size() != f.size() || t.size() < 2) {
        throw validation_error("tabulated profile needs >= 2 samples with matching sizes");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(f[i])) {
            throw validation_error("tabulated profile samples must be finite");
        }
        if (t[i] <= 0.0) {
            throw validation_error("tabulated abscissae must be positive");
        }
        if (i > 0 && !(t[i] > t[i - 1])) {
            throw validation_error("tabulated abscissae must be strictly increasing");
        }
        if (i > 0 && !(f[i] < f[i - 1])) {
            throw validation_error("tabulated values must be strictly decreasing");
        }
    }
    CostModel m;
    m.family_ = CostFamily::Tabulated;
    m.tab_t_ = std::move(t);
    m.tab_f_ = std::move(f);
    m.tab_slope0_ = (m.tab_f_[0] - m.tab_f_[1]) / (m.tab_t_[1] - m.tab_t_[0]);
    m.tab_sup_ = m.tab_f_[0] + m.tab_t_[0] * m.tab_slope0_;
    return m;
}

double CostModel::eval(double t) const {
    if (std::isnan(t) || t < 0.0) {
        throw validation_error("cost profile evaluated at a negative or NaN distance");
    }
    if (t == 0.0) {
        return plus_infinity();
    }
    switch (family_) {
        case CostFamily::Log:
            return -std::log(t);
        case CostFamily::Riesz:
            return std::pow(t, -s_);
        case CostFamily::Wire:
            return -wire_k_ * std::log(t / s0_);
        case CostFamily::Tabulated: {
            if (t < tab_t_.front()) {
                return tab_f_.front() + (tab_t_.front() - t) * tab_slope0_;
            }
            if (t >= tab_t_.back()) {
                return tab_f_.back();
            }
            const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
            const std::size_t hi = static_cast<std::size_t>(it - tab_t_.begin());
            const std::size_t lo = hi - 1;
            const double w = (t - tab_t_[lo]) / (tab_t_[hi] - tab_t_[lo]);
            return tab_f_[lo] + w * (tab_f_[hi] - tab_f_[lo]);
        }
    }
    throw validation_error("unknown cost family");
}

double CostModel::left_inverse(double y) const {
    if (std::isnan(y)) {
        throw validation_error("left inverse of NaN");
    }
    switch (family_) {
        case CostFamily::Log:
            // range is all of R
            return std::exp(-y);
        case CostFamily::Riesz:
            if (y < 0.0) {
                throw validation_error("riesz left inverse: value below the range");
            }
            if (y == 0.0) {
                return plus_infinity();
            }
            return std::pow(y, -1.0 / s_);
        case CostFamily::Wire:
            return s0_ * std::exp(-y / wire_k_);
        case CostFamily::Tabulated: {
            if (y < tab_f_.back() || y > tab_sup_) {
                throw validation_error("tabulated left inverse: value outside the range closure");
            }
            if (y == tab_sup_) {
                return 0.0;
            }
            if (y == tab_f_.back()) {
                // the level continues as a constant past the last sample; the
                // left-most point attaining it is the last abscissa
                return tab_t_.back();
            }
            if (y > tab_f_.front()) {
                return tab_t_.front() - (y - tab_f_.front()) / tab_slope0_;
            }
            // find the segment with f[hi] <= y <= f[lo] (values decrease)
            const auto it = std::lower_bound(tab_f_.begin(), tab_f_.end(), y,
                                             [](double sample, double v) { return sample > v; });
            std::size_t hi = static_cast<std::size_t>(it - tab_f_.begin());
            if (hi == 0) {
                hi = 1;
            }
            const std::size_t lo = hi - 1;
            const double w = (tab_f_[lo] - y) / (tab_f_[lo] - tab_f_[hi]);
            return tab_t_[lo] + w * (tab_t_[hi] - tab_t_[lo]);
        }
    }
    throw validation_error("unknown cost family");
}

double CostModel::slope_bound(double alpha) const {
    require_positive_finite(alpha, "slope bound alpha");
    switch (family_) {
        case CostFamily::Log:
            return 1.0 / alpha;
        case CostFamily::Riesz:
            return s_ * std::pow(alpha, -s_ - 1.0);
        case CostFamily::Wire:
            return wire_k_ / alpha;
        case CostFamily::Tabulated: {
            double best = 0.0;
            if (alpha < tab_t_.front()) {
                best = tab_slope0_;
            }
            for (std::size_t i = 0; i + 1 < tab_t_.size(); ++i) {
                if (tab_t_[i + 1] <= alpha) {
                    continue;
                }
                const double slope =
                    (tab_f_[i] - tab_f_[i + 1]) / (tab_t_[i + 1] - tab_t_[i]);
                best = std::max(best, slope);
            }
            return best;
        }
    }
    throw validation_error("unknown cost family");
}

std::string CostModel::family_name() const {
    switch (family_) {
        case CostFamily::Log: return "log";
        case CostFamily::Riesz: return "riesz";
        case CostFamily::Wire: return "wire";
        case CostFamily::Tabulated: return "tabulated";
    }
    return "unknown";
}

CostMode CostMode::below(double R) {
    if (!(std::isfinite(R) && R > 0.0)) {
        throw validation_error("below-truncation radius must be positive and finite");
    }
    return {Kind::Below, R};
}

CostMode CostMode::above(double level) {
    if (!std::isfinite(level)) {
        throw validation_error("above-truncation level must be finite");
    }
    return {Kind::Above, level};
}

double mode_eval(const CostModel& f, const CostMode& mode, double t) {
    switch (mode.kind) {
        case CostMode::Kind::Exact:
            return f.eval(t);
        case CostMode::Kind::Below:
            return t < mode.param ? f.eval(t) : f.eval(mode.param);
        case CostMode::Kind::Above:
            return std::min(mode.param, f.eval(t));
    }
    throw validation_error("unknown cost mode");
}

double f_eval(const CostModel& f, double t) { return f.eval(t); }

double f_truncate_below(const CostModel& f, double R, double t) {
    return mode_eval(f, CostMode::below(R), t);
}

double f_truncate_above(const CostModel& f, double level, double t) {
    return mode_eval(f, CostMode::above(level), t);
}

double f_left_inverse(const CostModel& f, double y) { return f.left_inverse(y); }

double tuple_cost(const CostModel& f, const std::vector<Point>& points,
                  const CostMode& mode) {
    if (points.size() < 2) {
        throw validation_error("tuple_cost needs at least two points");
    }
    double total = 0.0;
    for (std::size_t a = 0; a + 1 < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            total += mode_eval(f, mode, distance(points[a], points[b]));
        }
    }
    return total;
}

std::vector<double> pair_cost_table(const CostModel& f,
                                    const std::vector<Point>& points,
                                    const CostMode& mode) {
    const std::size_t m = points.size();
    std::vector<double> table(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        table[i * m + i] = mode_eval(f, mode, 0.0);
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v = mode_eval(f, mode, distance(points[i], points[j]));
            table[i * m + j] = v;
            table[j * m + i] = v;
        }
    }
    return table;
}

} // namespace rmot
