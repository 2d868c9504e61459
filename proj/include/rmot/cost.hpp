#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rmot/geometry.hpp"

namespace rmot {

/// Families of repulsive interaction profiles f : (0, inf) -> R.
///
/// Every family is continuous and non-increasing on (0, inf) and blows up at
/// the origin; f(0) evaluates to the +infinity sentinel (a genuine IEEE
/// infinity used as a tag, never the result of overflow).  Sums that contain
/// the sentinel stay at the sentinel, and such terms are excluded structurally
/// from any linear program before solving.
enum class CostFamily { Log, Riesz, Wire, Tabulated };

inline double plus_infinity() { return std::numeric_limits<double>::infinity(); }

/// An interaction profile together with its family-specific parameters.
///
///   Log        f(t) = -log t
///   Riesz      f(t) = t^(-s),                    s > 0
///   Wire       f(t) = -(1/(2*pi*eps0)) log(t/s0), eps0 > 0, s0 > 0
///   Tabulated  piecewise-linear through strictly decreasing samples
///              (t_i, f_i); below t_0 the first segment is extended linearly,
///              above t_last the last value continues as a constant.
class CostModel {
public:
    static CostModel log_cost();
    static CostModel riesz(double s);
    static CostModel wire(double eps0, double s0);
    static CostModel tabulated(std::vector<double> t, std::vector<double> f);

    CostFamily family() const { return family_; }
    double riesz_exponent() const { return s_; }
    double wire_eps0() const { return eps0_; }
    double wire_s0() const { return s0_; }
    const std::vector<double>& table_t() const { return tab_t_; }
    const std::vector<double>& table_f() const { return tab_f_; }

    /// f(t).  Throws validation_error for t < 0 or NaN; returns the
    /// +infinity sentinel at t == 0.
    double eval(double t) const;

    /// Left inverse inf{ s >= 0 : f(s) = y }.  Throws validation_error when
    /// y lies outside the closure of the range of f.  At the upper edge of
    /// the closure the limiting value is returned (0 for Tabulated); for
    /// Riesz, y == 0 returns the +infinity sentinel (the level is only
    /// approached as s -> inf).
    double left_inverse(double y) const;

    /// sup_{t >= alpha} |f'(t)| for alpha > 0; the Lipschitz constant of f
    /// restricted to [alpha, inf).  For Tabulated profiles the maximum
    /// absolute difference quotient over segments meeting [alpha, inf).
    double slope_bound(double alpha) const;

    /// Human-readable family tag ("log", "riesz", "wire", "tabulated").
    std::string family_name() const;

private:
    CostModel() = default;

    CostFamily family_ = CostFamily::Log;
    double s_ = 0.0;          // Riesz exponent
    double eps0_ = 0.0;       // Wire permittivity
    double s0_ = 0.0;         // Wire reference distance
    double wire_k_ = 0.0;     // 1/(2*pi*eps0), cached
    std::vector<double> tab_t_;
    std::vector<double> tab_f_;
    double tab_slope0_ = 0.0; // slope magnitude of the first table segment
    double tab_sup_ = 0.0;    // limiting value of the table extension at 0+
};

/// How pair interactions are evaluated inside a tuple cost.
///
///   Exact      f(d)
///   Below(R)   f(d) for d < R, f(R) for d >= R   (tail flattened; the
///              singularity at d == 0 is kept)
///   Above(L)   min{L, f(d)}                       (singularity capped)
struct CostMode {
    enum class Kind { Exact, Below, Above };

    Kind kind = Kind::Exact;
    double param = 0.0;

    static CostMode exact() { return {Kind::Exact, 0.0}; }
    static CostMode below(double R);
    static CostMode above(double level);

    bool is_exact() const { return kind == Kind::Exact; }
};

/// f(t) under the given mode.  Same domain rules as CostModel::eval.
double mode_eval(const CostModel& f, const CostMode& mode, double t);

// Free-function spellings of the profile operations.
double f_eval(const CostModel& f, double t);
double f_truncate_below(const CostModel& f, double R, double t);
double f_truncate_above(const CostModel& f, double level, double t);
double f_left_inverse(const CostModel& f, double y);

/// Total pairwise cost of an N-point configuration:
/// sum over unordered pairs {a,b} of mode_eval(f, mode, distance(p_a, p_b)).
/// Requires N >= 2.  Symmetric under any permutation of the points; returns
/// the +infinity sentinel as soon as a pair sits at distance 0 and the mode
/// does not cap it.
double tuple_cost(const CostModel& f, const std::vector<Point>& points,
                  const CostMode& mode = CostMode::exact());

/// m x m table of mode-evaluated pair interactions for a point set
/// (entry [i*m+j] = mode_eval(f, mode, distance(p_i, p_j))).  Diagonal
/// entries hold the value at distance 0 (the sentinel unless capped).
std::vector<double> pair_cost_table(const CostModel& f,
                                    const std::vector<Point>& points,
                                    const CostMode& mode);

} // namespace rmot
