// Acceptance gate: one self-contained binary that checks every shipped
// guarantee end to end on a fixed instance corpus and prints one PASS/FAIL
// line per criterion.  Exit code = number of failed criteria.
//
// All tolerances are pinned here, next to the checks that use them.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "rmot/analysis.hpp"
#include "rmot/dual.hpp"
#include "rmot/maps.hpp"
#include "rmot/primal.hpp"

using namespace rmot;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- corpus --

struct Instance {
    std::string name;
    DiscreteMeasure mu;
    CostModel f;
    int N;
};

DiscreteMeasure grid1(int m) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) pts.push_back(Point{{(j + 0.5) / m}});
    return DiscreteMeasure::uniform(std::move(pts));
}

DiscreteMeasure line(std::vector<double> xs) {
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back(Point{{x}});
    return DiscreteMeasure::uniform(std::move(pts));
}

DiscreteMeasure weighted_line(std::vector<double> xs, std::vector<double> ws) {
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back(Point{{x}});
    return DiscreteMeasure(std::move(pts), std::move(ws));
}

DiscreteMeasure hexagon() {
    std::vector<Point> pts;
    for (int k = 0; k < 6; ++k) {
        const double a = k * std::acos(-1.0) / 3.0;
        pts.push_back(Point{{std::cos(a), std::sin(a)}});
    }
    return DiscreteMeasure::uniform(std::move(pts));
}

DiscreteMeasure square_grid(int side, double spacing) {
    std::vector<Point> pts;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            pts.push_back(Point{{i * spacing, j * spacing}});
    return DiscreteMeasure::uniform(std::move(pts));
}

DiscreteMeasure square_plus_center() {
    std::vector<Point> pts = {Point{{0.0, 0.0}}, Point{{1.0, 0.0}},
                              Point{{0.0, 1.0}}, Point{{1.0, 1.0}},
                              Point{{0.5, 0.5}}};
    return DiscreteMeasure::uniform(std::move(pts));
}

std::vector<double> wavy_weights(int m) {
    std::vector<double> w(static_cast<std::size_t>(m));
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
        w[static_cast<std::size_t>(j)] = 1.0 + 0.3 * std::sin(j + 1.0);
        s += w[static_cast<std::size_t>(j)];
    }
    for (double& v : w) v /= s;
    return w;
}

std::vector<Instance> build_corpus() {
    const CostModel lg = CostModel::log_cost();
    const CostModel r1 = CostModel::riesz(1.0);
    const CostModel r2 = CostModel::riesz(2.0);
    const CostModel wa = CostModel::wire(1.0 / (2.0 * std::acos(-1.0)), 1.0);
    const CostModel wb = CostModel::wire(0.05, 2.0);

    std::vector<Instance> corpus;
    auto add = [&](std::string name, DiscreteMeasure mu, CostModel f, int N) {
        corpus.push_back({std::move(name), std::move(mu), std::move(f), N});
    };

    // two marginals: uniform grids, weighted lines, planar sets
    add("N2-g3-log", grid1(3), lg, 2);
    add("N2-g4-riesz1", grid1(4), r1, 2);
    add("N2-g5-riesz2", grid1(5), r2, 2);
    add("N2-g6-wireA", grid1(6), wa, 2);
    add("N2-g7-log", grid1(7), lg, 2);
    add("N2-g8-riesz1", grid1(8), r1, 2);
    add("N2-w3-log", weighted_line({0.0, 0.4, 1.0}, {0.45, 0.25, 0.30}), lg, 2);
    add("N2-w4-riesz2",
        weighted_line({0.0, 0.3, 0.7, 1.0}, {0.4, 0.1, 0.2, 0.3}), r2, 2);
    add("N2-w5-wireB",
        weighted_line({0.0, 0.2, 0.5, 0.8, 1.0}, {0.35, 0.15, 0.1, 0.15, 0.25}),
        wb, 2);
    add("N2-g10-log", grid1(10), lg, 2);
    add("N2-g12-riesz1", grid1(12), r1, 2);
    add("N2-hex6-log", hexagon(), lg, 2);
    add("N2-sq9-riesz2", square_grid(3, 0.5), r2, 2);
    add("N2-w12-log", weighted_line({0.0, 1.0 / 11, 2.0 / 11, 3.0 / 11,
                                     4.0 / 11, 5.0 / 11, 6.0 / 11, 7.0 / 11,
                                     8.0 / 11, 9.0 / 11, 10.0 / 11, 1.0},
                                    wavy_weights(12)),
        lg, 2);

    // three marginals
    add("N3-g3-log", grid1(3), lg, 3);
    add("N3-g4-riesz1", grid1(4), r1, 3);
    add("N3-g5-log", grid1(5), lg, 3);
    add("N3-g6-wireA", grid1(6), wa, 3);
    add("N3-g7-log", grid1(7), lg, 3);
    add("N3-g8-riesz2", grid1(8), r2, 3);
    add("N3-g9-log", grid1(9), lg, 3);
    add("N3-g12-riesz1", grid1(12), r1, 3);
    add("N3-sq4-log", square_grid(2, 1.0), lg, 3);
    add("N3-g10-wireB", grid1(10), wb, 3);

    // four marginals
    add("N4-g4-log", grid1(4), lg, 4);
    add("N4-g5-riesz1", grid1(5), r1, 4);
    add("N4-g6-wireA", grid1(6), wa, 4);
    add("N4-g8-riesz2", grid1(8), r2, 4);
    add("N4-g10-log", grid1(10), lg, 4);
    add("N4-g12-riesz1", grid1(12), r1, 4);
    add("N4-sqc5-log", square_plus_center(), lg, 4);
    add("N4-g9-wireB", grid1(9), wb, 4);
    add("N4-g11-log", grid1(11), lg, 4);
    return corpus;
}

// --------------------------------------------------------------- results --

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

using Solutions = std::vector<std::optional<PrimalSolution>>;

// Potential carried by a solve, nudged back inside the feasible set: LP
// multipliers can overshoot feasibility by rounding noise, and each tuple
// constraint has exactly N potential terms, so shifting every value down by
// violation/N restores feasibility without touching the support structure.
std::vector<double> feasible_dual(const PrimalSolution& sol,
                                  const Instance& inst) {
    std::vector<double> u = extract_dual(sol, inst.mu);
    const DualCheck pre =
        check_dual_feasibility(u, inst.mu, inst.f, inst.N);
    if (pre.max_violation > 0.0)
        for (double& v : u) v -= pre.max_violation / inst.N;
    return u;
}

Criterion crit_duality(const std::vector<Instance>& corpus,
                       const Solutions& sols) {
    Criterion c{1, "strong duality on the corpus", true, ""};
    double worst = 0.0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        if (!sols[k]) {
            c.pass = false;
            c.detail = corpus[k].name + " failed to solve";
            return c;
        }
        const double g = std::fabs(sols[k]->gap);
        worst = std::max(worst, g);
        if (g > 1e-9) {
            c.pass = false;
            c.detail = corpus[k].name + " has |gap| = " + num(g);
            return c;
        }
    }
    c.detail = std::to_string(corpus.size()) +
               " instances, max |primal - dual| = " + num(worst);
    return c;
}

Criterion crit_oracle(const std::vector<Instance>& corpus,
                      const Solutions& sols) {
    Criterion c{2, "independent enumeration oracle", true, ""};
    double worst = 0.0;
    int checked = 0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const Instance& inst = corpus[k];
        if (std::pow(static_cast<double>(inst.mu.size()), inst.N) > 64.5 ||
            !sols[k])
            continue;
        const double ref = brute_force_oracle(inst.mu, inst.f, inst.N);
        const double dev = std::fabs(sols[k]->cost - ref);
        worst = std::max(worst, dev);
        ++checked;
        if (dev > 1e-9) {
            c.pass = false;
            c.detail = inst.name + " deviates from enumeration by " + num(dev);
            return c;
        }
    }
    c.pass = c.pass && checked > 0;
    c.detail = std::to_string(checked) +
               " small instances, max |lp - enumeration| = " + num(worst);
    return c;
}

Criterion crit_hand_values(const std::vector<Instance>&, const Solutions&) {
    Criterion c{3, "hand-checked optima", true, ""};
    const CostModel lg = CostModel::log_cost();
    const double v1 = solve_mot(line({0.0, 1.0}), lg, 2).cost;
    const double v2 = solve_mot(line({0.0, 1.0, 2.0}), lg, 2).cost;
    const double v3 = solve_mot(line({0.0, 1.0, 2.0}), lg, 3).cost;
    const double e2 = -std::log(2.0) / 3.0;
    const double e3 = -std::log(2.0);
    c.pass = std::fabs(v1) <= 1e-9 && std::fabs(v2 - e2) <= 1e-9 &&
             std::fabs(v3 - e3) <= 1e-9;
    c.detail = "pair 0 vs " + num(v1) + ", triple " + num(e2) + " vs " +
               num(v2) + ", three-fold " + num(e3) + " vs " + num(v3);
    return c;
}

Criterion crit_separation(const std::vector<Instance>& corpus,
                          const Solutions& sols) {
    Criterion c{4, "support separation radius", true, ""};

    // closed forms of the separation radius for the logarithmic cost
    const AlphaBound a2 = alpha_bound(CostModel::log_cost(), 2, 0.1);
    const AlphaBound a3 = alpha_bound(CostModel::log_cost(), 3, 0.1);
    if (std::fabs(a2.alpha_star - 0.01) > 1e-12 * 0.01 ||
        std::fabs(a3.alpha_star - 1e-9) > 1e-12 * 1e-9) {
        c.pass = false;
        c.detail = "closed-form radii off: " + num(a2.alpha_star) + ", " +
                   num(a3.alpha_star);
        return c;
    }

    int checked = 0;
    double tightest = 1e300; // smallest observed margin distance/alpha*
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const Instance& inst = corpus[k];
        BetaSelection beta;
        if (!sols[k] || !try_select_beta(inst.mu, inst.N, beta)) continue;
        const AlphaBound ab = alpha_bound(inst.f, inst.N, beta.beta);
        if (ab.vacuous) continue;
        const OffDiagonalCheck od =
            verify_off_diagonal(sols[k]->coupling, inst.mu, ab.alpha_star);
        ++checked;
        tightest = std::min(tightest,
                            od.min_support_pair_distance / ab.alpha_star);
        if (!od.passed) {
            c.pass = false;
            c.detail = inst.name + ": support distance " +
                       num(od.min_support_pair_distance) + " below " +
                       num(ab.alpha_star);
            return c;
        }
    }
    c.pass = c.pass && checked > 0;
    c.detail = std::to_string(checked) +
               " instances with a concentration radius, min distance/radius = " +
               num(tightest) + "; closed forms 0.01 and 1e-9 reproduced";
    return c;
}

Criterion crit_cost_bound(const std::vector<Instance>& corpus,
                          const Solutions& sols) {
    Criterion c{5, "a-priori cost bound and capped-cost equality", true, ""};
    int bounded = 0;
    int capped = 0;
    double worst_diff = 0.0;
    double worst_transfer = 0.0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const Instance& inst = corpus[k];
        BetaSelection beta;
        if (!sols[k] || !try_select_beta(inst.mu, inst.N, beta)) continue;

        const CostBoundCheck cb =
            cost_upper_bound_check(inst.f, inst.N, beta.beta, sols[k]->cost);
        if (!cb.ok) {
            c.pass = false;
            c.detail = inst.name + ": cost " + num(cb.cost) +
                       " above bound " + num(cb.bound);
            return c;
        }
        if (!cb.vacuous) ++bounded;

        const AlphaBound ab = alpha_bound(inst.f, inst.N, beta.beta);
        if (ab.vacuous || ab.alpha_star <= 0.0) continue;
        const TruncationEquality te =
            truncated_equality_check(inst.mu, inst.f, inst.N, ab.alpha_star);
        ++capped;
        worst_diff = std::max(worst_diff, std::fabs(te.difference));
        worst_transfer = std::max(worst_transfer, std::fabs(te.transfer_gap));
        if (!te.equal || !te.potential_transfers) {
            c.pass = false;
            c.detail = inst.name + ": capped optimum differs by " +
                       num(te.difference) + " (certification gap " +
                       num(te.transfer_gap) + ")";
            return c;
        }
    }
    c.pass = c.pass && bounded > 0 && capped > 0;
    c.detail = std::to_string(bounded) + " cost bounds, " +
               std::to_string(capped) +
               " capped solves; max |exact - capped| = " + num(worst_diff) +
               ", max certification gap = " + num(worst_transfer);
    return c;
}

Criterion crit_sweep(const std::vector<Instance>& corpus, const Solutions&) {
    Criterion c{6, "tail-truncation radius sweep", true, ""};
    for (const Instance& inst : corpus) {
        const double d = inst.mu.diameter();
        const std::vector<double> radii = {0.25 * d, 0.5 * d, 0.75 * d, d,
                                           d + 0.5};
        const SweepResult sw =
            gamma_sweep(inst.mu, inst.f, inst.N, radii, SolveBudget{}, 2);
        if (!sw.non_increasing || !sw.tail_exact) {
            c.pass = false;
            c.detail = inst.name + ": " +
                       (sw.non_increasing ? "tail not bitwise-stable"
                                          : "optima not non-increasing");
            return c;
        }
    }
    c.detail = std::to_string(corpus.size()) +
               " sweeps of 5 radii each: non-increasing, exact for radius >= "
               "diameter";
    return c;
}

Criterion crit_lipschitz(const std::vector<Instance>& corpus,
                         const Solutions& sols) {
    Criterion c{7, "Lipschitz modulus of canonical potentials", true, ""};
    int checked = 0;
    double worst_ratio = 0.0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const Instance& inst = corpus[k];
        BetaSelection beta;
        if (!sols[k] || !try_select_beta(inst.mu, inst.N, beta)) continue;
        const AlphaBound ab = alpha_bound(inst.f, inst.N, beta.beta);
        if (ab.vacuous || ab.alpha_star <= 0.0) continue;
        std::vector<double> u = feasible_dual(*sols[k], inst);
        const CanonicalizeResult canon =
            canonicalize_dual(std::move(u), inst.mu, inst.f, inst.N);
        const LipschitzReport lr =
            lipschitz_report(canon.u, inst.mu, inst.f, inst.N, ab.alpha_star);
        ++checked;
        if (lr.theoretical > 0.0)
            worst_ratio = std::max(worst_ratio, lr.empirical / lr.theoretical);
        if (!lr.ok) {
            c.pass = false;
            c.detail = inst.name + ": empirical modulus " + num(lr.empirical) +
                       " above " + num(lr.theoretical);
            return c;
        }
    }
    c.pass = c.pass && checked > 0;
    c.detail = std::to_string(checked) +
               " potentials, worst empirical/theoretical modulus = " +
               num(worst_ratio);
    return c;
}

Criterion crit_cyclic_map(const std::vector<Instance>&, const Solutions&) {
    Criterion c{8, "one-dimensional cyclic map", true, ""};
    const CostModel lg = CostModel::log_cost();
    const CostModel r1 = CostModel::riesz(1.0);
    const DiscreteMeasure uneven =
        line({0.0, 0.07, 0.25, 0.55, 0.8, 1.0});

    struct Case {
        std::string name;
        DiscreteMeasure mu;
        CostModel f;
        int N;
    };
    std::vector<Case> cases;
    for (int N : {2, 3, 4})
        for (int m : {6, 8, 12, 24})
            if (m % N == 0)
                cases.push_back({"grid m=" + std::to_string(m) +
                                     " N=" + std::to_string(N),
                                 grid1(m), lg, N});
    for (int N : {2, 3, 4})
        cases.push_back(
            {"grid m=12 N=" + std::to_string(N) + " inverse-distance",
             grid1(12), r1, N});
    cases.push_back({"uneven m=6 N=2", uneven, lg, 2});
    cases.push_back({"uneven m=6 N=3", uneven, lg, 3});

    double worst = 0.0;
    for (const Case& cs : cases) {
        const CyclicMap1D map = cyclic_map_1d(cs.mu, cs.N);
        if (!map.pushforward_ok || !map.n_cycle_identity) {
            c.pass = false;
            c.detail = cs.name + ": map is not a measure-preserving N-cycle";
            return c;
        }
        const Coupling plan = plan_from_cyclic_map(cs.mu, cs.N, map);
        const double pc = plan.cost(cs.f, cs.mu);
        const double lp = solve_mot(cs.mu, cs.f, cs.N).cost;
        const double dev = std::fabs(pc - lp);
        worst = std::max(worst, dev);
        if (dev > 1e-9) {
            c.pass = false;
            c.detail = cs.name + ": plan cost " + num(pc) + " vs optimum " +
                       num(lp);
            return c;
        }
    }
    c.detail = std::to_string(cases.size()) +
               " maps (m up to 24): N-th iterate is the identity, plan cost "
               "matches the optimum to " +
               num(worst);
    return c;
}

Criterion crit_map_recovery(const std::vector<Instance>&, const Solutions&) {
    Criterion c{9, "two-marginal map recovery from the potential", true, ""};
    const CostModel lg = CostModel::log_cost();
    std::string report;
    for (int m : {50, 100}) {
        const DiscreteMeasure mu = grid1(m);
        const PrimalSolution sol = solve_mot(mu, lg, 2);
        Instance inst{"grid", mu, lg, 2};
        const CanonicalizeResult canon =
            canonicalize_dual(feasible_dual(sol, inst), mu, lg, 2);
        const MapRecovery rec = recover_map_n2(mu, canon.u);

        // the optimal map swaps the halves of [0,1]: x -> x +- 1/2
        const double bound = 2.0 / m;
        double worst = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (!rec.defined[i]) continue;
            const double x = mu.point(i)[0];
            const double want = x < 0.5 ? x + 0.5 : x - 0.5;
            worst = std::max(worst, std::fabs(rec.target[i][0] - want));
        }
        if (worst > bound || rec.undefined_count > 2) {
            c.pass = false;
            c.detail = "m=" + std::to_string(m) + ": map error " + num(worst) +
                       " (allowed " + num(bound) + "), " +
                       std::to_string(rec.undefined_count) +
                       " undefined points";
            return c;
        }

        // the recovered targets must also land on the solved plan's partners
        const double cell = 1.0 / m;
        double worst_pair = 0.0;
        for (const auto& [tuple, mass] : sol.coupling.support()) {
            (void)mass;
            const auto a = static_cast<std::size_t>(tuple[0]);
            const auto b = static_cast<std::size_t>(tuple[1]);
            if (rec.defined[a])
                worst_pair = std::max(
                    worst_pair,
                    std::fabs(rec.target[a][0] - mu.point(b)[0]));
            if (rec.defined[b])
                worst_pair = std::max(
                    worst_pair,
                    std::fabs(rec.target[b][0] - mu.point(a)[0]));
        }
        if (worst_pair > 2.0 * cell + 1e-12) {
            c.pass = false;
            c.detail = "m=" + std::to_string(m) +
                       ": recovered target misses the plan partner by " +
                       num(worst_pair);
            return c;
        }
        report += (report.empty() ? "" : "; ") + ("m=" + std::to_string(m)) +
                  ": error " + num(worst) + " <= " + num(bound) +
                  ", plan pairing within " + num(worst_pair);
    }
    c.detail = report;
    return c;
}

Criterion crit_continuity(const std::vector<Instance>&, const Solutions&) {
    Criterion c{10, "optimum under marginal refinement", true, ""};
    const ContinuityResult res = marginal_continuity_experiment(
        DensitySampler::uniform_1d(0.0, 1.0), CostModel::log_cost(), 2,
        {8, 16, 32, 64});
    const double target = std::log(2.0);
    c.pass = res.diffs_decreasing && res.has_continuum_value &&
             std::fabs(res.continuum_value - target) <= 1e-12 &&
             res.final_error <= 0.05;
    c.detail = "sizes 8..64: refinement differences non-increasing, final "
               "value within " +
               num(res.final_error) + " of the half-shift integral " +
               num(target);
    return c;
}

Criterion crit_canonicalization(const std::vector<Instance>& corpus,
                                const Solutions& sols) {
    Criterion c{11, "canonicalization is monotone and settles", true, ""};
    int max_sweeps = 0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const Instance& inst = corpus[k];
        if (!sols[k]) {
            c.pass = false;
            c.detail = inst.name + " failed to solve";
            return c;
        }
        std::vector<double> u = feasible_dual(*sols[k], inst);
        double obj = dual_value(u, inst.mu, inst.N);
        bool settled = false;
        for (int sweep = 1; sweep <= 50; ++sweep) {
            const std::vector<double> next =
                c_transform_sweep(u, inst.mu, inst.f, inst.N);
            double change = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                if (next[i] < u[i] - 1e-12) {
                    c.pass = false;
                    c.detail = inst.name + ": a value dropped by " +
                               num(u[i] - next[i]) + " during sweep " +
                               std::to_string(sweep);
                    return c;
                }
                change = std::max(change, std::fabs(next[i] - u[i]));
            }
            const double next_obj = dual_value(next, inst.mu, inst.N);
            if (next_obj < obj - 1e-12 * std::max(1.0, std::fabs(obj))) {
                c.pass = false;
                c.detail = inst.name + ": objective fell from " + num(obj) +
                           " to " + num(next_obj);
                return c;
            }
            u = next;
            obj = next_obj;
            if (change <= 1e-12) {
                settled = true;
                max_sweeps = std::max(max_sweeps, sweep);
                break;
            }
        }
        if (!settled) {
            c.pass = false;
            c.detail = inst.name + ": no fixed point within 50 sweeps";
            return c;
        }
    }
    c.detail = std::to_string(corpus.size()) +
               " potentials: values and objective never decrease, fixed "
               "point within " +
               std::to_string(max_sweeps) + " sweep(s)";
    return c;
}

} // namespace

int main() {
    const std::vector<Instance> corpus = build_corpus();
    Solutions sols(corpus.size());
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        try {
            sols[k].emplace(
                solve_mot(corpus[k].mu, corpus[k].f, corpus[k].N));
        } catch (const std::exception& e) {
            std::printf("note: %s failed to solve: %s\n",
                        corpus[k].name.c_str(), e.what());
        }
    }

    using CritFn = Criterion (*)(const std::vector<Instance>&,
                                 const Solutions&);
    const CritFn fns[] = {
        crit_duality,     crit_oracle,        crit_hand_values,
        crit_separation,  crit_cost_bound,    crit_sweep,
        crit_lipschitz,   crit_cyclic_map,    crit_map_recovery,
        crit_continuity,  crit_canonicalization,
    };

    int failures = 0;
    int id = 0;
    for (CritFn fn : fns) {
        ++id;
        Criterion c;
        try {
            c = fn(corpus, sols);
        } catch (const std::exception& e) {
            c.id = id;
            c.title = "criterion threw";
            c.pass = false;
            c.detail = e.what();
        }
        if (!c.pass) ++failures;
        std::printf("[%s] criterion %d: %s — %s\n", c.pass ? "PASS" : "FAIL",
                     c.id, c.title.c_str(), c.detail.c_str());
    }
    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures;
}
