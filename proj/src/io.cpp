#include "rmot/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "rmot/errors.hpp"
#include "rmot/indexing.hpp"

namespace rmot::io {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double require_number(const json& j, const char* what) {
    if (!j.is_number())
        throw validation_error(std::string(what) + " must be a number");
    return j.get<double>();
}

const json& require_field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw validation_error(std::string(what) + " requires field \"" + key +
                               "\"");
    return j.at(key);
}

std::vector<double> number_array(const json& j, const char* what) {
    if (!j.is_array())
        throw validation_error(std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(require_number(e, what));
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    return out;
}

} // namespace

json measure_to_json(const DiscreteMeasure& mu) {
    json pts = json::array();
    for (const auto& p : mu.points()) {
        json row = json::array();
        for (double c : p.coords) row.push_back(c);
        pts.push_back(std::move(row));
    }
    json out;
    out["dim"] = mu.dim();
    out["points"] = std::move(pts);
    out["weights"] = mu.weights();
    return out;
}

DiscreteMeasure measure_from_json(const json& j) {
    const json& jp = require_field(j, "points", "measure");
    if (!jp.is_array() || jp.empty())
        throw validation_error("measure points must be a non-empty array");
    std::vector<Point> points;
    points.reserve(jp.size());
    for (const auto& e : jp) {
        Point p;
        if (e.is_number()) {
            p.coords.push_back(e.get<double>()); // 1D shorthand
        } else if (e.is_array() && !e.empty()) {
            for (const auto& c : e)
                p.coords.push_back(require_number(c, "point coordinate"));
        } else {
            throw validation_error(
                "each point must be a number or a non-empty array");
        }
        points.push_back(std::move(p));
    }
    if (j.contains("weights") && !j.at("weights").is_null()) {
        std::vector<double> w = number_array(j.at("weights"), "weights");
        if (w.size() != points.size())
            throw validation_error("weights length must match points length");
        return DiscreteMeasure(std::move(points), std::move(w));
    }
    return DiscreteMeasure::uniform(std::move(points));
}

json cost_to_json(const CostModel& f) {
    json out;
    out["family"] = f.family_name();
    switch (f.family()) {
        case CostFamily::Log: break;
        case CostFamily::Riesz: out["s"] = f.riesz_exponent(); break;
        case CostFamily::Wire:
            out["epsilon0"] = f.wire_eps0();
            out["s0"] = f.wire_s0();
            break;
        case CostFamily::Tabulated:
            out["t"] = f.table_t();
            out["f"] = f.table_f();
            break;
    }
    return out;
}

CostModel cost_from_json(const json& j) {
    const json& fam = require_field(j, "family", "cost");
    if (!fam.is_string())
        throw validation_error("cost family must be a string");
    const std::string name = fam.get<std::string>();
    if (name == "log") return CostModel::log_cost();
    if (name == "riesz")
        return CostModel::riesz(require_number(require_field(j, "s", "riesz cost"), "s"));
    if (name == "wire")
        return CostModel::wire(
            require_number(require_field(j, "epsilon0", "wire cost"), "epsilon0"),
            require_number(require_field(j, "s0", "wire cost"), "s0"));
    if (name == "tabulated")
        return CostModel::tabulated(
            number_array(require_field(j, "t", "tabulated cost"), "t"),
            number_array(require_field(j, "f", "tabulated cost"), "f"));
    throw validation_error("unknown cost family: " + name);
}

json mode_to_json(const CostMode& mode) {
    json out;
    switch (mode.kind) {
        case CostMode::Kind::Exact: out["kind"] = "exact"; break;
        case CostMode::Kind::Below:
            out["kind"] = "below";
            out["R"] = mode.param;
            break;
        case CostMode::Kind::Above:
            out["kind"] = "above";
            out["level"] = mode.param;
            break;
    }
    return out;
}

CostMode mode_from_json(const json& j) {
    const json& kind = require_field(j, "kind", "mode");
    if (!kind.is_string())
        throw validation_error("mode kind must be a string");
    const std::string name = kind.get<std::string>();
    if (name == "exact") return CostMode::exact();
    if (name == "below")
        return CostMode::below(
            require_number(require_field(j, "R", "below mode"), "R"));
    if (name == "above")
        return CostMode::above(
            require_number(require_field(j, "level", "above mode"), "level"));
    throw validation_error("unknown mode kind: " + name);
}

json budget_to_json(const SolveBudget& b) {
    json out;
    out["max_variables"] = b.max_variables;
    out["max_iterations"] = b.max_iterations;
    return out;
}

SolveBudget budget_from_json(const json& j, SolveBudget defaults) {
    SolveBudget out = defaults;
    if (j.is_null()) return out;
    if (!j.is_object()) throw validation_error("budget must be an object");
    if (j.contains("max_variables")) {
        if (!j.at("max_variables").is_number_integer())
            throw validation_error("budget.max_variables must be an integer");
        out.max_variables = j.at("max_variables").get<std::int64_t>();
    }
    if (j.contains("max_iterations")) {
        if (!j.at("max_iterations").is_number_integer())
            throw validation_error("budget.max_iterations must be an integer");
        out.max_iterations = j.at("max_iterations").get<long>();
    }
    if (out.max_variables <= 0 || out.max_iterations <= 0)
        throw validation_error("budget limits must be positive");
    return out;
}

json coupling_to_json(const Coupling& c) {
    json entries = json::array();
    std::vector<int> tuple(static_cast<std::size_t>(c.N()));
    for (const auto& e : c.entries()) {
        c.indexer().decode(e.flat, tuple);
        json row;
        row["tuple"] = tuple;
        row["mass"] = e.mass;
        entries.push_back(std::move(row));
    }
    json out;
    out["m"] = c.m();
    out["N"] = c.N();
    out["entries"] = std::move(entries);
    return out;
}

Coupling coupling_from_json(const json& j,
                            const std::vector<double>& reference_weights) {
    const auto m = require_field(j, "m", "coupling").get<std::int64_t>();
    const auto N = require_field(j, "N", "coupling").get<int>();
    if (m <= 0 || N < 2) throw validation_error("coupling requires m>0, N>=2");
    TupleIndexer indexer(static_cast<int>(m), N);
    const json& je = require_field(j, "entries", "coupling");
    if (!je.is_array()) throw validation_error("coupling entries must be an array");
    std::vector<CouplingEntry> entries;
    entries.reserve(je.size());
    for (const auto& e : je) {
        const json& jt = require_field(e, "tuple", "coupling entry");
        if (!jt.is_array() || jt.size() != static_cast<std::size_t>(N))
            throw validation_error("coupling entry tuple must have N indices");
        std::vector<int> tuple;
        tuple.reserve(jt.size());
        for (const auto& c : jt) {
            if (!c.is_number_integer())
                throw validation_error("tuple indices must be integers");
            tuple.push_back(c.get<int>());
            if (tuple.back() < 0 || tuple.back() >= m)
                throw validation_error("tuple index out of range");
        }
        entries.push_back({indexer.encode(tuple),
                           require_number(require_field(e, "mass", "coupling entry"),
                                          "mass")});
    }
    std::sort(entries.begin(), entries.end(),
              [](const CouplingEntry& a, const CouplingEntry& b) {
                  return a.flat < b.flat;
              });
    return Coupling(static_cast<std::size_t>(m), N, std::move(entries),
                    reference_weights);
}

json solution_to_json(const PrimalSolution& sol, const DiscreteMeasure& mu) {
    json out;
    out["cost"] = sol.cost;
    out["dual_value"] = sol.dual_value;
    out["gap"] = sol.gap;
    out["mode"] = mode_to_json(sol.mode);
    out["coupling"] = coupling_to_json(sol.coupling);
    out["row_duals"] = sol.row_duals;
    json diag;
    diag["tuple_count"] = sol.diagnostics.tuple_count;
    diag["finite_columns"] = sol.diagnostics.finite_columns;
    diag["lp_rows"] = sol.diagnostics.lp_rows;
    diag["iterations"] = sol.diagnostics.iterations;
    diag["phase1_iterations"] = sol.diagnostics.phase1_iterations;
    diag["redundant_rows"] = sol.diagnostics.redundant_rows;
    out["diagnostics"] = std::move(diag);
    out["marginal_atoms"] = mu.size();
    return out;
}

json dual_report_to_json(const DualReport& rep) {
    json out;
    out["potential"] = rep.u;
    out["value"] = rep.value;
    out["primal_cost"] = rep.primal_cost;
    out["gap"] = rep.gap;
    out["feasible"] = rep.feasible;
    out["max_violation"] = rep.max_violation;
    return out;
}

json lipschitz_to_json(const LipschitzReport& rep) {
    json out;
    out["alpha"] = rep.alpha;
    out["empirical"] = rep.empirical;
    out["theoretical"] = rep.theoretical;
    out["ok"] = rep.ok;
    return out;
}

json certificate_to_json(const DiagonalCertificate& cert) {
    json out;
    out["beta"] = {{"value", cert.beta.beta},
                   {"exponent", cert.beta.exponent},
                   {"ball_mass", cert.beta.ball_mass},
                   {"threshold", cert.beta.threshold}};
    out["alpha"] = {{"beta", cert.alpha.beta},
                    {"f_beta", cert.alpha.f_beta},
                    {"threshold", cert.alpha.threshold},
                    {"alpha_star", cert.alpha.alpha_star},
                    {"vacuous", cert.alpha.vacuous}};
    out["cost"] = cert.cost;
    out["vacuous"] = cert.vacuous;
    out["cost_bound"] = {{"beta", cert.cost_bound.beta},
                         {"bound", cert.cost_bound.bound},
                         {"cost", cert.cost_bound.cost},
                         {"vacuous", cert.cost_bound.vacuous},
                         {"ok", cert.cost_bound.ok}};
    if (!cert.vacuous) {
        out["off_diagonal"] = {
            {"alpha", cert.off_diagonal.alpha},
            {"min_support_pair_distance",
             cert.off_diagonal.min_support_pair_distance},
            {"passed", cert.off_diagonal.passed}};
        out["truncation"] = {
            {"alpha", cert.truncation.alpha},
            {"level", cert.truncation.level},
            {"cost_exact", cert.truncation.cost_exact},
            {"cost_capped", cert.truncation.cost_capped},
            {"difference", cert.truncation.difference},
            {"equal", cert.truncation.equal},
            {"transfer_gap", cert.truncation.transfer_gap},
            {"potential_transfers", cert.truncation.potential_transfers}};
        out["canonicalization"] = {
            {"sweeps", cert.canonicalization.sweeps},
            {"converged", cert.canonicalization.converged},
            {"pointwise_nondecreasing",
             cert.canonicalization.pointwise_nondecreasing},
            {"objective_nondecreasing",
             cert.canonicalization.objective_nondecreasing},
            {"objective_before", cert.canonicalization.objective_before},
            {"objective_after", cert.canonicalization.objective_after}};
        out["lipschitz"] = lipschitz_to_json(cert.lipschitz);
    }
    out["passed"] = cert.passed;
    return out;
}

json sweep_to_json(const SweepResult& sweep) {
    json points = json::array();
    for (const auto& p : sweep.points)
        points.push_back({{"R", p.R}, {"cost", p.cost}});
    json out;
    out["points"] = std::move(points);
    out["exact_cost"] = sweep.exact_cost;
    out["diameter"] = sweep.diameter;
    out["non_increasing"] = sweep.non_increasing;
    out["tail_exact"] = sweep.tail_exact;
    return out;
}

json continuity_to_json(const ContinuityResult& cont) {
    json out;
    out["sizes"] = cont.sizes;
    out["costs"] = cont.costs;
    out["doubling_diffs"] = cont.doubling_diffs;
    out["diffs_decreasing"] = cont.diffs_decreasing;
    out["has_continuum_value"] = cont.has_continuum_value;
    if (cont.has_continuum_value) {
        out["continuum_value"] = cont.continuum_value;
        out["final_error"] = cont.final_error;
    }
    return out;
}

json cyclic_map_to_json(const CyclicMap1D& map, const DiscreteMeasure& mu) {
    json out;
    out["N"] = map.N;
    out["order"] = map.order;
    out["cdf"] = map.cdf;
    out["target"] = map.target;
    json tx = json::array();
    for (std::size_t i = 0; i < mu.size(); ++i)
        tx.push_back(mu.point(map.target[i])[0]);
    out["target_position"] = std::move(tx);
    out["pushforward_ok"] = map.pushforward_ok;
    out["n_cycle_identity"] = map.n_cycle_identity;
    return out;
}

json recovery_to_json(const MapRecovery& rec, const DiscreteMeasure& mu) {
    json rows = json::array();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        json row;
        row["x"] = mu.point(i).coords;
        row["gradient"] = rec.gradient[i].coords;
        row["target"] = rec.target[i].coords;
        row["defined"] = static_cast<bool>(rec.defined[i]);
        rows.push_back(std::move(row));
    }
    json out;
    out["points"] = std::move(rows);
    out["undefined_count"] = rec.undefined_count;
    out["gradient_floor"] = rec.gradient_floor;
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open input file: " + path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error("JSON parse error in " + path + ": " + e.what());
    }
}

void save_json(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw validation_error("failed to write: " + path);
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    auto out = open_out(path);
    out << "R,optimum,monotone\n";
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& p : sweep.points) {
        const bool mono = p.cost <= prev + 1e-9 * std::max(1.0, std::abs(prev));
        out << fmt17(p.R) << ',' << fmt17(p.cost) << ',' << (mono ? 1 : 0)
            << '\n';
        prev = p.cost;
    }
}

void write_map_csv(const std::string& path, const DiscreteMeasure& mu,
                   const CyclicMap1D& map) {
    auto out = open_out(path);
    out << "x,Tx,branch\n";
    const double wrap = static_cast<double>(map.N - 1) / map.N;
    for (std::size_t r = 0; r < map.order.size(); ++r) {
        const int i = map.order[r];
        const int branch = map.cdf[r] <= wrap + 1e-12 ? 0 : 1;
        out << fmt17(mu.point(i)[0]) << ','
            << fmt17(mu.point(map.target[static_cast<std::size_t>(i)])[0]) << ','
            << branch << '\n';
    }
}

void write_recovery_csv(const std::string& path, const DiscreteMeasure& mu,
                        const MapRecovery& rec) {
    auto out = open_out(path);
    const std::size_t d = mu.dim();
    if (d == 1)
        out << "x,Tx,defined\n";
    else
        out << "x,y,Tx,Ty,defined\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) out << fmt17(mu.point(i)[a]) << ',';
        for (std::size_t a = 0; a < d; ++a)
            out << fmt17(rec.target[i][a]) << ',';
        out << (rec.defined[i] ? 1 : 0) << '\n';
    }
}

void write_continuity_csv(const std::string& path, const ContinuityResult& c) {
    auto out = open_out(path);
    out << "m,optimum,doubling_diff\n";
    for (std::size_t k = 0; k < c.sizes.size(); ++k) {
        out << c.sizes[k] << ',' << fmt17(c.costs[k]) << ',';
        if (k > 0) out << fmt17(c.doubling_diffs[k - 1]);
        out << '\n';
    }
}

void write_support_csv(const std::string& path, const DiscreteMeasure& mu,
                       const Coupling& coupling) {
    auto out = open_out(path);
    const int N = coupling.N();
    const std::size_t d = mu.dim();
    out << "mass";
    for (int k = 0; k < N; ++k) out << ",i" << k + 1;
    for (int k = 0; k < N; ++k)
        for (std::size_t a = 0; a < d; ++a)
            out << ",p" << k + 1 << "_c" << a + 1;
    out << '\n';
    for (const auto& [tuple, mass] : coupling.support()) {
        out << fmt17(mass);
        for (int idx : tuple) out << ',' << idx;
        for (int idx : tuple)
            for (std::size_t a = 0; a < d; ++a)
                out << ',' << fmt17(mu.point(idx)[a]);
        out << '\n';
    }
}

} // namespace rmot::io
