// rmot: command-line front end for the repulsive multi-marginal transport
// library.  Every command reads one JSON config, writes one JSON report that
// embeds the fully resolved config, and optionally emits plot-ready CSV.
//
// Exit codes: 0 success, 1 validation/input error, 2 solver failure,
// 3 a verified property failed (certificate failure).  Errors are also
// reported as machine-readable JSON on stderr.

#include <CLI11.hpp>

#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "rmot/analysis.hpp"
#include "rmot/dual.hpp"
#include "rmot/errors.hpp"
#include "rmot/io.hpp"
#include "rmot/maps.hpp"
#include "rmot/primal.hpp"

namespace {

using rmot::io::json;

void print_error(const std::string& type, const std::string& message) {
    json err;
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    std::cerr << err.dump() << std::endl;
}

std::optional<long long> env_positive_int(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v, &end, 10);
    if (errno != 0 || end == v || *end != '\0' || x <= 0)
        throw rmot::validation_error(std::string(name) +
                                     " must be a positive integer");
    return x;
}

rmot::SolveBudget budget_defaults() {
    rmot::SolveBudget b;
    if (auto v = env_positive_int("RMOT_BUDGET")) b.max_variables = *v;
    return b;
}

int sweep_threads() {
    if (auto v = env_positive_int("RMOT_THREADS"))
        return static_cast<int>(std::min<long long>(*v, 64));
    return 1;
}

struct CommonArgs {
    std::string input;
    std::string output;
    std::string csv; // optional plot-data path
};

struct ProblemConfig {
    rmot::DiscreteMeasure mu;
    rmot::CostModel f;
    int N;
    rmot::CostMode mode;
    rmot::SolveBudget budget;
};

ProblemConfig parse_problem(const json& cfg, bool need_cost = true) {
    using namespace rmot;
    const json& jm = cfg.contains("measure") ? cfg.at("measure") : json();
    if (jm.is_null())
        throw validation_error("config requires a \"measure\" object");
    DiscreteMeasure mu = io::measure_from_json(jm);
    CostModel f = CostModel::log_cost();
    if (need_cost) {
        if (!cfg.contains("cost"))
            throw validation_error("config requires a \"cost\" object");
        f = io::cost_from_json(cfg.at("cost"));
    } else if (cfg.contains("cost")) {
        f = io::cost_from_json(cfg.at("cost"));
    }
    if (!cfg.contains("N") || !cfg.at("N").is_number_integer())
        throw validation_error("config requires an integer \"N\"");
    const int N = cfg.at("N").get<int>();
    if (N < 2) throw validation_error("N must be at least 2");
    CostMode mode = CostMode::exact();
    if (cfg.contains("mode")) mode = io::mode_from_json(cfg.at("mode"));
    SolveBudget budget = io::budget_from_json(
        cfg.contains("budget") ? cfg.at("budget") : json(), budget_defaults());
    return ProblemConfig{std::move(mu), std::move(f), N, mode, budget};
}

json config_echo(const ProblemConfig& p) {
    json cfg;
    cfg["measure"] = rmot::io::measure_to_json(p.mu);
    cfg["cost"] = rmot::io::cost_to_json(p.f);
    cfg["N"] = p.N;
    cfg["mode"] = rmot::io::mode_to_json(p.mode);
    cfg["budget"] = rmot::io::budget_to_json(p.budget);
    return cfg;
}

int cmd_solve(const CommonArgs& args) {
    using namespace rmot;
    ProblemConfig p = parse_problem(io::load_json(args.input));
    PrimalSolution sol = solve_mot(p.mu, p.f, p.N, p.mode, p.budget);
    json report;
    report["command"] = "solve";
    report["config"] = config_echo(p);
    report["solution"] = io::solution_to_json(sol, p.mu);
    io::save_json(args.output, report);
    if (!args.csv.empty()) io::write_support_csv(args.csv, p.mu, sol.coupling);
    return 0;
}

int cmd_dual(const CommonArgs& args) {
    using namespace rmot;
    ProblemConfig p = parse_problem(io::load_json(args.input));
    PrimalSolution sol = solve_mot(p.mu, p.f, p.N, p.mode, p.budget);
    DualReport rep = make_dual_report(sol, p.mu, p.f);
    json report;
    report["command"] = "dual";
    report["config"] = config_echo(p);
    report["solution"] = io::solution_to_json(sol, p.mu);
    report["dual"] = io::dual_report_to_json(rep);
    io::save_json(args.output, report);
    if (!rep.feasible || std::abs(rep.gap) > 1e-9)
        throw certificate_error(
            "extracted potential fails to certify the primal optimum");
    return 0;
}

int cmd_map1d(const CommonArgs& args) {
    using namespace rmot;
    const json cfg = io::load_json(args.input);
    ProblemConfig p = parse_problem(cfg, /*need_cost=*/false);
    const bool compare =
        cfg.contains("compare_lp") ? cfg.at("compare_lp").get<bool>()
                                   : cfg.contains("cost");
    CyclicMap1D map = cyclic_map_1d(p.mu, p.N);
    json report;
    report["command"] = "map1d";
    report["config"] = config_echo(p);
    report["map"] = io::cyclic_map_to_json(map, p.mu);
    bool mismatch = false;
    if (map.pushforward_ok) {
        Coupling plan = plan_from_cyclic_map(p.mu, p.N, map);
        report["plan"] = io::coupling_to_json(plan);
        const double plan_cost = plan.cost(p.f, p.mu, p.mode);
        report["plan_cost"] = plan_cost;
        if (compare) {
            PrimalSolution sol = solve_mot(p.mu, p.f, p.N, p.mode, p.budget);
            report["lp_cost"] = sol.cost;
            report["cost_match"] = std::abs(plan_cost - sol.cost) <= 1e-9;
            mismatch = !report["cost_match"].get<bool>();
        }
    }
    io::save_json(args.output, report);
    if (!args.csv.empty()) io::write_map_csv(args.csv, p.mu, map);
    if (mismatch)
        throw certificate_error(
            "cyclic-map plan cost does not match the LP optimum");
    return 0;
}

int cmd_recover_map(const CommonArgs& args) {
    using namespace rmot;
    ProblemConfig p = parse_problem(io::load_json(args.input));
    if (p.N != 2)
        throw validation_error("map recovery is defined for N = 2 only");
    if (p.f.family() != CostFamily::Log)
        throw validation_error(
            "map recovery uses the logarithmic first-order condition; "
            "cost family must be \"log\"");
    PrimalSolution sol = solve_mot(p.mu, p.f, p.N, p.mode, p.budget);
    std::vector<double> u0 = extract_dual(sol, p.mu);
    const DualCheck pre = check_dual_feasibility(u0, p.mu, p.f, p.N, p.mode);
    if (pre.max_violation > 0.0)
        for (double& v : u0) v -= pre.max_violation / p.N;
    CanonicalizeResult canon = canonicalize_dual(u0, p.mu, p.f, p.N, p.mode);
    MapRecovery rec = recover_map_n2(p.mu, canon.u);
    json report;
    report["command"] = "recover-map";
    report["config"] = config_echo(p);
    report["solution"] = io::solution_to_json(sol, p.mu);
    report["canonicalization"] = {{"sweeps", canon.sweeps},
                                  {"converged", canon.converged},
                                  {"last_change", canon.last_change}};
    report["potential"] = canon.u;
    report["recovery"] = io::recovery_to_json(rec, p.mu);
    io::save_json(args.output, report);
    if (!args.csv.empty()) io::write_recovery_csv(args.csv, p.mu, rec);
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    using namespace rmot;
    ProblemConfig p = parse_problem(io::load_json(args.input));
    DiagonalCertificate cert = diagonal_certificate(p.mu, p.f, p.N, p.budget);
    json report;
    report["command"] = "verify";
    report["config"] = config_echo(p);
    report["certificate"] = io::certificate_to_json(cert);
    io::save_json(args.output, report);
    if (!cert.passed)
        throw certificate_error("diagonal certificate failed; see " +
                                args.output);
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    using namespace rmot;
    const json cfg = io::load_json(args.input);
    ProblemConfig p = parse_problem(cfg);
    if (!cfg.contains("radii") || !cfg.at("radii").is_array())
        throw validation_error("sweep config requires a \"radii\" array");
    std::vector<double> radii;
    for (const auto& r : cfg.at("radii")) {
        if (!r.is_number())
            throw validation_error("sweep radii must be numbers");
        radii.push_back(r.get<double>());
    }
    SweepResult sw = gamma_sweep(p.mu, p.f, p.N, radii, p.budget,
                                 sweep_threads());
    json report;
    report["command"] = "sweep";
    report["config"] = config_echo(p);
    report["config"]["radii"] = radii;
    report["sweep"] = io::sweep_to_json(sw);
    io::save_json(args.output, report);
    if (!args.csv.empty()) io::write_sweep_csv(args.csv, sw);
    if (!sw.non_increasing || !sw.tail_exact)
        throw certificate_error(
            "truncation sweep violated monotone/tail-stabilization property");
    return 0;
}

int cmd_continuity(const CommonArgs& args) {
    using namespace rmot;
    const json cfg = io::load_json(args.input);
    if (!cfg.contains("sampler"))
        throw validation_error("continuity config requires a \"sampler\"");
    const json& js = cfg.at("sampler");
    const std::string kind =
        js.contains("kind") && js.at("kind").is_string()
            ? js.at("kind").get<std::string>()
            : throw validation_error("sampler requires a string \"kind\"");
    DensitySampler sampler = DensitySampler::uniform_1d(0.0, 1.0);
    if (kind == "uniform1d")
        sampler = DensitySampler::uniform_1d(js.value("a", 0.0),
                                             js.value("b", 1.0));
    else if (kind == "uniform2d")
        sampler = DensitySampler::uniform_2d(
            js.value("ax", 0.0), js.value("bx", 1.0), js.value("ay", 0.0),
            js.value("by", 1.0));
    else
        throw validation_error("unknown sampler kind: " + kind);
    if (!cfg.contains("cost"))
        throw validation_error("config requires a \"cost\" object");
    CostModel f = io::cost_from_json(cfg.at("cost"));
    if (!cfg.contains("N") || !cfg.at("N").is_number_integer())
        throw validation_error("config requires an integer \"N\"");
    const int N = cfg.at("N").get<int>();
    if (N < 2) throw validation_error("N must be at least 2");
    if (!cfg.contains("sizes") || !cfg.at("sizes").is_array())
        throw validation_error("continuity config requires a \"sizes\" array");
    std::vector<int> sizes;
    for (const auto& s : cfg.at("sizes")) {
        if (!s.is_number_integer() || s.get<int>() < 1)
            throw validation_error("sizes must be positive integers");
        sizes.push_back(s.get<int>());
    }
    SolveBudget budget = io::budget_from_json(
        cfg.contains("budget") ? cfg.at("budget") : json(), budget_defaults());

    ContinuityResult res =
        marginal_continuity_experiment(sampler, f, N, sizes, budget);
    json report;
    report["command"] = "continuity";
    report["config"]["sampler"] = js;
    report["config"]["cost"] = io::cost_to_json(f);
    report["config"]["N"] = N;
    report["config"]["sizes"] = sizes;
    report["config"]["budget"] = io::budget_to_json(budget);
    report["continuity"] = io::continuity_to_json(res);
    io::save_json(args.output, report);
    if (!args.csv.empty()) io::write_continuity_csv(args.csv, res);
    if (!res.diffs_decreasing)
        throw certificate_error(
            "refinement differences are not non-increasing");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmot: repulsive multi-marginal optimal transport toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "solve one transport problem and report plan + certificate"},
        {"dual", "solve and report the symmetric dual potential"},
        {"map1d", "build the 1D cyclic map and its induced plan"},
        {"recover-map", "reconstruct the N=2 map from the dual potential"},
        {"verify", "run the full separation/bound/truncation certificate"},
        {"sweep", "optimal values along a grid of tail-truncation radii"},
        {"continuity", "optimal values along a refinement sequence"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-i,--input", args.input, "config JSON path")
            ->required();
        sub->add_option("-o,--output", args.output, "report JSON path")
            ->required();
        sub->add_option("--csv", args.csv, "optional plot-data CSV path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("validation", e.what());
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "solve") return cmd_solve(args);
        if (cmd == "dual") return cmd_dual(args);
        if (cmd == "map1d") return cmd_map1d(args);
        if (cmd == "recover-map") return cmd_recover_map(args);
        if (cmd == "verify") return cmd_verify(args);
        if (cmd == "sweep") return cmd_sweep(args);
        if (cmd == "continuity") return cmd_continuity(args);
        print_error("validation", "unknown command: " + cmd);
        return 1;
    } catch (const rmot::validation_error& e) {
        print_error("validation", e.what());
        return 1;
    } catch (const rmot::certificate_error& e) {
        print_error("certificate", e.what());
        return 3;
    } catch (const rmot::solver_error& e) {
        print_error("solver", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        print_error("validation", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 2;
    }
}
