#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rmot/analysis.hpp"
#include "rmot/errors.hpp"
#include "rmot/io.hpp"
#include "rmot/maps.hpp"
#include "rmot/primal.hpp"

using namespace rmot;
using rmot::io::json;

namespace {

Point pt(double x) { return Point{{x}}; }

DiscreteMeasure uniform1d(std::initializer_list<double> xs) {
    std::vector<Point> pts;
    for (double x : xs) pts.push_back(pt(x));
    return DiscreteMeasure::uniform(std::move(pts));
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("measure round trip preserves atoms, weights, and awkward values") {
    const DiscreteMeasure mu({pt(1.0 / 3.0), pt(0.1), pt(2.0 / 7.0)},
                             {0.2, 0.3, 0.5});
    const json j = io::measure_to_json(mu);
    const DiscreteMeasure back = io::measure_from_json(j);
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.point(i)[0] == mu.point(i)[0]);   // bitwise
        CHECK(back.weight(i) == mu.weight(i));       // bitwise
    }

    // 1D shorthand: a flat list of numbers
    const json shorthand = {{"points", {0.0, 0.5, 1.0}}};
    const DiscreteMeasure sh = io::measure_from_json(shorthand);
    CHECK(sh.size() == 3);
    CHECK(sh.dim() == 1);
    CHECK(sh.weight(1) == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(io::measure_from_json(json::object()), validation_error);
    CHECK_THROWS_AS(io::measure_from_json({{"points", json::array()}}),
                    validation_error);
    const json badw = {{"points", {0.0, 1.0}}, {"weights", {0.5}}};
    CHECK_THROWS_AS(io::measure_from_json(badw), validation_error);
}

TEST_CASE("cost model round trips for every family") {
    const std::vector<CostModel> models = {
        CostModel::log_cost(), CostModel::riesz(1.5),
        CostModel::wire(0.25, 2.0),
        CostModel::tabulated({0.5, 1.0, 2.0}, {3.0, 1.0, 0.25})};
    for (const auto& f : models) {
        const CostModel back = io::cost_from_json(io::cost_to_json(f));
        CHECK(back.family() == f.family());
        for (double t : {0.3, 0.7, 1.9, 4.0})
            CHECK(back.eval(t) == f.eval(t)); // bitwise
    }
    CHECK_THROWS_AS(io::cost_from_json({{"family", "cubic"}}),
                    validation_error);
    CHECK_THROWS_AS(io::cost_from_json({{"family", "riesz"}}),
                    validation_error);
    CHECK_THROWS_AS(io::cost_from_json(json::object()), validation_error);
}

TEST_CASE("mode and budget round trips") {
    for (const CostMode& mode :
         {CostMode::exact(), CostMode::below(0.75), CostMode::above(-1.5)}) {
        const CostMode back = io::mode_from_json(io::mode_to_json(mode));
        CHECK(back.kind == mode.kind);
        CHECK(back.param == mode.param);
    }
    CHECK_THROWS_AS(io::mode_from_json({{"kind", "sideways"}}),
                    validation_error);

    SolveBudget b;
    b.max_variables = 1234;
    b.max_iterations = 99;
    const SolveBudget back = io::budget_from_json(io::budget_to_json(b));
    CHECK(back.max_variables == 1234);
    CHECK(back.max_iterations == 99);

    // partial budgets inherit the provided defaults
    SolveBudget defaults;
    defaults.max_variables = 777;
    const SolveBudget partial =
        io::budget_from_json({{"max_iterations", 5}}, defaults);
    CHECK(partial.max_variables == 777);
    CHECK(partial.max_iterations == 5);
    // null is acceptable and keeps the defaults
    CHECK(io::budget_from_json(json(), defaults).max_variables == 777);
    CHECK_THROWS_AS(io::budget_from_json({{"max_variables", -2}}),
                    validation_error);
    CHECK_THROWS_AS(io::budget_from_json({{"max_variables", 1.5}}),
                    validation_error);
}

TEST_CASE("coupling round trip preserves the support exactly") {
    const auto mu = uniform1d({0.0, 0.5, 1.0});
    const auto sol = solve_mot(mu, CostModel::log_cost(), 2);
    const json j = io::coupling_to_json(sol.coupling);
    const Coupling back = io::coupling_from_json(j, mu.weights());
    REQUIRE(back.entries().size() == sol.coupling.entries().size());
    for (std::size_t i = 0; i < back.entries().size(); ++i) {
        CHECK(back.entries()[i].flat == sol.coupling.entries()[i].flat);
        CHECK(back.entries()[i].mass == sol.coupling.entries()[i].mass);
    }

    // malformed plans are rejected: index out of range
    json bad = j;
    bad["entries"][0]["tuple"][0] = 5;
    CHECK_THROWS_AS(io::coupling_from_json(bad, mu.weights()),
                    validation_error);
    // wrong marginals are rejected by the constructor invariant
    json wrong = j;
    wrong["entries"][0]["mass"] = 0.9;
    CHECK_THROWS_AS(io::coupling_from_json(wrong, mu.weights()),
                    validation_error);
}

TEST_CASE("report serializers embed the certificate data") {
    const auto mu = uniform1d({0.0, 0.5, 1.0});
    const CostModel f = CostModel::log_cost();
    const auto sol = solve_mot(mu, f, 2);
    const json js = io::solution_to_json(sol, mu);
    CHECK(js.contains("cost"));
    CHECK(js.contains("dual_value"));
    CHECK(js.contains("gap"));
    CHECK(js.contains("coupling"));
    CHECK(js.contains("diagnostics"));
    CHECK(js["cost"].get<double>() == sol.cost);

    const auto cert = diagonal_certificate(mu, f, 2);
    const json jc = io::certificate_to_json(cert);
    CHECK(jc.contains("beta"));
    CHECK(jc.contains("alpha"));
    CHECK(jc.contains("off_diagonal"));
    CHECK(jc.contains("truncation"));
    CHECK(jc.contains("canonicalization"));
    CHECK(jc.contains("lipschitz"));
    CHECK(jc["passed"].get<bool>() == cert.passed);

    const auto sw = gamma_sweep(mu, f, 2, {0.25, 0.75, 1.25});
    const json jw = io::sweep_to_json(sw);
    CHECK(jw["points"].size() == 3);
    CHECK(jw["non_increasing"].get<bool>());
}

TEST_CASE("file round trip and parse errors") {
    const std::string path = temp_path("rmot_io_test.json");
    json j;
    j["alpha"] = 1.0 / 3.0;
    j["beta"] = {1, 2, 3};
    io::save_json(path, j);
    const json back = io::load_json(path);
    CHECK(back["alpha"].get<double>() == 1.0 / 3.0); // bitwise through text
    CHECK(back["beta"].size() == 3);
    std::remove(path.c_str());

    CHECK_THROWS_AS(io::load_json("/nonexistent/definitely/missing.json"),
                    validation_error);
    const std::string broken = temp_path("rmot_io_broken.json");
    {
        std::ofstream out(broken);
        out << "{ not json";
    }
    CHECK_THROWS_AS(io::load_json(broken), validation_error);
    std::remove(broken.c_str());
}

TEST_CASE("serialization is deterministic: equal inputs, equal bytes") {
    const auto mu = uniform1d({0.0, 0.25, 0.75, 1.0});
    const CostModel f = CostModel::riesz(1.0);
    const auto s1 = solve_mot(mu, f, 2);
    const auto s2 = solve_mot(mu, f, 2);
    const std::string d1 = io::solution_to_json(s1, mu).dump(2);
    const std::string d2 = io::solution_to_json(s2, mu).dump(2);
    CHECK(d1 == d2);

    const std::string p1 = temp_path("rmot_det_1.json");
    const std::string p2 = temp_path("rmot_det_2.json");
    io::save_json(p1, io::solution_to_json(s1, mu));
    io::save_json(p2, io::solution_to_json(s2, mu));
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("csv writers produce one labelled row per record") {
    const auto mu = uniform1d({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    const CostModel f = CostModel::log_cost();

    const std::string swp = temp_path("rmot_sweep.csv");
    io::write_sweep_csv(swp, gamma_sweep(mu, f, 2, {0.3, 0.9}));
    {
        std::ifstream in(swp);
        std::string line;
        std::getline(in, line);
        CHECK(line == "R,optimum,monotone");
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 2);
    }
    std::remove(swp.c_str());

    const std::string mp = temp_path("rmot_map.csv");
    io::write_map_csv(mp, mu, cyclic_map_1d(mu, 3));
    {
        std::ifstream in(mp);
        std::string line;
        std::getline(in, line);
        CHECK(line == "x,Tx,branch");
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 6);
    }
    std::remove(mp.c_str());

    const std::string sup = temp_path("rmot_support.csv");
    io::write_support_csv(sup, mu, solve_mot(mu, f, 2).coupling);
    {
        std::ifstream in(sup);
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("mass,", 0) == 0);
    }
    std::remove(sup.c_str());
}
