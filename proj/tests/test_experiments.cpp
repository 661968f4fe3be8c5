#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dqt/experiments.hpp"
#include "test_support.hpp"

using namespace dqt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("dqt_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("run_single at defaults writes consistent artifacts") {
    const auto dir = scratch("single");
    const auto cfg = testing::default_config();
    const auto art = run_single(cfg, dir);

    const auto rows = read_csv(art.occupation_csv);
    REQUIRE(rows.size() == 6002);
    REQUIRE(rows[0].size() == 101);
    CHECK(rows[0][0] == "t");
    CHECK(rows[0][1] == "P_1");
    CHECK(rows[0][100] == "P_100");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 1; j < rows[i].size(); ++j) sum += std::stod(rows[i][j]);
        REQUIRE(std::abs(sum - 1.0) <= 1e-8);
    }

    const auto summary = nlohmann::json::parse(slurp(art.summary_json));
    CHECK(summary["efficient"].get<bool>());
    CHECK(summary["v_N"].get<double>() < 1.0);
    CHECK(summary["v_N"].get<double>() == doctest::Approx(summary["t_max"].get<double>() / 100.0));
    CHECK(summary["samples"].get<std::size_t>() == 6001);
    CHECK(summary["diagnostics"]["max_trace_defect"].get<double>() <= 1e-8);

    const auto td = read_csv(art.trace_distance_csv);
    CHECK(td.size() == 6002);
    CHECK(td[0][2] == "T_to_ground");
    CHECK(td[1][2] == "nan"); // end node empty at t = 0
    fs::remove_all(dir);
}

TEST_CASE("zero coupling keeps the walker on node 1") {
    auto cfg = testing::default_config();
    cfg.coupling.uniform = 0.0;
    cfg.grid.sample_stride = 100;
    const auto run = simulate(cfg);
    for (double p : run.profile.probabilities[0]) CHECK(p == 1.0);
    CHECK(run.summary.p_max == 0.0);
    CHECK(run.summary.t_max == 0.0);
}

TEST_CASE("artifacts are byte-reproducible") {
    auto cfg = testing::default_config();
    cfg.system.num_nodes = 20;
    cfg.grid.sample_stride = 10;
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    run_single(cfg, a);
    run_single(cfg, b);
    for (const char* f : {"occupation.csv", "summary.json", "trace_distance.csv"})
        CHECK(slurp(a / f) == slurp(b / f));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("sweep writes one directory per value plus a comparison") {
    auto cfg = testing::default_config();
    cfg.system.num_nodes = 10;
    cfg.grid.sample_stride = 50;
    cfg.sweep = {SweepAxis::InitialAlpha, {0.25, 1.0}};
    const auto dir = scratch("sweep");
    const auto report = run_sweep(cfg, dir);
    REQUIRE(report.entries.size() == 2);
    CHECK(fs::exists(dir / "initial_alpha_0" / "occupation.csv"));
    CHECK(fs::exists(dir / "initial_alpha_1" / "summary.json"));
    CHECK(fs::exists(dir / "comparison.csv"));
    const auto cmp = nlohmann::json::parse(slurp(dir / "comparison.json"));
    CHECK(cmp["axis"] == "initial_alpha");
    CHECK(cmp["runs"].size() == 2);
    CHECK(cmp["runs"][0]["value"].get<double>() == 0.25);
    CHECK(cmp["runs"][1]["P_max"].get<double>() > cmp["runs"][0]["P_max"].get<double>());

    // the comparison table is recomputable from the per-run CSVs
    for (std::size_t i = 0; i < 2; ++i) {
        const auto rows = read_csv(dir / ("initial_alpha_" + std::to_string(i)) / "occupation.csv");
        std::vector<double> t, p;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            t.push_back(std::stod(rows[r][0]));
            p.push_back(std::stod(rows[r][10]));
        }
        const auto s = transport_summary(t, p, 10, 10);
        CHECK(s.t_max == cmp["runs"][i]["t_max"].get<double>());
        CHECK(s.p_max == cmp["runs"][i]["P_max"].get<double>());
    }
    fs::remove_all(dir);
}

TEST_CASE("a failing sweep value does not stop the others") {
    auto cfg = testing::default_config();
    cfg.system.num_nodes = 4;
    cfg.environment.count = 2;
    cfg.coupling.uniform = 1.0;
    cfg.grid = TimeGrid{0.0, 20.0, 0.5, 1};
    cfg.sweep = {SweepAxis::SystemGap, {5.06, 3.0}};
    const auto report = run_sweep(cfg, {});
    REQUIRE(report.entries.size() == 2);
    CHECK_FALSE(report.entries[0].error.empty());
    CHECK(report.entries[0].error.find("blow-up") != std::string::npos);
    CHECK(report.entries[1].error.empty());
    CHECK(report.entries[1].artifact.has_value());
    CHECK(report.comparison["runs"][0].contains("error"));
}

TEST_CASE("mode comparison") {
    SUBCASE("static under zero coupling") {
        auto cfg = testing::default_config();
        cfg.system.num_nodes = 10;
        cfg.coupling.uniform = 0.0;
        cfg.grid.sample_stride = 100;
        const auto cmp = compare_modes(cfg, {0.1});
        CHECK(cmp.static_dynamics);
        CHECK_FALSE(cmp.markov_earlier.has_value());
        CHECK(cmp.to_json()["markov_earlier"].is_null());
    }
    SUBCASE("sensitivity table") {
        auto cfg = testing::default_config();
        cfg.system.num_nodes = 10;
        cfg.grid.sample_stride = 10;
        const auto cmp = compare_modes(cfg);
        CHECK_FALSE(cmp.static_dynamics);
        CHECK(cmp.markov_earlier.has_value());
        CHECK(cmp.eta == doctest::Approx(0.005));
        REQUIRE(cmp.eta_sensitivity.size() == 3);
        CHECK(cmp.eta_sensitivity[1].first == 0.1);
        CHECK(cmp.eta_sensitivity[1].second.p_max == doctest::Approx(cmp.markov.p_max));
    }
}

TEST_CASE("mode_compare sweep runs a Redfield baseline plus one Markov run per eta factor") {
    auto cfg = testing::default_config();
    cfg.system.num_nodes = 6;
    cfg.grid.sample_stride = 100;
    cfg.sweep = {SweepAxis::ModeCompare, {0.05, 0.2}};
    const auto report = run_sweep(cfg, {}, true);
    REQUIRE(report.entries.size() == 3);
    CHECK(report.entries[0].label == "redfield");
    CHECK(report.entries[0].result->config.mode == Mode::Redfield);
    CHECK(report.entries[2].result->config.mode == Mode::Markov);
    CHECK(report.entries[2].result->config.regularizer().eta == doctest::Approx(0.01));
}

TEST_CASE("coefficient validation and payload") {
    const auto check = check_coefficients(testing::default_params(), 60.0);
    CHECK(check.points == 601);
    CHECK(check.passed());

    auto small = testing::default_config();
    small.system.num_nodes = 3;
    small.environment.count = 1;
    small.grid = TimeGrid{0.0, 2.0, 0.01, 10};
    const auto j = validate(small);
    CHECK(j["passed"].get<bool>());
    CHECK(j["exact_oracle"]["dimension"].get<std::size_t>() == 12);

    const auto big = validate(testing::default_config());
    CHECK(big["exact_oracle"].contains("skipped"));
}
