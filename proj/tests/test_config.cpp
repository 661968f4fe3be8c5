#include <doctest.h>

#include <string>

#include "dqt/config.hpp"

using namespace dqt;

namespace {

std::string where_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.where();
    }
    return "<no error>";
}

} // namespace

TEST_CASE("empty document gives the defaults") {
    const auto cfg = parse_config("{}");
    CHECK(cfg.system.num_nodes == 100);
    CHECK(cfg.system.ground == 1.0);
    CHECK(cfg.system.excited == 10.0);
    CHECK(cfg.env_spec().levels == std::vector<double>{0.05, 5.05, 10.05, 15.05, 20.05});
    CHECK(cfg.coupling_spec().g(4, 1) == cplx(0.05, 0.0));
    CHECK(cfg.grid.num_steps() == 6000);
    CHECK(cfg.mode == Mode::Redfield);
    CHECK(cfg.convention == DissipatorConvention::LindbladRaising);
    CHECK(cfg.target() == 100);
    CHECK(cfg.regularizer().eta == doctest::Approx(0.005));
}

TEST_CASE("explicit fields") {
    const auto cfg = parse_config(R"({
        "system": {"num_nodes": 4, "levels": [0.5, 3.0]},
        "environment": {"levels": [0.01, 1.2]},
        "coupling": {"matrix": [[0.1, [0.0, 0.2]], [0.05, 0.05]]},
        "initial_state": {"alpha": 0.25, "start_node": 2},
        "time_grid": {"t_end": 2.0, "dt": 0.1, "sample_stride": 5},
        "mode": "markov",
        "convention": "eq8_lowering",
        "markov": {"eta": 0.3},
        "target_node": 3,
        "seed": 7
    })");
    CHECK(cfg.system.num_nodes == 4);
    CHECK(cfg.env_spec().levels == std::vector<double>{0.01, 1.2});
    CHECK(cfg.coupling_spec().g(0, 1) == cplx(0.0, 0.2));
    CHECK(cfg.initial.beta == doctest::Approx(0.75));
    CHECK(cfg.initial.start_node == 2);
    CHECK(cfg.regularizer().eta == 0.3);
    CHECK(cfg.target() == 3);
    CHECK(cfg.seed == 7);
    CHECK(cfg.convention == DissipatorConvention::Eq8Lowering);

    // serialized form parses back to the same document
    const auto again = parse_config(to_json(cfg).dump());
    CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("unknown keys and bad values name their field") {
    CHECK(where_of(R"({"sytem": {}})") == "sytem");
    CHECK(where_of(R"({"system": {"num_nodes": 10, "level": [1, 2]}})") == "system.level");
    CHECK(where_of(R"({"system": {"num_nodes": -3}})") == "system.num_nodes");
    CHECK(where_of(R"({"time_grid": {"dt": "small"}})") == "time_grid.dt");
    CHECK(where_of(R"({"mode": "lindblad"})") == "mode");
    CHECK(where_of(R"({"sweep": {"axis": "temperature", "values": [1, 2]}})") == "sweep.axis");
    CHECK(where_of(R"({"sweep": {"axis": "system_gap", "values": [4]}})") == "sweep.values");
    CHECK(where_of(R"({"sweep": {"axis": "system_gap", "values": [4, 10.05]}})") == "sweep.values[1]");
    CHECK(where_of(R"({"initial_state": {"alpha": 0.5, "beta": 0.6}})") == "initial_state");
    CHECK(where_of(R"({"target_node": 101})") == "target_node");
    CHECK(where_of(R"({"environment": {"levels": [0.1], "count": 3}})") == "environment");
    CHECK(where_of(R"({"environment": {"levels": [0.1, 1.5]}})") == "<no error>");
}

TEST_CASE("malformed JSON reports line and column") {
    const std::string w = where_of("{\n  \"system\": {\n    \"num_nodes\": ,\n  }\n}");
    CHECK(w.rfind("line 3", 0) == 0);
}

TEST_CASE("sweep values are applied per axis") {
    const auto base = parse_config("{}");
    CHECK(apply_sweep_value(base, SweepAxis::SystemGap, 4.0).system.excited == 4.0);
    CHECK(apply_sweep_value(base, SweepAxis::EnvLevelCount, 20.0).env_spec().size() == 20);
    CHECK(apply_sweep_value(base, SweepAxis::EnvSpacing, 1.0).env_spec().levels[1] == doctest::Approx(1.05));
    const auto a = apply_sweep_value(base, SweepAxis::InitialAlpha, 0.25);
    CHECK(a.initial.alpha == 0.25);
    CHECK(a.initial.beta == 0.75);
    const auto m = apply_sweep_value(base, SweepAxis::ModeCompare, 0.2);
    CHECK(m.mode == Mode::Markov);
    CHECK(m.regularizer().eta == doctest::Approx(0.01));
    CHECK_THROWS_AS(apply_sweep_value(base, SweepAxis::EnvLevelCount, 2.5), ConfigError);
}
