#include <doctest.h>

#include "dqt/exact_oracle.hpp"
#include "test_support.hpp"

using namespace dqt;

namespace {

ExperimentConfig small_config(double g, double alpha) {
    auto cfg = testing::default_config();
    cfg.system.num_nodes = 3;
    cfg.environment.count = 1;
    cfg.coupling.uniform = g;
    cfg.initial = {alpha, 1.0 - alpha, 1};
    cfg.grid = TimeGrid{0.0, 10.0, 0.01, 10};
    return cfg;
}

} // namespace

TEST_CASE("zero coupling: exact and master equation agree exactly") {
    for (double alpha : {1.0, 0.0, 0.3}) {
        const auto res = exact_oracle_run(small_config(0.0, alpha));
        CHECK(res.dimension == 12);
        CHECK(res.times.size() == 101);
        CHECK(res.max_deviation == 0.0);
        CHECK(res.max_excitation_drift == 0.0);
    }
}

TEST_CASE("excitation number is conserved by the exact dynamics") {
    for (double alpha : {1.0, 0.0, 0.5}) {
        auto cfg = small_config(0.01, alpha);
        const auto res = exact_oracle_run(cfg);
        CHECK(res.max_excitation_drift <= 1e-8);
        CHECK(res.excitation.front() == doctest::Approx(1.0 - alpha));
    }
    // stronger coupling, near-resonant channel, two reservoir modes
    auto cfg = small_config(0.2, 0.0);
    cfg.environment = EnvironmentConfig{std::vector<double>{0.9, 9.5}, 0.0, 0.0, 0};
    cfg.system.num_nodes = 4;
    const auto res = exact_oracle_run(cfg);
    CHECK(res.dimension == 32);
    CHECK(res.max_excitation_drift <= 1e-8);
}

TEST_CASE("exact dynamics moves an excited walker forward") {
    // L (x) |j+1><j| (x) b^dagger: excited at node 1 becomes ground at node 2
    auto cfg = small_config(0.2, 0.0);
    cfg.environment = EnvironmentConfig{std::vector<double>{0.95}, 0.0, 0.0, 0};
    cfg.system.excited = 1.5;
    cfg.grid = TimeGrid{0.0, 5.0, 0.01, 50};
    const auto res = exact_oracle_run(cfg);
    const auto& last = res.exact_states.back();
    CHECK(last[1](0, 0).real() > 0.01);
    CHECK(std::abs(last.total_trace() - 1.0) <= 1e-8);
}

TEST_CASE("weak-coupling envelope is reported") {
    const auto res = exact_oracle_run(small_config(0.01, 0.5));
    REQUIRE(res.envelope.size() == res.times.size());
    CHECK(res.envelope.front() == 0.0);
    CHECK(res.envelope.back() > 0.0);
    MESSAGE("max deviation " << res.max_deviation << ", within envelope: " << res.within_envelope);
    const auto j = res.to_json();
    CHECK(j.contains("within_weak_coupling_envelope"));
    CHECK(j["environment_truncation"].is_string());
}

TEST_CASE("dimension guard") {
    auto cfg = testing::default_config(); // 2 * 100 * 2^5 = 6400
    CHECK_THROWS_AS(exact_oracle_run(cfg), std::invalid_argument);
    cfg.system.num_nodes = 8;
    cfg.environment.count = 5; // 512: accepted
    cfg.grid = TimeGrid{0.0, 0.1, 0.01, 1};
    CHECK_NOTHROW(exact_oracle_run(cfg, 1));
}
