// dqt — command-line driver: simulate, sweep, compare, validate

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dqt/config.hpp"
#include "dqt/experiments.hpp"

namespace {

using nlohmann::json;

void report_error(const std::string& kind, const std::string& message, const std::string& where = {}) {
    json err = {{"error", kind}, {"message", message}};
    if (!where.empty()) err["where"] = where;
    std::cerr << err.dump() << std::endl;
}

void print_warnings(const dqt::ExperimentConfig& cfg) {
    for (const auto& w : dqt::weak_coupling_warnings(cfg.system, cfg.env_spec(), cfg.coupling_spec()))
        std::cerr << json{{"warning", w}}.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative transport on a periodic lattice of two-level systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* simulate = app.add_subcommand("simulate", "Run one simulation and write CSV/JSON artifacts");
    simulate->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out_dir, "Output directory (overrides output_dir)");

    auto* sweep = app.add_subcommand("sweep", "Run every value of the config's sweep axis");
    sweep->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Output directory (overrides output_dir)");

    auto* compare = app.add_subcommand("compare", "Compare Redfield and Markov dynamics on the same physics");
    compare->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", out_dir, "Output directory (overrides output_dir)");

    auto* validate = app.add_subcommand("validate", "Coefficient quadrature oracle and exact small-lattice oracle");
    validate->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const auto cfg = dqt::load_config(config_path);
        const std::filesystem::path out = out_dir.empty() ? cfg.output_dir : out_dir;
        print_warnings(cfg);

        if (simulate->parsed()) {
            if (cfg.sweep.axis != dqt::SweepAxis::None) {
                report_error("config", "simulate requires sweep.axis = 'none'; use 'sweep'", "sweep.axis");
                return 2;
            }
            const auto artifact = dqt::run_single(cfg, out);
            std::cout << json{{"summary", artifact.summary_json.string()},
                              {"occupation", artifact.occupation_csv.string()},
                              {"trace_distance", artifact.trace_distance_csv.string()},
                              {"t_max", artifact.summary.t_max},
                              {"P_max", artifact.summary.p_max},
                              {"v_N", artifact.summary.speed},
                              {"efficient", artifact.summary.efficient}}
                             .dump(2)
                      << std::endl;
        } else if (sweep->parsed()) {
            const auto report = dqt::run_sweep(cfg, out);
            std::cout << report.comparison.dump(2) << std::endl;
            for (const auto& e : report.entries)
                if (!e.error.empty()) {
                    report_error("run", e.error, e.label);
                    return 1;
                }
        } else if (compare->parsed()) {
            const auto cmp = dqt::compare_modes(cfg, out);
            std::cout << cmp.to_json().dump(2) << std::endl;
        } else if (validate->parsed()) {
            const auto result = dqt::validate(cfg);
            std::cout << result.dump(2) << std::endl;
            if (!result["passed"].get<bool>()) {
                report_error("validation", "oracle checks failed");
                return 1;
            }
        }
    } catch (const dqt::ConfigError& e) {
        report_error("config", e.what(), e.where());
        return 2;
    } catch (const dqt::IntegrationError& e) {
        report_error("integration", e.what());
        return 3;
    } catch (const std::exception& e) {
        report_error("runtime", e.what());
        return 1;
    }
    return 0;
}
