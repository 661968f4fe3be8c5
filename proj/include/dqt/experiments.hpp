// experiments.hpp — run pipeline, sweeps, mode comparison and artifact output

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqt/config.hpp"
#include "dqt/integrator.hpp"
#include "dqt/observables.hpp"

namespace dqt {

/// In-memory result of one simulation.
struct RunResult {
    ExperimentConfig config;
    Trajectory trajectory;
    OccupationProfile profile;
    TransportSummary summary;
    std::vector<TraceDistanceSample> to_ground;
    std::vector<TraceDistanceSample> to_excited;
    std::vector<std::string> warnings;

    nlohmann::json summary_json() const;
};

/// model -> integrator -> observables for a config without a sweep axis.
RunResult simulate(const ExperimentConfig& cfg);

/// Files written for one run.
struct RunArtifact {
    std::filesystem::path occupation_csv;
    std::filesystem::path summary_json;
    std::filesystem::path trace_distance_csv;
    TransportSummary summary;
};

/// Writes `t,P_1,...,P_N` with 17 significant digits.
void write_occupation_csv(const OccupationProfile& profile, const std::filesystem::path& path);
void write_trace_distance_csv(const RunResult& run, const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

/// Writes occupation.csv, summary.json and trace_distance.csv into `dir`.
/// Every file is written to a temporary sibling and renamed into place.
RunArtifact write_artifacts(const RunResult& run, const std::filesystem::path& dir);

RunArtifact run_single(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct SweepEntry {
    double value{0.0};
    std::string label;
    std::optional<RunArtifact> artifact;
    std::optional<RunResult> result; // kept when requested, for in-process callers
    std::string error;               // set when this value failed
};

struct SweepReport {
    SweepAxis axis{SweepAxis::None};
    std::vector<SweepEntry> entries;
    nlohmann::json comparison;
};

/// Runs each sweep value concurrently into `<out_dir>/<axis>_<index>/` and
/// writes `comparison.json` / `comparison.csv`. A failing value is recorded and
/// the rest still run. For the mode_compare axis the values are Markov eta
/// factors and an extra Redfield baseline entry is prepended.
/// When `out_dir` is empty nothing is written.
SweepReport run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, bool keep_results = false);

struct ModeComparison {
    TransportSummary redfield;
    TransportSummary markov;
    double eta{0.0};
    bool static_dynamics{false};      // both runs never left the initial state
    std::optional<bool> markov_earlier; // unset when static
    std::vector<std::pair<double, TransportSummary>> eta_sensitivity; // (eta factor, summary)
    nlohmann::json to_json() const;
};

/// Same physics in Redfield and Markov mode. `eta_factors` feeds the
/// sensitivity table (defaults to 0.05, 0.1, 0.2).
ModeComparison compare_modes(const ExperimentConfig& cfg, std::vector<double> eta_factors = {0.05, 0.1, 0.2});

ModeComparison compare_modes(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Closed form vs quadrature on the t grid {0, 0.1, ..., t_end} for both levels.
struct CoefficientCheck {
    std::size_t points{0};
    double max_shift_error{0.0};
    double max_rate_error{0.0};
    bool passed(double tol = 1e-8) const { return max_shift_error <= tol && max_rate_error <= tol; }
};

CoefficientCheck check_coefficients(const CoefficientParams& params, double t_end, double spacing = 0.1);

/// Full `validate` payload: coefficient oracle plus the exact oracle when the
/// config is small enough.
nlohmann::json validate(const ExperimentConfig& cfg);

} // namespace dqt
