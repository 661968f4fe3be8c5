// config.hpp — declarative experiment description and its JSON form

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqt/integrator.hpp"
#include "dqt/model.hpp"

namespace dqt {

enum class SweepAxis { None, SystemGap, EnvLevelCount, EnvSpacing, InitialAlpha, ModeCompare };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

/// Environment either as an explicit level list or as an evenly spaced ladder.
/// Level-count and spacing sweeps require the ladder form.
struct EnvironmentConfig {
    std::optional<std::vector<double>> levels;
    double ground{0.05};
    double spacing{5.0};
    std::size_t count{5};

    EnvSpec spec() const;
};

/// Uniform coupling unless an explicit (M x 2) matrix is given.
struct CouplingConfig {
    cplx uniform{0.05, 0.0};
    std::optional<Eigen::MatrixX2cd> matrix;

    CouplingSpec spec(std::size_t env_levels) const;
};

struct SweepConfig {
    SweepAxis axis{SweepAxis::None};
    std::vector<double> values;
};

struct ExperimentConfig {
    SystemSpec system{};
    EnvironmentConfig environment{};
    CouplingConfig coupling{};
    InitialStateSpec initial{};
    TimeGrid grid{};
    Mode mode{Mode::Redfield};
    DissipatorConvention convention{DissipatorConvention::LindbladRaising};
    // eta = markov_eta if set, else markov_eta_factor * min |eps_n - E_k|
    double markov_eta_factor{0.1};
    std::optional<double> markov_eta;
    SweepConfig sweep{};
    std::optional<std::size_t> target_node; // defaults to the last node
    std::string output_dir{"out"};
    std::uint64_t seed{0};

    std::size_t target() const { return target_node.value_or(system.num_nodes); }
    EnvSpec env_spec() const { return environment.spec(); }
    CouplingSpec coupling_spec() const { return coupling.spec(env_spec().size()); }
    CoefficientParams coefficient_params() const;
    MarkovRegularizer regularizer() const;
    RhsContext rhs_context() const;

    /// Full consistency check; throws ConfigError naming the offending field.
    void validate() const;
};

/// Parse or validation failure. `where` is a field path or "line L, column C".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// Parses a config document. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Copy of `cfg` with the sweep axis set to `value` and the sweep cleared.
ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, SweepAxis axis, double value);

} // namespace dqt
