#include "dqt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dqt {

using nlohmann::json;

std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::SystemGap: return "system_gap";
    case SweepAxis::EnvLevelCount: return "env_level_count";
    case SweepAxis::EnvSpacing: return "env_spacing";
    case SweepAxis::InitialAlpha: return "initial_alpha";
    case SweepAxis::ModeCompare: return "mode_compare";
    }
    return "none";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    for (auto a : {SweepAxis::None, SweepAxis::SystemGap, SweepAxis::EnvLevelCount, SweepAxis::EnvSpacing,
                   SweepAxis::InitialAlpha, SweepAxis::ModeCompare})
        if (to_string(a) == s) return a;
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

EnvSpec EnvironmentConfig::spec() const {
    if (levels) return EnvSpec{*levels};
    return EnvSpec::ladder(ground, spacing, count);
}

CouplingSpec CouplingConfig::spec(std::size_t env_levels) const {
    if (matrix) return CouplingSpec{*matrix};
    return CouplingSpec::uniform(env_levels, uniform);
}

CoefficientParams ExperimentConfig::coefficient_params() const {
    return CoefficientParams(system, env_spec(), coupling_spec());
}

MarkovRegularizer ExperimentConfig::regularizer() const {
    if (markov_eta) return MarkovRegularizer{*markov_eta};
    return MarkovRegularizer::relative(coefficient_params(), markov_eta_factor);
}

RhsContext ExperimentConfig::rhs_context() const {
    auto params = coefficient_params();
    const auto reg = mode == Mode::Markov ? regularizer() : MarkovRegularizer{};
    return RhsContext(std::move(params), convention, mode, reg);
}

namespace {

void check(bool ok, const std::string& where, const std::string& what) {
    if (!ok) throw ConfigError(where, what);
}

void validate_physics(const ExperimentConfig& c, const std::string& ctx) {
    try {
        c.system.validate();
        const auto env = c.env_spec();
        env.validate(c.system);
        c.coupling_spec().validate(env);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ctx, e.what());
    }
    try {
        make_initial_state(c.initial, c.system.num_nodes);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ctx.empty() ? "initial_state" : ctx, e.what());
    }
    try {
        c.grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ctx.empty() ? "time_grid" : ctx, e.what());
    }
    if (c.mode == Mode::Markov || c.sweep.axis == SweepAxis::ModeCompare) {
        try {
            const auto reg = c.regularizer();
            check(reg.eta > 0.0 && std::isfinite(reg.eta), "markov", "eta must be positive");
        } catch (const std::invalid_argument& e) {
            throw ConfigError("markov", e.what());
        }
    }
    if (c.target_node) check(*c.target_node >= 1 && *c.target_node <= c.system.num_nodes, "target_node",
                             "must lie in [1, num_nodes]");
}

} // namespace

ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, SweepAxis axis, double value) {
    ExperimentConfig out = cfg;
    out.sweep = SweepConfig{};
    switch (axis) {
    case SweepAxis::None: break;
    case SweepAxis::SystemGap: out.system.excited = value; break;
    case SweepAxis::EnvLevelCount:
        check(!cfg.environment.levels, "sweep", "env_level_count requires the ladder form of 'environment'");
        check(value >= 1.0 && value == std::floor(value), "sweep.values", "level count must be a positive integer");
        out.environment.count = static_cast<std::size_t>(value);
        break;
    case SweepAxis::EnvSpacing:
        check(!cfg.environment.levels, "sweep", "env_spacing requires the ladder form of 'environment'");
        out.environment.spacing = value;
        break;
    case SweepAxis::InitialAlpha:
        out.initial.alpha = value;
        out.initial.beta = 1.0 - value;
        break;
    case SweepAxis::ModeCompare:
        out.mode = Mode::Markov;
        out.markov_eta.reset();
        out.markov_eta_factor = value;
        break;
    }
    return out;
}

void ExperimentConfig::validate() const {
    validate_physics(*this, "");
    if (sweep.axis == SweepAxis::None) {
        check(sweep.values.empty(), "sweep.values", "must be empty when axis is 'none'");
        return;
    }
    check(sweep.values.size() >= 2, "sweep.values", "a sweep needs at least two values");
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        const std::string where = "sweep.values[" + std::to_string(i) + "]";
        check(std::isfinite(sweep.values[i]), where, "must be finite");
        validate_physics(apply_sweep_value(*this, sweep.axis, sweep.values[i]), where);
    }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        check(j_.is_object(), path_.empty() ? "<root>" : path_, "expected an object");
    }

    ~Reader() = default;

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const json& raw(const std::string& key) const { return j_.at(key); }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        check(v.is_number(), at(key), "expected a number");
        return v.get<double>();
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        check(v.is_number_integer() && v.get<long long>() >= 0, at(key), "expected a non-negative integer");
        return v.get<std::size_t>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        check(v.is_string(), at(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const auto& v = j_.at(key);
        check(v.is_array(), at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            check(v[i].is_number(), at(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, _] : j_.items())
            if (!seen_.count(key)) throw ConfigError(at(key), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

cplx complex_value(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    check(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(), where,
          "expected a number or a [re, im] pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

json complex_json(cplx c) {
    if (c.imag() == 0.0) return c.real();
    return json::array({c.real(), c.imag()});
}

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(line_column(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
    }

    ExperimentConfig cfg;
    Reader root(doc, "");

    if (root.has("system")) {
        Reader r(root.raw("system"), "system");
        cfg.system.num_nodes = r.count("num_nodes", cfg.system.num_nodes);
        if (r.has("levels")) {
            const auto lv = r.numbers("levels");
            check(lv.size() == 2, r.at("levels"), "expected exactly two levels [ground, excited]");
            cfg.system.ground = lv[0];
            cfg.system.excited = lv[1];
        }
        r.reject_unknown();
    }

    if (root.has("environment")) {
        Reader r(root.raw("environment"), "environment");
        if (r.has("levels")) cfg.environment.levels = r.numbers("levels");
        const bool ladder_keys = r.has("ground") || r.has("spacing") || r.has("count");
        check(!(cfg.environment.levels && ladder_keys), "environment",
              "give either 'levels' or 'ground'/'spacing'/'count', not both");
        cfg.environment.ground = r.number("ground", cfg.environment.ground);
        cfg.environment.spacing = r.number("spacing", cfg.environment.spacing);
        cfg.environment.count = r.count("count", cfg.environment.count);
        r.reject_unknown();
    }

    if (root.has("coupling")) {
        Reader r(root.raw("coupling"), "coupling");
        if (r.has("uniform")) cfg.coupling.uniform = complex_value(r.raw("uniform"), r.at("uniform"));
        if (r.has("matrix")) {
            const auto& m = r.raw("matrix");
            check(m.is_array(), r.at("matrix"), "expected one [g_k1, g_k2] row per environment level");
            Eigen::MatrixX2cd g(static_cast<Eigen::Index>(m.size()), 2);
            for (std::size_t k = 0; k < m.size(); ++k) {
                const std::string where = r.at("matrix") + "[" + std::to_string(k) + "]";
                check(m[k].is_array() && m[k].size() == 2, where, "expected a row of two coupling constants");
                for (std::size_t n = 0; n < 2; ++n)
                    g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) =
                        complex_value(m[k][n], where + "[" + std::to_string(n) + "]");
            }
            cfg.coupling.matrix = g;
        }
        r.reject_unknown();
    }

    if (root.has("initial_state")) {
        Reader r(root.raw("initial_state"), "initial_state");
        cfg.initial.alpha = r.number("alpha", cfg.initial.alpha);
        cfg.initial.beta = r.has("beta") ? r.number("beta", 0.0) : 1.0 - cfg.initial.alpha;
        cfg.initial.start_node = r.count("start_node", cfg.initial.start_node);
        r.reject_unknown();
    }

    if (root.has("time_grid")) {
        Reader r(root.raw("time_grid"), "time_grid");
        cfg.grid.t_start = r.number("t_start", cfg.grid.t_start);
        cfg.grid.t_end = r.number("t_end", cfg.grid.t_end);
        cfg.grid.dt = r.number("dt", cfg.grid.dt);
        cfg.grid.sample_stride = r.count("sample_stride", cfg.grid.sample_stride);
        r.reject_unknown();
    }

    try {
        cfg.mode = mode_from_string(root.text("mode", to_string(cfg.mode)));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("mode", e.what());
    }
    try {
        cfg.convention = convention_from_string(root.text("convention", to_string(cfg.convention)));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("convention", e.what());
    }

    if (root.has("markov")) {
        Reader r(root.raw("markov"), "markov");
        cfg.markov_eta_factor = r.number("eta_factor", cfg.markov_eta_factor);
        if (r.has("eta")) cfg.markov_eta = r.number("eta", 0.0);
        r.reject_unknown();
    }

    if (root.has("sweep")) {
        Reader r(root.raw("sweep"), "sweep");
        try {
            cfg.sweep.axis = sweep_axis_from_string(r.text("axis", "none"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("sweep.axis", e.what());
        }
        if (r.has("values")) cfg.sweep.values = r.numbers("values");
        r.reject_unknown();
    }

    if (root.has("target_node")) cfg.target_node = root.count("target_node", 0);
    cfg.output_dir = root.text("output_dir", cfg.output_dir);
    if (root.has("seed")) cfg.seed = root.count("seed", 0);
    root.reject_unknown();

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["system"] = {{"num_nodes", cfg.system.num_nodes}, {"levels", {cfg.system.ground, cfg.system.excited}}};
    if (cfg.environment.levels) {
        j["environment"] = {{"levels", *cfg.environment.levels}};
    } else {
        j["environment"] = {{"ground", cfg.environment.ground},
                            {"spacing", cfg.environment.spacing},
                            {"count", cfg.environment.count}};
    }
    if (cfg.coupling.matrix) {
        json rows = json::array();
        const auto& g = *cfg.coupling.matrix;
        for (Eigen::Index k = 0; k < g.rows(); ++k) rows.push_back({complex_json(g(k, 0)), complex_json(g(k, 1))});
        j["coupling"] = {{"matrix", rows}};
    } else {
        j["coupling"] = {{"uniform", complex_json(cfg.coupling.uniform)}};
    }
    j["initial_state"] = {
        {"alpha", cfg.initial.alpha}, {"beta", cfg.initial.beta}, {"start_node", cfg.initial.start_node}};
    j["time_grid"] = {{"t_start", cfg.grid.t_start},
                      {"t_end", cfg.grid.t_end},
                      {"dt", cfg.grid.dt},
                      {"sample_stride", cfg.grid.sample_stride}};
    j["mode"] = to_string(cfg.mode);
    j["convention"] = to_string(cfg.convention);
    j["markov"] = {{"eta_factor", cfg.markov_eta_factor}};
    if (cfg.markov_eta) j["markov"]["eta"] = *cfg.markov_eta;
    j["sweep"] = {{"axis", to_string(cfg.sweep.axis)}, {"values", cfg.sweep.values}};
    if (cfg.target_node) j["target_node"] = *cfg.target_node;
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    return j;
}

} // namespace dqt
