#include "dqt/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <system_error>

#include "dqt/coefficients.hpp"
#include "dqt/exact_oracle.hpp"

namespace dqt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

json summary_to_json(const TransportSummary& s) {
    return {{"target_node", s.target_node},
            {"t_max", s.t_max},
            {"P_max", s.p_max},
            {"v_N", s.speed},
            {"efficient", s.efficient}};
}

// JSON cannot carry NaN; undefined samples become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

RunResult simulate(const ExperimentConfig& cfg) {
    if (cfg.sweep.axis != SweepAxis::None) throw std::invalid_argument("simulate: config has a sweep axis");
    RunResult run;
    run.config = cfg;
    const auto env = cfg.env_spec();
    run.warnings = weak_coupling_warnings(cfg.system, env, cfg.coupling_spec());
    const auto initial = make_initial_state(cfg.initial, cfg.system.num_nodes);
    run.trajectory = evolve(initial, cfg.grid, cfg.rhs_context());
    run.profile = occupation_profile(run.trajectory);
    run.summary = transport_summary(run.trajectory, cfg.target());
    run.to_ground = trace_distance_series(run.trajectory, cfg.target(), ground_projector());
    run.to_excited = trace_distance_series(run.trajectory, cfg.target(), excited_projector());
    return run;
}

json RunResult::summary_json() const {
    json j = summary_to_json(summary);
    j["num_nodes"] = config.system.num_nodes;
    j["mode"] = to_string(config.mode);
    j["convention"] = to_string(config.convention);
    if (config.mode == Mode::Markov) j["markov_eta"] = config.regularizer().eta;
    j["samples"] = trajectory.size();

    double max_trace = 0.0, max_herm = 0.0, min_eig = 0.0;
    for (const auto& d : trajectory.diagnostics) {
        max_trace = std::max(max_trace, d.trace_defect);
        max_herm = std::max(max_herm, d.hermiticity_defect);
        min_eig = std::min(min_eig, d.min_eigenvalue);
    }
    j["diagnostics"] = {{"max_trace_defect", max_trace},
                        {"max_hermiticity_defect", max_herm},
                        {"min_block_eigenvalue", min_eig}};

    // Trace distances at the arrival instant.
    std::size_t at = 0;
    for (std::size_t i = 0; i < trajectory.times.size(); ++i)
        if (trajectory.times[i] == summary.t_max) {
            at = i;
            break;
        }
    if (!to_excited.empty()) {
        j["at_t_max"] = {{"T_to_excited", finite_or_null(to_excited[at].normalized)},
                         {"T_to_ground", finite_or_null(to_ground[at].normalized)},
                         {"T_to_excited_raw", to_excited[at].raw},
                         {"T_to_ground_raw", to_ground[at].raw}};
    }
    j["warnings"] = warnings;
    j["config"] = to_json(config);
    return j;
}

void write_occupation_csv(const OccupationProfile& profile, const fs::path& path) {
    std::string out = "t";
    for (std::size_t j = 1; j <= profile.num_nodes(); ++j) out += ",P_" + std::to_string(j);
    out += '\n';
    for (std::size_t i = 0; i < profile.num_samples(); ++i) {
        out += fmt17(profile.times[i]);
        for (std::size_t j = 0; j < profile.num_nodes(); ++j) {
            out += ',';
            out += fmt17(profile.probabilities[j][i]);
        }
        out += '\n';
    }
    write_atomic(path, out);
}

void write_trace_distance_csv(const RunResult& run, const fs::path& path) {
    std::string out = "t,P_N,T_to_ground,T_to_excited,T_to_ground_raw,T_to_excited_raw,defined\n";
    for (std::size_t i = 0; i < run.to_ground.size(); ++i) {
        const auto& g = run.to_ground[i];
        const auto& e = run.to_excited[i];
        out += fmt17(g.t) + ',' + fmt17(g.occupation) + ',' + fmt17(g.normalized) + ',' + fmt17(e.normalized) + ',' +
               fmt17(g.raw) + ',' + fmt17(e.raw) + ',' + (g.defined ? "1" : "0") + '\n';
    }
    write_atomic(path, out);
}

void write_json(const json& j, const fs::path& path) { write_atomic(path, j.dump(2) + "\n"); }

RunArtifact write_artifacts(const RunResult& run, const fs::path& dir) {
    RunArtifact a;
    a.occupation_csv = dir / "occupation.csv";
    a.summary_json = dir / "summary.json";
    a.trace_distance_csv = dir / "trace_distance.csv";
    a.summary = run.summary;
    write_occupation_csv(run.profile, a.occupation_csv);
    write_trace_distance_csv(run, a.trace_distance_csv);
    write_json(run.summary_json(), a.summary_json);
    return a;
}

RunArtifact run_single(const ExperimentConfig& cfg, const fs::path& out_dir) {
    return write_artifacts(simulate(cfg), out_dir);
}

SweepReport run_sweep(const ExperimentConfig& cfg, const fs::path& out_dir, bool keep_results) {
    if (cfg.sweep.axis == SweepAxis::None || cfg.sweep.values.size() < 2)
        throw std::invalid_argument("run_sweep: need a sweep axis with at least two values");

    SweepReport report;
    report.axis = cfg.sweep.axis;
    const std::string axis = to_string(cfg.sweep.axis);

    struct Job {
        std::string label;
        double value;
        ExperimentConfig config;
    };
    std::vector<Job> jobs;
    if (cfg.sweep.axis == SweepAxis::ModeCompare) {
        ExperimentConfig base = cfg;
        base.sweep = SweepConfig{};
        base.mode = Mode::Redfield;
        jobs.push_back({"redfield", std::numeric_limits<double>::quiet_NaN(), base});
    }
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        const double v = cfg.sweep.values[i];
        jobs.push_back({axis + "_" + std::to_string(i), v, apply_sweep_value(cfg, cfg.sweep.axis, v)});
    }

    std::vector<std::future<SweepEntry>> futures;
    for (const auto& job : jobs) {
        futures.push_back(std::async(std::launch::async, [&job, &out_dir, keep_results] {
            SweepEntry e;
            e.value = job.value;
            e.label = job.label;
            try {
                auto run = simulate(job.config);
                if (!out_dir.empty()) e.artifact = write_artifacts(run, out_dir / job.label);
                else e.artifact = RunArtifact{{}, {}, {}, run.summary};
                if (keep_results) e.result = std::move(run);
            } catch (const std::exception& ex) {
                e.error = ex.what();
            }
            return e;
        }));
    }
    for (auto& f : futures) report.entries.push_back(f.get());

    json rows = json::array();
    std::string csv = "label,value,t_max,P_max,v_N,efficient,error\n";
    for (const auto& e : report.entries) {
        json row = {{"label", e.label}, {"value", finite_or_null(e.value)}};
        if (e.artifact) {
            row.update(summary_to_json(e.artifact->summary));
            csv += e.label + ',' + fmt17(e.value) + ',' + fmt17(e.artifact->summary.t_max) + ',' +
                   fmt17(e.artifact->summary.p_max) + ',' + fmt17(e.artifact->summary.speed) + ',' +
                   (e.artifact->summary.efficient ? "true" : "false") + ",\n";
        } else {
            row["error"] = e.error;
            csv += e.label + ',' + fmt17(e.value) + ",,,,,\"" + e.error + "\"\n";
        }
        rows.push_back(row);
    }
    report.comparison = {{"axis", axis}, {"runs", rows}};
    if (!out_dir.empty()) {
        write_json(report.comparison, out_dir / "comparison.json");
        write_atomic(out_dir / "comparison.csv", csv);
    }
    return report;
}

json ModeComparison::to_json() const {
    json j;
    j["redfield"] = summary_to_json(redfield);
    j["markov"] = summary_to_json(markov);
    j["markov_eta"] = eta;
    j["static_dynamics"] = static_dynamics;
    j["markov_earlier"] = markov_earlier ? json(*markov_earlier) : json(nullptr);
    json sens = json::array();
    for (const auto& [factor, s] : eta_sensitivity) {
        json row = summary_to_json(s);
        row["eta_factor"] = factor;
        sens.push_back(row);
    }
    j["eta_sensitivity"] = sens;
    return j;
}

ModeComparison compare_modes(const ExperimentConfig& cfg, std::vector<double> eta_factors) {
    ExperimentConfig base = cfg;
    base.sweep = SweepConfig{};

    ExperimentConfig red = base;
    red.mode = Mode::Redfield;
    ExperimentConfig mk = base;
    mk.mode = Mode::Markov;

    auto red_run = std::async(std::launch::async, [&] { return simulate(red); });
    auto mk_run = std::async(std::launch::async, [&] { return simulate(mk); });

    ModeComparison cmp;
    const auto r = red_run.get();
    const auto m = mk_run.get();
    cmp.redfield = r.summary;
    cmp.markov = m.summary;
    cmp.eta = mk.regularizer().eta;

    auto unchanged = [](const Trajectory& t) {
        const auto& first = t.states.front();
        for (const auto& s : t.states)
            for (std::size_t j = 0; j < s.num_nodes(); ++j)
                if ((s[j] - first[j]).cwiseAbs().maxCoeff() > 1e-14) return false;
        return true;
    };
    cmp.static_dynamics = unchanged(r.trajectory) && unchanged(m.trajectory);
    if (!cmp.static_dynamics) cmp.markov_earlier = cmp.markov.t_max < cmp.redfield.t_max;

    std::vector<std::future<TransportSummary>> sens;
    for (double f : eta_factors) {
        sens.push_back(std::async(std::launch::async, [&base, f] {
            auto c = base;
            c.mode = Mode::Markov;
            c.markov_eta.reset();
            c.markov_eta_factor = f;
            return simulate(c).summary;
        }));
    }
    for (std::size_t i = 0; i < eta_factors.size(); ++i) cmp.eta_sensitivity.emplace_back(eta_factors[i], sens[i].get());
    return cmp;
}

ModeComparison compare_modes(const ExperimentConfig& cfg, const fs::path& out_dir) {
    std::vector<double> factors{0.05, 0.1, 0.2};
    if (cfg.sweep.axis == SweepAxis::ModeCompare) factors = cfg.sweep.values;
    auto cmp = compare_modes(cfg, factors);
    if (!out_dir.empty()) write_json(cmp.to_json(), out_dir / "comparison.json");
    return cmp;
}

CoefficientCheck check_coefficients(const CoefficientParams& params, double t_end, double spacing) {
    CoefficientCheck c;
    const auto points = static_cast<std::size_t>(std::llround(t_end / spacing));
    for (std::size_t i = 0; i <= points; ++i) {
        const double t = static_cast<double>(i) * spacing;
        for (std::size_t n = 0; n < 2; ++n) {
            const auto quad = quadrature_coefficients(params, n, t);
            c.max_shift_error = std::max(c.max_shift_error, std::abs(level_shift(params, n, t) - quad.shift));
            c.max_rate_error = std::max(c.max_rate_error, std::abs(dissipation_rate(params, n, t) - quad.rate));
        }
        ++c.points;
    }
    return c;
}

json validate(const ExperimentConfig& cfg) {
    json j;
    const auto check = check_coefficients(cfg.coefficient_params(), cfg.grid.t_end);
    j["coefficients"] = {{"grid_points", check.points},
                         {"max_shift_error", check.max_shift_error},
                         {"max_rate_error", check.max_rate_error},
                         {"tolerance", 1e-8},
                         {"passed", check.passed()}};
    const std::size_t dim = 2 * cfg.system.num_nodes << std::min<std::size_t>(cfg.env_spec().size(), 16);
    if (cfg.env_spec().size() < 16 && dim <= kExactDimensionCap) {
        j["exact_oracle"] = exact_oracle_run(cfg).to_json();
        j["exact_oracle"]["excitation_conserved"] = j["exact_oracle"]["max_excitation_drift"].get<double>() <= 1e-8;
    } else {
        j["exact_oracle"] = {{"skipped", "system x environment dimension " + std::to_string(dim) + " exceeds cap " +
                                             std::to_string(kExactDimensionCap)}};
    }
    j["passed"] = check.passed() && (!j["exact_oracle"].contains("excitation_conserved") ||
                                     j["exact_oracle"]["excitation_conserved"].get<bool>());
    return j;
}

} // namespace dqt
