// Python bindings. Configs and JSON payloads cross the boundary as JSON text;
// the package wrapper turns them into dicts.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dqt/coefficients.hpp"
#include "dqt/exact_oracle.hpp"
#include "dqt/experiments.hpp"

namespace py = pybind11;
using namespace dqt;

namespace {

py::dict run_to_dict(const RunResult& run) {
    const auto& prof = run.profile;
    const auto samples = prof.num_samples();
    const auto nodes = prof.num_nodes();
    py::array_t<double> occ({nodes, samples});
    auto view = occ.mutable_unchecked<2>();
    for (std::size_t j = 0; j < nodes; ++j)
        for (std::size_t i = 0; i < samples; ++i) view(j, i) = prof.probabilities[j][i];

    auto series = [](const std::vector<TraceDistanceSample>& s, bool raw) {
        py::array_t<double> a(s.size());
        auto v = a.mutable_unchecked<1>();
        for (std::size_t i = 0; i < s.size(); ++i) v(i) = raw ? s[i].raw : s[i].normalized;
        return a;
    };

    py::dict out;
    out["times"] = py::array_t<double>(prof.times.size(), prof.times.data());
    out["occupation"] = occ;
    out["summary_json"] = run.summary_json().dump();
    out["T_to_ground"] = series(run.to_ground, false);
    out["T_to_excited"] = series(run.to_excited, false);
    out["T_to_ground_raw"] = series(run.to_ground, true);
    out["T_to_excited_raw"] = series(run.to_excited, true);
    return out;
}

} // namespace

PYBIND11_MODULE(_dqt, m) {
    m.doc() = "Dissipation-driven transport on a periodic two-level lattice";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

    m.def("default_config_json", [] { return to_json(ExperimentConfig{}).dump(); });
    m.def("normalize_config_json", [](const std::string& text) { return to_json(parse_config(text)).dump(); });

    m.def(
        "simulate",
        [](const std::string& text) {
            const auto cfg = parse_config(text);
            RunResult run;
            {
                py::gil_scoped_release release;
                run = simulate(cfg);
            }
            return run_to_dict(run);
        },
        py::arg("config_json"));

    m.def(
        "run",
        [](const std::string& text, const std::string& out_dir) {
            const auto cfg = parse_config(text);
            py::gil_scoped_release release;
            if (cfg.sweep.axis == SweepAxis::None) {
                const auto art = run_single(cfg, out_dir);
                return nlohmann::json{{"occupation_csv", art.occupation_csv.string()},
                                      {"summary_json", art.summary_json.string()},
                                      {"trace_distance_csv", art.trace_distance_csv.string()}}
                    .dump();
            }
            return run_sweep(cfg, out_dir).comparison.dump();
        },
        py::arg("config_json"), py::arg("out_dir"), "writes artifacts; returns file paths or the sweep comparison");

    m.def(
        "validate",
        [](const std::string& text) {
            const auto cfg = parse_config(text);
            py::gil_scoped_release release;
            return validate(cfg).dump();
        },
        py::arg("config_json"));

    m.def(
        "rates",
        [](const std::string& text, double t) {
            const auto p = parse_config(text).coefficient_params();
            std::vector<std::pair<double, double>> out;
            for (std::size_t n = 0; n < 2; ++n) out.emplace_back(level_shift(p, n, t), dissipation_rate(p, n, t));
            return out;
        },
        py::arg("config_json"), py::arg("t"), "[(Gamma_n, gamma_n)] for n = 1, 2 at time t");

    m.def(
        "markov_rates",
        [](const std::string& text) {
            const auto cfg = parse_config(text);
            const auto p = cfg.coefficient_params();
            std::vector<std::pair<double, double>> out;
            for (std::size_t n = 0; n < 2; ++n) {
                const auto c = markov_coefficients(p, n, cfg.regularizer());
                out.emplace_back(c.shift, c.rate);
            }
            return out;
        },
        py::arg("config_json"));

    m.def(
        "trace_distance", [](const Block& a, const Block& b) { return trace_distance(a, b); }, py::arg("a"),
        py::arg("b"));
}
