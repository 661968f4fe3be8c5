#include "dqt/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dqt/integrator.hpp"

namespace dqt {

namespace {

/// Sparse action of H_I(t) on the truncated product basis
/// index = ((site * 2 + level) << M) | occupation_bits.
class InteractionHamiltonian {
public:
    InteractionHamiltonian(const CoefficientParams& p, std::size_t num_nodes)
        : p_(p), nodes_(num_nodes), modes_(p.env_size()) {}

    std::size_t dimension() const { return 2 * nodes_ << modes_; }

    std::size_t index(std::size_t site, std::size_t level, std::size_t bits) const {
        return ((site * 2 + level) << modes_) | bits;
    }

    /// out = -i H_I(t) psi
    void apply(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const {
        out.setZero(psi.size());
        std::vector<cplx> amp(modes_);
        for (std::size_t k = 0; k < modes_; ++k) {
            amp[k] = 0.0;
            for (std::size_t n = 0; n < 2; ++n)
                amp[k] += p_.g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) *
                          std::polar(1.0, -p_.detuning(n, k) * t);
        }
        const std::size_t occupations = std::size_t{1} << modes_;
        const cplx minus_i{0.0, -1.0};
        for (std::size_t j = 0; j < nodes_; ++j) {
            const std::size_t next = (j + 1) % nodes_;
            for (std::size_t bits = 0; bits < occupations; ++bits) {
                for (std::size_t k = 0; k < modes_; ++k) {
                    const std::size_t mask = std::size_t{1} << k;
                    if (bits & mask) continue;
                    const auto from = static_cast<Eigen::Index>(index(j, 1, bits));
                    const auto to = static_cast<Eigen::Index>(index(next, 0, bits | mask));
                    // (excited, j, n_k = 0) <-> (ground, j+1, n_k = 1)
                    out[to] += minus_i * amp[k] * psi[from];
                    out[from] += minus_i * std::conj(amp[k]) * psi[to];
                }
            }
        }
    }

    void rk4(double t, double dt, Eigen::VectorXcd& psi) {
        apply(t, psi, k1_);
        apply(t + 0.5 * dt, psi + 0.5 * dt * k1_, k2_);
        apply(t + 0.5 * dt, psi + 0.5 * dt * k2_, k3_);
        apply(t + dt, psi + dt * k3_, k4_);
        psi += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

    double excitation(const Eigen::VectorXcd& psi) const {
        double e = 0.0;
        const std::size_t occupations = std::size_t{1} << modes_;
        for (std::size_t j = 0; j < nodes_; ++j)
            for (std::size_t s = 0; s < 2; ++s)
                for (std::size_t bits = 0; bits < occupations; ++bits)
                    e += std::norm(psi[static_cast<Eigen::Index>(index(j, s, bits))]) *
                         static_cast<double>(s + std::popcount(bits));
        return e;
    }

    /// Adds weight * Tr_B |psi><psi| restricted to the site-diagonal blocks.
    void accumulate_blocks(const Eigen::VectorXcd& psi, double weight, std::vector<Block>& blocks) const {
        const std::size_t occupations = std::size_t{1} << modes_;
        for (std::size_t j = 0; j < nodes_; ++j)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                    for (std::size_t bits = 0; bits < occupations; ++bits)
                        blocks[j](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                            weight * psi[static_cast<Eigen::Index>(index(j, a, bits))] *
                            std::conj(psi[static_cast<Eigen::Index>(index(j, b, bits))]);
    }

private:
    const CoefficientParams& p_;
    std::size_t nodes_;
    std::size_t modes_;
    Eigen::VectorXcd k1_, k2_, k3_, k4_;
};

} // namespace

ExactOracleResult exact_oracle_run(const ExperimentConfig& cfg, std::size_t substeps) {
    if (substeps == 0) throw std::invalid_argument("exact oracle: substeps must be positive");
    const auto params = cfg.coefficient_params();
    const std::size_t nodes = cfg.system.num_nodes;
    if (params.env_size() >= 16 || (2 * nodes << params.env_size()) > kExactDimensionCap)
        throw std::invalid_argument("exact oracle: system x environment dimension exceeds cap of " +
                                    std::to_string(kExactDimensionCap));

    InteractionHamiltonian ham(params, nodes);
    ExactOracleResult res;
    res.dimension = ham.dimension();

    // Master-equation reference on the same grid.
    const auto reference = evolve(make_initial_state(cfg.initial, nodes), cfg.grid, cfg.rhs_context());
    const auto ctx = cfg.rhs_context();

    // Mixed initial state as a weighted pair of pure components.
    struct Component {
        double weight;
        Eigen::VectorXcd psi;
    };
    std::vector<Component> comps;
    const std::size_t site = cfg.initial.start_node - 1;
    for (std::size_t level = 0; level < 2; ++level) {
        const double w = level == 0 ? cfg.initial.alpha : cfg.initial.beta;
        if (w == 0.0) continue;
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(res.dimension));
        psi[static_cast<Eigen::Index>(ham.index(site, level, 0))] = 1.0;
        comps.push_back({w, psi});
    }

    auto excitation = [&] {
        double e = 0.0;
        for (const auto& c : comps) e += c.weight * ham.excitation(c.psi);
        return e;
    };
    const double initial_excitation = excitation();

    const std::size_t steps = cfg.grid.num_steps();
    const double h = cfg.grid.dt / static_cast<double>(substeps);
    double max_coeff = 0.0;
    std::size_t sample = 0;

    auto record = [&](double t) {
        std::vector<Block> blocks(nodes, Block::Zero());
        for (const auto& c : comps) ham.accumulate_blocks(c.psi, c.weight, blocks);
        LatticeState exact(std::move(blocks), t);
        const auto& ref = reference.states.at(sample);
        double dev2 = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) dev2 += (exact[j] - ref[j]).squaredNorm();
        const auto coeff = ctx.coefficients(t);
        max_coeff = std::max({max_coeff, std::abs(coeff.shift), std::abs(coeff.rate)});

        res.times.push_back(t);
        res.deviation.push_back(std::sqrt(dev2));
        res.excitation.push_back(excitation());
        res.envelope.push_back(10.0 * max_coeff * (t - cfg.grid.t_start));
        res.exact_states.push_back(std::move(exact));
        ++sample;
    };

    record(cfg.grid.t_start);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t0 = cfg.grid.time_at(step);
        for (std::size_t s = 0; s < substeps; ++s)
            for (auto& c : comps) ham.rk4(t0 + static_cast<double>(s) * h, h, c.psi);
        if ((step + 1) % cfg.grid.sample_stride == 0 || step + 1 == steps) record(cfg.grid.time_at(step + 1));
    }

    for (std::size_t i = 0; i < res.times.size(); ++i) {
        res.max_excitation_drift = std::max(res.max_excitation_drift, std::abs(res.excitation[i] - initial_excitation));
        res.max_deviation = std::max(res.max_deviation, res.deviation[i]);
        if (res.deviation[i] > res.envelope[i] && res.deviation[i] > 1e-12) res.within_envelope = false;
    }
    return res;
}

nlohmann::json ExactOracleResult::to_json() const {
    nlohmann::json j;
    j["dimension"] = dimension;
    j["environment_truncation"] = "single occupation per reservoir mode, vacuum initial reservoir";
    j["max_excitation_drift"] = max_excitation_drift;
    j["max_deviation"] = max_deviation;
    j["within_weak_coupling_envelope"] = within_envelope;
    j["times"] = times;
    j["deviation"] = deviation;
    j["excitation"] = excitation;
    j["envelope"] = envelope;
    return j;
}

} // namespace dqt
