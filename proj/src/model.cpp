#include "dqt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dqt {

void SystemSpec::validate() const {
    if (num_nodes < 2) throw std::invalid_argument("system: num_nodes must be >= 2");
    if (!std::isfinite(ground) || !std::isfinite(excited))
        throw std::invalid_argument("system: levels must be finite");
    if (!(excited > ground)) throw std::invalid_argument("system: excited level must lie above ground");
}

EnvSpec EnvSpec::ladder(double ground, double spacing, std::size_t count) {
    EnvSpec env;
    env.levels.reserve(count);
    for (std::size_t k = 0; k < count; ++k) env.levels.push_back(ground + spacing * static_cast<double>(k));
    return env;
}

void EnvSpec::validate(const SystemSpec& sys) const {
    if (levels.empty()) throw std::invalid_argument("environment: at least one level required");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!std::isfinite(levels[k])) throw std::invalid_argument("environment: levels must be finite");
        if (k > 0 && !(levels[k] > levels[k - 1]))
            throw std::invalid_argument("environment: levels must be strictly ascending");
        for (std::size_t n = 0; n < 2; ++n) {
            if (levels[k] == sys.level(n)) {
                std::ostringstream os;
                os << "environment: level E_" << k + 1 << " = " << levels[k] << " coincides with system level "
                   << n + 1;
                throw std::invalid_argument(os.str());
            }
        }
    }
}

CouplingSpec CouplingSpec::uniform(std::size_t env_levels, cplx value) {
    CouplingSpec c;
    c.g = Eigen::MatrixX2cd::Constant(static_cast<Eigen::Index>(env_levels), 2, value);
    return c;
}

void CouplingSpec::validate(const EnvSpec& env) const {
    if (static_cast<std::size_t>(g.rows()) != env.size())
        throw std::invalid_argument("coupling: matrix must have one row per environment level");
    for (Eigen::Index k = 0; k < g.rows(); ++k)
        for (Eigen::Index n = 0; n < 2; ++n)
            if (!std::isfinite(g(k, n).real()) || !std::isfinite(g(k, n).imag()))
                throw std::invalid_argument("coupling: entries must be finite");
}

std::vector<std::string> weak_coupling_warnings(const SystemSpec& sys, const EnvSpec& env,
                                                const CouplingSpec& coupling, double threshold) {
    std::vector<std::string> out;
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t k = 0; k < env.size(); ++k) {
            const double ratio = std::norm(coupling.g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n))) /
                                 std::abs(sys.level(n) - env.levels[k]);
            if (ratio > threshold) {
                std::ostringstream os;
                os << "weak-coupling check: |g|^2/|eps_" << n + 1 << " - E_" << k + 1 << "| = " << ratio
                   << " exceeds " << threshold;
                out.push_back(os.str());
            }
        }
    }
    return out;
}

LadderOperators build_operators(const SystemSpec&) {
    LadderOperators ops;
    ops.lowering << 0.0, 1.0, 0.0, 0.0;
    ops.raising = ops.lowering.adjoint();
    return ops;
}

cplx LatticeState::total_trace() const {
    cplx tr{0.0, 0.0};
    for (const auto& b : blocks_) tr += b.trace();
    return tr;
}

LatticeState LatticeState::checked(std::vector<Block> blocks, double t) {
    LatticeState s(std::move(blocks), t);
    const auto diag = validate_state(s);
    if (diag.hermiticity_defect > 1e-12) throw std::invalid_argument("lattice state: blocks must be Hermitian");
    if (diag.trace_defect > 1e-10) throw std::invalid_argument("lattice state: total trace must equal 1");
    return s;
}

LatticeState make_initial_state(const InitialStateSpec& init, std::size_t num_nodes) {
    if (init.alpha < 0.0 || init.beta < 0.0) throw std::invalid_argument("initial state: weights must be >= 0");
    if (std::abs(init.alpha + init.beta - 1.0) > 1e-12)
        throw std::invalid_argument("initial state: alpha + beta must equal 1");
    if (init.start_node < 1 || init.start_node > num_nodes)
        throw std::invalid_argument("initial state: start_node out of range");
    std::vector<Block> blocks(num_nodes, Block::Zero());
    blocks[init.start_node - 1] = init.alpha * ground_projector() + init.beta * excited_projector();
    return LatticeState::checked(std::move(blocks), 0.0);
}

std::pair<double, double> hermitian_eigenvalues(const Block& m) {
    // Closed form for [[a, c], [c*, d]].
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const cplx c = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(c));
    return {mean - radius, mean + radius};
}

DiagnosticsReport validate_state(const LatticeState& state) {
    DiagnosticsReport r;
    for (const auto& b : state.blocks()) {
        r.hermiticity_defect = std::max(r.hermiticity_defect, (b - b.adjoint()).cwiseAbs().maxCoeff());
        r.min_eigenvalue = std::min(r.min_eigenvalue, hermitian_eigenvalues(b).first);
    }
    r.trace_defect = std::abs(state.total_trace() - 1.0);
    return r;
}

} // namespace dqt
