// model.hpp — static problem data, two-level operator algebra and lattice states

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dqt {

using cplx = std::complex<double>;

/// 2x2 complex matrix over the ordered internal basis (ground, excited).
using Block = Eigen::Matrix2cd;

/// Energies of the lattice two-level systems (hbar = 1).
struct SystemSpec {
    std::size_t num_nodes{100};
    double ground{1.0};   // epsilon_1
    double excited{10.0}; // epsilon_2

    double level(std::size_t n) const { return n == 0 ? ground : excited; }
    void validate() const;
};

/// Discrete reservoir levels, strictly ascending.
struct EnvSpec {
    std::vector<double> levels;

    /// Evenly spaced ladder starting at `ground`.
    static EnvSpec ladder(double ground, double spacing, std::size_t count);
    std::size_t size() const { return levels.size(); }
    void validate(const SystemSpec& sys) const;
};

/// Coupling constants g(k, n): row k is the environment level, column n the
/// system level. Node-independent.
struct CouplingSpec {
    Eigen::MatrixX2cd g;

    static CouplingSpec uniform(std::size_t env_levels, cplx value);
    void validate(const EnvSpec& env) const;
};

/// Advisory weak-coupling check. Returns human-readable warnings for every
/// channel with |g|^2 / |eps_n - E_k| above `threshold`; empty when weak.
std::vector<std::string> weak_coupling_warnings(const SystemSpec& sys, const EnvSpec& env,
                                                const CouplingSpec& coupling,
                                                double threshold = 0.1);

/// Ladder pair for the internal two-level space.
struct LadderOperators {
    Block lowering; // |g><e|
    Block raising;  // |e><g|
};

LadderOperators build_operators(const SystemSpec& spec);

inline Block ground_projector() { return Block{{1.0, 0.0}, {0.0, 0.0}}; }
inline Block excited_projector() { return Block{{0.0, 0.0}, {0.0, 1.0}}; }

/// Per-node 2x2 blocks of the lattice density matrix at time `t`.
///
/// Construction through `LatticeState::checked` enforces Hermitian blocks and a
/// unit total trace. Positivity is only monitored (see `validate_state`), since
/// non-Markovian evolution may transiently leave the positive cone.
class LatticeState {
public:
    LatticeState() = default;
    LatticeState(std::vector<Block> blocks, double t) : blocks_(std::move(blocks)), time_(t) {}

    /// Throws std::invalid_argument when a block is not Hermitian to 1e-12 or
    /// the total trace differs from one by more than 1e-10.
    static LatticeState checked(std::vector<Block> blocks, double t);

    std::size_t num_nodes() const { return blocks_.size(); }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    const Block& operator[](std::size_t j) const { return blocks_[j]; }
    Block& operator[](std::size_t j) { return blocks_[j]; }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::vector<Block>& blocks() { return blocks_; }

    cplx total_trace() const;

private:
    std::vector<Block> blocks_;
    double time_{0.0};
};

/// rho(0) = alpha |g><g| + beta |e><e| localized at `start_node` (1-based).
struct InitialStateSpec {
    double alpha{1.0};
    double beta{0.0};
    std::size_t start_node{1};
};

LatticeState make_initial_state(const InitialStateSpec& init, std::size_t num_nodes);

struct DiagnosticsReport {
    double hermiticity_defect{0.0}; // max_j max |rho_j - rho_j^dagger|
    double trace_defect{0.0};       // |sum_j Tr rho_j - 1|
    double min_eigenvalue{0.0};     // most negative block eigenvalue (0 if none negative)
};

DiagnosticsReport validate_state(const LatticeState& state);

/// Eigenvalues of the Hermitian part of a 2x2 block, ascending.
std::pair<double, double> hermitian_eigenvalues(const Block& m);

} // namespace dqt
