// integrator.hpp — right-hand side of the lattice master equation and RK4 propagation

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqt/coefficients.hpp"
#include "dqt/model.hpp"

namespace dqt {

struct TimeGrid {
    double t_start{0.0};
    double t_end{60.0};
    double dt{0.01};
    std::size_t sample_stride{1};

    void validate() const;
    /// Number of RK4 steps covering [t_start, t_end]; requires the span to be
    /// an integer multiple of dt up to 1e-9 relative.
    std::size_t num_steps() const;
    double time_at(std::size_t step) const { return t_start + static_cast<double>(step) * dt; }
};

/// Which neighbour-coupled dissipator is used.
///
/// - Eq8Lowering:     2 L rho_{j+1} L^dagger - {L^dagger L, rho_j}, L = lowering
/// - LindbladRaising: 2 L^dagger rho_{j+1} L - {L L^dagger, rho_j}, L = lowering
///
/// Both share the shift term -i Gamma [L L^dagger, rho_j].
enum class DissipatorConvention { Eq8Lowering, LindbladRaising };

enum class Mode { Redfield, Markov };

std::string to_string(DissipatorConvention c);
std::string to_string(Mode m);
DissipatorConvention convention_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

/// Static context shared by every rhs evaluation of one run.
struct RhsContext {
    CoefficientParams params;
    DissipatorConvention convention{DissipatorConvention::LindbladRaising};
    Mode mode{Mode::Redfield};
    MarkovRegularizer regularizer{};

    RhsContext(CoefficientParams p, DissipatorConvention c, Mode m, MarkovRegularizer reg = {});

    /// Channel-summed (Gamma, gamma) at time t. Markov mode ignores t.
    CoefficientPair coefficients(double t) const;

private:
    LadderOperators ops_;
    CoefficientPair markov_{};

    friend void rhs_into(const LatticeState&, double, const RhsContext&, std::vector<Block>&);
};

/// Writes d rho_j / dt for every node into `out` (resized as needed). Node j
/// reads only blocks j and j+1, with j+1 wrapping to the first node.
void rhs_into(const LatticeState& state, double t, const RhsContext& ctx, std::vector<Block>& out);

std::vector<Block> rhs(const LatticeState& state, double t, const RhsContext& ctx);

/// Scratch buffers for repeated RK4 steps.
struct Rk4Workspace {
    std::vector<Block> k1, k2, k3, k4;
    LatticeState stage;
};

/// One classical RK4 step of size dt from time t; the result is re-Hermitized
/// blockwise and stamped with time t + dt.
LatticeState step_rk4(const LatticeState& state, double t, double dt, const RhsContext& ctx);
void step_rk4(LatticeState& state, double t, double dt, const RhsContext& ctx, Rk4Workspace& ws);

struct SampleDiagnostics {
    double trace_defect{0.0};
    double hermiticity_defect{0.0};
    double min_eigenvalue{0.0};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<LatticeState> states;
    std::vector<SampleDiagnostics> diagnostics;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    std::size_t num_nodes() const { return states.empty() ? 0 : states.front().num_nodes(); }
};

/// Thrown by `evolve` when the trace defect exceeds 1e-6 mid-run.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-step RK4 over the grid, sampling every `sample_stride` steps (the
/// initial and final instants are always sampled).
Trajectory evolve(const LatticeState& initial, const TimeGrid& grid, const RhsContext& ctx);

} // namespace dqt
