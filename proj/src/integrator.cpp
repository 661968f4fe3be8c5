#include "dqt/integrator.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace dqt {

void TimeGrid::validate() const {
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(dt))
        throw std::invalid_argument("time grid: values must be finite");
    if (!(t_end > t_start)) throw std::invalid_argument("time grid: t_end must exceed t_start");
    if (!(dt > 0.0)) throw std::invalid_argument("time grid: dt must be positive");
    if (sample_stride == 0) throw std::invalid_argument("time grid: sample_stride must be positive");
    const double steps = (t_end - t_start) / dt;
    if (steps > static_cast<double>(std::numeric_limits<std::int32_t>::max()))
        throw std::invalid_argument("time grid: too many steps");
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("time grid: (t_end - t_start) must be a multiple of dt");
}

std::size_t TimeGrid::num_steps() const {
    validate();
    return static_cast<std::size_t>(std::llround((t_end - t_start) / dt));
}

std::string to_string(DissipatorConvention c) {
    return c == DissipatorConvention::Eq8Lowering ? "eq8_lowering" : "lindblad_raising";
}

std::string to_string(Mode m) { return m == Mode::Redfield ? "redfield" : "markov"; }

DissipatorConvention convention_from_string(const std::string& s) {
    if (s == "eq8_lowering") return DissipatorConvention::Eq8Lowering;
    if (s == "lindblad_raising") return DissipatorConvention::LindbladRaising;
    throw std::invalid_argument("unknown dissipator convention '" + s + "'");
}

Mode mode_from_string(const std::string& s) {
    if (s == "redfield") return Mode::Redfield;
    if (s == "markov") return Mode::Markov;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

RhsContext::RhsContext(CoefficientParams p, DissipatorConvention c, Mode m, MarkovRegularizer reg)
    : params(std::move(p)), convention(c), mode(m), regularizer(reg), ops_(build_operators(SystemSpec{})) {
    if (mode == Mode::Markov) {
        for (std::size_t n = 0; n < 2; ++n) {
            const auto c_n = markov_coefficients(params, n, regularizer);
            markov_.shift += c_n.shift;
            markov_.rate += c_n.rate;
        }
    }
}

CoefficientPair RhsContext::coefficients(double t) const {
    if (mode == Mode::Markov) return markov_;
    // Both levels act through the same two-level ladder, so their channels add.
    CoefficientPair sum;
    for (std::size_t n = 0; n < 2; ++n) {
        sum.shift += level_shift(params, n, t);
        sum.rate += dissipation_rate(params, n, t);
    }
    return sum;
}

void rhs_into(const LatticeState& state, double t, const RhsContext& ctx, std::vector<Block>& out) {
    const std::size_t num_nodes = state.num_nodes();
    if (num_nodes < 2) throw std::invalid_argument("rhs: lattice needs at least two nodes");
    out.resize(num_nodes);

    const auto [shift, rate] = ctx.coefficients(t);
    if (!std::isfinite(shift) || !std::isfinite(rate)) throw std::invalid_argument("rhs: non-finite coefficients");

    const Block& lower = ctx.ops_.lowering;
    const Block& raise = ctx.ops_.raising;
    const Block shift_op = lower * raise; // |g><g|

    // jump: rho_{j+1} -> J rho_{j+1} J^dagger ; loss: {K, rho_j}
    const bool raising = ctx.convention == DissipatorConvention::LindbladRaising;
    const Block& jump = raising ? raise : lower;
    const Block& jump_adj = raising ? lower : raise;
    const Block loss_op = jump_adj * jump;
    const cplx minus_i_shift{0.0, -shift};

    for (std::size_t j = 0; j < num_nodes; ++j) {
        const Block& here = state[j];
        const Block& next = state[j + 1 == num_nodes ? 0 : j + 1];
        out[j].noalias() = minus_i_shift * (shift_op * here - here * shift_op);
        out[j].noalias() += rate * (2.0 * jump * next * jump_adj - loss_op * here - here * loss_op);
    }
}

std::vector<Block> rhs(const LatticeState& state, double t, const RhsContext& ctx) {
    std::vector<Block> out;
    rhs_into(state, t, ctx, out);
    return out;
}

void step_rk4(LatticeState& state, double t, double dt, const RhsContext& ctx, Rk4Workspace& ws) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    const std::size_t num_nodes = state.num_nodes();
    auto& stage = ws.stage;
    stage.blocks().resize(num_nodes);

    rhs_into(state, t, ctx, ws.k1);
    for (std::size_t j = 0; j < num_nodes; ++j) stage[j] = state[j] + (0.5 * dt) * ws.k1[j];
    rhs_into(stage, t + 0.5 * dt, ctx, ws.k2);
    for (std::size_t j = 0; j < num_nodes; ++j) stage[j] = state[j] + (0.5 * dt) * ws.k2[j];
    rhs_into(stage, t + 0.5 * dt, ctx, ws.k3);
    for (std::size_t j = 0; j < num_nodes; ++j) stage[j] = state[j] + dt * ws.k3[j];
    rhs_into(stage, t + dt, ctx, ws.k4);

    const double w = dt / 6.0;
    for (std::size_t j = 0; j < num_nodes; ++j) {
        Block next = state[j] + w * (ws.k1[j] + 2.0 * ws.k2[j] + 2.0 * ws.k3[j] + ws.k4[j]);
        state[j] = 0.5 * (next + next.adjoint());
    }
    state.set_time(t + dt);
}

LatticeState step_rk4(const LatticeState& state, double t, double dt, const RhsContext& ctx) {
    LatticeState out = state;
    Rk4Workspace ws;
    step_rk4(out, t, dt, ctx, ws);
    return out;
}

namespace {

SampleDiagnostics diagnose(const LatticeState& s) {
    const auto r = validate_state(s);
    return {r.trace_defect, r.hermiticity_defect, r.min_eigenvalue};
}

} // namespace

Trajectory evolve(const LatticeState& initial, const TimeGrid& grid, const RhsContext& ctx) {
    const std::size_t steps = grid.num_steps();
    if (initial.num_nodes() < 2) throw std::invalid_argument("evolve: lattice needs at least two nodes");

    Trajectory traj;
    const std::size_t expected = steps / grid.sample_stride + 2;
    traj.times.reserve(expected);
    traj.states.reserve(expected);
    traj.diagnostics.reserve(expected);

    LatticeState state = initial;
    state.set_time(grid.t_start);
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.diagnostics.push_back(diagnose(state));
    };
    record(grid.t_start);

    Rk4Workspace ws;
    for (std::size_t step = 0; step < steps; ++step) {
        const double t = grid.time_at(step);
        step_rk4(state, t, grid.dt, ctx, ws);
        const double t_next = grid.time_at(step + 1);
        state.set_time(t_next);

        const double defect = std::abs(state.total_trace() - 1.0);
        if (!(defect <= 1e-6)) {
            std::ostringstream os;
            os << "integration blow-up at t = " << t_next << " (step " << step + 1 << "): trace defect " << defect
               << " exceeds 1e-6";
            throw IntegrationError(os.str());
        }
        const bool last = step + 1 == steps;
        if ((step + 1) % grid.sample_stride == 0 || last) record(t_next);
    }
    return traj;
}

} // namespace dqt
