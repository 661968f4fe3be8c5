#include "dqt/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dqt {

namespace {

void check_node(std::size_t node, std::size_t num_nodes) {
    if (node < 1 || node > num_nodes) throw std::invalid_argument("node index out of range");
}

double hermiticity_defect(const Block& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

double occupation(const LatticeState& state, std::size_t node) {
    check_node(node, state.num_nodes());
    return std::abs(state[node - 1].trace());
}

double trace_distance(const Block& a, const Block& b) {
    if (hermiticity_defect(a) > 1e-8 || hermiticity_defect(b) > 1e-8)
        throw std::invalid_argument("trace_distance: inputs must be Hermitian");
    const auto [lo, hi] = hermitian_eigenvalues(a - b);
    return 0.5 * (std::abs(lo) + std::abs(hi));
}

OccupationProfile occupation_profile(const Trajectory& traj) {
    OccupationProfile prof;
    prof.times = traj.times;
    const std::size_t num_nodes = traj.num_nodes();
    prof.probabilities.assign(num_nodes, std::vector<double>(traj.size()));
    for (std::size_t i = 0; i < traj.size(); ++i)
        for (std::size_t j = 0; j < num_nodes; ++j) prof.probabilities[j][i] = std::abs(traj.states[i][j].trace());
    return prof;
}

TransportSummary transport_summary(const std::vector<double>& times, const std::vector<double>& occupation,
                                   std::size_t target_node, std::size_t num_nodes) {
    if (times.empty() || times.size() != occupation.size())
        throw std::invalid_argument("transport_summary: empty or mismatched series");
    check_node(target_node, num_nodes);
    std::size_t best = 0;
    for (std::size_t i = 1; i < occupation.size(); ++i)
        if (occupation[i] > occupation[best]) best = i; // strict: earliest tie wins
    TransportSummary s;
    s.target_node = target_node;
    s.t_max = times[best];
    s.p_max = occupation[best];
    s.speed = s.t_max / static_cast<double>(num_nodes);
    s.efficient = s.speed < 1.0;
    return s;
}

TransportSummary transport_summary(const Trajectory& traj, std::size_t target_node) {
    if (traj.empty()) throw std::invalid_argument("transport_summary: empty trajectory");
    check_node(target_node, traj.num_nodes());
    std::vector<double> p(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) p[i] = occupation(traj.states[i], target_node);
    return transport_summary(traj.times, p, target_node, traj.num_nodes());
}

std::vector<TraceDistanceSample> trace_distance_series(const Trajectory& traj, std::size_t target_node,
                                                       const Block& target) {
    if (!traj.empty()) check_node(target_node, traj.num_nodes());
    std::vector<TraceDistanceSample> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Block& block = traj.states[i][target_node - 1];
        TraceDistanceSample s;
        s.t = traj.times[i];
        const double tr = block.trace().real();
        s.occupation = std::abs(block.trace());
        s.raw = trace_distance(block, target);
        s.defined = tr > 1e-9;
        s.normalized = s.defined ? trace_distance(block / tr, target) : std::numeric_limits<double>::quiet_NaN();
        out.push_back(s);
    }
    return out;
}

} // namespace dqt
