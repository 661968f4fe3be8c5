// observables.hpp — occupation probabilities, trace distances and transport summaries

#pragma once

#include <cstddef>
#include <vector>

#include "dqt/integrator.hpp"
#include "dqt/model.hpp"

namespace dqt {

/// P_j = |Tr rho_j| for the 1-based node index j.
double occupation(const LatticeState& state, std::size_t node);

/// Half the sum of absolute eigenvalues of (a - b). Throws
/// std::invalid_argument if either block has a Hermiticity defect above 1e-8.
double trace_distance(const Block& a, const Block& b);

/// P[j][i]: occupation of node j+1 at sample i.
struct OccupationProfile {
    std::vector<double> times;
    std::vector<std::vector<double>> probabilities;

    std::size_t num_nodes() const { return probabilities.size(); }
    std::size_t num_samples() const { return times.size(); }
};

OccupationProfile occupation_profile(const Trajectory& traj);

struct TransportSummary {
    std::size_t target_node{0};
    double t_max{0.0};
    double p_max{0.0};
    double speed{0.0}; // v_N = t_max / N
    bool efficient{false};
};

/// Earliest sample attaining the maximum occupation of `target_node`.
/// Throws std::invalid_argument for an empty trajectory or bad node.
TransportSummary transport_summary(const Trajectory& traj, std::size_t target_node);

/// Same reduction over a bare (times, occupation) series.
TransportSummary transport_summary(const std::vector<double>& times, const std::vector<double>& occupation,
                                   std::size_t target_node, std::size_t num_nodes);

struct TraceDistanceSample {
    double t{0.0};
    double occupation{0.0};
    bool defined{false};  // block trace above 1e-9
    double normalized{0.0}; // distance of rho_N / Tr rho_N to target; NaN when undefined
    double raw{0.0};        // distance of the unnormalized block to target
};

std::vector<TraceDistanceSample> trace_distance_series(const Trajectory& traj, std::size_t target_node,
                                                       const Block& target);

} // namespace dqt
