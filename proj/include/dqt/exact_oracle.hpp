// exact_oracle.hpp — brute-force system+environment evolution for small lattices
//
// The walker (two internal levels on N sites) and M reservoir modes truncated
// at single occupation are propagated as pure states under the
// interaction-picture coupling
//
//   H_I(t) = sum_{j,k,n} g_nk e^{-i (eps_n - E_k) t} L (x) |j+1><j| (x) b_k^dagger + h.c.
//
// with L the two-level lowering operator and the reservoir starting in vacuum.
// Tracing out the reservoir gives per-node blocks that are compared with the
// master-equation solution for the same config.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqt/config.hpp"
#include "dqt/model.hpp"

namespace dqt {

struct ExactOracleResult {
    std::size_t dimension{0};
    std::vector<double> times;
    std::vector<double> deviation;   // Frobenius distance of node blocks, exact vs master equation
    std::vector<double> excitation;  // <L^dagger L + sum_k b_k^dagger b_k>
    std::vector<double> envelope;    // 10 * max |coefficient| * t
    double max_excitation_drift{0.0};
    double max_deviation{0.0};
    bool within_envelope{true};
    std::vector<LatticeState> exact_states;

    nlohmann::json to_json() const;
};

/// Largest system (x) environment dimension accepted.
inline constexpr std::size_t kExactDimensionCap = 512;

/// Throws std::invalid_argument when 2 N 2^M exceeds the cap. `substeps` RK4
/// steps are taken per master-equation time step.
ExactOracleResult exact_oracle_run(const ExperimentConfig& cfg, std::size_t substeps = 10);

} // namespace dqt
