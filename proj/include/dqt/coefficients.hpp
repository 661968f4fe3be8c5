// coefficients.hpp — Redfield and Born-Markov rates for the lattice master equation

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dqt/model.hpp"

namespace dqt {

/// Everything the rates depend on: system levels, reservoir levels and the
/// couplings. The detuning of channel (n, k) is eps_n - E_k.
struct CoefficientParams {
    double levels[2]{1.0, 10.0};
    std::vector<double> env_levels;
    Eigen::MatrixX2cd g;

    CoefficientParams() = default;
    CoefficientParams(const SystemSpec& sys, const EnvSpec& env, const CouplingSpec& coupling);

    std::size_t env_size() const { return env_levels.size(); }
    double detuning(std::size_t n, std::size_t k) const { return levels[n] - env_levels[k]; }
    double coupling_sq(std::size_t n, std::size_t k) const {
        return std::norm(g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)));
    }
    /// min over (n, k) of |eps_n - E_k|.
    double min_abs_detuning() const;
};

/// Abel cutoff e^{-eta s} applied to the semi-infinite memory integrals.
struct MarkovRegularizer {
    double eta{0.0};

    /// eta = factor * min |eps_n - E_k|.
    static MarkovRegularizer relative(const CoefficientParams& p, double factor);
};

/// Pair of rates for one system level: `shift` multiplies the commutator term,
/// `rate` the neighbour-coupled dissipator.
struct CoefficientPair {
    double shift{0.0}; // Gamma_n
    double rate{0.0};  // gamma_n
};

/// gamma_n(t) = sum_k |g_kn|^2 sin(w t) / w,  w = eps_n - E_k.
/// May be negative; throws std::invalid_argument on non-finite input or t < 0.
double dissipation_rate(const CoefficientParams& p, std::size_t n, double t);

/// Gamma_n(t) = sum_k |g_kn|^2 (1 - cos(w t)) / w.
double level_shift(const CoefficientParams& p, std::size_t n, double t);

inline CoefficientPair redfield_coefficients(const CoefficientParams& p, std::size_t n, double t) {
    return {level_shift(p, n, t), dissipation_rate(p, n, t)};
}

/// Time-independent rates with the sin integral assigned to the shift and the
/// cos integral to the dissipator, each regularized by e^{-eta s}:
///   Gamma_n = sum_k |g|^2 w / (eta^2 + w^2),  gamma_n = sum_k |g|^2 eta / (eta^2 + w^2).
CoefficientPair markov_coefficients(const CoefficientParams& p, std::size_t n, const MarkovRegularizer& reg);

/// Reported by `quadrature_coefficients` when adaptive Gauss-Kronrod cannot
/// reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Independent route to the Redfield rates: integrates the memory kernel
/// e^{i w s} over [0, t] numerically for each channel and assembles
/// Gamma = sum |g|^2 Im(int), gamma = sum |g|^2 Re(int).
CoefficientPair quadrature_coefficients(const CoefficientParams& p, std::size_t n, double t,
                                        double abs_tol = 1e-10);

} // namespace dqt
