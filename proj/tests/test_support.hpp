// Shared fixtures and test-only oracles.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "dqt/coefficients.hpp"
#include "dqt/config.hpp"
#include "dqt/model.hpp"

namespace dqt::testing {

/// Composite Simpson rule with `panels` (even) subintervals. Deliberately
/// independent of the library's quadrature route.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels = 20000) {
    if (panels % 2) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) sum += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// One environment level E such that level n has detuning `w`; the other
/// system level sits 9 units above.
inline CoefficientParams single_channel(double w, double coupling_sq, std::size_t n = 0) {
    CoefficientParams p;
    p.levels[0] = 1.0;
    p.levels[1] = 10.0;
    p.env_levels = {p.levels[n] - w};
    p.g = Eigen::MatrixX2cd::Zero(1, 2);
    p.g(0, static_cast<Eigen::Index>(n)) = std::sqrt(coupling_sq);
    return p;
}

inline ExperimentConfig default_config() { return ExperimentConfig{}; }

inline CoefficientParams default_params() { return default_config().coefficient_params(); }

/// Random Hermitian positive block scaled to trace `weight`.
inline Block random_density_block(std::mt19937_64& rng, double weight) {
    std::normal_distribution<double> nd;
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    Block b = a * a.adjoint();
    return b * (weight / b.trace().real());
}

/// Random Hermitian (not necessarily positive) block.
inline Block random_hermitian(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Block b;
    b(0, 0) = nd(rng);
    b(1, 1) = nd(rng);
    b(0, 1) = cplx(nd(rng), nd(rng));
    b(1, 0) = std::conj(b(0, 1));
    return b;
}

inline LatticeState random_state(std::mt19937_64& rng, std::size_t nodes) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> w(nodes);
    double total = 0.0;
    for (auto& x : w) total += (x = u(rng));
    std::vector<Block> blocks;
    for (double x : w) blocks.push_back(random_density_block(rng, x / total));
    return LatticeState::checked(std::move(blocks), 0.0);
}

} // namespace dqt::testing
