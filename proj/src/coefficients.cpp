#include "dqt/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dqt {

namespace {

void check_time(double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("coefficients: time must be finite");
    if (t < 0.0) throw std::invalid_argument("coefficients: time must be >= 0");
}

void check_level(std::size_t n) {
    if (n > 1) throw std::invalid_argument("coefficients: level index must be 0 or 1");
}

} // namespace

CoefficientParams::CoefficientParams(const SystemSpec& sys, const EnvSpec& env, const CouplingSpec& coupling)
    : levels{sys.ground, sys.excited}, env_levels(env.levels), g(coupling.g) {
    sys.validate();
    env.validate(sys);
    coupling.validate(env);
}

double CoefficientParams::min_abs_detuning() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t k = 0; k < env_size(); ++k) m = std::min(m, std::abs(detuning(n, k)));
    return m;
}

MarkovRegularizer MarkovRegularizer::relative(const CoefficientParams& p, double factor) {
    return MarkovRegularizer{factor * p.min_abs_detuning()};
}

double dissipation_rate(const CoefficientParams& p, std::size_t n, double t) {
    check_time(t);
    check_level(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.env_size(); ++k) {
        const double w = p.detuning(n, k);
        sum += p.coupling_sq(n, k) * std::sin(w * t) / w;
    }
    if (!std::isfinite(sum)) throw std::invalid_argument("coefficients: non-finite dissipation rate");
    return sum;
}

double level_shift(const CoefficientParams& p, std::size_t n, double t) {
    check_time(t);
    check_level(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.env_size(); ++k) {
        const double w = p.detuning(n, k);
        // 1 - cos(x) = 2 sin^2(x/2), no cancellation at small t
        const double half = std::sin(0.5 * w * t);
        sum += p.coupling_sq(n, k) * 2.0 * half * half / w;
    }
    if (!std::isfinite(sum)) throw std::invalid_argument("coefficients: non-finite level shift");
    return sum;
}

CoefficientPair markov_coefficients(const CoefficientParams& p, std::size_t n, const MarkovRegularizer& reg) {
    check_level(n);
    if (!(reg.eta > 0.0) || !std::isfinite(reg.eta))
        throw std::invalid_argument("markov regularizer: eta must be positive and finite");
    CoefficientPair out;
    const double eta2 = reg.eta * reg.eta;
    for (std::size_t k = 0; k < p.env_size(); ++k) {
        const double w = p.detuning(n, k);
        const double denom = eta2 + w * w;
        out.shift += p.coupling_sq(n, k) * w / denom;
        out.rate += p.coupling_sq(n, k) * reg.eta / denom;
    }
    return out;
}

CoefficientPair quadrature_coefficients(const CoefficientParams& p, std::size_t n, double t, double abs_tol) {
    check_time(t);
    check_level(n);
    CoefficientPair out;
    if (t == 0.0) return out;

    using boost::math::quadrature::gauss_kronrod;
    constexpr unsigned max_depth = 4;
    for (std::size_t k = 0; k < p.env_size(); ++k) {
        const double w = p.detuning(n, k);
        const double weight = p.coupling_sq(n, k);
        if (weight == 0.0) continue;
        // Split into pieces of at most half a period so each panel sees a
        // smooth, non-oscillatory integrand.
        const double panel = std::min(t, std::numbers::pi / std::abs(w));
        const auto panels = static_cast<std::size_t>(std::ceil(t / panel));
        // total error <= sum over channels, parts and panels of weight * err
        const double tol = abs_tol / (2.0 * static_cast<double>(p.env_size() * panels) * weight);
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < panels; ++i) {
            const double a = t * static_cast<double>(i) / static_cast<double>(panels);
            const double b = t * static_cast<double>(i + 1) / static_cast<double>(panels);
            // one Kronrod rule is usually enough on a half period; refine only if not
            auto integrate = [&](auto f, double& err) {
                double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
                if (err > tol) v = gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, 1e-13, &err);
                return v;
            };
            double err_re = 0.0, err_im = 0.0;
            re += integrate([w](double s) { return std::cos(w * s); }, err_re);
            im += integrate([w](double s) { return std::sin(w * s); }, err_im);
            if (err_re > tol || err_im > tol) {
                std::ostringstream os;
                os << "quadrature did not converge for channel (n=" << n + 1 << ", k=" << k + 1 << ") on [" << a
                   << ", " << b << "]: error estimate " << std::max(err_re, err_im) << " > " << tol;
                throw QuadratureError(os.str());
            }
        }
        out.rate += weight * re;
        out.shift += weight * im;
    }
    return out;
}

} // namespace dqt
