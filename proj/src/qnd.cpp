#include "paultrap/qnd.hpp"

#include <algorithm>
#include <cmath>

#include "paultrap/errors.hpp"

namespace paultrap::qnd {

double QndRatio::at(double t) const {
    const Complex x = X->eval(t);
    const Complex v = X->eval_slope(t);
    return -mass * (v / x).real();
}

double QndRatio::derivative_at(double t) const {
    // d/dt(-m Xdot/X) = -m (Xddot X - Xdot^2) / X^2
    const Complex x = X->eval(t);
    const Complex v = X->eval_slope(t);
    const Complex a = X->eval_accel(t);
    return (-mass * (a * x - v * v) / (x * x)).real();
}

bool QndRatio::near_pole(double t, double radius) const {
    for (double p : pole_times)
        if (std::abs(t - p) < radius) return true;
    return false;
}

QndRatio canonical_ratio(std::shared_ptr<const SolutionGrid> X, double mass) {
    QndRatio r;
    r.X = std::move(X);
    r.mass = mass;

    const SolutionGrid& grid = *r.X;
    double scale = 0.0;
    for (const Complex& v : grid.value) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double re0 = grid.value[i].real();
        const double re1 = grid.value[i + 1].real();
        if (std::abs(re0) < 1e-12 * scale) {
            r.pole_times.push_back(grid.nodes[i]);
        } else if (re0 * re1 < 0.0) {
            double a = grid.nodes[i], b = grid.nodes[i + 1];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                if (grid.eval(mid).real() * re0 <= 0.0) b = mid; else a = mid;
            }
            r.pole_times.push_back(0.5 * (a + b));
        }
    }
    return r;
}

double qnd_residual(const QndRatio& ratio, const model::EffectiveCoefficients& coeffs,
                    double pole_exclusion, int samples_per_step) {
    const SolutionGrid& grid = *ratio.X;
    if (pole_exclusion < 0.0) {
        const double span = std::abs(grid.t_end() - grid.t_begin());
        pole_exclusion = coeffs.omega > 0.0
                             ? 0.01 * 2.0 * 3.14159265358979323846 / coeffs.omega
                             : 0.01 * span;
    }
    const double m = ratio.mass;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        for (int j = 0; j <= samples_per_step; ++j) {
            const double t = grid.nodes[i] + (grid.nodes[i + 1] - grid.nodes[i]) *
                                                 double(j) / double(samples_per_step + 1);
            if (ratio.near_pole(t, pole_exclusion)) continue;
            const double f = ratio.at(t);
            const double lhs = ratio.derivative_at(t);
            const double rhs = f * f / m + m * (coeffs.U - coeffs.V * std::cos(coeffs.omega * t));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

QndVariable qnd_variable(const QndRatio& ratio, const std::vector<double>& times,
                         const std::vector<double>& sigma) {
    if (times.size() != sigma.size())
        throw ValidationError("qnd_variable: times and sigma must have equal length");
    for (double s : sigma)
        if (s == 0.0)
            throw ValidationError("qnd_variable: sigma must be nowhere zero");

    QndVariable v;
    v.ratio = ratio;
    v.times = times;
    v.sigma = sigma;
    v.rho.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        v.rho.push_back(sigma[i] * ratio.at(times[i]));
    return v;
}

double hamiltonian_value(double q, double p, double t,
                         const model::EffectiveCoefficients& coeffs) {
    const double restoring = coeffs.U - coeffs.V * std::cos(coeffs.omega * t);
    return p * p / (2.0 * coeffs.mass) + 0.5 * coeffs.mass * restoring * q * q -
           coeffs.mass * coeffs.g * q;
}

}  // namespace paultrap::qnd
