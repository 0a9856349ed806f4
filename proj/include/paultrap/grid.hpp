#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace paultrap {

using Complex = std::complex<double>;

/// Dense-output coefficients of one accepted integrator step, for one
/// complex component.  Continuous extension in the Hairer form:
///   y(t0 + theta*h) = r[0] + theta*(r[1] + (1-theta)*(r[2] + theta*(r[3] + (1-theta)*r[4])))
struct DensePoly {
    std::array<Complex, 5> r{};

    Complex eval(double theta) const {
        return r[0] + theta * (r[1] + (1.0 - theta) * (r[2] + theta * (r[3] + (1.0 - theta) * r[4])));
    }
    /// d/dtheta of eval (divide by h for d/dt).
    Complex eval_dtheta(double theta) const {
        const Complex q = r[2] + theta * (r[3] + (1.0 - theta) * r[4]);
        const Complex dq = r[3] + r[4] - 2.0 * theta * r[4];
        return r[1] + (1.0 - 2.0 * theta) * q + theta * (1.0 - theta) * dq;
    }
};

struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    DensePoly x;  // value component
    DensePoly v;  // slope component
};

/// Sampled complex solution of a second-order linear ODE: value and slope at
/// every accepted node plus per-step dense output.  Immutable after
/// construction; nodes run monotonically from t_begin() to t_end() (forward
/// or backward integration).
class SolutionGrid {
public:
    std::vector<double> nodes;
    std::vector<Complex> value;
    std::vector<Complex> slope;
    std::vector<DenseStep> steps;  // steps.size() == nodes.size() - 1

    double t_begin() const { return nodes.front(); }
    double t_end() const { return nodes.back(); }
    bool forward() const { return nodes.back() >= nodes.front(); }
    std::size_t size() const { return nodes.size(); }

    /// Index of the step whose interval contains t (clamped to range).
    std::size_t locate(double t) const;

    Complex eval(double t) const;
    Complex eval_slope(double t) const;
    /// Second derivative of the value, taken as d/dt of the slope
    /// interpolant.  Deliberately not the ODE right-hand side, so residual
    /// checks measure real integration error.
    Complex eval_accel(double t) const;
};

/// Composite 7-point Gauss-Legendre quadrature of f(t) over [a, b], with
/// panels aligned to the grid's accepted steps.  [a, b] must lie inside the
/// grid's time range; a > b gives the signed (negative) integral.
Complex integrate_on_grid(const SolutionGrid& grid, double a, double b,
                          const std::function<Complex(double)>& f);

/// Cumulative integral of f from the grid's first node to each node.
std::vector<Complex> cumulative_on_grid(const SolutionGrid& grid,
                                        const std::function<Complex(double)>& f);

}  // namespace paultrap
