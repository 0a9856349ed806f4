#include "paultrap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paultrap {

namespace {

// 7-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 7> kGlNodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
    0.0,
    0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr std::array<double, 7> kGlWeights = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

Complex gl_panel(double a, double b, const std::function<Complex(double)>& f) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
        acc += kGlWeights[i] * f(mid + half * kGlNodes[i]);
    }
    return half * acc;
}

}  // namespace

std::size_t SolutionGrid::locate(double t) const {
    if (steps.empty()) throw std::logic_error("SolutionGrid: empty grid");
    if (forward()) {
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        std::size_t idx = (it == nodes.begin()) ? 0 : std::size_t(it - nodes.begin()) - 1;
        return std::min(idx, steps.size() - 1);
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t, std::greater<double>());
    std::size_t idx = (it == nodes.begin()) ? 0 : std::size_t(it - nodes.begin()) - 1;
    return std::min(idx, steps.size() - 1);
}

Complex SolutionGrid::eval(double t) const {
    const DenseStep& s = steps[locate(t)];
    return s.x.eval((t - s.t0) / s.h);
}

Complex SolutionGrid::eval_slope(double t) const {
    const DenseStep& s = steps[locate(t)];
    return s.v.eval((t - s.t0) / s.h);
}

Complex SolutionGrid::eval_accel(double t) const {
    const DenseStep& s = steps[locate(t)];
    return s.v.eval_dtheta((t - s.t0) / s.h) / s.h;
}

Complex integrate_on_grid(const SolutionGrid& grid, double a, double b,
                          const std::function<Complex(double)>& f) {
    if (a == b) return 0.0;
    if ((b < a) == grid.forward()) return -integrate_on_grid(grid, b, a, f);

    Complex acc = 0.0;
    double cursor = a;
    std::size_t i = grid.locate(a);
    const bool fwd = grid.forward();
    while (true) {
        const double edge = grid.nodes[i + 1];
        const bool last = fwd ? (edge >= b) : (edge <= b);
        const double stop = last ? b : edge;
        if (stop != cursor) acc += gl_panel(cursor, stop, f);
        if (last) break;
        cursor = edge;
        ++i;
        if (i >= grid.steps.size()) break;
    }
    return acc;
}

std::vector<Complex> cumulative_on_grid(const SolutionGrid& grid,
                                        const std::function<Complex(double)>& f) {
    std::vector<Complex> out(grid.nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < grid.nodes.size(); ++i) {
        out[i + 1] = out[i] + gl_panel(grid.nodes[i], grid.nodes[i + 1], f);
    }
    return out;
}

}  // namespace paultrap
