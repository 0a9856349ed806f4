#include "paultrap/mathieu.hpp"

#include <algorithm>
#include <cmath>

#include "paultrap/errors.hpp"

namespace paultrap::mathieu {

namespace {

// Dormand-Prince 5(4), Hairer's coefficients, with the standard 4th-order
// continuous extension.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;

constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
using State = std::array<Complex, N>;

template <std::size_t N, class Rhs>
struct Dopri5 {
    Rhs rhs;
    double rtol, atol;

    // One grid per (value, slope) pair; pairs.size() == N/2.
    std::vector<SolutionGrid> run(double t0, double t1, State<N> y0) {
        static_assert(N % 2 == 0);
        const double span = t1 - t0;
        std::vector<SolutionGrid> grids(N / 2);
        for (auto& g : grids) {
            g.nodes.push_back(t0);
        }
        auto push_node = [&](double t, const State<N>& y) {
            for (std::size_t p = 0; p < N / 2; ++p) {
                grids[p].nodes.push_back(t);
                grids[p].value.push_back(y[2 * p]);
                grids[p].slope.push_back(y[2 * p + 1]);
            }
        };
        for (std::size_t p = 0; p < N / 2; ++p) {
            grids[p].value.push_back(y0[2 * p]);
            grids[p].slope.push_back(y0[2 * p + 1]);
        }

        const double dir = span >= 0 ? 1.0 : -1.0;
        const double hmin = 1e4 * 2.22e-16 * std::abs(span);
        double scale0 = 0.0;
        {
            State<N> f0 = rhs(t0, y0);
            for (auto& c : f0) scale0 = std::max(scale0, std::abs(c));
        }
        double h = dir * std::min(std::abs(span) / 10.0,
                                  0.1 / std::max(scale0, 1e-3));

        double t = t0;
        State<N> y = y0;
        State<N> k1 = rhs(t, y);
        bool rejected = false;

        while (dir * (t1 - t) > 0.0) {
            if (dir * (t + h - t1) > 0.0) h = t1 - t;
            if (std::abs(h) < hmin) {
                throw IntegrationError("step-size underflow at t=" + std::to_string(t), t);
            }

            State<N> y2, y3, y4, y5, y6, y7;
            for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
            State<N> k2 = rhs(t + c2 * h, y2);
            for (std::size_t i = 0; i < N; ++i)
                y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            State<N> k3 = rhs(t + c3 * h, y3);
            for (std::size_t i = 0; i < N; ++i)
                y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            State<N> k4 = rhs(t + c4 * h, y4);
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            State<N> k5 = rhs(t + c5 * h, y5);
            for (std::size_t i = 0; i < N; ++i)
                y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                    a64 * k4[i] + a65 * k5[i]);
            State<N> k6 = rhs(t + h, y6);
            for (std::size_t i = 0; i < N; ++i)
                y7[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                    a75 * k5[i] + a76 * k6[i]);
            State<N> k7 = rhs(t + h, y7);  // FSAL

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const Complex ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                        e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(y7[i]));
                const double r = std::abs(ei) / sk;
                err += r * r;
            }
            err = std::sqrt(err / N);

            if (err <= 1.0) {
                for (std::size_t p = 0; p < N / 2; ++p) {
                    DenseStep s;
                    s.t0 = t;
                    s.h = h;
                    for (int comp = 0; comp < 2; ++comp) {
                        const std::size_t i = 2 * p + comp;
                        const Complex ydiff = y7[i] - y[i];
                        const Complex bspl = h * k1[i] - ydiff;
                        DensePoly& poly = comp == 0 ? s.x : s.v;
                        poly.r[0] = y[i];
                        poly.r[1] = ydiff;
                        poly.r[2] = bspl;
                        poly.r[3] = ydiff - h * k7[i] - bspl;
                        poly.r[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                         d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                    }
                    grids[p].steps.push_back(s);
                }
                t += h;
                y = y7;
                k1 = k7;
                push_node(t, y);

                double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
                fac = std::clamp(fac, 0.2, rejected ? 1.0 : 5.0);
                h *= fac;
                rejected = false;
            } else {
                h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
                rejected = true;
            }
        }
        return grids;
    }
};

}  // namespace

std::string to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "unknown";
}

SolutionGrid integrate(const CoefficientFunction& coeff, double t0, double t1,
                       Complex value0, Complex slope0, double tol, Complex forcing) {
    if (t1 == t0) throw ValidationError("integrate: empty time interval");
    if (!(tol > 0.0) || tol > 1e-3)
        throw ValidationError("integrate: tolerance must be in (0, 1e-3]");
    auto rhs = [&coeff, forcing](double t, const State<2>& y) -> State<2> {
        return {y[1], -coeff.at(t) * y[0] - forcing};
    };
    Dopri5<2, decltype(rhs)> solver{rhs, tol, tol};
    return std::move(solver.run(t0, t1, {value0, slope0})[0]);
}

FundamentalBasis fundamental_basis(const CoefficientFunction& coeff, double t0,
                                   double t1, double tol) {
    auto rhs = [&coeff](double t, const State<4>& y) -> State<4> {
        const Complex c = coeff.at(t);
        return {y[1], -c * y[0], y[3], -c * y[2]};
    };
    Dopri5<4, decltype(rhs)> solver{rhs, tol, tol};
    auto grids = solver.run(t0, t1, {1.0, 0.0, 0.0, 1.0});

    FundamentalBasis basis;
    basis.X1 = std::move(grids[0]);
    basis.X2 = std::move(grids[1]);
    basis.wronskian = 1.0;  // W(t0) = X1*X2' - X1'*X2 = 1 by construction
    for (std::size_t i = 0; i < basis.X1.size(); ++i) {
        const Complex w = basis.X1.value[i] * basis.X2.slope[i] -
                          basis.X1.slope[i] * basis.X2.value[i];
        basis.max_wronskian_drift =
            std::max(basis.max_wronskian_drift, std::abs(w - basis.wronskian));
    }
    return basis;
}

StabilityVerdict stability(const CoefficientFunction& coeff, double tol) {
    if (!(coeff.omega > 0.0))
        throw ValidationError("stability: drive frequency must be positive");
    if (coeff.kappa != Complex(0.0))
        throw ValidationError("stability: requires a real periodic coefficient (kappa = 0)");

    const FundamentalBasis basis = fundamental_basis(coeff, 0.0, coeff.period(), tol);
    // Monodromy matrix is real here; its eigenvalues are the multipliers.
    const double m11 = basis.X1.value.back().real();
    const double m12 = basis.X2.value.back().real();
    const double m21 = basis.X1.slope.back().real();
    const double m22 = basis.X2.slope.back().real();
    const double tr = m11 + m22;
    const double det = m11 * m22 - m12 * m21;

    const Complex disc = std::sqrt(Complex(tr * tr - 4.0 * det, 0.0));
    StabilityVerdict v;
    v.multiplier1 = 0.5 * (tr + disc);
    v.multiplier2 = 0.5 * (tr - disc);

    const double maxmod = std::max(std::abs(v.multiplier1), std::abs(v.multiplier2));
    if (maxmod > 1.0 + 1e-9) {
        v.classification = Stability::unstable;
    } else if (std::abs(std::abs(tr) - 2.0) <= 1e-9) {
        // Degenerate boundary: repeated multiplier at +1 or -1.
        v.classification = Stability::marginal;
    } else {
        v.classification = Stability::stable;
    }
    return v;
}

Complex d_function(const CoefficientFunction& coeff, double tprime,
                   double tdoubleprime, double tol) {
    const SolutionGrid g = integrate(coeff, tprime, tdoubleprime, 0.0, 1.0, tol);
    return g.value.back();
}

double max_residual(const SolutionGrid& grid, const CoefficientFunction& coeff,
                    Complex forcing, int samples_per_step) {
    double worst = 0.0;
    for (const DenseStep& s : grid.steps) {
        for (int j = 1; j <= samples_per_step; ++j) {
            const double t = s.t0 + s.h * double(j) / double(samples_per_step + 1);
            const Complex r = grid.eval_accel(t) + coeff.at(t) * grid.eval(t) + forcing;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

}  // namespace paultrap::mathieu
