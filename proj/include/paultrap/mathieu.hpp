#pragma once

#include <cmath>
#include <string>

#include "paultrap/grid.hpp"

namespace paultrap::mathieu {

/// Time-dependent restoring coefficient U - V*cos(omega*t) + kappa.
/// kappa is the additive complex shift induced by continuous position
/// monitoring (-2i*hbar/(m*T*da^2)); zero when unmonitored.
struct CoefficientFunction {
    double U = 0.0;       // s^-2
    double V = 0.0;       // s^-2
    double omega = 0.0;   // rad/s
    Complex kappa{0.0, 0.0};  // s^-2

    Complex at(double t) const { return Complex(U - V * std::cos(omega * t)) + kappa; }
    double period() const { return 2.0 * 3.14159265358979323846 / omega; }
};

struct FundamentalBasis {
    SolutionGrid X1;  // X1(t0)=1, X1'(t0)=0
    SolutionGrid X2;  // X2(t0)=0, X2'(t0)=1
    Complex wronskian;  // X1*X2' - X1'*X2, constant by Abel's identity
    double max_wronskian_drift = 0.0;  // relative, over the grid
};

enum class Stability { stable, unstable, marginal };

struct StabilityVerdict {
    Complex multiplier1;
    Complex multiplier2;
    Stability classification;
};

std::string to_string(Stability s);

/// Integrate x'' + coeff(t)*x + forcing = 0 from (value0, slope0) at t0 to
/// t1.  t1 < t0 integrates backward.  tol is the relative/absolute adaptive
/// tolerance.  Throws IntegrationError on step underflow.
SolutionGrid integrate(const CoefficientFunction& coeff, double t0, double t1,
                       Complex value0, Complex slope0, double tol = 1e-10,
                       Complex forcing = 0.0);

/// Both fundamental solutions advanced as one system, so X1 and X2 share the
/// same accepted nodes (downstream quadratures rely on that).
FundamentalBasis fundamental_basis(const CoefficientFunction& coeff, double t0,
                                   double t1, double tol = 1e-10);

/// Floquet classification from the monodromy matrix over one drive period.
/// omega must be positive; kappa must be zero (real periodic coefficient).
StabilityVerdict stability(const CoefficientFunction& coeff, double tol = 1e-10);

/// D(t', t'') = value at t'' of the solution with value 0, slope 1 at t'.
/// Canonical evaluation of x(t')x(t'') Int x^-2 dt for any zero-free x.
Complex d_function(const CoefficientFunction& coeff, double tprime,
                   double tdoubleprime, double tol = 1e-10);

/// Max-norm residual |x'' + coeff(t)x + forcing| over dense samples,
/// with x'' taken from the interpolant (see SolutionGrid::eval_accel).
double max_residual(const SolutionGrid& grid, const CoefficientFunction& coeff,
                    Complex forcing = 0.0, int samples_per_step = 4);

}  // namespace paultrap::mathieu
