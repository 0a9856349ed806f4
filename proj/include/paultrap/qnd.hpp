#pragma once

#include <memory>
#include <vector>

#include "paultrap/grid.hpp"
#include "paultrap/model.hpp"

namespace paultrap::qnd {

/// The ratio rho/sigma of a candidate nondemolition variable A = rho q + sigma p,
/// built from a homogeneous solution X as F(t) = -m Xdot/X.  Zeros of X are
/// poles of F; they are flagged, not fatal.
struct QndRatio {
    std::shared_ptr<const SolutionGrid> X;
    double mass = 1.0;
    std::vector<double> pole_times;

    double at(double t) const;          // -m Xdot/X
    double derivative_at(double t) const;  // d/dt of the above, dense output
    double t_begin() const { return X->t_begin(); }
    double t_end() const { return X->t_end(); }
    /// True if t lies within `radius` of a flagged pole.
    bool near_pole(double t, double radius) const;
};

struct QndVariable {
    QndRatio ratio;
    std::vector<double> times;
    std::vector<double> sigma;
    std::vector<double> rho;  // sigma * ratio
};

/// F(t) = -(m/X) dX/dt with pole bookkeeping at zeros of X.
QndRatio canonical_ratio(std::shared_ptr<const SolutionGrid> X, double mass);

/// Max-norm residual of the nondemolition condition
///   d/dt(rho/sigma) = (1/m)(rho/sigma)^2 + m[U - V cos(omega t)]
/// over sample times, excluding a window of `pole_exclusion` around each
/// pole.  Default exclusion is 1% of the drive period (or of the interval
/// when omega = 0).
double qnd_residual(const QndRatio& ratio, const model::EffectiveCoefficients& coeffs,
                    double pole_exclusion = -1.0, int samples_per_step = 4);

/// Pair (rho, sigma) on the given sample times.  sigma must be nowhere zero.
QndVariable qnd_variable(const QndRatio& ratio, const std::vector<double>& times,
                         const std::vector<double>& sigma);

/// H = p^2/2m + (m/2)[U - V cos(omega t)] q^2 - m g q.
double hamiltonian_value(double q, double p, double t,
                         const model::EffectiveCoefficients& coeffs);

}  // namespace paultrap::qnd
