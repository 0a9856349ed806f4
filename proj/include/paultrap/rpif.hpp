#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "paultrap/grid.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/model.hpp"
#include "paultrap/trajectory.hpp"

namespace paultrap::rpif {

/// Continuous position-monitoring output a(t) on [t_start, t_end] with
/// Gaussian resolution delta_a.  The unmonitored variant (no delta_a) is the
/// exact infinite-resolution limit, not a large float.
struct MeasurementRecord {
    double t_start = 0.0;
    double t_end = 0.0;
    std::optional<double> delta_a;  // m; nullopt => unmonitored
    std::vector<double> samples;    // a(t) on a uniform grid over [t_start, t_end]

    static MeasurementRecord unmonitored(double t0, double t1);
    static MeasurementRecord constant(double t0, double t1, double da, double value,
                                      std::size_t n = 101);

    bool monitored() const { return delta_a.has_value(); }
    double duration() const { return t_end - t_start; }
    /// <a> = (1/T) Int a dt, trapezoid rule.
    double mean() const;
    /// Int a^2 dt, trapezoid rule.
    double square_integral() const;
    void validate() const;
};

/// kappa = -2i*hbar/(m*T*da^2); zero for the unmonitored record.
Complex effective_shift(double mass, const MeasurementRecord& record,
                        const model::PhysicalConstants& consts);

/// Complex classical path x = x1 + i*x2 between real endpoints, with the
/// complex action S = S1 + i*S2 along it.
struct ComplexPathResult {
    trajectory::ForcedTrajectory path;
    Complex action;
    double xprime = 0.0;
    double xdoubleprime = 0.0;
    Complex d_value;  // D(t', t'') of the shifted coefficient
    Complex complex_forcing;
    std::shared_ptr<const mathieu::FundamentalBasis> basis;  // shifted basis
};

struct PropagatorValue {
    Complex amplitude;
    Complex prefactor;
    Complex phase_action;  // S_cl
    double record_norm;    // exp{-(1/T da^2) Int a^2 dt}
};

struct ProbabilityValue {
    double density;      // may under/overflow in SI units; log_density is authoritative
    double log_density;
    // factor breakdown (logs)
    double log_norm;      // log(m / 2 pi hbar)
    double log_record;    // -(2/T da^2) Int a^2
    double log_action;    // -(2/hbar) Im S_cl
    double log_endpoint;  // -(1/2) log([x1'^2+x2'^2][x1''^2+x2''^2])
    double log_integral;  // -(1/2) log(I1^2 + 4 I2^2)
    bool mean_record_approximation = true;  // a(t) replaced by <a> in the dynamics
};

/// Solve the complex two-point boundary value problem of the monitored
/// motion: x'' + [U - V cos wt + kappa] x + g + 2i*hbar*<a>/(m T da^2) = 0
/// with x(t') = x', x(t'') = x''.  Throws DegenerateBvpError at a caustic.
ComplexPathResult complex_classical_path(const model::EffectiveCoefficients& coeffs,
                                         const model::PhysicalConstants& consts,
                                         const MeasurementRecord& record,
                                         double xprime, double xdoubleprime,
                                         double tol = 1e-10);

/// Effective-Lagrangian action along an arbitrary path given as
/// t -> (x, xdot).  The Euler-Lagrange equation of this Lagrangian is the
/// monitored motion equation; the Int a^2 term is deliberately excluded
/// (it lives in PropagatorValue::record_norm).
Complex classical_action_of_path(
    const std::function<std::pair<Complex, Complex>(double)>& path,
    const model::EffectiveCoefficients& coeffs,
    const model::PhysicalConstants& consts, const MeasurementRecord& record,
    int panels = 512);

/// Same action evaluated on a solved path's own grid.
Complex classical_action(const ComplexPathResult& path,
                         const model::EffectiveCoefficients& coeffs,
                         const model::PhysicalConstants& consts,
                         const MeasurementRecord& record);

PropagatorValue propagator(const model::EffectiveCoefficients& coeffs,
                           const model::PhysicalConstants& consts,
                           const MeasurementRecord& record, double xprime,
                           double xdoubleprime, double tol = 1e-10);

ProbabilityValue probability_density(const model::EffectiveCoefficients& coeffs,
                                     const model::PhysicalConstants& consts,
                                     const MeasurementRecord& record,
                                     double xprime, double xdoubleprime,
                                     double tol = 1e-10);

std::vector<ProbabilityValue> record_sweep(
    const model::EffectiveCoefficients& coeffs,
    const model::PhysicalConstants& consts,
    const std::vector<MeasurementRecord>& records, double xprime,
    double xdoubleprime, double tol = 1e-10);

}  // namespace paultrap::rpif
