#pragma once

#include <memory>
#include <vector>

#include "paultrap/grid.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/model.hpp"

namespace paultrap::trajectory {

/// Solution of x'' + coeff(t) x + forcing = 0 assembled from homogeneous
/// solutions plus quadrature.  Two constructions:
///  - green: variation-of-parameters on a fundamental basis; valid across
///    zeros of any particular solution.  Production path.
///  - nested: the literal double-quadrature form
///      B X + C X Int 1/X^2 - f X Int Int X/X^2,
///    defined only while X stays away from zero.
class ForcedTrajectory {
public:
    static ForcedTrajectory green(std::shared_ptr<const mathieu::FundamentalBasis> basis,
                                  Complex x0, Complex v0, Complex forcing);
    /// Anchors b and c are the lower limits of the outer and inner
    /// quadratures (default both to the grid start; their freedom is a gauge
    /// absorbed into B and C).  Throws ZeroCrossingError at the first zero
    /// of X inside a 1/X^2 range.
    static ForcedTrajectory nested(std::shared_ptr<const SolutionGrid> X,
                                   Complex B, Complex C, Complex forcing,
                                   double b_anchor, double c_anchor);

    Complex eval(double t) const;
    Complex eval_slope(double t) const;
    Complex eval_accel(double t) const;

    const std::vector<double>& nodes() const;
    double t_begin() const { return nodes().front(); }
    double t_end() const { return nodes().back(); }
    Complex forcing() const { return forcing_; }

    ForcedTrajectory() = default;

private:
    // green
    std::shared_ptr<const mathieu::FundamentalBasis> basis_;
    Complex x0_{}, v0_{};
    std::vector<Complex> p1_, p2_;  // cumulative (f/W) Int Xi ds at nodes
    Complex green_p1(double t) const;
    Complex green_p2(double t) const;

    // nested
    std::shared_ptr<const SolutionGrid> X_;
    Complex B_{}, C_{};
    double b_anchor_ = 0.0, c_anchor_ = 0.0;
    std::vector<Complex> inner_, invsq_, kern_;  // J, L, K cumulatives at nodes
    Complex nested_inner(double t) const;        // J(t) = Int_c^t X
    Complex nested_invsq(double t) const;        // L(t) = Int_b^t 1/X^2
    Complex nested_kern(double t) const;         // K(t) = Int_b^t J/X^2

    Complex forcing_{};
    bool is_green_ = false;
};

ForcedTrajectory forced_solution_green(std::shared_ptr<const mathieu::FundamentalBasis> basis,
                                       Complex x0, Complex v0, Complex forcing);

ForcedTrajectory forced_solution_nested(std::shared_ptr<const SolutionGrid> X,
                                        Complex B, Complex C, Complex forcing,
                                        double b_anchor, double c_anchor);

/// Max-norm residual of x'' + (U - V cos wt) x + g over dense samples.
double residual(const ForcedTrajectory& traj,
                const model::EffectiveCoefficients& coeffs,
                int samples_per_step = 4);

/// True iff both inputs produce the same dynamics: trajectories integrated
/// from identical initial data coincide pointwise to 1e-9 (scaled by the
/// trajectory amplitude).  Dynamics depends on the inputs only through the
/// derived (U, V, g) triple.
bool rescaling_equivalence_check(const model::TrapInput& input1,
                                 const model::TrapInput& input2,
                                 const model::PhysicalConstants& consts);

}  // namespace paultrap::trajectory
