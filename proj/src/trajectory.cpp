#include "paultrap/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "paultrap/errors.hpp"

namespace paultrap::trajectory {

namespace {

/// First zero of X inside [lo, hi], found from sign changes of the real part
/// between nodes (real solutions) or near-vanishing modulus.  Returns false
/// if X stays away from zero.
bool find_zero(const SolutionGrid& X, double lo, double hi, double* where) {
    double scale = 0.0;
    for (const Complex& v : X.value) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-9 * scale;

    const bool fwd = X.forward();
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double t = X.nodes[i];
        if (t < std::min(lo, hi) || t > std::max(lo, hi)) continue;
        if (std::abs(X.value[i]) < tiny) {
            *where = t;
            return true;
        }
        if (i + 1 < X.size()) {
            const double tn = X.nodes[i + 1];
            if ((fwd ? tn : X.nodes[i]) > std::max(lo, hi)) continue;
            const double re0 = X.value[i].real();
            const double re1 = X.value[i + 1].real();
            const double im = std::max(std::abs(X.value[i].imag()),
                                       std::abs(X.value[i + 1].imag()));
            if (re0 * re1 < 0.0 && im < tiny) {
                // bisect on the dense output
                double a = t, b = tn;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (a + b);
                    if (X.eval(mid).real() * re0 <= 0.0) b = mid; else a = mid;
                }
                *where = 0.5 * (a + b);
                return true;
            }
        }
    }
    return false;
}

}  // namespace

ForcedTrajectory ForcedTrajectory::green(
    std::shared_ptr<const mathieu::FundamentalBasis> basis, Complex x0,
    Complex v0, Complex forcing) {
    ForcedTrajectory tr;
    tr.is_green_ = true;
    tr.basis_ = std::move(basis);
    tr.x0_ = x0;
    tr.v0_ = v0;
    tr.forcing_ = forcing;
    const Complex fw = forcing / tr.basis_->wronskian;
    const SolutionGrid& X1 = tr.basis_->X1;
    const SolutionGrid& X2 = tr.basis_->X2;
    tr.p1_ = cumulative_on_grid(X1, [&](double t) { return fw * X1.eval(t); });
    tr.p2_ = cumulative_on_grid(X2, [&](double t) { return fw * X2.eval(t); });
    return tr;
}

ForcedTrajectory ForcedTrajectory::nested(std::shared_ptr<const SolutionGrid> X,
                                          Complex B, Complex C, Complex forcing,
                                          double b_anchor, double c_anchor) {
    ForcedTrajectory tr;
    tr.X_ = std::move(X);
    tr.B_ = B;
    tr.C_ = C;
    tr.forcing_ = forcing;
    tr.b_anchor_ = b_anchor;
    tr.c_anchor_ = c_anchor;

    const SolutionGrid& grid = *tr.X_;
    double zero_at = 0.0;
    if (find_zero(grid, grid.t_begin(), grid.t_end(), &zero_at)) {
        throw ZeroCrossingError(
            "nested form: X(t) crosses zero at t=" + std::to_string(zero_at) +
                " inside a 1/X^2 quadrature range",
            zero_at);
    }

    tr.inner_ = cumulative_on_grid(grid, [&](double t) { return grid.eval(t); });
    // inner_ starts at the grid's first node; shift so J(c_anchor) = 0
    const Complex jc = tr.nested_inner(c_anchor);
    for (Complex& v : tr.inner_) v -= jc;

    auto inv_sq = [&](double t) {
        const Complex x = grid.eval(t);
        return 1.0 / (x * x);
    };
    tr.invsq_ = cumulative_on_grid(grid, inv_sq);
    tr.kern_ = cumulative_on_grid(grid, [&](double t) {
        return tr.nested_inner(t) * inv_sq(t);
    });
    const Complex lb = tr.nested_invsq(b_anchor);
    const Complex kb = tr.nested_kern(b_anchor);
    for (Complex& v : tr.invsq_) v -= lb;
    for (Complex& v : tr.kern_) v -= kb;
    return tr;
}

const std::vector<double>& ForcedTrajectory::nodes() const {
    return is_green_ ? basis_->X1.nodes : X_->nodes;
}

Complex ForcedTrajectory::green_p1(double t) const {
    const SolutionGrid& X1 = basis_->X1;
    const std::size_t i = X1.locate(t);
    const Complex fw = forcing_ / basis_->wronskian;
    return p1_[i] + integrate_on_grid(X1, X1.nodes[i], t,
                                      [&](double s) { return fw * X1.eval(s); });
}

Complex ForcedTrajectory::green_p2(double t) const {
    const SolutionGrid& X2 = basis_->X2;
    const std::size_t i = X2.locate(t);
    const Complex fw = forcing_ / basis_->wronskian;
    return p2_[i] + integrate_on_grid(X2, X2.nodes[i], t,
                                      [&](double s) { return fw * X2.eval(s); });
}

Complex ForcedTrajectory::nested_inner(double t) const {
    const SolutionGrid& X = *X_;
    const std::size_t i = X.locate(t);
    return inner_[i] + integrate_on_grid(X, X.nodes[i], t,
                                         [&](double s) { return X.eval(s); });
}

Complex ForcedTrajectory::nested_invsq(double t) const {
    const SolutionGrid& X = *X_;
    const std::size_t i = X.locate(t);
    return invsq_[i] + integrate_on_grid(X, X.nodes[i], t, [&](double s) {
               const Complex x = X.eval(s);
               return 1.0 / (x * x);
           });
}

Complex ForcedTrajectory::nested_kern(double t) const {
    const SolutionGrid& X = *X_;
    const std::size_t i = X.locate(t);
    return kern_[i] + integrate_on_grid(X, X.nodes[i], t, [&](double s) {
               const Complex x = X.eval(s);
               return nested_inner(s) / (x * x);
           });
}

Complex ForcedTrajectory::eval(double t) const {
    if (is_green_) {
        const Complex x1 = basis_->X1.eval(t);
        const Complex x2 = basis_->X2.eval(t);
        return x0_ * x1 + v0_ * x2 - (x2 * green_p1(t) - x1 * green_p2(t));
    }
    const Complex x = X_->eval(t);
    return B_ * x + C_ * x * nested_invsq(t) - forcing_ * x * nested_kern(t);
}

Complex ForcedTrajectory::eval_slope(double t) const {
    if (is_green_) {
        const Complex v1 = basis_->X1.eval_slope(t);
        const Complex v2 = basis_->X2.eval_slope(t);
        return x0_ * v1 + v0_ * v2 - (v2 * green_p1(t) - v1 * green_p2(t));
    }
    const Complex x = X_->eval(t);
    const Complex v = X_->eval_slope(t);
    return B_ * v + C_ * (v * nested_invsq(t) + 1.0 / x) -
           forcing_ * (v * nested_kern(t) + nested_inner(t) / x);
}

Complex ForcedTrajectory::eval_accel(double t) const {
    if (is_green_) {
        const Complex a1 = basis_->X1.eval_accel(t);
        const Complex a2 = basis_->X2.eval_accel(t);
        return x0_ * a1 + v0_ * a2 - (a2 * green_p1(t) - a1 * green_p2(t)) -
               forcing_;
    }
    const Complex a = X_->eval_accel(t);
    return a * (B_ + C_ * nested_invsq(t) - forcing_ * nested_kern(t)) - forcing_;
}

ForcedTrajectory forced_solution_green(
    std::shared_ptr<const mathieu::FundamentalBasis> basis, Complex x0,
    Complex v0, Complex forcing) {
    return ForcedTrajectory::green(std::move(basis), x0, v0, forcing);
}

ForcedTrajectory forced_solution_nested(std::shared_ptr<const SolutionGrid> X,
                                        Complex B, Complex C, Complex forcing,
                                        double b_anchor, double c_anchor) {
    return ForcedTrajectory::nested(std::move(X), B, C, forcing, b_anchor, c_anchor);
}

double residual(const ForcedTrajectory& traj,
                const model::EffectiveCoefficients& coeffs,
                int samples_per_step) {
    const mathieu::CoefficientFunction coeff{coeffs.U, coeffs.V, coeffs.omega, 0.0};
    const auto& nodes = traj.nodes();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        for (int j = 0; j <= samples_per_step; ++j) {
            const double t = nodes[i] + (nodes[i + 1] - nodes[i]) *
                                            double(j) / double(samples_per_step + 1);
            const Complex r = traj.eval_accel(t) + coeff.at(t) * traj.eval(t) + coeffs.g;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

bool rescaling_equivalence_check(const model::TrapInput& input1,
                                 const model::TrapInput& input2,
                                 const model::PhysicalConstants& consts) {
    const auto c1 = model::derive_coefficients(input1, consts);
    const auto c2 = model::derive_coefficients(input2, consts);

    const double span = 4.0 * 2.0 * M_PI / std::max(c1.omega, c2.omega);
    const double tol = 1e-10;
    auto make = [&](const model::EffectiveCoefficients& c) {
        auto basis = std::make_shared<mathieu::FundamentalBasis>(
            mathieu::fundamental_basis({c.U, c.V, c.omega, 0.0}, 0.0, span, tol));
        return ForcedTrajectory::green(basis, 0.1, 0.0, c.g);
    };
    const ForcedTrajectory t1 = make(c1);
    const ForcedTrajectory t2 = make(c2);

    double scale = 0.0, maxdiff = 0.0;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double t = span * double(i) / n;
        const Complex a = t1.eval(t), b = t2.eval(t);
        scale = std::max({scale, std::abs(a), std::abs(b)});
        maxdiff = std::max(maxdiff, std::abs(a - b));
    }
    return maxdiff <= 1e-9 * std::max(scale, 1.0);
}

}  // namespace paultrap::trajectory
