#include "paultrap/rpif.hpp"

#include <cmath>

#include "paultrap/errors.hpp"

namespace paultrap::rpif {

namespace {

constexpr double kPi = 3.14159265358979323846;

mathieu::CoefficientFunction shifted_coefficient(
    const model::EffectiveCoefficients& coeffs, Complex kappa) {
    return {coeffs.U, coeffs.V, coeffs.omega, kappa};
}

/// Complex forcing of the monitored motion equation:
/// f = g + 2i*hbar*<a>/(m T da^2), entering as x'' + c(t)x + f = 0.
Complex complex_forcing(const model::EffectiveCoefficients& coeffs,
                        const model::PhysicalConstants& consts,
                        const MeasurementRecord& record) {
    if (!record.monitored()) return coeffs.g;
    const double da = *record.delta_a;
    return Complex(coeffs.g, 2.0 * consts.hbar * record.mean() /
                                 (coeffs.mass * record.duration() * da * da));
}

}  // namespace

MeasurementRecord MeasurementRecord::unmonitored(double t0, double t1) {
    MeasurementRecord r;
    r.t_start = t0;
    r.t_end = t1;
    r.validate();
    return r;
}

MeasurementRecord MeasurementRecord::constant(double t0, double t1, double da,
                                              double value, std::size_t n) {
    MeasurementRecord r;
    r.t_start = t0;
    r.t_end = t1;
    r.delta_a = da;
    r.samples.assign(n, value);
    r.validate();
    return r;
}

void MeasurementRecord::validate() const {
    if (!(duration() > 0.0))
        throw ValidationError("MeasurementRecord: duration T must be positive");
    if (monitored()) {
        if (!(*delta_a > 0.0))
            throw ValidationError("MeasurementRecord: delta_a must be positive");
        if (samples.size() < 2)
            throw ValidationError("MeasurementRecord: need at least 2 samples");
    }
}

double MeasurementRecord::mean() const {
    if (samples.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        acc += 0.5 * (samples[i] + samples[i + 1]);
    return acc / double(samples.size() - 1);
}

double MeasurementRecord::square_integral() const {
    if (samples.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        acc += 0.5 * (samples[i] * samples[i] + samples[i + 1] * samples[i + 1]);
    return acc * duration() / double(samples.size() - 1);
}

Complex effective_shift(double mass, const MeasurementRecord& record,
                        const model::PhysicalConstants& consts) {
    record.validate();
    if (!record.monitored()) return 0.0;
    const double da = *record.delta_a;
    return Complex(0.0, -2.0 * consts.hbar / (mass * record.duration() * da * da));
}

ComplexPathResult complex_classical_path(const model::EffectiveCoefficients& coeffs,
                                         const model::PhysicalConstants& consts,
                                         const MeasurementRecord& record,
                                         double xprime, double xdoubleprime,
                                         double tol) {
    record.validate();
    const Complex kappa = effective_shift(coeffs.mass, record, consts);
    const auto coeff = shifted_coefficient(coeffs, kappa);
    const Complex f = complex_forcing(coeffs, consts, record);

    auto basis = std::make_shared<mathieu::FundamentalBasis>(
        mathieu::fundamental_basis(coeff, record.t_start, record.t_end, tol));
    const Complex d = basis->X2.value.back();
    const double T = record.duration();
    if (std::abs(d) <= 1e-9 * std::max(T, 1.0)) {
        throw DegenerateBvpError(
            "complex_classical_path: |D(t',t'')| = " + std::to_string(std::abs(d)) +
                ", boundary value problem is at a caustic on [" +
                std::to_string(record.t_start) + ", " + std::to_string(record.t_end) + "]",
            record.t_start, record.t_end);
    }

    // x = alpha X1 + beta X2 + x_p with x_p(t') = x_p'(t') = 0.
    const trajectory::ForcedTrajectory particular =
        trajectory::forced_solution_green(basis, 0.0, 0.0, f);
    const Complex alpha = xprime;
    const Complex beta =
        (Complex(xdoubleprime) - alpha * basis->X1.value.back() -
         particular.eval(record.t_end)) / d;

    ComplexPathResult result;
    result.path = trajectory::forced_solution_green(basis, alpha, beta, f);
    result.xprime = xprime;
    result.xdoubleprime = xdoubleprime;
    result.d_value = d;
    result.complex_forcing = f;
    result.basis = basis;
    result.action = classical_action(result, coeffs, consts, record);
    return result;
}

Complex classical_action_of_path(
    const std::function<std::pair<Complex, Complex>(double)>& path,
    const model::EffectiveCoefficients& coeffs,
    const model::PhysicalConstants& consts, const MeasurementRecord& record,
    int panels) {
    const Complex kappa = effective_shift(coeffs.mass, record, consts);
    const auto coeff = shifted_coefficient(coeffs, kappa);
    const Complex f = complex_forcing(coeffs, consts, record);
    const double m = coeffs.mass;

    // 7-point Gauss-Legendre per uniform panel.
    static const double gx[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972, 0.7415311855993945,
                                 0.9491079123427585};
    static const double gw[7] = {0.1294849661688697, 0.2797053914892766,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    const double h = record.duration() / panels;
    Complex acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = record.t_start + (p + 0.5) * h;
        Complex panel = 0.0;
        for (int i = 0; i < 7; ++i) {
            const double t = mid + 0.5 * h * gx[i];
            const auto [x, v] = path(t);
            const Complex lagrangian =
                0.5 * m * v * v - 0.5 * m * coeff.at(t) * x * x - m * f * x;
            panel += gw[i] * lagrangian;
        }
        acc += 0.5 * h * panel;
    }
    return acc;
}

Complex classical_action(const ComplexPathResult& path,
                         const model::EffectiveCoefficients& coeffs,
                         const model::PhysicalConstants& consts,
                         const MeasurementRecord& record) {
    const Complex kappa = effective_shift(coeffs.mass, record, consts);
    const auto coeff = shifted_coefficient(coeffs, kappa);
    const Complex f = path.complex_forcing;
    const double m = coeffs.mass;
    const SolutionGrid& grid = path.basis->X1;
    return integrate_on_grid(grid, record.t_start, record.t_end, [&](double t) {
        const Complex x = path.path.eval(t);
        const Complex v = path.path.eval_slope(t);
        return 0.5 * m * v * v - 0.5 * m * coeff.at(t) * x * x - m * f * x;
    });
}

PropagatorValue propagator(const model::EffectiveCoefficients& coeffs,
                           const model::PhysicalConstants& consts,
                           const MeasurementRecord& record, double xprime,
                           double xdoubleprime, double tol) {
    const ComplexPathResult path =
        complex_classical_path(coeffs, consts, record, xprime, xdoubleprime, tol);

    PropagatorValue out;
    out.phase_action = path.action;
    out.prefactor = std::sqrt(coeffs.mass /
                              (Complex(0.0, 2.0 * kPi * consts.hbar) * path.d_value));
    out.record_norm =
        record.monitored()
            ? std::exp(-record.square_integral() /
                       (record.duration() * (*record.delta_a) * (*record.delta_a)))
            : 1.0;
    out.amplitude = out.prefactor *
                    std::exp(Complex(0.0, 1.0) / consts.hbar * path.action) *
                    out.record_norm;
    return out;
}

ProbabilityValue probability_density(const model::EffectiveCoefficients& coeffs,
                                     const model::PhysicalConstants& consts,
                                     const MeasurementRecord& record,
                                     double xprime, double xdoubleprime,
                                     double tol) {
    const ComplexPathResult path =
        complex_classical_path(coeffs, consts, record, xprime, xdoubleprime, tol);

    // Zero-free homogeneous carrier of the shifted equation: x = X1 + i X2.
    // (X1 and X2 cannot vanish simultaneously; Wronskian is 1.)
    const SolutionGrid& X1 = path.basis->X1;
    const SolutionGrid& X2 = path.basis->X2;
    auto hom = [&](double t) { return X1.eval(t) + Complex(0.0, 1.0) * X2.eval(t); };

    const Complex x_start = hom(record.t_start);  // = 1 by construction
    const Complex x_end = hom(record.t_end);

    // Int (x1^2 - x2^2)/|x|^4 and Int x1 x2/|x|^4, i.e. Re and -Im/2 of Int x^-2.
    const Complex inv_sq_integral =
        integrate_on_grid(X1, record.t_start, record.t_end, [&](double t) {
            const Complex x = hom(t);
            return 1.0 / (x * x);
        });
    const double i1 = inv_sq_integral.real();
    const double i2 = -0.5 * inv_sq_integral.imag();

    ProbabilityValue out;
    out.log_norm = std::log(coeffs.mass / (2.0 * kPi * consts.hbar));
    out.log_record =
        record.monitored()
            ? -2.0 * record.square_integral() /
                  (record.duration() * (*record.delta_a) * (*record.delta_a))
            : 0.0;
    out.log_action = -2.0 * path.action.imag() / consts.hbar;
    out.log_endpoint = -0.5 * std::log(std::norm(x_start) * std::norm(x_end));
    out.log_integral = -0.5 * std::log(i1 * i1 + 4.0 * i2 * i2);

    if (!std::isfinite(i1) || !std::isfinite(i2) || !std::isfinite(out.log_action))
        throw NumericalError("probability_density: non-finite bracketed integral");

    out.log_density = out.log_norm + out.log_record + out.log_action +
                      out.log_endpoint + out.log_integral;
    out.density = std::exp(out.log_density);
    return out;
}

std::vector<ProbabilityValue> record_sweep(
    const model::EffectiveCoefficients& coeffs,
    const model::PhysicalConstants& consts,
    const std::vector<MeasurementRecord>& records, double xprime,
    double xdoubleprime, double tol) {
    std::vector<ProbabilityValue> out;
    out.reserve(records.size());
    for (const MeasurementRecord& r : records)
        out.push_back(probability_density(coeffs, consts, r, xprime, xdoubleprime, tol));
    return out;
}

}  // namespace paultrap::rpif
