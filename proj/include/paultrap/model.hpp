#pragma once

#include <string>

namespace paultrap::model {

struct PhysicalConstants {
    double hbar;  // J*s
    double G;     // m^3 kg^-1 s^-2

    /// CODATA 2018 values.
    static PhysicalConstants si() { return {1.054571817e-34, 6.67430e-11}; }
    /// Dimensionless mode (hbar = 1, G = 1) used by most tests.
    static PhysicalConstants scaled() { return {1.0, 1.0}; }
};

/// Raw hardware and gravity parameters.  2r is the electrode spacing; M is
/// the spherical source mass (the Earth) at distance R from the trap center.
struct TrapInput {
    double e = 0.0;       // C
    double m = 0.0;       // kg
    double r = 0.0;       // m
    double U_bar = 0.0;   // dc amplitude
    double V_bar = 0.0;   // ac amplitude
    double omega = 0.0;   // rad/s
    double M = 0.0;       // kg
    double R = 0.0;       // m

    void validate() const;  // throws ValidationError naming the bad field
};

/// Coefficients of the gravity-shifted x equation:
///   x'' + [U - V cos(omega t)] x + g = 0
/// with U = e*U_bar/(m r^2) - 2g/R, V = e*V_bar/(m r^2), g = GM/R^2.
struct EffectiveCoefficients {
    double U = 0.0;      // s^-2
    double V = 0.0;      // s^-2
    double g = 0.0;      // m s^-2
    double omega = 0.0;  // rad/s
    double mass = 0.0;   // kg
};

/// Standard form x'' + (a - 2q cos 2tau) x = 0 under tau = omega*t/2.
struct MathieuParameters {
    double a = 0.0;
    double q = 0.0;
};

struct EnvironmentReport {
    // Both potentials are per unit trap-particle mass (m^2/s^2).
    double third_order_term;     // g * x^3 / R^2
    double neighbor_potential;   // G * m_nb / d
    double ratio;                // third_order_term / neighbor_potential (NaN if 0/0)
};

EffectiveCoefficients derive_coefficients(const TrapInput& input,
                                          const PhysicalConstants& consts);

MathieuParameters to_mathieu_parameters(const EffectiveCoefficients& c);

/// Order-of-magnitude comparison of the uncontrollable gravity terms: the
/// third-order Earth-field Hamiltonian term at excursion x versus the
/// Newtonian potential of a neighbor mass at distance d.  Reports both
/// numbers; makes no claim which dominates.
EnvironmentReport environment_report(const TrapInput& input,
                                     const PhysicalConstants& consts,
                                     double excursion, double neighbor_mass,
                                     double neighbor_distance);

/// Parse a TrapInput from JSON text with keys e, m, r, U_bar, V_bar, omega,
/// M, R (SI units).  Missing or non-numeric keys raise ValidationError
/// naming the offending key.
TrapInput parse_trap_input(const std::string& json_text);

}  // namespace paultrap::model
