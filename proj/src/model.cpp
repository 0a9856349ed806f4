#include "paultrap/model.hpp"

#include <cmath>

#include <json.hpp>

#include "paultrap/errors.hpp"

namespace paultrap::model {

void TrapInput::validate() const {
    if (!(m > 0.0)) throw ValidationError("TrapInput: m must be positive");
    if (!(r > 0.0)) throw ValidationError("TrapInput: r must be positive");
    if (!(omega > 0.0)) throw ValidationError("TrapInput: omega must be positive");
    if (!(R > 0.0)) throw ValidationError("TrapInput: R must be positive");
    if (M < 0.0) throw ValidationError("TrapInput: M must be nonnegative");
}

EffectiveCoefficients derive_coefficients(const TrapInput& input,
                                          const PhysicalConstants& consts) {
    input.validate();
    const double g = consts.G * input.M / (input.R * input.R);
    const double field_scale = input.e / (input.m * input.r * input.r);
    EffectiveCoefficients c;
    c.U = field_scale * input.U_bar - 2.0 * g / input.R;
    c.V = field_scale * input.V_bar;
    c.g = g;
    c.omega = input.omega;
    c.mass = input.m;
    return c;
}

MathieuParameters to_mathieu_parameters(const EffectiveCoefficients& c) {
    if (!(c.omega > 0.0))
        throw ValidationError("to_mathieu_parameters: omega must be positive");
    return {4.0 * c.U / (c.omega * c.omega), 2.0 * c.V / (c.omega * c.omega)};
}

EnvironmentReport environment_report(const TrapInput& input,
                                     const PhysicalConstants& consts,
                                     double excursion, double neighbor_mass,
                                     double neighbor_distance) {
    if (!(neighbor_distance > 0.0))
        throw ValidationError("environment_report: neighbor distance must be positive");
    if (!(input.R > 0.0))
        throw ValidationError("environment_report: R must be positive");
    const double g = consts.G * input.M / (input.R * input.R);
    EnvironmentReport rep;
    rep.third_order_term =
        std::abs(g * excursion * excursion * excursion / (input.R * input.R));
    rep.neighbor_potential = consts.G * neighbor_mass / neighbor_distance;
    rep.ratio = rep.third_order_term / rep.neighbor_potential;
    return rep;
}

TrapInput parse_trap_input(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("trap input: invalid JSON: ") + e.what());
    }
    auto number = [&doc](const char* key) -> double {
        if (!doc.contains(key))
            throw ValidationError(std::string("trap input: missing key '") + key + "'");
        if (!doc[key].is_number())
            throw ValidationError(std::string("trap input: key '") + key +
                                  "' must be a number");
        return doc[key].get<double>();
    };
    TrapInput in;
    in.e = number("e");
    in.m = number("m");
    in.r = number("r");
    in.U_bar = number("U_bar");
    in.V_bar = number("V_bar");
    in.omega = number("omega");
    in.M = number("M");
    in.R = number("R");
    in.validate();
    return in;
}

}  // namespace paultrap::model
