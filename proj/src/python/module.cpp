#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "paultrap/errors.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/model.hpp"
#include "paultrap/qnd.hpp"
#include "paultrap/rpif.hpp"
#include "paultrap/trajectory.hpp"

namespace py = pybind11;
using namespace paultrap;

namespace {

model::PhysicalConstants consts_from(const std::string& units) {
    if (units == "si") return model::PhysicalConstants::si();
    if (units == "scaled") return model::PhysicalConstants::scaled();
    throw ValidationError("units must be 'si' or 'scaled'");
}

rpif::MeasurementRecord make_record(double t_start, double t_end,
                                    py::object delta_a,
                                    const std::vector<double>& samples) {
    if (delta_a.is_none()) return rpif::MeasurementRecord::unmonitored(t_start, t_end);
    rpif::MeasurementRecord r;
    r.t_start = t_start;
    r.t_end = t_end;
    r.delta_a = delta_a.cast<double>();
    r.samples = samples;
    r.validate();
    return r;
}

}  // namespace

PYBIND11_MODULE(_paultrap, m) {
    m.doc() = "Paul trap dynamics, Floquet stability, restricted-path-integral "
              "measurement densities and QND variables";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
    py::register_exception<ZeroCrossingError>(m, "ZeroCrossingError", PyExc_RuntimeError);
    py::register_exception<DegenerateBvpError>(m, "DegenerateBvpError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<model::TrapInput>(m, "TrapInput")
        .def(py::init([](double e, double mass, double r, double U_bar, double V_bar,
                         double omega, double M, double R) {
                 model::TrapInput in{e, mass, r, U_bar, V_bar, omega, M, R};
                 in.validate();
                 return in;
             }),
             py::arg("e"), py::arg("m"), py::arg("r"), py::arg("U_bar"),
             py::arg("V_bar"), py::arg("omega"), py::arg("M"), py::arg("R"))
        .def_readonly("e", &model::TrapInput::e)
        .def_readonly("m", &model::TrapInput::m)
        .def_readonly("r", &model::TrapInput::r)
        .def_readonly("U_bar", &model::TrapInput::U_bar)
        .def_readonly("V_bar", &model::TrapInput::V_bar)
        .def_readonly("omega", &model::TrapInput::omega)
        .def_readonly("M", &model::TrapInput::M)
        .def_readonly("R", &model::TrapInput::R);

    py::class_<model::EffectiveCoefficients>(m, "EffectiveCoefficients")
        .def(py::init([](double U, double V, double g, double omega, double mass) {
                 return model::EffectiveCoefficients{U, V, g, omega, mass};
             }),
             py::arg("U"), py::arg("V"), py::arg("g") = 0.0, py::arg("omega") = 1.0,
             py::arg("mass") = 1.0)
        .def_readonly("U", &model::EffectiveCoefficients::U)
        .def_readonly("V", &model::EffectiveCoefficients::V)
        .def_readonly("g", &model::EffectiveCoefficients::g)
        .def_readonly("omega", &model::EffectiveCoefficients::omega)
        .def_readonly("mass", &model::EffectiveCoefficients::mass)
        .def("__repr__", [](const model::EffectiveCoefficients& c) {
            return "EffectiveCoefficients(U=" + std::to_string(c.U) +
                   ", V=" + std::to_string(c.V) + ", g=" + std::to_string(c.g) +
                   ", omega=" + std::to_string(c.omega) +
                   ", mass=" + std::to_string(c.mass) + ")";
        });

    m.def("derive_coefficients",
          [](const model::TrapInput& in, const std::string& units) {
              return model::derive_coefficients(in, consts_from(units));
          },
          py::arg("input"), py::arg("units") = "si");

    m.def("to_mathieu_parameters", [](const model::EffectiveCoefficients& c) {
        const auto mp = model::to_mathieu_parameters(c);
        return py::make_tuple(mp.a, mp.q);
    });

    m.def("environment_report",
          [](const model::TrapInput& in, double excursion, double neighbor_mass,
             double neighbor_distance, const std::string& units) {
              const auto rep = model::environment_report(
                  in, consts_from(units), excursion, neighbor_mass, neighbor_distance);
              py::dict d;
              d["third_order_term"] = rep.third_order_term;
              d["neighbor_potential"] = rep.neighbor_potential;
              d["ratio"] = rep.ratio;
              return d;
          },
          py::arg("input"), py::arg("excursion"), py::arg("neighbor_mass"),
          py::arg("neighbor_distance"), py::arg("units") = "si");

    m.def("integrate",
          [](const model::EffectiveCoefficients& c, Complex kappa, double t0,
             double t1, Complex x0, Complex v0, double tol) {
              const mathieu::CoefficientFunction coeff{c.U, c.V, c.omega, kappa};
              const SolutionGrid g = mathieu::integrate(coeff, t0, t1, x0, v0, tol);
              py::dict d;
              d["t"] = g.nodes;
              d["x"] = g.value;
              d["xdot"] = g.slope;
              return d;
          },
          py::arg("coeffs"), py::arg("kappa") = Complex(0.0), py::arg("t0") = 0.0,
          py::arg("t1") = 1.0, py::arg("x0") = Complex(1.0),
          py::arg("v0") = Complex(0.0), py::arg("tol") = 1e-10);

    m.def("stability",
          [](const model::EffectiveCoefficients& c, double tol) {
              const auto v = mathieu::stability({c.U, c.V, c.omega, 0.0}, tol);
              py::dict d;
              d["multipliers"] = py::make_tuple(v.multiplier1, v.multiplier2);
              d["classification"] = mathieu::to_string(v.classification);
              return d;
          },
          py::arg("coeffs"), py::arg("tol") = 1e-10);

    m.def("d_function",
          [](const model::EffectiveCoefficients& c, Complex kappa, double tprime,
             double tdoubleprime, double tol) {
              return mathieu::d_function({c.U, c.V, c.omega, kappa}, tprime,
                                         tdoubleprime, tol);
          },
          py::arg("coeffs"), py::arg("kappa"), py::arg("tprime"),
          py::arg("tdoubleprime"), py::arg("tol") = 1e-10);

    m.def("simulate",
          [](const model::EffectiveCoefficients& c, double t0, double t1, double x0,
             double v0, int samples, double tol) {
              auto basis = std::make_shared<mathieu::FundamentalBasis>(
                  mathieu::fundamental_basis({c.U, c.V, c.omega, 0.0}, t0, t1, tol));
              const auto traj = trajectory::forced_solution_green(basis, x0, v0, c.g);
              std::vector<double> t(samples), x(samples), xdot(samples);
              for (int i = 0; i < samples; ++i) {
                  t[i] = t0 + (t1 - t0) * double(i) / double(samples - 1);
                  x[i] = traj.eval(t[i]).real();
                  xdot[i] = traj.eval_slope(t[i]).real();
              }
              py::dict d;
              d["t"] = t;
              d["x"] = x;
              d["xdot"] = xdot;
              return d;
          },
          py::arg("coeffs"), py::arg("t0"), py::arg("t1"), py::arg("x0"),
          py::arg("v0"), py::arg("samples") = 1000, py::arg("tol") = 1e-10);

    m.def("effective_shift",
          [](double mass, double t_start, double t_end, py::object delta_a,
             const std::vector<double>& samples, const std::string& units) {
              return rpif::effective_shift(
                  mass, make_record(t_start, t_end, delta_a, samples),
                  consts_from(units));
          },
          py::arg("mass"), py::arg("t_start"), py::arg("t_end"), py::arg("delta_a"),
          py::arg("samples") = std::vector<double>{}, py::arg("units") = "scaled");

    m.def("probability_density",
          [](const model::EffectiveCoefficients& c, double t_start, double t_end,
             py::object delta_a, const std::vector<double>& samples, double x_start,
             double x_end, const std::string& units, double tol) {
              const auto p = rpif::probability_density(
                  c, consts_from(units),
                  make_record(t_start, t_end, delta_a, samples), x_start, x_end, tol);
              py::dict d;
              d["density"] = p.density;
              d["log_density"] = p.log_density;
              d["log_norm"] = p.log_norm;
              d["log_record"] = p.log_record;
              d["log_action"] = p.log_action;
              d["log_endpoint"] = p.log_endpoint;
              d["log_integral"] = p.log_integral;
              d["mean_record_approximation"] = p.mean_record_approximation;
              return d;
          },
          py::arg("coeffs"), py::arg("t_start"), py::arg("t_end"),
          py::arg("delta_a"), py::arg("samples"), py::arg("x_start"),
          py::arg("x_end"), py::arg("units") = "scaled", py::arg("tol") = 1e-10);

    m.def("propagator",
          [](const model::EffectiveCoefficients& c, double t_start, double t_end,
             py::object delta_a, const std::vector<double>& samples, double x_start,
             double x_end, const std::string& units, double tol) {
              const auto p = rpif::propagator(
                  c, consts_from(units),
                  make_record(t_start, t_end, delta_a, samples), x_start, x_end, tol);
              py::dict d;
              d["amplitude"] = p.amplitude;
              d["prefactor"] = p.prefactor;
              d["action"] = p.phase_action;
              d["record_norm"] = p.record_norm;
              return d;
          },
          py::arg("coeffs"), py::arg("t_start"), py::arg("t_end"),
          py::arg("delta_a"), py::arg("samples"), py::arg("x_start"),
          py::arg("x_end"), py::arg("units") = "scaled", py::arg("tol") = 1e-10);

    m.def("qnd_check",
          [](const model::EffectiveCoefficients& c, double t0, double t1, double x0,
             double v0, double tol) {
              auto X = std::make_shared<SolutionGrid>(mathieu::integrate(
                  {c.U, c.V, c.omega, 0.0}, t0, t1, x0, v0, tol));
              const auto ratio = qnd::canonical_ratio(X, c.mass);
              py::dict d;
              d["residual_max"] = qnd::qnd_residual(ratio, c);
              d["pole_times"] = ratio.pole_times;
              return d;
          },
          py::arg("coeffs"), py::arg("t0"), py::arg("t1"), py::arg("x0") = 1.0,
          py::arg("v0") = 0.0, py::arg("tol") = 1e-10);

    m.def("hamiltonian_value", &qnd::hamiltonian_value, py::arg("q"), py::arg("p"),
          py::arg("t"), py::arg("coeffs"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
