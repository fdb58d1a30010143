#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polybgk/cases.hpp"
#include "polybgk/config.hpp"
#include "polybgk/dvm.hpp"
#include "polybgk/errors.hpp"
#include "polybgk/io.hpp"
#include "polybgk/limiter.hpp"
#include "polybgk/macro.hpp"
#include "polybgk/phase_grid.hpp"
#include "polybgk/quadrature.hpp"
#include "polybgk/solver.hpp"
#include "polybgk/validation.hpp"

namespace py = pybind11;
using namespace polybgk;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    return {a.data(), a.data() + a.size()};
}

py::tuple rule_tuple(const QuadratureRule& r) { return py::make_tuple(to_array(r.nodes), to_array(r.weights)); }

py::dict primitives_dict(const std::vector<Primitive>& q) {
    std::vector<double> rho(q.size()), u(q.size()), p(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        rho[i] = q[i].rho;
        u[i] = q[i].u;
        p[i] = q[i].p;
    }
    py::dict d;
    d["rho"] = to_array(rho);
    d["u"] = to_array(u);
    d["p"] = to_array(p);
    return d;
}

py::dict row_dict(const DiagnosticsRow& r) {
    py::dict d;
    d["t"] = r.t;
    d["mass"] = r.mass;
    d["momentum"] = r.momentum;
    d["energy"] = r.energy;
    d["mass_err"] = r.mass_error;
    d["min_f"] = r.min_f;
    d["residual_linf"] = r.residual_linf;
    return d;
}

}  // namespace

PYBIND11_MODULE(_polybgk, m) {
    m.doc() = "Polyatomic BGK solver core";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<InvalidState>(m, "InvalidState", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
    py::register_exception<BlowUpError>(m, "BlowUpError", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());

    py::class_<Primitive>(m, "Primitive")
        .def(py::init([](double rho, double u, double p) { return Primitive{rho, u, p}; }), py::arg("rho"),
             py::arg("u"), py::arg("p"))
        .def_readwrite("rho", &Primitive::rho)
        .def_readwrite("u", &Primitive::u)
        .def_readwrite("p", &Primitive::p)
        .def_property_readonly("theta", &Primitive::theta)
        .def("__repr__", [](const Primitive& q) {
            std::ostringstream os;
            os << "Primitive(rho=" << q.rho << ", u=" << q.u << ", p=" << q.p << ")";
            return os.str();
        });

    py::class_<MacroState>(m, "MacroState")
        .def(py::init([](double rho, double mom, double energy) { return MacroState{rho, mom, energy}; }),
             py::arg("rho"), py::arg("mom"), py::arg("energy"))
        .def_readwrite("rho", &MacroState::rho)
        .def_readwrite("mom", &MacroState::mom)
        .def_readwrite("energy", &MacroState::energy);

    py::class_<AlphaParams>(m, "AlphaParams")
        .def_readonly("amplitude", &AlphaParams::amplitude)
        .def_readonly("beta", &AlphaParams::beta)
        .def_readonly("velocity", &AlphaParams::velocity);

    m.def("gauss_legendre", [](int n) { return rule_tuple(gauss_legendre(n)); }, py::arg("n"));
    m.def("gauss_lobatto", [](int n) { return rule_tuple(gauss_lobatto(n)); }, py::arg("n"));

    m.def("compute_k", &compute_k, py::arg("eps_u"), py::arg("gamma"));
    m.def("compute_zeta_max", &compute_zeta_max, py::arg("delta"), py::arg("eps_zeta"), py::arg("theta_max") = 1.0);
    m.def("to_conserved", &to_conserved, py::arg("q"), py::arg("gamma"));
    m.def("to_primitive", &to_primitive, py::arg("q"), py::arg("gamma"));
    m.def("alpha_from_macro", &alpha_from_macro, py::arg("q"), py::arg("m") = 1, py::arg("delta") = 0.0);
    m.def("rankine_hugoniot", &rankine_hugoniot, py::arg("mach"), py::arg("gamma"), py::arg("upstream"));
    m.def(
        "exact_riemann",
        [](const Primitive& l, const Primitive& r, double gamma, py::array_t<double> xt) {
            return primitives_dict(exact_riemann(l, r, gamma, from_array(xt)));
        },
        py::arg("left"), py::arg("right"), py::arg("gamma"), py::arg("x_over_t"));
    m.def(
        "squeeze",
        [](py::array_t<double> values) {
            const auto v = from_array(values);
            if (v.size() < 2) throw InvalidArgument("squeeze: need at least two nodal values");
            return to_array(squeeze(v, build_basis(static_cast<int>(v.size()) - 1)));
        },
        py::arg("values"), "Positivity squeeze of one element given its p+1 Gauss-Lobatto nodal values.");

    py::class_<Simulation>(m, "Simulation")
        .def_static(
            "from_case", [](const std::string& name) { return std::make_unique<Simulation>(make_case(name).setup); },
            py::arg("name"))
        .def_static(
            "from_config",
            [](const std::string& text) { return std::make_unique<Simulation>(make_setup(parse_config_string(text))); },
            py::arg("text"), "Build from configuration text in key = value form.")
        .def_property_readonly("time", &Simulation::time)
        .def_property_readonly("gamma", &Simulation::gamma)
        .def_property_readonly("r_max", &Simulation::r_max)
        .def_property_readonly("dt_cfl", &Simulation::dt_cfl)
        .def_property_readonly("warnings", &Simulation::warnings)
        .def_property_readonly("n_phase", [](const Simulation& s) { return s.moment_operator().size(); })
        .def("coordinates", [](const Simulation& s) { return to_array(s.coordinates()); })
        .def("density", [](const Simulation& s) { return to_array(s.density()); })
        .def("primitives", [](const Simulation& s) { return primitives_dict(s.primitives()); })
        .def(
            "run",
            [](Simulation& s, double t_final, double output_interval) {
                RunControl rc;
                rc.t_final = t_final;
                rc.output_interval = output_interval;
                std::vector<DiagnosticsRow> rows;
                {
                    py::gil_scoped_release release;
                    rows = s.run(rc);
                }
                py::list out;
                for (const auto& r : rows) out.append(row_dict(r));
                return out;
            },
            py::arg("t_final"), py::arg("output_interval") = 0.0);

    m.def(
        "run_config",
        [](const std::string& path, const std::string& out_dir) {
            std::ostringstream log;
            const RunSummary s = run_case(parse_config(path), out_dir, log);
            py::dict d;
            d["status"] = s.status;
            d["message"] = s.message;
            d["files"] = s.files;
            d["warnings"] = s.warnings;
            d["log"] = log.str();
            return d;
        },
        py::arg("config_path"), py::arg("out_dir"));

    m.def("validation_suites", &validation_suites);
    m.def(
        "validate",
        [](const std::string& suite, int threads) {
            ValidationOptions opts;
            opts.threads = threads;
            SuiteReport r;
            {
                py::gil_scoped_release release;
                r = run_validation(suite, opts);
            }
            py::list checks;
            for (const auto& c : r.checks) {
                py::dict d;
                d["name"] = c.name;
                d["measured"] = c.measured;
                d["expected"] = c.expected;
                d["tolerance"] = c.tolerance;
                d["pass"] = c.pass;
                d["detail"] = c.detail;
                checks.append(d);
            }
            py::dict d;
            d["suite"] = r.suite;
            d["passed"] = r.passed();
            d["checks"] = checks;
            d["notes"] = r.notes;
            return d;
        },
        py::arg("suite"), py::arg("threads") = 1);
}
