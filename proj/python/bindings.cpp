#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "uconvex/cli.hpp"
#include "uconvex/conditions.hpp"
#include "uconvex/error.hpp"
#include "uconvex/io.hpp"
#include "uconvex/modulus.hpp"
#include "uconvex/oracle.hpp"

namespace py = pybind11;
using namespace uconvex;

namespace {

Grid2 grid_or_default(const Generator& g, const std::string& grid) {
  return grid.empty() ? default_grid(g) : fit_grid(Grid2::parse(grid), g);
}

}  // namespace

PYBIND11_MODULE(_uconvex, m) {
  m.doc() = "Uniform convexity toolkit for phi-paranormed spaces (native core)";

  auto base = py::register_exception<Error>(m, "UconvexError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<RouteUnavailable>(m, "RouteUnavailable", base.ptr());

  py::class_<Generator>(m, "Generator")
      .def_static("from_spec", &Generator::from_spec, py::arg("spec"))
      .def_property_readonly("name", &Generator::name)
      .def_property_readonly("t_max", &Generator::t_max)
      .def("value", &Generator::value)
      .def("deriv1", &Generator::deriv1)
      .def("deriv2", &Generator::deriv2)
      .def("inverse", &Generator::inverse)
      .def("__repr__", [](const Generator& g) { return "<Generator " + g.name() + ">"; });

  py::class_<ParanormContext>(m, "Paranorm")
      .def(py::init([](const Generator& g, std::vector<double> w) { return ParanormContext(g, MeasureSpace(std::move(w))); }),
           py::arg("generator"), py::arg("weights"))
      .def("__call__", [](const ParanormContext& c, std::vector<double> x) { return c.pnorm(x); })
      .def("radial_scale", [](const ParanormContext& c, std::vector<double> d, double r) { return c.radial_scale(d, r); });

  // Reports cross as JSON text; the Python side decodes them.
  m.def(
      "check_json",
      [](const std::string& condition, const Generator& g, const std::string& grid) {
        return to_json(check(condition_from_name(condition), g, grid_or_default(g, grid))).dump();
      },
      py::arg("condition"), py::arg("generator"), py::arg("grid") = "");
  m.def(
      "certify_json",
      [](const Generator& g, std::vector<double> w, const std::string& grid) {
        return to_json(certify(g, MeasureSpace(std::move(w)), grid_or_default(g, grid))).dump();
      },
      py::arg("generator"), py::arg("weights"), py::arg("grid") = "");

  m.def("delta_closed_form", &delta_closed_form, py::arg("generator"), py::arg("r"), py::arg("eps"));
  m.def(
      "delta_implicit", [](const Generator& g, double r, double eps) { return delta_implicit(g, r, eps).delta; },
      py::arg("generator"), py::arg("r"), py::arg("eps"));
  m.def("exp_plane_delta0", &exp_plane_delta0, py::arg("r"), py::arg("eps"));
  m.def("exp_plane_modulus", &exp_plane_modulus, py::arg("r"), py::arg("eps"));
  m.def(
      "empirical_modulus",
      [](const ParanormContext& c, double r, double eps, std::size_t samples, std::uint64_t seed) {
        return to_json(empirical_modulus(c, r, eps, samples, seed)).dump();
      },
      py::arg("paranorm"), py::arg("r"), py::arg("eps"), py::arg("samples") = 20000, py::arg("seed") = 1);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
