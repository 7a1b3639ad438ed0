#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specbound/bounds.hpp"
#include "specbound/expr.hpp"
#include "specbound/oracle.hpp"
#include "specbound/runner.hpp"

namespace py = pybind11;
using namespace specbound;

namespace {

py::dict bound_to_dict(const bounds::BoundResult& r) {
  py::dict d;
  d["target"] = r.target;
  d["method"] = r.method;
  d["value"] = r.value;
  d["applicable"] = r.applicable;
  py::list consts;
  for (const auto& c : r.constituents) {
    py::dict cd;
    cd["name"] = c.name;
    cd["value"] = c.value;
    cd["provenance"] = c.provenance;
    consts.append(cd);
  }
  d["constituents"] = consts;
  if (!r.note.empty()) d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_specbound, m) {
  m.doc() = "Spectral gap lower bounds for diffusion generators, with a grid "
            "discretization oracle";

  py::class_<model::Potential>(m, "Potential")
      .def_readonly("dim", &model::Potential::dim)
      .def("value",
           [](const model::Potential& V, const Eigen::VectorXd& x) {
             return V.value(x);
           })
      .def("gradient",
           [](const model::Potential& V, const Eigen::VectorXd& x) {
             return V.gradient(x);
           })
      .def("hessian", [](const model::Potential& V, const Eigen::VectorXd& x) {
        return V.hessian(x);
      });

  py::class_<model::DiagonalWeight>(m, "DiagonalWeight")
      .def_readonly("dim", &model::DiagonalWeight::dim)
      .def_readonly("eps", &model::DiagonalWeight::eps);

  m.def("gaussian", &model::make_gaussian, py::arg("d"),
        "Standard gaussian potential |x|^2/2");
  m.def("power_product", &model::make_power_product, py::arg("d"), py::arg("a"),
        py::arg("c") = 0.0, py::arg("tau") = 0.01,
        "Product of |x_i|^a/a components with a smoothed cyclic interaction");
  m.def("from_expression", &expr::make_expression_potential, py::arg("expr"),
        py::arg("d"), "Potential parsed from an arithmetic expression in x1..xd");

  m.def("identity_weight", &model::make_identity_weight, py::arg("d"));
  m.def(
      "exp_eps_u_weight",
      [](const model::Potential& V, const std::vector<double>& eps) {
        return model::make_weight(V, model::WeightFamily::ExpEpsU, eps);
      },
      py::arg("potential"), py::arg("eps"),
      "Diagonal weight h_i' = exp(eps_i U_i) for product potentials");

  m.def("closed_form_inf_power", &bounds::closed_form_inf_power, py::arg("a"),
        py::arg("eps"));
  m.def("brute_force_inf_power", &bounds::brute_force_inf_power, py::arg("a"),
        py::arg("eps"), py::arg("box_radius") = 8.0,
        py::arg("grid_n") = 1'000'000);

  m.def(
      "first_order_bound",
      [](const model::Potential& V, const model::DiagonalWeight& W,
         double box_radius, int grid_n) {
        return bound_to_dict(bounds::first_order_bound(V, W, box_radius, grid_n));
      },
      py::arg("potential"), py::arg("weight"), py::arg("box_radius"),
      py::arg("grid_n"));
  m.def(
      "prop41",
      [](const model::Potential& V, const std::vector<double>& eps) {
        auto [p1, pd] = bounds::prop41(V, eps);
        return py::make_tuple(bound_to_dict(p1), bound_to_dict(pd));
      },
      py::arg("potential"), py::arg("eps"),
      "Lower bounds on lambda_1 and lambda_{d+1} for perturbed products");
  m.def(
      "optimize_eps",
      [](const model::Potential& V) {
        bounds::EpsOptimum o = bounds::optimize_eps(V, bounds::EpsObjective::Gamma);
        py::dict d;
        d["eps"] = o.eps;
        d["value"] = o.value;
        return d;
      },
      py::arg("potential"));
  m.def("lambda_1_A_analytic", &bounds::lambda_1_A_analytic, py::arg("potential"),
        py::arg("weight"), py::arg("box_radius") = 8.0);
  m.def(
      "lambda_1_A_oracle",
      [](const model::Potential& V, const model::DiagonalWeight& W,
         double radius, int n, unsigned long seed) {
        return bounds::lambda_1_A_oracle(V, W, oracle::Grid{V.dim, radius, n},
                                         1e-8, seed);
      },
      py::arg("potential"), py::arg("weight"), py::arg("radius"), py::arg("n"),
      py::arg("seed") = 0);

  m.def(
      "lowest_eigs",
      [](const model::Potential& V, double radius, int n, int k,
         unsigned long seed) {
        oracle::DiscreteOperator op =
            oracle::discretize(V, oracle::Grid{V.dim, radius, n});
        oracle::SpectrumResult spec = oracle::lowest_eigs(op, k, 1e-8, seed);
        if (!spec.converged)
          throw std::runtime_error("eigensolver did not converge");
        return spec.eigenvalues;
      },
      py::arg("potential"), py::arg("radius"), py::arg("n"), py::arg("k"),
      py::arg("seed") = 0,
      "k smallest eigenvalues of the discretized generator");

  m.def(
      "run",
      [](const std::string& config_text) {
        config::RunConfig cfg = config::parse_config_text(config_text);
        runner::RunOutcome out = runner::run(cfg);
        return py::make_tuple(out.exit_code, out.report.dump());
      },
      py::arg("config_text"),
      "Execute a configuration; returns (exit_code, report_json)");

  py::register_exception<config::ConfigError>(m, "ConfigError");
  py::register_exception<expr::ParseError>(m, "ExprParseError");
  py::register_exception<oracle::NoConvergence>(m, "NoConvergence");
}
