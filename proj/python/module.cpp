#include "ddcid/explorer.hpp"
#include "ddcid/harness.hpp"
#include "ddcid/local_search.hpp"
#include "ddcid/potentials.hpp"
#include "ddcid/spectral.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ddcid;

namespace {

py::dict point_dict(const CriticalPoint& c) {
  py::dict d;
  d["location"] = c.location;
  d["value"] = c.value;
  d["gradient_norm"] = c.gradient_norm;
  d["inertia"] = py::make_tuple(c.inertia.plus, c.inertia.zero, c.inertia.minus);
  d["spectrum"] = c.spectrum;
  d["kind"] = std::string(to_string(c.kind));
  d["occurrences"] = c.occurrences;
  return d;
}

py::dict search_dict(const LocalSearchResult& r) {
  py::dict d;
  d["x"] = r.final_point;
  d["value"] = r.final_value;
  d["gradient_norm"] = r.final_gradient_norm;
  d["iterations"] = r.iterations;
  d["outcome"] = std::string(to_string(r.outcome));
  return d;
}

LocalSearchConfig local_config(int max_iterations, double atol, double rtol) {
  LocalSearchConfig cfg;
  cfg.tolerances.max_iterations = max_iterations;
  cfg.tolerances.atol = atol;
  cfg.tolerances.rtol = rtol;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_ddcid, m) {
  m.doc() = "Critical-point exploration by colored intermittent diffusion";

  py::register_exception<EvaluationError>(m, "EvaluationError");

  py::class_<Potential>(m, "Potential")
      .def_property_readonly("name", &Potential::name)
      .def_property_readonly("dimension", &Potential::dimension)
      .def_property_readonly("has_analytic_hessian", &Potential::has_analytic_hessian)
      .def_property_readonly("search_region",
                             [](const Potential& p) {
                               return py::make_tuple(p.search_region().lower,
                                                     p.search_region().upper);
                             })
      .def("value", &Potential::value, py::arg("x"))
      .def("gradient", &Potential::gradient, py::arg("x"))
      .def("hessian", &Potential::hessian, py::arg("x"))
      .def("__repr__", [](const Potential& p) { return "<Potential " + p.name() + ">"; });

  m.def("make_problem", &make_problem, py::arg("key"));
  m.def("list_problems", [] {
    py::list out;
    for (const auto& info : list_problems()) out.append(py::make_tuple(info.key, info.description));
    return out;
  });

  m.def(
      "eigendecompose",
      [](const Matrix& h, double zero_tol) {
        const SpectralInfo s = eigendecompose(h, zero_tol);
        py::dict d;
        d["eigenvalues"] = s.eigenvalues;
        d["eigenvectors"] = s.eigenvectors;
        d["inertia"] = py::make_tuple(s.inertia.plus, s.inertia.zero, s.inertia.minus);
        d["zero_tolerance"] = s.zero_tolerance;
        return d;
      },
      py::arg("hessian"), py::arg("zero_tolerance") = -1.0);

  m.def(
      "minimize",
      [](const Potential& p, const Vector& x0, int max_iterations, double atol, double rtol) {
        return search_dict(minimize(p, x0, local_config(max_iterations, atol, rtol)));
      },
      py::arg("problem"), py::arg("x0"), py::arg("max_iterations") = 2000,
      py::arg("atol") = 1e-8, py::arg("rtol") = 1e-8);

  m.def(
      "saddle_search",
      [](const Potential& p, const Vector& x0, int max_iterations, double atol, double rtol) {
        return search_dict(saddle_search(p, x0, local_config(max_iterations, atol, rtol)));
      },
      py::arg("problem"), py::arg("x0"), py::arg("max_iterations") = 2000,
      py::arg("atol") = 1e-8, py::arg("rtol") = 1e-8);

  m.def(
      "classify",
      [](const Potential& p, const Vector& x, double gradient_tol) {
        return point_dict(classify(p, x, -1.0, gradient_tol));
      },
      py::arg("problem"), py::arg("x"), py::arg("gradient_tol") = 1e-6);

  m.def(
      "explore",
      [](const Potential& p, int budget, std::uint64_t seed, double alpha, int max_diffusive_steps) {
        ExplorationConfig cfg;
        cfg.max_critical_points = budget;
        cfg.seed = seed;
        cfg.diffusion.alpha = alpha;
        cfg.diffusion.max_diffusive_steps = max_diffusive_steps;
        RunReport r;
        {
          py::gil_scoped_release release;
          r = explore(p, cfg);
        }
        py::list table;
        for (const CriticalPoint& c : r.table.entries()) table.append(point_dict(c));
        py::dict d;
        d["problem"] = r.problem;
        d["seed"] = r.seed;
        d["table"] = table;
        d["attempts"] = r.attempts.size();
        d["mean_diffusive_steps"] = r.mean_diffusive_steps;
        d["mean_local_iterations"] = r.mean_local_iterations;
        d["seconds_total"] = r.seconds_total;
        d["json"] = run_report_to_json(r, false);
        return d;
      },
      py::arg("problem"), py::arg("budget") = 20, py::arg("seed") = 0, py::arg("alpha") = 1.0,
      py::arg("max_diffusive_steps") = 50);

  m.def(
      "run_benchmark",
      [](const std::string& problem, const std::string& method, int budget, std::uint64_t seed,
         int repetitions, bool include_timing) {
        BenchmarkSpec spec;
        spec.problem = problem;
        spec.method = method_from_string(method);
        spec.config.max_critical_points = budget;
        spec.config.seed = seed;
        spec.repetitions = repetitions;
        BenchmarkReport r;
        {
          py::gil_scoped_release release;
          r = run_benchmark(spec);
        }
        return benchmark_report_to_json(r, include_timing);
      },
      py::arg("problem"), py::arg("method") = "ddcid", py::arg("budget") = 20,
      py::arg("seed") = 0, py::arg("repetitions") = 1, py::arg("include_timing") = false,
      "Runs a benchmark and returns its JSON report.");

  m.def("metropolis_accept", &metropolis_accept, py::arg("delta"), py::arg("temperature"),
        py::arg("u"));
  m.def("known_global_minimum", &known_global_minimum, py::arg("key"));
}
