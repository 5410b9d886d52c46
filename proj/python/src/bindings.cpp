#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fhd/config.hpp"
#include "fhd/properties.hpp"
#include "fhd/report.hpp"
#include "fhd/verify.hpp"

namespace py = pybind11;
using namespace fhd;

namespace {

py::dict row_errors(const LevelRow& r) {
  py::dict d;
  for (int c = 0; c < kNumErrorColumns; ++c) d[column_name(c)] = r.err[c];
  return d;
}

py::dict report_orders(const StudyReport& r) {
  py::dict d;
  for (int c = 0; c < kNumErrorColumns; ++c) {
    if (r.orders[c]) d[column_name(c)] = *r.orders[c];
  }
  return d;
}

StudyReport run_study(const std::string& pair, const std::vector<int>& levels, const MaterialParams& params,
                      int picard_iters, int oseen_iters, int quad_bump, bool parallel_levels) {
  StudyOptions o;
  o.pair = parse_element_pair(pair);
  o.levels = levels;
  o.params = params;
  o.picard_iters = picard_iters;
  o.oseen_iters = oseen_iters;
  o.quad_bump = quad_bump;
  o.parallel_levels = parallel_levels;
  py::gil_scoped_release release;
  return run_convergence_study(o);
}

LevelRow solve_manufactured(int level, const std::string& pair_name, const MaterialParams& params,
                            int picard_iters, int oseen_iters) {
  const ElementPair pair = parse_element_pair(pair_name);
  py::gil_scoped_release release;
  const ManufacturedCase mc = case_for_pair(pair, params);
  FhdConfig cfg = mc.config(level, pair);
  cfg.picard_iters = picard_iters;
  cfg.oseen_iters = oseen_iters;
  const Discretization disc = make_discretization(level, pair);
  return measure_errors(mc, disc, solve_fhd(disc, cfg));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decoupled finite element solver for stationary ferrohydrodynamics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<MaterialParams>(m, "MaterialParams")
      .def(py::init<>())
      .def(py::init([](double mu0, double Ms, double gamma, double rho, double eta) {
             MaterialParams p{mu0, Ms, gamma, rho, eta};
             p.validate();
             return p;
           }),
           py::kw_only(), py::arg("mu0") = 1.0, py::arg("Ms") = 1.0, py::arg("gamma") = 1.0, py::arg("rho") = 1.0,
           py::arg("eta") = 1.0)
      .def_readwrite("mu0", &MaterialParams::mu0)
      .def_readwrite("Ms", &MaterialParams::Ms)
      .def_readwrite("gamma", &MaterialParams::gamma)
      .def_readwrite("rho", &MaterialParams::rho)
      .def_readwrite("eta", &MaterialParams::eta)
      .def_property_readonly("chi0", &MaterialParams::chi0)
      .def("validate", &MaterialParams::validate)
      .def("__repr__", [](const MaterialParams& p) {
        return "MaterialParams(mu0=" + std::to_string(p.mu0) + ", Ms=" + std::to_string(p.Ms) +
               ", gamma=" + std::to_string(p.gamma) + ", rho=" + std::to_string(p.rho) +
               ", eta=" + std::to_string(p.eta) + ")";
      });

  m.def("langevin", &langevin, py::arg("y"));
  m.def("alpha", &alpha, py::arg("x"), py::arg("params") = MaterialParams{});
  m.def("beta", &beta, py::arg("x"), py::arg("params") = MaterialParams{});
  m.def("beta_prime", &beta_prime, py::arg("x"), py::arg("params") = MaterialParams{});
  m.def(
      "magnetization",
      [](std::pair<double, double> h, const MaterialParams& p) {
        const Vec2 v = magnetization(Vec2(h.first, h.second), p);
        return std::make_pair(v.x(), v.y());
      },
      py::arg("h"), py::arg("params") = MaterialParams{});

  m.def(
      "mesh_counts",
      [](int n) {
        const Mesh2D mesh = build_uniform_square(n);
        py::dict d;
        d["vertices"] = mesh.num_vertices();
        d["edges"] = mesh.num_edges();
        d["triangles"] = mesh.num_triangles();
        d["h"] = mesh_size(mesh);
        return d;
      },
      py::arg("n"), "Vertex, edge and triangle counts and mesh size of the N x N mesh.");

  py::class_<OrderFit>(m, "OrderFit")
      .def_readonly("pairwise", &OrderFit::pairwise)
      .def_readonly("least_squares", &OrderFit::least_squares);
  m.def("convergence_orders", &convergence_orders, py::arg("errors"), py::arg("h"));

  py::class_<LevelRow>(m, "LevelRow")
      .def_readonly("N", &LevelRow::N)
      .def_readonly("h", &LevelRow::h)
      .def_readonly("curl_inf", &LevelRow::curl_inf)
      .def_readonly("seconds", &LevelRow::seconds)
      .def_property_readonly("errors", &row_errors);

  py::class_<StudyReport>(m, "StudyReport")
      .def_readonly("case_name", &StudyReport::case_name)
      .def_property_readonly("pair", [](const StudyReport& r) { return to_string(r.pair); })
      .def_readonly("rows", &StudyReport::rows)
      .def_property_readonly("orders", &report_orders)
      .def_readonly("failed", &StudyReport::failed)
      .def_readonly("failed_level", &StudyReport::failed_level)
      .def_readonly("failure", &StudyReport::failure)
      .def("to_csv", &to_csv);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("study", &RunConfig::study)
      .def_property(
          "pair", [](const RunConfig& c) { return to_string(c.pair); },
          [](RunConfig& c, const std::string& s) { c.pair = parse_element_pair(s); })
      .def_readwrite("levels", &RunConfig::levels)
      .def_readwrite("params", &RunConfig::params)
      .def_readwrite("picard_iters", &RunConfig::picard_iters)
      .def_readwrite("oseen_iters", &RunConfig::oseen_iters)
      .def_readwrite("quad_bump", &RunConfig::quad_bump)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("out_csv", &RunConfig::out_csv)
      .def_readwrite("out_json", &RunConfig::out_json);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "run_config",
      [](const RunConfig& cfg, bool parallel_levels) {
        StudyOptions o = cfg.study_options();
        o.parallel_levels = parallel_levels;
        py::gil_scoped_release release;
        return run_convergence_study(o);
      },
      py::arg("config"), py::arg("parallel_levels") = false);
  m.def("run_study", &run_study, py::arg("pair") = "l0", py::arg("levels") = std::vector<int>{4, 8, 16, 32, 64, 128},
        py::arg("params") = MaterialParams{}, py::arg("picard_iters") = 2, py::arg("oseen_iters") = 2,
        py::arg("quad_bump") = 2, py::arg("parallel_levels") = false);
  m.def("solve_manufactured", &solve_manufactured, py::arg("level"), py::arg("pair") = "l0",
        py::arg("params") = MaterialParams{}, py::arg("picard_iters") = 2, py::arg("oseen_iters") = 2,
        "Solve the manufactured case on one mesh and return its error row.");
  m.def("to_json", &to_json, py::arg("report"), py::arg("config") = RunConfig{});

  py::class_<PropertyResult>(m, "PropertyResult")
      .def_readonly("name", &PropertyResult::name)
      .def_readonly("passed", &PropertyResult::pass)
      .def_readonly("worst", &PropertyResult::worst)
      .def_readonly("tolerance", &PropertyResult::tolerance)
      .def_readonly("detail", &PropertyResult::detail)
      .def("__repr__", [](const PropertyResult& r) {
        return std::string(r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail;
      });
  m.def(
      "check_properties",
      [](std::uint64_t seed, bool broken_alpha) {
        PropertyOptions o;
        o.seed = seed;
        if (broken_alpha) o.alpha_override = clipped_alpha_law(o.params);
        py::gil_scoped_release release;
        return run_property_battery(o);
      },
      py::arg("seed") = 42, py::arg("broken_alpha") = false);
  m.def("inf_sup_constant", &inf_sup_constant, py::arg("level"), py::arg("second_order_pair") = false,
        py::call_guard<py::gil_scoped_release>());

  py::class_<IterationGap>(m, "IterationGap")
      .def_readonly("N", &IterationGap::N)
      .def_property_readonly("gap",
                             [](const IterationGap& g) {
                               py::dict d;
                               for (int c = 0; c < kNumErrorColumns; ++c) d[column_name(c)] = g.gap[c];
                               return d;
                             })
      .def_property_readonly("error",
                             [](const IterationGap& g) {
                               py::dict d;
                               for (int c = 0; c < kNumErrorColumns; ++c) d[column_name(c)] = g.error[c];
                               return d;
                             })
      .def("worst_ratio", &IterationGap::worst_ratio);
  m.def(
      "iteration_gap",
      [](const std::string& pair, int level, int short_iters, int long_iters) {
        const ElementPair p = parse_element_pair(pair);
        py::gil_scoped_release release;
        return iteration_gap(p, level, short_iters, long_iters);
      },
      py::arg("pair") = "l0", py::arg("level") = 16, py::arg("short_iters") = 2, py::arg("long_iters") = 6);

  m.attr("CSV_HEADER") = std::string(kCsvHeader);
}
