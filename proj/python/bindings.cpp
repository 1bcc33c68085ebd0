#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparsecqp/bench.hpp"
#include "sparsecqp/conditions.hpp"
#include "sparsecqp/errors.hpp"
#include "sparsecqp/feasible.hpp"
#include "sparsecqp/model.hpp"
#include "sparsecqp/solvers.hpp"

namespace py = pybind11;
using namespace sparsecqp;

namespace {

std::vector<double> flatten(const Matrix& data) {
  return std::vector<double>(data.data(), data.data() + data.size());
}

std::string prior_repr(const MagnitudePrior& p) {
  return "MagnitudePrior(alpha=" + std::to_string(p.alpha()) + ", beta=" + std::to_string(p.beta()) + ")";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse recovery from quantized data by concave quadratic programming";
  m.attr("__version__") = SPARSECQP_VERSION;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SaturationError>(m, "SaturationError", error.ptr());
  py::register_exception<InvalidDimension>(m, "InvalidDimension", error.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<DimensionTooLarge>(m, "DimensionTooLarge", error.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", error.ptr());
  py::register_exception<RankDeficient>(m, "RankDeficient", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());

  // model
  py::class_<MagnitudePrior>(m, "MagnitudePrior")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def_property_readonly("alpha", &MagnitudePrior::alpha)
      .def_property_readonly("beta", &MagnitudePrior::beta)
      .def_property_readonly("d", &MagnitudePrior::d)
      .def("__repr__", &prior_repr);

  py::class_<QuantSpec>(m, "QuantSpec")
      .def(py::init<std::int64_t, double, std::optional<double>>(), py::arg("levels"), py::arg("range"),
           py::arg("bound") = py::none())
      .def_static(
          "covering",
          [](std::int64_t levels, const Matrix& data, bool fullStep) {
            const auto flat = flatten(data);
            return QuantSpec::covering(levels, flat, fullStep);
          },
          py::arg("levels"), py::arg("data"), py::arg("full_step_bound") = false)
      .def_static(
          "multiples_of",
          [](double step, const Matrix& data, std::optional<double> bound) {
            const auto flat = flatten(data);
            return QuantSpec::multiplesOf(step, flat, bound);
          },
          py::arg("step"), py::arg("data"), py::arg("bound") = py::none())
      .def_property_readonly("levels", &QuantSpec::levels)
      .def_property_readonly("range", &QuantSpec::range)
      .def_property_readonly("step", &QuantSpec::step)
      .def_property_readonly("bound", &QuantSpec::bound)
      .def("point", &QuantSpec::point, py::arg("j"));

  py::class_<Instance>(m, "Instance")
      .def(py::init([](Matrix A, Vector x) { return Instance::fromTruth(std::move(A), std::move(x)); }),
           py::arg("A"), py::arg("x_true"))
      .def_readwrite("A", &Instance::A)
      .def_readwrite("x_true", &Instance::xTrue)
      .def_readwrite("y", &Instance::y)
      .def_readwrite("k", &Instance::k)
      .def_readwrite("prior", &Instance::prior)
      .def_readwrite("seed", &Instance::seed)
      .def_property_readonly("n", &Instance::n)
      .def_property_readonly("m", &Instance::m);

  py::class_<Observation>(m, "Observation")
      .def(py::init([](Matrix QA, Vector Qy, double deltaA, double deltaY, const MagnitudePrior& prior) {
             return Observation{std::move(QA), std::move(Qy), deltaA, deltaY, prior};
           }),
           py::arg("QA"), py::arg("Qy"), py::arg("delta_a"), py::arg("delta_y"), py::arg("prior"))
      .def_readwrite("QA", &Observation::QA)
      .def_readwrite("Qy", &Observation::Qy)
      .def_readwrite("delta_a", &Observation::deltaA)
      .def_readwrite("delta_y", &Observation::deltaY)
      .def_readwrite("prior", &Observation::prior)
      .def_property_readonly("n", &Observation::n)
      .def_property_readonly("m", &Observation::m);

  m.def("quantize_value", &quantize_value, py::arg("value"), py::arg("spec"));
  m.def("quantize", &quantize, py::arg("instance"), py::arg("spec_a"), py::arg("spec_y"), py::arg("prior"));
  m.def("generate", &generate, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("prior"), py::arg("seed"));

  // feasible
  py::class_<Polytope>(m, "Polytope")
      .def_readwrite("C", &Polytope::C)
      .def_readwrite("g", &Polytope::g)
      .def_readwrite("lower", &Polytope::lower)
      .def_readwrite("upper", &Polytope::upper)
      .def_property_readonly("n", &Polytope::n)
      .def_property_readonly("rows", &Polytope::rows);

  m.def("build_polytope", &build_polytope, py::arg("observation"), py::arg("upper"));
  m.def("build_cqp_polytope", &build_cqp_polytope, py::arg("observation"));
  m.def("build_l1_polytope", &build_l1_polytope, py::arg("observation"));
  m.def("box_polytope", &box_polytope, py::arg("lower"), py::arg("upper"));
  m.def("is_member", &is_member, py::arg("x"), py::arg("polytope"), py::arg("tol") = kDefaultMembershipTol);
  m.def("max_violation", &max_violation, py::arg("x"), py::arg("polytope"));

  // solvers
  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("GlobalOptimal", SolveStatus::GlobalOptimal)
      .value("Feasible", SolveStatus::Feasible)
      .value("Infeasible", SolveStatus::Infeasible);

  py::class_<Solution>(m, "Solution")
      .def_readonly("x", &Solution::x)
      .def_readonly("objective", &Solution::objective)
      .def_readonly("status", &Solution::status)
      .def_readonly("nodes", &Solution::nodes)
      .def_readonly("wall_time", &Solution::wallTime)
      .def_readonly("lower_bound", &Solution::lowerBound);

  py::class_<BnbConfig>(m, "BnbConfig")
      .def(py::init<>())
      .def_readwrite("abs_gap", &BnbConfig::absGap)
      .def_readwrite("max_nodes", &BnbConfig::maxNodes);

  m.def("objective_cqp", &objective_cqp, py::arg("x"), py::arg("d"));
  m.def("support_threshold", &support_threshold, py::arg("d"));
  m.def("support_of", &support_of, py::arg("x"), py::arg("d"));
  m.def("solve_l1", &solve_l1, py::arg("polytope"), py::call_guard<py::gil_scoped_release>());
  m.def("solve_cqp", &solve_cqp, py::arg("polytope"), py::arg("d"), py::arg("config") = BnbConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("oracle_vertex_min", &oracle_vertex_min, py::arg("polytope"), py::arg("d"),
        py::call_guard<py::gil_scoped_release>());
  m.def("refine_on_support", &refine_on_support, py::arg("observation"), py::arg("support"));

  // conditions
  py::enum_<Proposition>(m, "Proposition")
      .value("P1", Proposition::P1)
      .value("P2", Proposition::P2)
      .value("P3", Proposition::P3);
  py::enum_<GammaSet>(m, "GammaSet")
      .value("SupportMismatch", GammaSet::SupportMismatch)
      .value("Literal", GammaSet::Literal);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("proposition", &ConditionReport::proposition)
      .def_readonly("holds", &ConditionReport::holds)
      .def_readonly("margin", &ConditionReport::margin)
      .def_readonly("threshold", &ConditionReport::threshold)
      .def_readonly("worst_gamma", &ConditionReport::worstGamma);

  m.def("check_prop1", &check_prop1, py::arg("A"), py::arg("d"), py::arg("delta_y"));
  m.def("check_prop2", &check_prop2, py::arg("A"), py::arg("prior"), py::arg("delta_y"),
        py::arg("gamma_set") = GammaSet::SupportMismatch);
  m.def("check_prop3", &check_prop3, py::arg("QA"), py::arg("prior"), py::arg("delta_y"), py::arg("delta_a"),
        py::arg("gamma_set") = GammaSet::SupportMismatch);

  // bench
  py::class_<Metrics>(m, "Metrics")
      .def_readonly("rel_err", &Metrics::relErr)
      .def_readonly("fp_rate", &Metrics::fpRate)
      .def_readonly("fn_rate", &Metrics::fnRate)
      .def_readonly("run_time", &Metrics::runTime);

  m.def(
      "compute_metrics",
      [](const Vector& xHat, const Vector& xTrue, int k, double runTime, std::optional<double> thr) {
        return compute_metrics(xHat, xTrue, k, runTime, thr.value_or(support_threshold(1.0)));
      },
      py::arg("x_hat"), py::arg("x_true"), py::arg("k"), py::arg("run_time") = 0.0,
      py::arg("zero_threshold") = py::none());

  py::enum_<Method>(m, "Method").value("L1", Method::L1).value("CQP", Method::CQP);
  py::enum_<BoundMode>(m, "BoundMode").value("HalfStep", BoundMode::HalfStep).value("FullStep", BoundMode::FullStep);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("m", &ExperimentConfig::m)
      .def_readwrite("k", &ExperimentConfig::k)
      .def_readwrite("prior", &ExperimentConfig::prior)
      .def_readwrite("levels", &ExperimentConfig::levels)
      .def_readwrite("runs", &ExperimentConfig::runs)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("methods", &ExperimentConfig::methods)
      .def_readwrite("bound_mode", &ExperimentConfig::boundMode)
      .def_readwrite("bnb", &ExperimentConfig::bnb)
      .def_readwrite("jobs", &ExperimentConfig::jobs)
      .def("validate", &ExperimentConfig::validate);

  // The per-run log and the summary table come back as lists of dicts.
  m.def(
      "run_experiment",
      [](const ExperimentConfig& cfg) {
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg);
        }
        py::list runs, table;
        for (const RunRecord& r : res.runs) {
          py::dict d;
          d["run"] = r.run;
          d["seed"] = r.seed;
          d["levels"] = r.levels;
          d["method"] = r.method;
          d["ok"] = r.ok;
          d["status"] = r.status;
          d["rel_err"] = r.metrics.relErr;
          d["fp"] = r.metrics.fpRate;
          d["fn"] = r.metrics.fnRate;
          d["time_s"] = r.metrics.runTime;
          d["error"] = r.error;
          runs.append(d);
        }
        for (const CellSummary& c : res.table) {
          py::dict d;
          d["method"] = c.method;
          d["levels"] = c.levels;
          d["count"] = c.count;
          d["rel_err_mean"] = c.relErrMean;
          d["rel_err_std"] = c.relErrStd;
          d["fp_mean"] = c.fpMean;
          d["fp_std"] = c.fpStd;
          d["fn_mean"] = c.fnMean;
          d["fn_std"] = c.fnStd;
          d["time_mean_s"] = c.timeMean;
          table.append(d);
        }
        py::dict out;
        out["runs"] = runs;
        out["table"] = table;
        return out;
      },
      py::arg("config"));
}
