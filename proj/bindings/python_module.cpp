// Python bindings for the main operations: simulation, bounds, bootstrap CIs,
// bridge checks, and the oracle. Enums cross the boundary as their canonical
// strings; reports keep their C++ field names.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

#include "proxibound/bootstrap.hpp"
#include "proxibound/bounds.hpp"
#include "proxibound/bridge.hpp"
#include "proxibound/errors.hpp"
#include "proxibound/frequency_model.hpp"
#include "proxibound/lse.hpp"
#include "proxibound/oracle.hpp"
#include "proxibound/rng.hpp"
#include "proxibound/serialize.hpp"
#include "proxibound/study.hpp"

namespace py = pybind11;
using namespace proxibound;

namespace {

Codebook codebook_from_json_str(const std::string& text) {
  return codebook_from_json(json::parse(text));
}

std::string dump2(const json& j) { return j.dump(2); }

}  // namespace

PYBIND11_MODULE(proxibound, m) {
  m.doc() = "Partial-identification bounds on causal effects from proxy variables";
  m.attr("rng_algorithm") = std::string(Rng::kAlgorithmId);

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<ZeroConditioningMass>(m, "ZeroConditioningMass", PyExc_ArithmeticError);
  py::register_exception<PositivityViolation>(m, "PositivityViolation", PyExc_ArithmeticError);
  py::register_exception<EmptyIntersection>(m, "EmptyIntersection", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lower"), py::arg("upper"))
      .def_readonly("lower", &Interval::lower)
      .def_readonly("upper", &Interval::upper)
      .def("width", &Interval::width)
      .def("contains",
           [](const Interval& iv, double v, double tol) { return iv.contains(v, tol); },
           py::arg("value"), py::arg("tol") = 0.0)
      .def("__repr__", [](const Interval& iv) {
        std::ostringstream os;
        os << "Interval(" << iv.lower << ", " << iv.upper << ")";
        return os.str();
      });

  py::class_<Variable>(m, "Variable")
      .def(py::init([](const std::string& name, int card, const std::string& role) {
             return Variable{name, card, role_from_string(role)};
           }),
           py::arg("name"), py::arg("cardinality"), py::arg("role"))
      .def_readonly("name", &Variable::name)
      .def_readonly("cardinality", &Variable::cardinality)
      .def_property_readonly("role", [](const Variable& v) { return to_string(v.role); });

  py::class_<Codebook>(m, "Codebook")
      .def(py::init<std::vector<Variable>, std::vector<double>>(), py::arg("variables"),
           py::arg("y_values") = std::vector<double>{})
      .def_static("from_json", &codebook_from_json_str, py::arg("text"))
      .def("to_json", [](const Codebook& cb) { return dump2(to_json(cb)); })
      .def_property_readonly("variables", &Codebook::variables)
      .def_property_readonly("y_values", &Codebook::y_values)
      .def("observed", &Codebook::observed);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Codebook, std::vector<int32_t>>(), py::arg("observed_codebook"),
           py::arg("rows"))
      .def_static("from_csv", &load_dataset_csv, py::arg("path"), py::arg("observed_codebook"))
      .def("to_csv",
           [](const Dataset& d, const std::string& path) { save_dataset_csv(path, d); },
           py::arg("path"))
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("codebook", &Dataset::codebook);

  py::class_<JointPMF>(m, "JointPMF")
      .def_static("from_json",
                  [](const std::string& text) { return joint_from_json(json::parse(text)); })
      .def("to_json", [](const JointPMF& j) { return dump2(to_json(j)); })
      .def_property_readonly("codebook", &JointPMF::codebook)
      .def_property_readonly("table", [](const JointPMF& j) { return j.table().data(); })
      .def("observed_margin", &JointPMF::observed_margin)
      .def("prob", &JointPMF::prob, py::arg("given"))
      .def("cond_mean_y", &JointPMF::cond_mean_y, py::arg("given"));

  py::class_<FrequencyModel>(m, "FrequencyModel")
      .def_static("from_dataset",
                  [](const Dataset& d, double lam) { return FrequencyModel::from_dataset(d, lam); },
                  py::arg("data"), py::arg("lam") = 0.0)
      .def_static("from_joint", &FrequencyModel::from_joint, py::arg("joint"));

  py::class_<DGPSpec>(m, "DGPSpec")
      .def_static("from_json",
                  [](const std::string& text) { return dgp_spec_from_json(json::parse(text)); })
      .def("to_json", [](const DGPSpec& s) { return dump2(to_json(s)); })
      .def_property_readonly("family", [](const DGPSpec& s) { return to_string(s.family); })
      .def_readonly("seed", &DGPSpec::seed)
      .def_property_readonly("y_values", &DGPSpec::effective_y_values);

  py::class_<OracleTruth>(m, "OracleTruth")
      .def_property_readonly(
          "ett_mean",
          [](const OracleTruth& t) { return std::make_pair(t.ett_mean[0], t.ett_mean[1]); })
      .def_property_readonly(
          "po_mean", [](const OracleTruth& t) { return std::make_pair(t.po_mean[0], t.po_mean[1]); })
      .def_readonly("treated_mean", &OracleTruth::treated_mean)
      .def_readonly("theta_ett", &OracleTruth::theta_ett)
      .def_readonly("theta_ate", &OracleTruth::theta_ate)
      .def_readonly("has_mediation", &OracleTruth::has_mediation)
      .def_readonly("cross_world", &OracleTruth::cross_world)
      .def_readonly("nie", &OracleTruth::nie)
      .def_readonly("nde", &OracleTruth::nde);

  py::class_<BoundsReport>(m, "BoundsReport")
      .def_property_readonly("estimand",
                             [](const BoundsReport& r) { return to_string(r.estimand); })
      .def_property_readonly("method", [](const BoundsReport& r) { return to_string(r.method); })
      .def_readonly("hard", &BoundsReport::hard)
      .def_readonly("smoothed", &BoundsReport::smoothed)
      .def_readonly("alpha", &BoundsReport::alpha)
      .def_readonly("diagnostics", &BoundsReport::diagnostics)
      .def("to_json", [](const BoundsReport& r) { return dump2(to_json(r)); });

  py::class_<CIReport>(m, "CIReport")
      .def_readonly("B", &CIReport::B)
      .def_readonly("level", &CIReport::level)
      .def_readonly("seed", &CIReport::seed)
      .def_readonly("rng_id", &CIReport::rng_id)
      .def_readonly("point_hard", &CIReport::point_hard)
      .def_readonly("point_smoothed", &CIReport::point_smoothed)
      .def_readonly("ci", &CIReport::ci)
      .def_readonly("widened", &CIReport::widened)
      .def_readonly("retries_used", &CIReport::retries_used)
      .def_readonly("rep_lower", &CIReport::rep_lower)
      .def_readonly("rep_upper", &CIReport::rep_upper)
      .def("to_json",
           [](const CIReport& r, bool include_replicates) {
             return dump2(to_json(r, include_replicates));
           },
           py::arg("include_replicates") = false);

  py::class_<BridgeCell>(m, "BridgeCell")
      .def_readonly("cell", &BridgeCell::cell)
      .def_readonly("skipped", &BridgeCell::skipped)
      .def_readonly("feasible", &BridgeCell::feasible)
      .def_readonly("residual", &BridgeCell::residual)
      .def_readonly("solution", &BridgeCell::solution)
      .def_readonly("q_normalization", &BridgeCell::q_normalization)
      .def_readonly("note", &BridgeCell::note);

  py::class_<BridgeCheckResult>(m, "BridgeCheckResult")
      .def_property_readonly("kind", [](const BridgeCheckResult& r) { return to_string(r.kind); })
      .def_property_readonly("variant",
                             [](const BridgeCheckResult& r) { return to_string(r.variant); })
      .def_readonly("tolerance", &BridgeCheckResult::tolerance)
      .def_readonly("cells", &BridgeCheckResult::cells)
      .def_readonly("overall_feasible", &BridgeCheckResult::overall_feasible)
      .def("to_json", [](const BridgeCheckResult& r) { return dump2(to_json(r)); });

  m.def("lse",
        [](const std::vector<double>& xs, double alpha) {
          return lse(std::span<const double>(xs), alpha);
        },
        py::arg("values"), py::arg("alpha"));

  m.def("sample_dgp_spec",
        [](const std::string& family, const std::map<std::string, int>& cards,
           std::uint64_t seed) {
          return sample_dgp_spec(family_from_string(family), cards, seed);
        },
        py::arg("family"), py::arg("cards"), py::arg("seed"));
  m.def("build_joint", &build_joint, py::arg("spec"));
  m.def("draw_dataset", &draw_dataset, py::arg("joint"), py::arg("n"), py::arg("seed"));
  m.def("oracle_estimands", &oracle_estimands, py::arg("joint"));

  m.def("estimate_bounds",
        [](const FrequencyModel& model, const std::string& method, const std::string& estimand,
           double alpha) {
          return estimate_bounds(model, method_from_string(method),
                                 estimand_from_string(estimand), alpha);
        },
        py::arg("model"), py::arg("method"), py::arg("estimand"),
        py::arg("alpha") = std::numeric_limits<double>::infinity());

  m.def("bootstrap_ci",
        [](const Dataset& data, const std::string& method, const std::string& estimand,
           double alpha, double lambda, int B, double level, std::uint64_t seed, int workers) {
          EstimatorSpec spec{method_from_string(method), estimand_from_string(estimand), alpha,
                             lambda};
          py::gil_scoped_release release;
          return bootstrap_ci(data, spec, B, level, seed, workers);
        },
        py::arg("data"), py::arg("method"), py::arg("estimand"), py::arg("alpha") = 50.0,
        py::arg("lam") = 0.0, py::arg("B") = 500, py::arg("level") = 0.95, py::arg("seed") = 1,
        py::arg("workers") = 1);

  m.def("check_outcome_bridge",
        [](const JointPMF& joint, const std::string& variant, double tol) {
          return check_outcome_bridge(joint, bridge_variant_from_string(variant), tol);
        },
        py::arg("joint"), py::arg("variant") = "confounder", py::arg("tol") = 1e-8);
  m.def("check_treatment_bridge", &check_treatment_bridge, py::arg("joint"),
        py::arg("tol") = 1e-8);

  m.def("intersect_bounds",
        [](const std::vector<Interval>& ivs) {
          return intersect_bounds(std::span<const Interval>(ivs));
        },
        py::arg("intervals"));
}
