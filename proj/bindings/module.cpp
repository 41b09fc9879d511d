// Copyright 2026 The covint authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "covint/coverage_engine.hpp"
#include "covint/errors.hpp"
#include "covint/oracle.hpp"

namespace py = pybind11;
using namespace covint;

namespace {

std::optional<long long> interval_lo(const KIndexInterval& r) {
  return r.empty() ? std::nullopt : r.lo();
}
std::optional<long long> interval_hi(const KIndexInterval& r) {
  return r.empty() ? std::nullopt : r.hi();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact worst-case coverage probabilities of random intervals for "
      "binomial, Poisson, negative-binomial and hypergeometric variables";

  py::register_exception<CertificationError>(m, "CertificationError",
                                             PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::enum_<Family>(m, "Family")
      .value("BINOMIAL", Family::Binomial)
      .value("POISSON", Family::Poisson)
      .value("NEG_BINOMIAL", Family::NegBinomial)
      .value("HYPERGEOMETRIC", Family::Hypergeometric);

  py::enum_<Direction>(m, "Direction")
      .value("NON_DECREASING", Direction::NonDecreasing)
      .value("NON_INCREASING", Direction::NonIncreasing);

  py::enum_<BoundsMode>(m, "BoundsMode")
      .value("OPEN_OPEN", BoundsMode::OpenOpen)
      .value("CLOSED_CLOSED", BoundsMode::ClosedClosed)
      .value("CLOSED_OPEN", BoundsMode::ClosedOpen)
      .value("OPEN_CLOSED", BoundsMode::OpenClosed);

  py::class_<DistributionSpec>(m, "DistributionSpec")
      .def_static("binomial", &DistributionSpec::binomial, py::arg("n_trials"))
      .def_static("poisson", &DistributionSpec::poisson, py::arg("n_samples"))
      .def_static("neg_binomial", &DistributionSpec::neg_binomial,
                  py::arg("r"))
      .def_static("hypergeometric", &DistributionSpec::hypergeometric,
                  py::arg("population"), py::arg("draws"))
      .def_readonly("family", &DistributionSpec::family)
      .def_readonly("n_samples", &DistributionSpec::n_samples)
      .def_readonly("r", &DistributionSpec::r)
      .def_readonly("population", &DistributionSpec::population)
      .def("unbounded_support", &DistributionSpec::unbounded_support)
      .def("__repr__", &DistributionSpec::str);

  py::class_<KIndexInterval>(m, "KIndexInterval")
      .def_static("empty", &KIndexInterval::empty_range)
      .def_static("bounded", &KIndexInterval::bounded, py::arg("lo"),
                  py::arg("hi"))
      .def_static("at_least", &KIndexInterval::at_least, py::arg("lo"))
      .def("is_empty", &KIndexInterval::empty)
      .def_property_readonly("lo", &interval_lo)
      .def_property_readonly("hi", &interval_hi)
      .def("contains", &KIndexInterval::contains)
      .def("__eq__", [](const KIndexInterval& a,
                        const KIndexInterval& b) { return a == b; })
      .def("__repr__", &KIndexInterval::str);

  m.def("pmf", &pmf, py::arg("spec"), py::arg("theta"), py::arg("k"));
  m.def("cdf", &cdf, py::arg("spec"), py::arg("theta"), py::arg("k"));
  m.def("interval_prob", &interval_prob, py::arg("spec"), py::arg("theta"),
        py::arg("range"));
  m.def("t_weight", &t_weight, py::arg("k"), py::arg("M"), py::arg("N"),
        py::arg("n"));

  py::class_<IntervalProcedure>(m, "IntervalProcedure")
      .def_static("from_table", &IntervalProcedure::from_table,
                  py::arg("lower"), py::arg("upper"), py::arg("direction"))
      .def_static("truncated_table", &IntervalProcedure::truncated_table,
                  py::arg("lower"), py::arg("upper"), py::arg("direction"),
                  py::arg("lower_tail_limit"), py::arg("upper_tail_limit"))
      .def_static("clopper_pearson", &IntervalProcedure::clopper_pearson,
                  py::arg("n_trials"), py::arg("delta"))
      .def_static("garwood_poisson", &IntervalProcedure::garwood_poisson,
                  py::arg("n_samples"), py::arg("delta"))
      .def("lower", &IntervalProcedure::lower, py::arg("k"))
      .def("upper", &IntervalProcedure::upper, py::arg("k"))
      .def_property_readonly("direction", &IntervalProcedure::direction)
      .def("unbounded_support", &IntervalProcedure::unbounded_support)
      .def_property_readonly("table_k_max", &IntervalProcedure::table_k_max)
      .def("integer_valued", &IntervalProcedure::integer_valued)
      .def("__repr__", &IntervalProcedure::summary);

  m.def("k_interval_for", &k_interval_for, py::arg("proc"), py::arg("theta"),
        py::arg("mode"));
  m.def("load_procedure_table", [](const std::string& path) {
    LoadedProcedure lp = load_procedure_table(path);
    return py::make_tuple(lp.spec, lp.proc);
  });
  m.def("dump_procedure_table",
        [](const DistributionSpec& spec, const IntervalProcedure& proc) {
          std::ostringstream os;
          write_procedure_table(os, spec, proc);
          return os.str();
        });

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("value", &CriticalPoint::value)
      .def_readonly("endpoint_a", &CriticalPoint::endpoint_a)
      .def_readonly("endpoint_b", &CriticalPoint::endpoint_b)
      .def_readonly("lower_ks", &CriticalPoint::lower_ks)
      .def_readonly("upper_ks", &CriticalPoint::upper_ks)
      .def("__repr__", [](const CriticalPoint& p) {
        std::ostringstream os;
        os << p.value << " [" << p.provenance_str() << "]";
        return os.str();
      });

  py::class_<CriticalSet>(m, "CriticalSet")
      .def_readonly("a", &CriticalSet::a)
      .def_readonly("b", &CriticalSet::b)
      .def_readonly("points", &CriticalSet::points)
      .def("values", [](const CriticalSet& cs) {
        std::vector<double> v;
        for (const auto& p : cs.points) v.push_back(p.value);
        return v;
      });

  m.def("breakpoints_continuous", &breakpoints_continuous, py::arg("proc"),
        py::arg("a"), py::arg("b"));
  m.def("breakpoints_hypergeom", &breakpoints_hypergeom, py::arg("proc"),
        py::arg("a"), py::arg("b"), py::arg("population"));

  py::enum_<EvalKind>(m, "EvalKind")
      .value("C", EvalKind::C)
      .value("C_U", EvalKind::CU)
      .value("C_L", EvalKind::CL);

  py::class_<PointEvaluation>(m, "PointEvaluation")
      .def_readonly("point", &PointEvaluation::point)
      .def_readonly("c", &PointEvaluation::c)
      .def_readonly("c_u", &PointEvaluation::c_u)
      .def_readonly("c_l", &PointEvaluation::c_l);

  py::class_<Witness>(m, "Witness")
      .def_readonly("theta", &Witness::theta)
      .def_readonly("kind", &Witness::kind)
      .def_readonly("value", &Witness::value);

  py::class_<CoverageReport>(m, "CoverageReport")
      .def_readonly("bounds_mode", &CoverageReport::bounds_mode)
      .def_readonly("infimum", &CoverageReport::infimum)
      .def_readonly("attained", &CoverageReport::attained)
      .def_readonly("witnesses", &CoverageReport::witnesses)
      .def_readonly("evaluations", &CoverageReport::evaluations)
      .def_readonly("warnings", &CoverageReport::warnings);

  m.def("coverage_at", &coverage_at, py::arg("spec"), py::arg("proc"),
        py::arg("theta"), py::arg("mode"));
  m.def("min_open_coverage", &min_open_coverage, py::arg("spec"),
        py::arg("proc"), py::arg("a"), py::arg("b"));
  m.def("inf_closed_coverage", &inf_closed_coverage, py::arg("spec"),
        py::arg("proc"), py::arg("a"), py::arg("b"));
  m.def("min_hypergeom_coverage", &min_hypergeom_coverage, py::arg("spec"),
        py::arg("proc"), py::arg("a"), py::arg("b"),
        py::arg("mode") = BoundsMode::OpenOpen);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("theta", &CurvePoint::theta)
      .def_readonly("coverage", &CurvePoint::coverage)
      .def_readonly("breakpoint", &CurvePoint::breakpoint);

  m.def("coverage_curve", &coverage_curve, py::arg("spec"), py::arg("proc"),
        py::arg("a"), py::arg("b"), py::arg("mode"), py::arg("n_points"));

  // brute-force oracle surface
  auto oracle_mod = m.def_submodule("oracle", "independent brute-force checks");
  py::class_<oracle::GridMin>(oracle_mod, "GridMin")
      .def_readonly("theta", &oracle::GridMin::theta)
      .def_readonly("value", &oracle::GridMin::value);
  py::class_<oracle::HypergeomScan>(oracle_mod, "HypergeomScan")
      .def_readonly("m_star", &oracle::HypergeomScan::m_star)
      .def_readonly("value", &oracle::HypergeomScan::value)
      .def_readonly("exact_path", &oracle::HypergeomScan::exact_path);
  py::class_<oracle::OracleVerdict>(oracle_mod, "OracleVerdict")
      .def_readonly("passed", &oracle::OracleVerdict::passed)
      .def_readonly("worst_discrepancy",
                    &oracle::OracleVerdict::worst_discrepancy)
      .def_readonly("total_failures", &oracle::OracleVerdict::total_failures)
      .def("failing_cases", [](const oracle::OracleVerdict& v) {
        std::vector<py::tuple> out;
        for (const auto& f : v.failing_cases)
          out.push_back(py::make_tuple(f.input, f.expected, f.got));
        return out;
      });
  oracle_mod.def("coverage_direct", &oracle::coverage_direct, py::arg("spec"),
                 py::arg("proc"), py::arg("theta"), py::arg("mode"));
  oracle_mod.def("grid_min", &oracle::grid_min, py::arg("spec"),
                 py::arg("proc"), py::arg("a"), py::arg("b"), py::arg("mode"),
                 py::arg("n_grid"));
  oracle_mod.def("exhaustive_min_hypergeom", &oracle::exhaustive_min_hypergeom,
                 py::arg("spec"), py::arg("proc"), py::arg("a"), py::arg("b"));
  oracle_mod.def("check_unimodal_between", &oracle::check_unimodal_between,
                 py::arg("values"), py::arg("tol"));
  oracle_mod.def(
      "check_hypergeom_identities",
      [](long long population, long long draws, bool inject_fault) {
        return oracle::check_hypergeom_identities(
            population, draws,
            inject_fault ? oracle::TWeightFault::SecondArgOffByOne
                         : oracle::TWeightFault::None);
      },
      py::arg("population"), py::arg("draws"),
      py::arg("inject_fault") = false);

#ifdef COVINT_VERSION
  m.attr("__version__") = COVINT_VERSION;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
