#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <span>

#include "cqstat/errors.hpp"
#include "cqstat/export.hpp"
#include "cqstat/photon_statistics.hpp"
#include "cqstat/qnbd.hpp"
#include "cqstat/steady_state.hpp"
#include "cqstat/sweep.hpp"

namespace py = pybind11;
using namespace cqstat;

namespace {

SystemParams make_params(py::kwargs kwargs) {
  SystemParams p;
  for (auto item : kwargs) p.set(py::cast<std::string>(item.first), py::cast<double>(item.second));
  return p;
}

std::string params_repr(const SystemParams& p) {
  std::ostringstream s;
  s << "SystemParams(";
  bool first = true;
  for (auto name : SystemParams::field_names()) {
    s << (first ? "" : ", ") << name << "=" << p.get(name);
    first = false;
  }
  s << ")";
  return s.str();
}

}  // namespace

PYBIND11_MODULE(_cqstat, m) {
  m.doc() = "Steady-state photon statistics of two driven atoms in a lossy cavity";

  py::register_exception<UndefinedStatisticsError>(m, "UndefinedStatisticsError", PyExc_ValueError);
  py::register_exception<PoissonLimitError>(m, "PoissonLimitError", PyExc_ValueError);
  py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);
  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
  py::register_exception<InvalidDistributionError>(m, "InvalidDistributionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init(&make_params), "Keyword arguments name SystemParams fields, e.g. SystemParams(g=0.7, eta=0.7)")
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("kappa", &SystemParams::kappa)
      .def_readwrite("gamma", &SystemParams::gamma)
      .def_readwrite("eta", &SystemParams::eta)
      .def_readwrite("delta", &SystemParams::delta)
      .def_readwrite("delta_a", &SystemParams::delta_a)
      .def_readwrite("phi_z", &SystemParams::phi_z)
      .def_readwrite("n_max", &SystemParams::n_max)
      .def_readwrite("n_atoms", &SystemParams::n_atoms)
      .def("validated", &SystemParams::validated)
      .def_property_readonly("dim", &SystemParams::dim)
      .def("__repr__", &params_repr);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<Matrix, int, int>(), py::arg("matrix"), py::arg("n_atoms"), py::arg("n_max"))
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def_property_readonly("n_atoms", &DensityMatrix::n_atoms)
      .def_property_readonly("n_max", &DensityMatrix::n_max)
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def("trace", &DensityMatrix::trace);

  py::class_<SteadyStateResult>(m, "SteadyStateResult")
      .def_readonly("rho", &SteadyStateResult::rho)
      .def_readonly("residual", &SteadyStateResult::residual)
      .def_readonly("n_max_used", &SteadyStateResult::n_max_used)
      .def_readonly("converged", &SteadyStateResult::converged)
      .def_readonly("solve_time", &SteadyStateResult::solve_time)
      .def_readonly("min_eigenvalue", &SteadyStateResult::min_eigenvalue)
      .def_readonly("warnings", &SteadyStateResult::warnings)
      .def_readonly("diagnostics", &SteadyStateResult::diagnostics);

  m.def("solve_steady_state", py::overload_cast<const SystemParams&>(&solve_steady_state), py::arg("params"),
        py::call_guard<py::gil_scoped_release>(), "Steady state at the fixed cutoff params.n_max");
  m.def("solve_converged", py::overload_cast<const SystemParams&, double>(&solve_converged),
        py::arg("params"), py::arg("rel_tol") = 1e-6, py::call_guard<py::gil_scoped_release>(),
        "Steady state with the Fock cutoff escalated until the statistics converge");
  m.def(
      "time_evolve",
      [](const SystemParams& p, const DensityMatrix& rho0, double t_final, std::optional<double> dt) {
        py::gil_scoped_release release;
        return time_evolve(build_liouvillian(p), rho0, t_final, dt.value_or(default_time_step(p)));
      },
      py::arg("params"), py::arg("rho0"), py::arg("t_final"), py::arg("dt") = py::none(),
      "RK4 evolution of rho0 under the master equation of params");
  m.def("ground_state", &DensityMatrix::ground, py::arg("n_atoms"), py::arg("n_max"));
  m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));

  py::enum_<StatisticsClass>(m, "StatisticsClass")
      .value("antibunched", StatisticsClass::antibunched)
      .value("coherent", StatisticsClass::coherent)
      .value("bunched", StatisticsClass::bunched)
      .value("thermal", StatisticsClass::thermal)
      .value("superbunched", StatisticsClass::superbunched);

  py::class_<PhotonStatistics>(m, "PhotonStatistics")
      .def_readonly("mean_n", &PhotonStatistics::mean_n)
      .def_readonly("second_factorial_moment", &PhotonStatistics::second_factorial_moment)
      .def_readonly("g2", &PhotonStatistics::g2)
      .def_readonly("q", &PhotonStatistics::q)
      .def_readonly("classification", &PhotonStatistics::classification)
      .def_readonly("pmf", &PhotonStatistics::pmf)
      .def_readonly("klyshko", &PhotonStatistics::klyshko)
      .def_readonly("dicke_populations", &PhotonStatistics::dicke_populations);

  m.def("compute_statistics", &compute_statistics, py::arg("rho"), py::arg("class_tol") = kClassificationTol);
  m.def("g2", &g2);
  m.def("mandel_q", &mandel_q);
  m.def("photon_distribution", &photon_distribution);
  m.def("classify_statistics", &classify_statistics, py::arg("g2"), py::arg("tol") = kClassificationTol);
  m.def(
      "klyshko", [](const std::vector<double>& pmf, double floor) { return klyshko(std::span<const double>(pmf), floor); },
      py::arg("pmf"), py::arg("floor") = kKlyshkoFloor);

  py::enum_<QnbdRegime>(m, "QnbdRegime")
      .value("classical", QnbdRegime::classical)
      .value("nonclassical", QnbdRegime::nonclassical)
      .value("boundary", QnbdRegime::boundary);

  py::class_<QnbdParams>(m, "QnbdParams")
      .def_readonly("s", &QnbdParams::s)
      .def_readonly("p", &QnbdParams::p)
      .def_readonly("normalization", &QnbdParams::normalization)
      .def_readonly("n_cut", &QnbdParams::n_cut)
      .def_readonly("regime", &QnbdParams::regime)
      .def("__repr__", [](const QnbdParams& q) {
        return "QnbdParams(s=" + std::to_string(q.s) + ", p=" + std::to_string(q.p) + ")";
      });

  m.def("make_qnbd_params", &make_qnbd_params, py::arg("s"), py::arg("p"));
  m.def("nbd_pmf_raw", &nbd_pmf_raw, py::arg("s"), py::arg("p"), py::arg("n"));
  m.def(
      "qnbd_pmf", [](double s, double p, int n_max) { return qnbd_pmf(make_qnbd_params(s, p), n_max).probs(); },
      py::arg("s"), py::arg("p"), py::arg("n_max"));
  m.def(
      "thermal_pmf", [](double nbar, int n_max) { return thermal_pmf(nbar, n_max).probs(); }, py::arg("nbar"),
      py::arg("n_max"));
  m.def(
      "poisson_pmf", [](double nbar, int n_max) { return poisson_pmf(nbar, n_max).probs(); }, py::arg("nbar"),
      py::arg("n_max"));
  m.def("params_from_moments", &params_from_moments, py::arg("mean"), py::arg("second_factorial_moment"));
  m.def("params_from_witnesses", &params_from_witnesses, py::arg("g2"), py::arg("q"));
  m.def(
      "critical_probability",
      [](double s, double p) {
        const auto c = critical_probability(s, p);
        return py::make_tuple(c.n_cr, c.p_cr);
      },
      py::arg("s"), py::arg("p"), "(n_cr, p_cr) for nonclassical parameters");
  m.def("klyshko_qnbd", &klyshko_qnbd, py::arg("s"), py::arg("n"));
  m.def(
      "fidelity",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return fidelity(std::span<const double>(a), std::span<const double>(b));
      }, py::arg("a"),
      py::arg("b"));

  py::class_<ValidityReport>(m, "ValidityReport")
      .def_readonly("s", &ValidityReport::s)
      .def_readonly("p", &ValidityReport::p)
      .def_readonly("n_cr", &ValidityReport::n_cr)
      .def_readonly("p_cr", &ValidityReport::p_cr)
      .def_readonly("p_cr_ok", &ValidityReport::p_cr_ok)
      .def_readonly("decreasing_ok", &ValidityReport::decreasing_ok)
      .def_readonly("mean_n", &ValidityReport::mean_n)
      .def_property_readonly("valid", &ValidityReport::valid);
  m.def("validity_check", &validity_check, py::arg("g2"), py::arg("q"),
        py::arg("p_cr_threshold") = kDefaultPcrThreshold);

  py::class_<PointRecord>(m, "PointRecord")
      .def_readonly("axis_values", &PointRecord::axis_values)
      .def_readonly("params", &PointRecord::params)
      .def_readonly("stats", &PointRecord::stats)
      .def_readonly("qnbd", &PointRecord::qnbd)
      .def_readonly("fidelity_qnbd", &PointRecord::fidelity_qnbd)
      .def_readonly("n_max_used", &PointRecord::n_max_used)
      .def_readonly("residual", &PointRecord::residual)
      .def_readonly("converged", &PointRecord::converged)
      .def_readonly("error_class", &PointRecord::error_class)
      .def_readonly("error_message", &PointRecord::error_message)
      .def_property_readonly("failed", &PointRecord::failed);

  m.def("evaluate_point", &evaluate_point, py::arg("params"), py::arg("rel_tol") = 1e-6,
        py::arg("qnbd_fit") = true, py::arg("class_tol") = kClassificationTol,
        py::call_guard<py::gil_scoped_release>());

  py::class_<GridResult>(m, "GridResult")
      .def_readonly("kind", &GridResult::kind)
      .def_readonly("axis_names", &GridResult::axis_names)
      .def_readonly("axis_values", &GridResult::axis_values)
      .def_readonly("points", &GridResult::points)
      .def_property_readonly("failures", &GridResult::failures)
      .def("to_csv", &grid_to_csv)
      .def("to_json", &grid_to_json)
      .def("to_svg", &grid_to_svg);

  m.def(
      "run_grid",
      [](const std::string& config_text) {
        const SweepConfig c = parse_config(config_text);
        py::gil_scoped_release release;
        return run_grid(c);
      },
      py::arg("config_text"), "Runs the grid described by config-file text");
  m.def(
      "run_phase_profile",
      [](const SystemParams& base, int phi_steps, bool qnbd_fit, int workers) {
        SweepConfig opt;
        opt.qnbd_fit = qnbd_fit;
        opt.workers = workers;
        py::gil_scoped_release release;
        return run_phase_profile(base, phi_steps, opt);
      },
      py::arg("base"), py::arg("phi_steps") = 41, py::arg("qnbd_fit") = true, py::arg("workers") = 1);

  py::class_<DistributionReport>(m, "DistributionReport")
      .def_readonly("params", &DistributionReport::params)
      .def_readonly("stats", &DistributionReport::stats)
      .def_readonly("qnbd", &DistributionReport::qnbd)
      .def_property_readonly("system", [](const DistributionReport& r) { return r.system.probs(); })
      .def_property_readonly("coherent", [](const DistributionReport& r) { return r.coherent.probs(); })
      .def_property_readonly("thermal", [](const DistributionReport& r) { return r.thermal.probs(); })
      .def_property_readonly("qnbd_fit", [](const DistributionReport& r) { return r.qnbd_fit.probs(); })
      .def_readonly("deviation_qnbd", &DistributionReport::deviation_qnbd)
      .def_readonly("fidelity_coherent", &DistributionReport::fidelity_coherent)
      .def_readonly("fidelity_thermal", &DistributionReport::fidelity_thermal)
      .def_readonly("fidelity_qnbd", &DistributionReport::fidelity_qnbd)
      .def_property_readonly("max_deviation_qnbd", &DistributionReport::max_deviation_qnbd)
      .def("to_csv", &distribution_to_csv)
      .def("to_json", &distribution_to_json);

  m.def("run_distribution_report", &run_distribution_report, py::arg("params"), py::arg("rel_tol") = 1e-6,
        py::call_guard<py::gil_scoped_release>());
}
