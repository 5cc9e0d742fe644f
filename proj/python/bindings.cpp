#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctxprob/amplitudes.hpp"
#include "ctxprob/contextual.hpp"
#include "ctxprob/errors.hpp"
#include "ctxprob/interference.hpp"
#include "ctxprob/io.hpp"
#include "ctxprob/twoslit.hpp"
#include "ctxprob/version.hpp"

namespace py = pybind11;
using namespace ctxprob;

namespace {

ContextualDistribution make_dist(std::string id, std::vector<double> probs) {
  return ContextualDistribution{std::move(id), std::move(probs)};
}

void bind_errors(py::module_& m) {
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ZeroEnsemble>(m, "ZeroEnsemble", base.ptr());
  py::register_exception<DegenerateBranch>(m, "DegenerateBranch", base.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
  py::register_exception<io::ParseError>(m, "ParseError", base.ptr());
  // OutOfRange carries the offending value.
  static py::exception<OutOfRange> out_of_range(m, "OutOfRange", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const OutOfRange& e) {
      py::object type = py::reinterpret_borrow<py::object>(out_of_range.ptr());
      py::object exc = type(py::str(e.what()));
      exc.attr("value") = e.value();
      PyErr_SetObject(out_of_range.ptr(), exc.ptr());
    }
  });
}

void bind_core(py::module_& m) {
  py::class_<SplittingCoefficients>(m, "SplittingCoefficients")
      .def(py::init<double, double>(), py::arg("c1") = 0.5, py::arg("c2") = 0.5)
      .def_readwrite("c1", &SplittingCoefficients::c1)
      .def_readwrite("c2", &SplittingCoefficients::c2)
      .def("__repr__", [](const SplittingCoefficients& c) {
        return "SplittingCoefficients(" + std::to_string(c.c1) + ", " + std::to_string(c.c2) + ")";
      });

  py::class_<EnsembleCounts>(m, "EnsembleCounts")
      .def(py::init([](std::string id, std::vector<std::uint64_t> counts, std::optional<std::uint64_t> emitted) {
             EnsembleCounts c{std::move(id), std::move(counts), 0};
             c.total_emitted = emitted.value_or(c.detected());
             return c;
           }),
           py::arg("context_id"), py::arg("counts"), py::arg("total_emitted") = py::none())
      .def_readonly("context_id", &EnsembleCounts::context_id)
      .def_readonly("counts", &EnsembleCounts::counts)
      .def_readonly("total_emitted", &EnsembleCounts::total_emitted)
      .def_property_readonly("detected", &EnsembleCounts::detected);

  py::class_<Violation>(m, "Violation")
      .def_readonly("invariant", &Violation::invariant)
      .def_readonly("context", &Violation::context)
      .def_readonly("value", &Violation::value)
      .def_readonly("bin", &Violation::bin)
      .def("__str__", &Violation::describe);

  py::class_<ContextualModel>(m, "ContextualModel")
      .def(py::init([](std::vector<std::string> labels, std::vector<double> p_S, std::vector<double> p_1,
                       std::vector<double> p_2, SplittingCoefficients coeffs) {
             return ContextualModel{OutcomeSpace{std::move(labels)}, make_dist("S", std::move(p_S)),
                                    make_dist("S1", std::move(p_1)), make_dist("S2", std::move(p_2)), coeffs};
           }),
           py::arg("labels"), py::arg("p_S"), py::arg("p_1"), py::arg("p_2"), py::arg("coeffs"))
      .def_property_readonly("labels", [](const ContextualModel& m) { return m.space.labels; })
      .def_readonly("coeffs", &ContextualModel::coeffs);

  m.def("validate_model", &validate_model, py::arg("model"));
  m.def(
      "estimate_splitting",
      [](const EnsembleCounts& s1, const EnsembleCounts& s2, const EnsembleCounts& s) {
        const auto est = estimate_splitting(s1, s2, s);
        return py::make_tuple(est.coeffs, est.deviation);
      },
      py::arg("counts_S1"), py::arg("counts_S2"), py::arg("counts_S"));
  m.def(
      "empirical_distribution", [](const EnsembleCounts& c) { return empirical_distribution(c).probs; },
      py::arg("counts"));
}

void bind_interference(py::module_& m) {
  py::class_<Trigonometric>(m, "Trigonometric")
      .def_readonly("theta", &Trigonometric::theta)
      .def("__repr__", [](const Trigonometric& t) { return "Trigonometric(theta=" + std::to_string(t.theta) + ")"; });
  py::class_<Hyperbolic>(m, "Hyperbolic")
      .def_readonly("theta", &Hyperbolic::theta)
      .def_readonly("sign", &Hyperbolic::sign)
      .def("__repr__", [](const Hyperbolic& h) {
        return "Hyperbolic(theta=" + std::to_string(h.theta) + ", sign=" + std::to_string(h.sign) + ")";
      });
  py::class_<Boundary>(m, "Boundary").def("__repr__", [](const Boundary&) { return std::string("Boundary()"); });

  py::class_<BinDecomposition>(m, "BinDecomposition")
      .def_readonly("classical_part", &BinDecomposition::classical_part)
      .def_readonly("delta", &BinDecomposition::delta)
      .def_readonly("lambda_", &BinDecomposition::lambda)
      .def_readonly("kind", &BinDecomposition::kind)
      .def_property_readonly("degenerate", &BinDecomposition::degenerate);
  py::class_<InterferenceDecomposition>(m, "InterferenceDecomposition")
      .def_readonly("coeffs", &InterferenceDecomposition::coeffs)
      .def_readonly("tol", &InterferenceDecomposition::tol)
      .def_readonly("bins", &InterferenceDecomposition::bins);

  m.def("total_probability", &total_probability, py::arg("coeffs"), py::arg("p1"), py::arg("p2"));
  m.def("perturbation_delta", &perturbation_delta, py::arg("coeffs"), py::arg("pS"), py::arg("p1"), py::arg("p2"));
  m.def("lambda_coefficient", &lambda_coefficient, py::arg("coeffs"), py::arg("pS"), py::arg("p1"), py::arg("p2"));
  m.def("classify", &classify, py::arg("lambda_"), py::arg("tol") = kDefaultClassifyTol);
  m.def("decompose", &decompose, py::arg("model"), py::arg("tol") = kDefaultClassifyTol);
  m.def("forward_trig", &forward_trig, py::arg("coeffs"), py::arg("p1"), py::arg("p2"), py::arg("theta"));
  m.def("forward_hyp", &forward_hyp, py::arg("coeffs"), py::arg("p1"), py::arg("p2"), py::arg("theta"),
        py::arg("sign"));
}

void bind_amplitudes(py::module_& m) {
  py::class_<SplitComplex>(m, "SplitComplex")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_static("exp_j", &SplitComplex::exp_j, py::arg("theta"))
      .def_property_readonly("x", &SplitComplex::x)
      .def_property_readonly("y", &SplitComplex::y)
      .def("conj", &SplitComplex::conj)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const SplitComplex& z) {
        return "SplitComplex(" + std::to_string(z.x()) + ", " + std::to_string(z.y()) + ")";
      });
  m.def("split_modulus", &split_modulus, py::arg("z"));
  m.def(
      "cos_identity",
      [](double a, double b, double theta) {
        const auto r = cos_identity(a, b, theta);
        return py::make_tuple(r.lhs, r.rhs);
      },
      py::arg("a"), py::arg("b"), py::arg("theta"));
  m.def(
      "synthesize_wave",
      [](const SplittingCoefficients& c, double p1, double p2, double theta, double theta2) {
        return synthesize_wave(c, p1, p2, theta, PhaseConvention{theta2});
      },
      py::arg("coeffs"), py::arg("p1"), py::arg("p2"), py::arg("theta"), py::arg("theta2") = 0.0);
  m.def("synthesize_hyperbolic", &synthesize_hyperbolic, py::arg("coeffs"), py::arg("p1"), py::arg("p2"),
        py::arg("theta"), py::arg("sign"));

  py::class_<ProbabilityWave>(m, "ProbabilityWave")
      .def_property_readonly("labels", [](const ProbabilityWave& w) { return w.space.labels; })
      .def_readonly("amp", &ProbabilityWave::amp)
      .def_readonly("theta1", &ProbabilityWave::theta1)
      .def_readonly("theta2", &ProbabilityWave::theta2)
      .def_readonly("xi1", &ProbabilityWave::xi1)
      .def_readonly("xi2", &ProbabilityWave::xi2)
      .def_readonly("h", &ProbabilityWave::h)
      .def("born", &ProbabilityWave::born);
  m.def(
      "synthesize_two_slit_wave",
      [](std::vector<std::string> labels, const std::vector<double>& p1, const std::vector<double>& p2,
         const std::vector<double>& theta, double h) {
        return synthesize_two_slit_wave(OutcomeSpace{std::move(labels)}, p1, p2, theta, h);
      },
      py::arg("labels"), py::arg("p1"), py::arg("p2"), py::arg("theta"), py::arg("h") = 1.0);
}

void bind_twoslit(py::module_& m) {
  py::enum_<Context>(m, "Context").value("S", Context::S).value("S1", Context::S1).value("S2", Context::S2);

  py::class_<io::ScenarioDocument>(m, "Scenario")
      .def_static("from_json", &io::parse_scenario_text, py::arg("text"))
      .def_static(
          "load", [](const std::string& path) { return io::load_scenario(path); }, py::arg("path"))
      .def_property_readonly("bins", [](const io::ScenarioDocument& d) { return d.scenario.grid.bins; })
      .def_property_readonly("midpoints",
                             [](const io::ScenarioDocument& d) {
                               std::vector<double> x;
                               for (std::size_t i = 0; i < d.scenario.grid.bins; ++i)
                                 x.push_back(d.scenario.grid.midpoint(i));
                               return x;
                             })
      .def_property_readonly("envelope1", [](const io::ScenarioDocument& d) { return d.scenario.envelope1; })
      .def_property_readonly("envelope2", [](const io::ScenarioDocument& d) { return d.scenario.envelope2; })
      .def_property_readonly("theta", [](const io::ScenarioDocument& d) { return d.scenario.theta_table(); })
      .def_property("seed", [](const io::ScenarioDocument& d) { return d.scenario.seed; },
                    [](io::ScenarioDocument& d, std::uint64_t s) { io::override_seed(d, s); });

  m.def(
      "analytic_pattern",
      [](const io::ScenarioDocument& d) {
        const auto p = analytic_pattern(d.scenario);
        return py::make_tuple(p.dist.probs, p.normalization);
      },
      py::arg("scenario"));
  m.def(
      "simulate_context",
      [](const io::ScenarioDocument& d, Context which, std::uint32_t run, double acceptance) {
        return simulate_context(d.scenario, which, run, SimulationOptions{acceptance, 1});
      },
      py::arg("scenario"), py::arg("which"), py::arg("run") = 0, py::arg("acceptance") = 0.5);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_property_readonly("violation_statistic",
                             [](const ExperimentReport& r) { return r.analysis.violation_statistic; })
      .def_property_readonly("c_hat",
                             [](const ExperimentReport& r) {
                               return py::make_tuple(r.analysis.splitting.coeffs.c1, r.analysis.splitting.coeffs.c2);
                             })
      .def_property_readonly("deviation", [](const ExperimentReport& r) { return r.analysis.splitting.deviation; })
      .def_property_readonly("pattern_normalization",
                             [](const ExperimentReport& r) { return r.pattern_normalization; })
      .def_property_readonly("counts", [](const ExperimentReport& r) {
        return py::make_tuple(r.analysis.counts_S, r.analysis.counts_S1, r.analysis.counts_S2);
      })
      .def_property_readonly("theta_hat", [](const ExperimentReport& r) {
        std::vector<std::optional<double>> out;
        for (const auto& b : r.analysis.bins) out.push_back(b.theta);
        return out;
      });

  m.def(
      "run_experiment",
      [](const io::ScenarioDocument& d, double tol, unsigned threads) {
        py::gil_scoped_release release;
        return run_experiment(d.scenario, tol, SimulationOptions{0.5, threads});
      },
      py::arg("scenario"), py::arg("tol") = kDefaultClassifyTol, py::arg("threads") = 1);
  m.def(
      "report_json",
      [](const ExperimentReport& r, const io::ScenarioDocument& d, double n_sigma) {
        return io::dump_json(io::report_to_json(r, d.source, n_sigma));
      },
      py::arg("report"), py::arg("scenario"), py::arg("n_sigma") = 5.0);
  m.def(
      "alternative_condition_check",
      [](const ExperimentReport& r, double n_sigma) {
        const auto c = alternative_condition_check(r, n_sigma);
        return py::make_tuple(c.pass, c.deviation);
      },
      py::arg("report"), py::arg("n_sigma") = 5.0);
  m.def(
      "compare_phases",
      [](const ExperimentReport& r, const std::vector<double>& theta, std::uint64_t min_counts, double n_sigma) {
        const auto c = compare_phases(r.analysis, theta, min_counts, n_sigma);
        return py::make_tuple(c.checked, c.failing_bins);
      },
      py::arg("report"), py::arg("theta"), py::arg("min_counts") = 100, py::arg("n_sigma") = 3.0);
}

}  // namespace

PYBIND11_MODULE(_ctxprob, m) {
  m.doc() = "Contextual probability calculus and two-slit Monte Carlo experiments";
  m.attr("__version__") = kVersion;
  bind_errors(m);
  bind_core(m);
  bind_interference(m);
  bind_amplitudes(m);
  bind_twoslit(m);
}
