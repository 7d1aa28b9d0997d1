#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqmeas/eprbohm.hpp"
#include "seqmeas/error.hpp"
#include "seqmeas/eventsim.hpp"
#include "seqmeas/hilbert.hpp"
#include "seqmeas/io.hpp"
#include "seqmeas/kolmogorov.hpp"
#include "seqmeas/sequential.hpp"

namespace py = pybind11;
using namespace seqmeas;
using hilbert::Complex;
using hilbert::ComplexMatrix;
using hilbert::SpectralDecomposition;
using hilbert::StateVector;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return ComplexMatrix(rows, cols, std::vector<Complex>(a.data(), a.data() + rows * cols));
}

CArray from_matrix(const ComplexMatrix& m) {
  CArray out({m.rows(), m.cols()});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

StateVector to_state(const CArray& a, bool normalize) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-D array");
  std::vector<Complex> amps(a.data(), a.data() + a.shape(0));
  return normalize ? StateVector::normalized(std::move(amps)) : StateVector(std::move(amps));
}

CArray from_state(const StateVector& s) {
  CArray out(static_cast<py::ssize_t>(s.dim()));
  std::copy(s.amplitudes().begin(), s.amplitudes().end(), out.mutable_data());
  return out;
}

// Observables arrive either as a decomposition or as a Hermitian array.
SpectralDecomposition to_observable(const py::object& obj) {
  if (py::isinstance<SpectralDecomposition>(obj)) return obj.cast<SpectralDecomposition>();
  return hilbert::spectral_decompose(to_matrix(obj.cast<CArray>()));
}

// Python dicts cross into the io layer as JSON text.
io::json to_json(const py::object& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return io::json::parse(text);
}

py::object from_json(const io::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict table_dict(const sequential::SequentialJointTable& t) {
  py::array_t<double> q({t.first_outcomes.size(), t.second_outcomes.size()});
  auto view = q.mutable_unchecked<2>();
  for (std::size_t i = 0; i < t.first_outcomes.size(); ++i) {
    for (std::size_t j = 0; j < t.second_outcomes.size(); ++j) view(i, j) = t.q[i][j];
  }
  py::dict d;
  d["first_outcomes"] = t.first_outcomes;
  d["second_outcomes"] = t.second_outcomes;
  d["q"] = q;
  d["order"] = py::make_tuple(t.order_label.first, t.order_label.second);
  return d;
}

CorrelationSet to_correlations(const std::map<std::pair<std::string, std::string>, double>& values) {
  CorrelationSet c;
  for (const auto& [key, v] : values) c.set(key.first, key.second, v);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sequential quantum measurement, EPR-Bohm correlations and joint-measure feasibility";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NotHermitianError>(m, "NotHermitianError", PyExc_ValueError);
  py::register_exception<ZeroProbabilityError>(m, "ZeroProbabilityError", PyExc_ValueError);
  py::register_exception<LegMismatchError>(m, "LegMismatchError", PyExc_ValueError);
  py::register_exception<MalformedProblemError>(m, "MalformedProblemError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  // ---- linear algebra -----------------------------------------------------

  py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
      .def_property_readonly("eigenvalues", [](const SpectralDecomposition& sd) { return sd.eigenvalues; })
      .def_property_readonly("projectors",
                             [](const SpectralDecomposition& sd) {
                               py::list out;
                               for (const auto& p : sd.projectors) out.append(from_matrix(p));
                               return out;
                             })
      .def_property_readonly("dim", &SpectralDecomposition::dim)
      .def("rank", &SpectralDecomposition::rank)
      .def("__len__", &SpectralDecomposition::size);

  m.def("spectral_decompose", [](const CArray& h, double tol) { return hilbert::spectral_decompose(to_matrix(h), tol); },
        py::arg("matrix"), py::arg("tol") = hilbert::kDefaultDegeneracyTol);
  m.def("reconstruct", [](const SpectralDecomposition& sd) { return from_matrix(hilbert::reconstruct(sd)); });
  m.def("tensor_product",
        [](const CArray& a, const CArray& b) { return from_matrix(hilbert::tensor_product(to_matrix(a), to_matrix(b))); });
  m.def("commutator_norm",
        [](const CArray& a, const CArray& b) { return hilbert::commutator_norm(to_matrix(a), to_matrix(b)); });
  m.def("pauli_x", [] { return from_matrix(hilbert::pauli_x()); });
  m.def("pauli_y", [] { return from_matrix(hilbert::pauli_y()); });
  m.def("pauli_z", [] { return from_matrix(hilbert::pauli_z()); });

  // ---- sequential measurement ---------------------------------------------

  m.def("born_probability",
        [](const CArray& psi, const py::object& obs, std::size_t index) {
          return sequential::born_probability(to_state(psi, false), to_observable(obs), index);
        },
        py::arg("state"), py::arg("observable"), py::arg("index"));
  m.def("luders_collapse",
        [](const CArray& psi, const py::object& obs, std::size_t index) {
          return from_state(sequential::luders_collapse(to_state(psi, false), to_observable(obs), index));
        },
        py::arg("state"), py::arg("observable"), py::arg("index"));
  m.def("conditional_probability",
        [](const CArray& psi, const py::object& second, std::size_t beta, const py::object& first, std::size_t alpha) {
          return sequential::conditional_probability(to_state(psi, false), to_observable(second), beta,
                                                     to_observable(first), alpha);
        },
        py::arg("state"), py::arg("second"), py::arg("beta_index"), py::arg("first"), py::arg("alpha_index"));
  m.def("sequential_joint",
        [](const CArray& psi, const py::object& first, const py::object& second, std::string a, std::string b) {
          return table_dict(sequential::sequential_joint(to_state(psi, false), to_observable(first),
                                                         to_observable(second), {std::move(a), std::move(b)}));
        },
        py::arg("state"), py::arg("first"), py::arg("second"), py::arg("first_label") = "a",
        py::arg("second_label") = "b");
  m.def("order_symmetry_gap",
        [](const CArray& psi, const py::object& a, const py::object& b) {
          return sequential::order_symmetry_gap(to_state(psi, false), to_observable(a), to_observable(b));
        },
        py::arg("state"), py::arg("a"), py::arg("b"));
  m.def("normalize", [](const CArray& psi) { return from_state(to_state(psi, true)); });

  // ---- EPR-Bohm -----------------------------------------------------------

  py::enum_<epr::Leg>(m, "Leg").value("first", epr::Leg::first).value("second", epr::Leg::second);
  py::enum_<epr::Convention>(m, "Convention")
      .value("spin_half", epr::Convention::spin_half)
      .value("photon", epr::Convention::photon);

  py::class_<epr::AngleSetting>(m, "AngleSetting")
      .def(py::init<double, epr::Leg, epr::Convention>(), py::arg("angle"), py::arg("leg"),
           py::arg("convention") = epr::Convention::spin_half)
      .def_property_readonly("angle", &epr::AngleSetting::angle)
      .def_property_readonly("leg", &epr::AngleSetting::particle)
      .def_property_readonly("convention", &epr::AngleSetting::convention)
      .def("bloch_angle", &epr::AngleSetting::bloch_angle);

  m.def("singlet_state", [] { return from_state(epr::singlet_state()); });
  m.def("leg_observable", &epr::leg_observable);
  m.def("correlation", &epr::correlation, py::arg("a"), py::arg("b"));
  m.def("conditional_decomposition", [](const epr::AngleSetting& a, const epr::AngleSetting& b) {
    return from_json(io::decomposition_to_json(epr::conditional_decomposition(a, b)));
  });
  m.def("chsh", &epr::chsh, py::arg("a"), py::arg("a2"), py::arg("b"), py::arg("b2"));
  m.def("bell_inequality_report",
        [](double a, double b, double c, epr::Convention conv) {
          const auto r = epr::bell_inequality_report(a, b, c, conv);
          py::dict d;
          d["e_ab"] = r.e_ab;
          d["e_bc"] = r.e_bc;
          d["e_ac"] = r.e_ac;
          d["paper_form"] = from_json(io::inequality_to_json(r.paper_form));
          d["textbook_form"] = from_json(io::inequality_to_json(r.textbook_form));
          return d;
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("convention") = epr::Convention::spin_half);

  // ---- event simulation ---------------------------------------------------

  py::class_<eventsim::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n_pairs", &eventsim::SimConfig::n_pairs)
      .def_readwrite("theta_a", &eventsim::SimConfig::theta_a)
      .def_readwrite("theta_b", &eventsim::SimConfig::theta_b)
      .def_readwrite("window_delta", &eventsim::SimConfig::window_delta)
      .def_readwrite("jitter_sigma", &eventsim::SimConfig::jitter_sigma)
      .def_readwrite("detector_efficiency", &eventsim::SimConfig::detector_efficiency)
      .def_readwrite("seed", &eventsim::SimConfig::seed)
      .def_readwrite("convention", &eventsim::SimConfig::convention)
      .def_readwrite("tie_epsilon", &eventsim::SimConfig::tie_epsilon)
      .def_readwrite("emission_period", &eventsim::SimConfig::emission_period)
      .def("validate", &eventsim::SimConfig::validate);

  py::class_<eventsim::EventRecord>(m, "EventRecord")
      .def_readonly("pair_id", &eventsim::EventRecord::pair_id)
      .def_readonly("t1", &eventsim::EventRecord::t1)
      .def_readonly("t2", &eventsim::EventRecord::t2)
      .def_readonly("outcome1", &eventsim::EventRecord::outcome1)
      .def_readonly("outcome2", &eventsim::EventRecord::outcome2)
      .def_property_readonly("branch", [](const eventsim::EventRecord& e) { return eventsim::to_string(e.branch); })
      .def("__eq__", [](const eventsim::EventRecord& a, const eventsim::EventRecord& b) { return a == b; });

  m.def("run_experiment", &eventsim::run_experiment, py::arg("config"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("match_coincidences",
        [](const std::vector<eventsim::EventRecord>& events, const eventsim::SimConfig& config) {
          return from_json(io::stats_to_json(eventsim::match_coincidences(events, config)));
        });
  m.def("empirical_correlation",
        [](const eventsim::SimConfig& config, unsigned workers) {
          eventsim::EmpiricalCorrelation r;
          {
            py::gil_scoped_release release;
            r = eventsim::empirical_correlation(config, workers);
          }
          return from_json(io::stats_to_json(r.stats));
        },
        py::arg("config"), py::arg("workers") = 1);

  // ---- feasibility --------------------------------------------------------

  m.def("solve_feasibility",
        [](const py::object& problem, double tol) {
          const auto p = io::problem_from_json(to_json(problem));
          return from_json(io::result_to_json(kolmogorov::solve_feasibility(p, tol), p));
        },
        py::arg("problem"), py::arg("tol") = kolmogorov::kDefaultTol,
        "Decide whether one probability measure over all ±1 assignments reproduces the given tables.");
  m.def("evaluate_chsh_facets",
        [](const std::map<std::pair<std::string, std::string>, double>& correlations) {
          return from_json(io::chsh_report_to_json(kolmogorov::evaluate_chsh_facets(to_correlations(correlations))));
        },
        py::arg("correlations"));
}
