// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the main operations: channel construction and
// conversion, degradability measurement, diamond distance, coherent
// information, and capacity bound assembly. Matrices cross the boundary as
// complex numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdeg/capacity.hpp"
#include "qdeg/channel_json.hpp"
#include "qdeg/degradability.hpp"
#include "qdeg/zoo.hpp"

namespace py = pybind11;
using namespace qdeg;

namespace {

SdpOptions solver_options(double tol) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  SdpOptions opt;
  opt.gap_tol = tol;
  opt.feas_tol = tol;
  return opt;
}

py::dict report_terms(const BoundTerms& t) {
  py::dict d;
  d["epsilon"] = t.epsilon;
  d["dim_e"] = t.dim_e;
  d["dim_f"] = t.dim_f;
  d["fa"] = t.fa;
  d["af"] = t.af;
  d["af_f"] = t.af_f;
  d["xi"] = t.xi;
  d["xi1"] = t.xi1;
  d["xi2"] = t.xi2;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qdeg, m) {
  m.doc() = "Approximate degradability of quantum channels and the capacity "
            "bounds it implies";

  // Validation failures map to ValueError, file problems to OSError, and
  // solver breakdowns to RuntimeError.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const NumericalFailure& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const InfeasibleProblem& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<QuantumChannel>(m, "Channel")
      .def_readonly("dim_in", &QuantumChannel::dim_in)
      .def_readonly("dim_out", &QuantumChannel::dim_out)
      .def_property_readonly("dim_env", &QuantumChannel::dim_env)
      .def_property_readonly(
          "kraus", [](const QuantumChannel& c) { return c.kraus; })
      .def("__repr__", [](const QuantumChannel& c) {
        return "Channel(dim_in=" + std::to_string(c.dim_in) +
               ", dim_out=" + std::to_string(c.dim_out) +
               ", kraus=" + std::to_string(c.kraus.size()) + ")";
      });

  py::class_<DegradabilityReport>(m, "DegradabilityReport")
      .def_readonly("epsilon", &DegradabilityReport::epsilon)
      .def_readonly("verified_epsilon", &DegradabilityReport::verified_epsilon)
      .def_readonly("dim_a", &DegradabilityReport::dim_a)
      .def_readonly("dim_b", &DegradabilityReport::dim_b)
      .def_readonly("dim_e", &DegradabilityReport::dim_e)
      .def_readonly("dim_f", &DegradabilityReport::dim_f)
      .def_readonly("iterations", &DegradabilityReport::iterations)
      .def_readonly("relative_gap", &DegradabilityReport::relative_gap)
      .def_readonly("degrading", &DegradabilityReport::degrading)
      .def_property_readonly(
          "degrading_choi",
          [](const DegradabilityReport& r) { return r.degrading_choi.entries; })
      .def_property_readonly(
          "status",
          [](const DegradabilityReport& r) {
            return std::string(sdp_status_name(r.status));
          })
      .def("__repr__", [](const DegradabilityReport& r) {
        return "DegradabilityReport(epsilon=" + std::to_string(r.epsilon) +
               ", status=" + sdp_status_name(r.status) + ")";
      });

  // Construction.
  m.def("channel_from_kraus", &channel_from_kraus, py::arg("kraus"),
        py::arg("dim_in"), py::arg("dim_out"),
        "Validated channel from a list of dim_out x dim_in matrices");
  m.def("identity_channel", &identity_channel, py::arg("dim"));
  m.def("depolarizing", &depolarizing, py::arg("p"));
  m.def("bb84", &bb84, py::arg("p_x"), py::arg("p_z"));
  m.def("amplitude_damping", &amplitude_damping, py::arg("gamma"));
  m.def("erasure", &erasure, py::arg("p"));
  m.def("constant_channel", &constant_channel, py::arg("dim_in"),
        py::arg("dim_out"));
  m.def("random_mixed_unitary", &random_mixed_unitary, py::arg("dim"),
        py::arg("count"), py::arg("seed"));
  m.def("random_unitary_complement", &random_unitary_complement,
        py::arg("dim_a"), py::arg("dim_b"), py::arg("seed"));

  // Conversion and composition.
  m.def("choi", [](const QuantumChannel& c) { return choi(c).entries; },
        py::arg("channel"), "Choi matrix on output (x) input, trace dim_in");
  m.def("complementary", &complementary, py::arg("channel"));
  m.def("apply", &apply_matrix, py::arg("channel"), py::arg("rho"));
  m.def("compose", &compose, py::arg("outer"), py::arg("inner"));
  m.def("tensor_product", &tensor_product, py::arg("a"), py::arg("b"));

  // Serialization.
  m.def("channel_to_json", &channel_to_json, py::arg("channel"));
  m.def("channel_from_json", &channel_from_json, py::arg("text"));
  m.def("load_channel", &load_channel, py::arg("path"));
  m.def("save_channel", &save_channel, py::arg("channel"), py::arg("path"));

  // Measurements.
  m.def(
      "epsilon_degradable",
      [](const QuantumChannel& c, double tol) {
        return epsilon_degradable(c, solver_options(tol));
      },
      py::arg("channel"), py::arg("tol") = 1e-8,
      "Smallest diamond-norm deviation from degradability, with certificate");
  m.def(
      "epsilon_antidegradable",
      [](const QuantumChannel& c, double tol) {
        return epsilon_antidegradable(c, solver_options(tol));
      },
      py::arg("channel"), py::arg("tol") = 1e-8);
  m.def(
      "diamond_norm_distance",
      [](const QuantumChannel& a, const QuantumChannel& b, double tol) {
        return diamond_norm_distance(a, b, solver_options(tol));
      },
      py::arg("a"), py::arg("b"), py::arg("tol") = 1e-8);
  m.def(
      "coherent_information",
      [](const Mat& rho, const QuantumChannel& c) {
        return coherent_information(DensityOperator::create(rho), c);
      },
      py::arg("rho"), py::arg("channel"));
  m.def(
      "channel_coherent_information",
      [](const QuantumChannel& c, int starts) {
        const CoherentInfoResult r = channel_coherent_information(c, starts);
        py::dict d;
        d["value"] = r.value;
        d["input"] = r.input.matrix();
        d["converged"] = r.converged;
        return d;
      },
      py::arg("channel"), py::arg("starts") = 20,
      "Best-found max of the coherent information over input states");

  // Bound assembly: measure epsilon, maximize the coherent information and
  // the degraded conditional entropy, then evaluate every upper bound.
  m.def(
      "capacity_bounds",
      [](const QuantumChannel& c, int starts, double tol, bool anti) {
        const SdpOptions opt = solver_options(tol);
        const DegradabilityReport rep = epsilon_degradable(c, opt);
        if (rep.status != SdpStatus::Optimal)
          throw NumericalFailure(std::string("degradability solve failed: ") +
                                 sdp_status_name(rep.status));
        const CoherentInfoResult q1 = channel_coherent_information(c, starts);
        const double uxi = u_xi(c, rep.degrading);
        const CapacityBounds cb = capacity_bounds(c, rep, q1.value, uxi);
        py::dict d;
        d["epsilon"] = rep.epsilon;
        d["q1"] = cb.q1;
        d["u_xi"] = cb.u_xi;
        d["q_upper_from_q1"] = cb.q_upper_from_q1;
        d["q_upper_from_u"] = cb.q_upper_from_u;
        d["p_upper_from_q1"] = cb.p_upper_from_q1;
        d["p_upper_from_u"] = cb.p_upper_from_u;
        d["p1_upper_from_q1"] = cb.p1_upper_from_q1;
        d["qss_upper"] = cb.qss_upper;
        d["pss_upper"] = cb.pss_upper;
        if (anti) {
          const DegradabilityReport arep = epsilon_antidegradable(c, opt);
          if (arep.status != SdpStatus::Optimal)
            throw NumericalFailure(
                std::string("anti-degradability solve failed: ") +
                sdp_status_name(arep.status));
          d["epsilon_anti"] = arep.epsilon;
          d["anti_upper"] = anti_degradable_bound(arep, rep.dim_b);
        }
        d["terms"] = report_terms(cb.terms);
        return d;
      },
      py::arg("channel"), py::arg("starts") = 20, py::arg("tol") = 1e-8,
      py::arg("anti") = false);
}
