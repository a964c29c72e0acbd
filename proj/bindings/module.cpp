#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "signalscope/hilbert.hpp"
#include "signalscope/machines.hpp"
#include "signalscope/optimizer.hpp"
#include "signalscope/signaling.hpp"

namespace py = pybind11;

using namespace signalscope;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Signaling tests for state-dependent copying and deleting machines";

    py::class_<PureState>(m, "PureState")
        .def(py::init<Vector, Dims>(), py::arg("amplitudes"), py::arg("dims"))
        .def_static("basis", &PureState::basis, py::arg("dim"), py::arg("index"))
        .def_property_readonly("amplitudes", &PureState::amplitudes)
        .def_property_readonly("dims", &PureState::dims)
        .def_property_readonly("dim", &PureState::dim)
        .def("regrouped", &PureState::regrouped, py::arg("dims"));

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<Matrix, Dims>(), py::arg("entries"), py::arg("dims"))
        .def_property_readonly("entries", &DensityMatrix::entries)
        .def_property_readonly("dims", &DensityMatrix::dims)
        .def_property_readonly("dim", &DensityMatrix::dim);

    py::class_<SchmidtForm>(m, "SchmidtForm")
        .def_readonly("coefficients", &SchmidtForm::coefficients)
        .def_readonly("left_basis", &SchmidtForm::left_basis)
        .def_readonly("right_basis", &SchmidtForm::right_basis)
        .def_readonly("left_dims", &SchmidtForm::left_dims)
        .def_readonly("right_dims", &SchmidtForm::right_dims);

    py::class_<AppliedState>(m, "AppliedState")
        .def_readonly("amplitudes", &AppliedState::amplitudes)
        .def_readonly("dims", &AppliedState::dims)
        .def_readonly("norm", &AppliedState::norm)
        .def("normalized", &AppliedState::normalized);

    m.def("tensor", &tensor, py::arg("u"), py::arg("v"));
    m.def("inner", &inner, py::arg("u"), py::arg("v"));
    m.def("density_from_pure", &density_from_pure, py::arg("states"),
          py::arg("weights"));
    m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("keep"));
    m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
    m.def("binary_entropy", &binary_entropy, py::arg("p"));
    m.def("schmidt_decompose", &schmidt_decompose, py::arg("state"), py::arg("cut"));
    m.def("apply_on_subsystem", &apply_on_subsystem, py::arg("op"), py::arg("state"),
          py::arg("targets"));

    py::enum_<MachineKind>(m, "MachineKind")
        .value("CLONE", MachineKind::Clone)
        .value("DELETE", MachineKind::Delete);

    py::class_<StatePair>(m, "StatePair")
        .def(py::init<PureState, PureState>(), py::arg("psi"), py::arg("phi"))
        .def_readonly("psi", &StatePair::psi)
        .def_readonly("phi", &StatePair::phi)
        .def_readonly("overlap", &StatePair::overlap);

    py::class_<ConeGeometry>(m, "ConeGeometry")
        .def_readonly("kind", &ConeGeometry::kind)
        .def_readonly("inputs", &ConeGeometry::inputs)
        .def_readonly("targets", &ConeGeometry::targets)
        .def_readonly("e_plus", &ConeGeometry::e_plus)
        .def_readonly("e_minus", &ConeGeometry::e_minus)
        .def_readonly("theta_in", &ConeGeometry::theta_in)
        .def_readonly("theta_q", &ConeGeometry::theta_q)
        .def_readonly("theta_target", &ConeGeometry::theta_target);

    py::class_<LinearMachine>(m, "LinearMachine")
        .def_readonly("op", &LinearMachine::op)
        .def_readonly("kind", &LinearMachine::kind)
        .def_readonly("anchor_inputs", &LinearMachine::anchor_inputs)
        .def_readonly("anchor_outputs", &LinearMachine::anchor_outputs)
        .def_readonly("theta_prime", &LinearMachine::theta_prime)
        .def_readonly("fidelity", &LinearMachine::fidelity)
        .def_readonly("geometry", &LinearMachine::geometry);

    py::class_<FidelityOptimum>(m, "FidelityOptimum")
        .def_readonly("fidelity", &FidelityOptimum::fidelity)
        .def_readonly("outputs", &FidelityOptimum::outputs);

    m.def("qubit_pair_from_overlap", &qubit_pair_from_overlap, py::arg("s"));
    m.def("cone_geometry", &cone_geometry, py::arg("pair"), py::arg("kind"),
          py::arg("blank") = PureState::basis(2, 0));
    m.def("symmetric_pair_at", &symmetric_pair_at, py::arg("geometry"),
          py::arg("theta"));
    m.def("optimal_fidelity", &optimal_fidelity, py::arg("geometry"));
    m.def("optimal_fidelity_for_overlap", &optimal_fidelity_for_overlap,
          py::arg("s"), py::arg("kind"));
    m.def("super_machine", &super_machine, py::arg("geometry"),
          py::arg("theta_prime"));
    m.def("machine_by_fidelity_excess", &machine_by_fidelity_excess,
          py::arg("geometry"), py::arg("epsilon"));

    py::class_<ProbeState>(m, "ProbeState")
        .def_readonly("state", &ProbeState::state)
        .def_readonly("kind", &ProbeState::kind)
        .def_readonly("anchor_pair", &ProbeState::anchor_pair)
        .def_readonly("blank", &ProbeState::blank);

    py::class_<SignalingReport>(m, "SignalingReport")
        .def_readonly("entropy_before", &SignalingReport::entropy_before)
        .def_readonly("entropy_after", &SignalingReport::entropy_after)
        .def_readonly("delta", &SignalingReport::delta)
        .def_readonly("threshold", &SignalingReport::threshold)
        .def_readonly("signaling", &SignalingReport::signaling)
        .def_readonly("machine_fidelity", &SignalingReport::machine_fidelity)
        .def_readonly("optimal_fidelity", &SignalingReport::optimal_fidelity)
        .def_readonly("overlap_before", &SignalingReport::overlap_before)
        .def_readonly("overlap_after", &SignalingReport::overlap_after);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("s", &SweepRecord::s)
        .def_readonly("epsilon", &SweepRecord::epsilon)
        .def_readonly("theta_prime", &SweepRecord::theta_prime)
        .def_readonly("fidelity", &SweepRecord::fidelity)
        .def_readonly("optimal_fidelity", &SweepRecord::optimal_fidelity)
        .def_readonly("entropy_before", &SweepRecord::entropy_before)
        .def_readonly("entropy_after", &SweepRecord::entropy_after)
        .def_readonly("delta", &SweepRecord::delta)
        .def_readonly("signaling", &SweepRecord::signaling)
        .def_readonly("feasible", &SweepRecord::feasible);

    py::class_<PowerBound>(m, "PowerBound")
        .def_readonly("s", &PowerBound::s)
        .def_readonly("measured_entropy", &PowerBound::measured_entropy)
        .def_readonly("uncertainty", &PowerBound::uncertainty)
        .def_readonly("fidelity_interval", &PowerBound::fidelity_interval)
        .def_readonly("theta_interval", &PowerBound::theta_interval)
        .def_readonly("out_of_model", &PowerBound::out_of_model);

    py::class_<ExperimentPlan>(m, "ExperimentPlan")
        .def_readonly("schmidt_a2", &ExperimentPlan::schmidt_a2)
        .def_readonly("target_entropy", &ExperimentPlan::target_entropy)
        .def_readonly("filter_success_probability",
                      &ExperimentPlan::filter_success_probability);

    m.def("build_probe", &build_probe, py::arg("pair"), py::arg("kind"),
          py::arg("blank") = PureState::basis(2, 0));
    m.def("run_protocol", &run_protocol, py::arg("probe"), py::arg("machine"),
          py::arg("threshold") = 1e-9);
    m.def("sweep", &sweep, py::arg("kind"), py::arg("s_grid"),
          py::arg("epsilon_grid"), py::arg("threshold") = 1e-9);
    m.def("bound_from_entropy", &bound_from_entropy, py::arg("pair"),
          py::arg("kind"), py::arg("measured_entropy"), py::arg("uncertainty"));
    m.def("plan_experiment", &plan_experiment, py::arg("pair"), py::arg("kind"));

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init([](int restarts, int max_iterations, double tolerance,
                         std::uint64_t seed) {
                 return SearchConfig{restarts, max_iterations, tolerance, seed};
             }),
             py::arg("restarts") = 32, py::arg("max_iterations") = 10000,
             py::arg("tolerance") = 1e-10, py::arg("seed") = 0)
        .def_readwrite("restarts", &SearchConfig::restarts)
        .def_readwrite("max_iterations", &SearchConfig::max_iterations)
        .def_readwrite("tolerance", &SearchConfig::tolerance)
        .def_readwrite("seed", &SearchConfig::seed);

    py::register_exception<SearchFailure>(m, "SearchFailure");

    py::class_<GramSearchResult>(m, "GramSearchResult")
        .def_readonly("fidelity", &GramSearchResult::fidelity)
        .def_readonly("outputs", &GramSearchResult::outputs);

    py::class_<UnitarySearchResult>(m, "UnitarySearchResult")
        .def_readonly("fidelity", &UnitarySearchResult::fidelity)
        .def_readonly("unitary", &UnitarySearchResult::unitary)
        .def_readonly("converged_restarts", &UnitarySearchResult::converged_restarts);

    m.def("gram_constrained_max", &gram_constrained_max, py::arg("targets"),
          py::arg("forced_overlap"), py::arg("config") = SearchConfig{});
    m.def("unitary_search", &unitary_search, py::arg("inputs"), py::arg("targets"),
          py::arg("dim"), py::arg("config") = SearchConfig{});
    m.def("unitary_search_detailed", &unitary_search_detailed, py::arg("inputs"),
          py::arg("targets"), py::arg("dim"), py::arg("config") = SearchConfig{});

    m.attr("__version__") = "0.1.0";
}
