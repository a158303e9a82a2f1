#include "pite/analysis.hpp"
#include "pite/circuit.hpp"
#include "pite/engine.hpp"
#include "pite/errors.hpp"
#include "pite/hamiltonians.hpp"
#include "pite/io.hpp"
#include "pite/schedules.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pite;

PYBIND11_MODULE(_core, m) {
    m.doc() = "probabilistic imaginary-time evolution laboratory";

    // ------------------------------------------------------------ spectra
    py::class_<Spectrum>(m, "Spectrum")
        .def(py::init<>())
        .def_readwrite("eigenvalues", &Spectrum::eigenvalues)
        .def_readwrite("eigenvectors", &Spectrum::eigenvectors)
        .def("has_eigenvectors", &Spectrum::has_eigenvectors)
        .def("size", &Spectrum::size)
        .def("gap", &Spectrum::gap)
        .def("spread", &Spectrum::spread);

    py::class_<DosHistogram>(m, "DosHistogram")
        .def_readonly("bin_edges", &DosHistogram::bin_edges)
        .def_readonly("counts", &DosHistogram::counts)
        .def_readonly("density", &DosHistogram::density);

    m.def("build_heisenberg_chain", &build_heisenberg_chain, py::arg("n"), py::arg("J"),
          py::arg("h"), py::arg("max_qubits") = default_max_qubits);
    m.def("build_double_well", &build_double_well, py::arg("n_qubits"), py::arg("L"), py::arg("d"),
          py::arg("delta"), py::arg("V0"), py::arg("max_qubits") = default_max_qubits);
    m.def("diagonalize", &diagonalize, py::arg("H"), py::arg("with_vectors") = true);
    m.def("dos_histogram", &dos_histogram, py::arg("spectrum"), py::arg("bin_width"));

    // ------------------------------------------------------------ schedules
    py::enum_<ScheduleKind>(m, "ScheduleKind")
        .value("constant", ScheduleKind::constant)
        .value("linear", ScheduleKind::linear)
        .value("exponential", ScheduleKind::exponential);

    py::class_<Schedule>(m, "Schedule")
        .def_readonly("kind", &Schedule::kind)
        .def_readonly("steps", &Schedule::steps)
        .def_readonly("dtau_min", &Schedule::dtau_min)
        .def_readonly("dtau_max", &Schedule::dtau_max)
        .def_readonly("K", &Schedule::K)
        .def_readonly("kappa_bar", &Schedule::kappa_bar)
        .def("cumulative_tau", &Schedule::cumulative_tau)
        .def("final_step", &Schedule::final_step);

    m.def("constant_schedule", &constant_schedule, py::arg("dtau"), py::arg("K"));
    m.def("linear_schedule", &linear_schedule, py::arg("dtau_min"), py::arg("dtau_max"),
          py::arg("K"));
    m.def("exponential_schedule", &exponential_schedule, py::arg("dtau_min"), py::arg("dtau_max"),
          py::arg("K"), py::arg("kappa_bar"));

    // ------------------------------------------------------------ engine
    py::class_<InitialWeights>(m, "InitialWeights")
        .def(py::init<>())
        .def(py::init([](std::vector<double> w) {
                 InitialWeights iw;
                 iw.weights = std::move(w);
                 return iw;
             }),
             py::arg("weights"))
        .def_readwrite("weights", &InitialWeights::weights);

    m.def("uniform_weights", &uniform_weights, py::arg("n"));
    m.def("validate_weights", &validate_weights, py::arg("weights"),
          py::arg("expected_size") = 0);

    py::class_<GammaParams>(m, "GammaParams")
        .def_readonly("gamma", &GammaParams::gamma)
        .def_readonly("theta", &GammaParams::theta)
        .def_readonly("s", &GammaParams::s)
        .def_readonly("phi", &GammaParams::phi)
        .def_readonly("sign_kappa", &GammaParams::sign_kappa);

    m.def("gamma_params", &gamma_params, py::arg("gamma"));

    py::class_<ShiftPolicy>(m, "ShiftPolicy")
        .def(py::init<>())
        .def(py::init([](double alpha, int branch_n, double lambda1) {
                 ShiftPolicy p;
                 p.alpha = alpha;
                 p.branch_n = branch_n;
                 p.lambda1 = lambda1;
                 return p;
             }),
             py::arg("alpha") = 1.0, py::arg("branch_n") = 0, py::arg("lambda1") = 0.0)
        .def_readwrite("alpha", &ShiftPolicy::alpha)
        .def_readwrite("branch_n", &ShiftPolicy::branch_n)
        .def_readwrite("lambda1", &ShiftPolicy::lambda1);

    py::class_<ExactIteResult>(m, "ExactIteResult")
        .def_readonly("weights", &ExactIteResult::weights)
        .def_readonly("fidelity", &ExactIteResult::fidelity);

    m.def("exact_ite", &exact_ite, py::arg("spectrum"), py::arg("weights"), py::arg("tau"));
    m.def("required_tau", &required_tau, py::arg("delta"), py::arg("w1_sq"), py::arg("w2_sq"),
          py::arg("dlambda2"));
    m.def("energy_shift", &energy_shift, py::arg("policy"), py::arg("gamma_params"),
          py::arg("dtau_k"));
    m.def("step_factor", &step_factor, py::arg("lambda_i"), py::arg("E_k"), py::arg("dtau_k"),
          py::arg("gamma_params"));

    py::enum_<AccumulationMode>(m, "AccumulationMode")
        .value("log_space", AccumulationMode::log_space)
        .value("linear_space", AccumulationMode::linear_space);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("log_damping", &RunResult::log_damping)
        .def_readonly("damping", &RunResult::damping)
        .def_readonly("damping_sign", &RunResult::damping_sign)
        .def_readonly("step_success", &RunResult::step_success)
        .def_readonly("error_tilde", &RunResult::error_tilde)
        .def_readonly("error", &RunResult::error)
        .def_readonly("error_state_norm", &RunResult::error_state_norm)
        .def_readonly("total_success", &RunResult::total_success)
        .def_readonly("fidelity", &RunResult::fidelity)
        .def_readonly("cumulative_tau", &RunResult::cumulative_tau);

    m.def("run_pite", &run_pite, py::arg("spectrum"), py::arg("weights"), py::arg("schedule"),
          py::arg("gamma_params"), py::arg("policy"),
          py::arg("mode") = AccumulationMode::log_space, py::arg("with_step_success") = true);

    py::class_<MonotonicityReport>(m, "MonotonicityReport")
        .def_readonly("applicable", &MonotonicityReport::applicable)
        .def_readonly("monotone", &MonotonicityReport::monotone)
        .def_readonly("first_violation", &MonotonicityReport::first_violation)
        .def_readonly("magnitude", &MonotonicityReport::magnitude);

    m.def("success_monotonicity_check", &success_monotonicity_check, py::arg("result"),
          py::arg("schedule"));
    m.def("alpha_sweep", &alpha_sweep, py::arg("spectrum"), py::arg("weights"),
          py::arg("schedule"), py::arg("gamma_params"), py::arg("alphas"));

    // ------------------------------------------------------------ analysis
    m.def("si", &si, py::arg("x"));
    m.def("ci", &ci, py::arg("x"));
    m.def("cin", &cin, py::arg("x"));
    m.attr("euler_gamma") = euler_gamma;

    py::class_<LinearBoundParams>(m, "LinearBoundParams")
        .def_readwrite("a", &LinearBoundParams::a)
        .def_readwrite("b", &LinearBoundParams::b)
        .def_readwrite("K", &LinearBoundParams::K);

    m.def("linear_bound_params", &linear_bound_params, py::arg("dlambda"), py::arg("s"),
          py::arg("dtau_min"), py::arg("dtau_max"), py::arg("K"));

    py::class_<LogDampingBounds>(m, "LogDampingBounds")
        .def_readonly("lower", &LogDampingBounds::lower)
        .def_readonly("upper", &LogDampingBounds::upper)
        .def_readonly("degenerate", &LogDampingBounds::degenerate)
        .def_readonly("integral_caveat", &LogDampingBounds::integral_caveat);

    m.def("log_damping_bounds", &log_damping_bounds, py::arg("params"));
    m.def("arithmetic_mean_linear", &arithmetic_mean_linear, py::arg("params"));

    py::class_<ExpMeanParams>(m, "ExpMeanParams")
        .def_readwrite("alpha", &ExpMeanParams::alpha)
        .def_readwrite("beta", &ExpMeanParams::beta)
        .def_readwrite("kappa", &ExpMeanParams::kappa)
        .def_readwrite("kappa_bar", &ExpMeanParams::kappa_bar);

    m.def("exp_mean_params", &exp_mean_params, py::arg("dlambda"), py::arg("s"),
          py::arg("dtau_min"), py::arg("dtau_max"), py::arg("K"), py::arg("kappa_bar"));

    py::class_<ExpMeanResult>(m, "ExpMeanResult")
        .def_readonly("mean", &ExpMeanResult::mean)
        .def_readonly("amplitude", &ExpMeanResult::amplitude)
        .def_readonly("phase", &ExpMeanResult::phase);

    m.def("arithmetic_mean_exponential", &arithmetic_mean_exponential, py::arg("params"));

    py::enum_<StepsVariant>(m, "StepsVariant")
        .value("limit", StepsVariant::limit)
        .value("cos2_bound", StepsVariant::cos2_bound);

    m.def("required_steps_raw", &required_steps_raw, py::arg("w1_sq"), py::arg("eps_tilde"),
          py::arg("variant"));
    m.def("required_steps", &required_steps, py::arg("w1_sq"), py::arg("eps_tilde"),
          py::arg("variant"));

    py::enum_<TauVariant>(m, "TauVariant")
        .value("linear_exp", TauVariant::linear_exp)
        .value("constant", TauVariant::constant);

    m.def("required_tau_schedule", &required_tau_schedule, py::arg("dlambda"), py::arg("s"),
          py::arg("w1_sq"), py::arg("eps_tilde"), py::arg("variant"));
    m.def("optimal_dtau_max", &optimal_dtau_max, py::arg("dlambda_min"), py::arg("s"),
          py::arg("kind"), py::arg("K") = 0, py::arg("kappa_bar") = 0.0);

    py::class_<ValidityViolation>(m, "ValidityViolation")
        .def_readonly("index", &ValidityViolation::index)
        .def_readonly("lambda_", &ValidityViolation::lambda)
        .def_readonly("ratio", &ValidityViolation::ratio);

    m.def("validity_condition", &validity_condition, py::arg("spectrum"), py::arg("dtau"),
          py::arg("gamma_params"));
    m.def("error_upper_bound_constant", &error_upper_bound_constant, py::arg("w1_sq"),
          py::arg("gamma_params"), py::arg("dlambda_min"), py::arg("dlambda_max"), py::arg("K"));
    m.def("cost_estimate", &cost_estimate, py::arg("d_pite"), py::arg("w1_sq"),
          py::arg("eps_tilde"));

    py::class_<MeanPair>(m, "MeanPair")
        .def_readonly("geometric", &MeanPair::geometric)
        .def_readonly("arithmetic", &MeanPair::arithmetic);

    m.def("geometric_arithmetic_gap", &geometric_arithmetic_gap, py::arg("values"));
    m.def("damping_minimum_centers", &damping_minimum_centers, py::arg("dlambda"),
          py::arg("axis_limit"));

    // ------------------------------------------------------------ circuit
    py::class_<StateVector>(m, "StateVector")
        .def_readwrite("amplitudes", &StateVector::amplitudes)
        .def("register_qubits", &StateVector::register_qubits);

    m.def("make_state_with_ancilla_zero", &make_state_with_ancilla_zero,
          py::arg("register_state"));

    py::class_<StepUnitary>(m, "StepUnitary")
        .def_readonly("matrix", &StepUnitary::matrix)
        .def_readonly("block_00", &StepUnitary::block_00);

    m.def("build_exact_block_unitary", &build_exact_block_unitary, py::arg("spectrum"),
          py::arg("tau"));
    m.def("build_approx_step_circuit", &build_approx_step_circuit, py::arg("H"), py::arg("dtau"),
          py::arg("gamma_params"), py::arg("E"), py::arg("max_qubits") = default_max_qubits);
    m.def("apply_postselect", &apply_postselect, py::arg("state"), py::arg("unitary"));

    py::class_<ShotRecord>(m, "ShotRecord")
        .def_readonly("shot", &ShotRecord::shot)
        .def_readonly("succeeded", &ShotRecord::succeeded)
        .def_readonly("steps_survived", &ShotRecord::steps_survived);

    py::class_<TrajectoryStats>(m, "TrajectoryStats")
        .def_readonly("shots", &TrajectoryStats::shots)
        .def_readonly("successes", &TrajectoryStats::successes)
        .def_readonly("success_frequency", &TrajectoryStats::success_frequency)
        .def_readonly("mean_attempts", &TrajectoryStats::mean_attempts)
        .def_readonly("seed", &TrajectoryStats::seed)
        .def_readonly("records", &TrajectoryStats::records);

    m.def("sample_trajectories", &sample_trajectories, py::arg("spectrum"), py::arg("weights"),
          py::arg("schedule"), py::arg("gamma_params"), py::arg("policy"), py::arg("shots"),
          py::arg("seed"));

    // ------------------------------------------------------------ io
    m.def("format_double", &format_double, py::arg("x"));
}
