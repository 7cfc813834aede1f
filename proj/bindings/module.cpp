// Python bindings for the two-qutrit hierarchical-equations simulator.
// Exposes the model/bath builders, the propagators, the synchronization and
// correlation measures, and the parameter sweeps; numpy arrays map onto the
// Eigen matrix types.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <vector>

#include "qsync/bath.hpp"
#include "qsync/errors.hpp"
#include "qsync/heom.hpp"
#include "qsync/measures.hpp"
#include "qsync/operators.hpp"
#include "qsync/sweep.hpp"

namespace py = pybind11;
using namespace qsync;

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Hierarchical-equations-of-motion dynamics of two detuned qutrits in "
        "a common Drude-Lorentz bath, with phase-synchronization and "
        "entanglement measures.";
    m.attr("__version__") = "0.1.0";

    py::register_exception<DegenerateBath>(m, "DegenerateBath", PyExc_ValueError);
    py::register_exception<InvalidInitialState>(m, "InvalidInitialState",
                                                PyExc_ValueError);
    py::register_exception<InvalidDensityMatrix>(m, "InvalidDensityMatrix",
                                                 PyExc_ValueError);
    py::register_exception<NonFiniteState>(m, "NonFiniteState",
                                           PyExc_RuntimeError);
    py::register_exception<ZeroReference>(m, "ZeroReference", PyExc_RuntimeError);

    // --- operators ---------------------------------------------------------
    py::class_<SpinMatrices>(m, "SpinMatrices")
        .def_readonly("jx", &SpinMatrices::jx)
        .def_readonly("jy", &SpinMatrices::jy)
        .def_readonly("jz", &SpinMatrices::jz);
    m.def("build_spin1", &build_spin1,
          "Spin-1 angular momentum matrices on the {|+1>, |0>, |-1>} basis.");
    m.def("kron", &kron, py::arg("a"), py::arg("b"),
          "Kronecker product of two qutrit operators (first factor slowest).");

    py::class_<SystemModel>(m, "SystemModel")
        .def_readonly("omega1", &SystemModel::omega1)
        .def_readonly("delta", &SystemModel::delta)
        .def_readonly("h", &SystemModel::h)
        .def_readonly("hs", &SystemModel::hs)
        .def_readonly("v", &SystemModel::v)
        .def("__repr__", [](const SystemModel& s) {
            return "SystemModel(omega1=" + std::to_string(s.omega1) +
                   ", delta=" + std::to_string(s.delta) +
                   ", h=" + std::to_string(s.h) + ")";
        });
    m.def("build_hamiltonian", &build_hamiltonian, py::arg("omega1"),
          py::arg("delta"),
          "H_S = omega1*J1z + (omega1 + delta)*J2z on the product basis.");
    m.def("build_coupling", &build_coupling, py::arg("h"),
          "V = (1+h)(J1z+J2z) + (1-h)(J1x+J2x), the collective bath coupling.");
    m.def("build_model", &build_model, py::arg("omega1"), py::arg("delta"),
          py::arg("h"), "Bundle the Hamiltonian and coupling for two qutrits.");

    // --- bath ---------------------------------------------------------------
    py::class_<BathSpec>(m, "BathSpec")
        .def_readonly("lambda_", &BathSpec::lambda)
        .def_readonly("gamma", &BathSpec::gamma)
        .def_readonly("beta", &BathSpec::beta)
        .def_readonly("m_cut", &BathSpec::m_cut)
        .def_readonly("nu", &BathSpec::nu)
        .def_readonly("c", &BathSpec::c)
        .def_readonly("terminator", &BathSpec::terminator)
        .def("__repr__", [](const BathSpec& b) {
            return "BathSpec(lambda_=" + std::to_string(b.lambda) +
                   ", gamma=" + std::to_string(b.gamma) +
                   ", beta=" + std::to_string(b.beta) +
                   ", m_cut=" + std::to_string(b.m_cut) + ")";
        });
    m.def("make_bath", &make_bath, py::arg("lambda_"), py::arg("gamma"),
          py::arg("beta"), py::arg("m_cut"),
          "Drude-Lorentz bath with a Matsubara expansion truncated at m_cut.");
    m.def("matsubara_frequencies", &matsubara_frequencies, py::arg("gamma"),
          py::arg("beta"), py::arg("m_cut"));
    m.def("matsubara_coefficients", &matsubara_coefficients, py::arg("lambda_"),
          py::arg("gamma"), py::arg("beta"), py::arg("m_cut"));
    m.def("terminator_coefficient", &terminator_coefficient, py::arg("bath"));
    m.def("correlation_function", &correlation_function, py::arg("bath"),
          py::arg("t"), "Truncated bath correlation C(t), t >= 0.");
    m.def("spectral_density", &spectral_density, py::arg("lambda_"),
          py::arg("gamma"), py::arg("omega"),
          "J(w) = 2*lambda*gamma*w / (pi*(gamma^2 + w^2)).");

    // --- hierarchy -----------------------------------------------------------
    py::class_<HierarchySpace>(m, "HierarchySpace")
        .def_property_readonly("modes", &HierarchySpace::modes)
        .def_property_readonly("tier_cap", &HierarchySpace::tier_cap)
        .def("__len__", &HierarchySpace::size)
        .def(
            "index",
            [](const HierarchySpace& s, std::size_t rank) {
                if (rank >= s.size())
                    throw std::out_of_range("rank out of range");
                return std::vector<int>(s.index(rank), s.index(rank) + s.modes());
            },
            py::arg("rank"), "Multi-index of the ADO at the given rank.")
        .def(
            "tier",
            [](const HierarchySpace& s, std::size_t rank) {
                if (rank >= s.size())
                    throw std::out_of_range("rank out of range");
                return s.tier(rank);
            },
            py::arg("rank"))
        .def(
            "raised",
            [](const HierarchySpace& s, std::size_t rank, int mode) {
                if (rank >= s.size() || mode < 0 || mode >= s.modes())
                    throw std::out_of_range("rank or mode out of range");
                return s.raised(rank, mode);
            },
            py::arg("rank"), py::arg("mode"),
            "Rank of the neighbor with n_mode + 1, or -1 outside truncation.")
        .def(
            "lowered",
            [](const HierarchySpace& s, std::size_t rank, int mode) {
                if (rank >= s.size() || mode < 0 || mode >= s.modes())
                    throw std::out_of_range("rank or mode out of range");
                return s.lowered(rank, mode);
            },
            py::arg("rank"), py::arg("mode"),
            "Rank of the neighbor with n_mode - 1, or -1 when n_mode is 0.");
    m.def("enumerate_indices", &enumerate_indices, py::arg("modes"),
          py::arg("tier_cap"),
          "All hierarchy multi-indices with total tier <= tier_cap.");

    py::enum_<InitialPreset>(m, "InitialPreset")
        .value("EquatorialProduct", InitialPreset::EquatorialProduct)
        .value("DiagonalThermal", InitialPreset::DiagonalThermal)
        .value("Ground", InitialPreset::Ground);
    m.def("parse_preset", &parse_preset, py::arg("name"));
    m.def("preset_name", &preset_name, py::arg("preset"));
    m.def("make_initial", &make_initial, py::arg("preset"), py::arg("model"),
          py::arg("bath"), "Initial physical density matrix for a preset.");
    m.def("validate_initial", &validate_initial, py::arg("rho"),
          "Raise InvalidInitialState unless rho is a density matrix.");
    m.def("max_stable_step", &max_stable_step, py::arg("bath"),
          "Largest dt the fixed-step integrator tolerates: 1/(2 max nu).");

    // --- propagation ---------------------------------------------------------
    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("time", &TrajectorySample::time)
        .def_readonly("rho", &TrajectorySample::rho);
    m.def("evolve", &evolve, py::arg("initial"), py::arg("model"),
          py::arg("bath"), py::arg("space"), py::arg("dt"), py::arg("t_final"),
          py::arg("sample_every") = 1,
          "RK4 trajectory of the physical state; sample 0 is the initial "
          "state and the final time is always included.");

    py::class_<SteadyOptions>(m, "SteadyOptions")
        .def(py::init<>())
        .def_readwrite("dt", &SteadyOptions::dt)
        .def_readwrite("tolerance", &SteadyOptions::tolerance)
        .def_readwrite("window", &SteadyOptions::window)
        .def_readwrite("max_time", &SteadyOptions::max_time)
        .def_readwrite("check_every", &SteadyOptions::check_every);
    py::class_<SteadyResult>(m, "SteadyResult")
        .def_readonly("rho", &SteadyResult::rho)
        .def_readonly("converged", &SteadyResult::converged)
        .def_readonly("t_reached", &SteadyResult::t_reached);
    m.def("steady_state", &steady_state, py::arg("initial"), py::arg("model"),
          py::arg("bath"), py::arg("space"),
          py::arg("options") = SteadyOptions{},
          "Integrate until the state and its phase profile stop drifting.");

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("m_cut", &ConvergenceRow::m_cut)
        .def_readonly("tier_cap", &ConvergenceRow::tier_cap)
        .def_readonly("ado_count", &ConvergenceRow::ado_count)
        .def_readonly("s_r_max", &ConvergenceRow::s_r_max)
        .def_readonly("diff_prev", &ConvergenceRow::diff_prev)
        .def_readonly("converged", &ConvergenceRow::converged)
        .def_readonly("t_reached", &ConvergenceRow::t_reached);
    m.def("convergence_study", &convergence_study, py::arg("model"),
          py::arg("lambda_"), py::arg("gamma"), py::arg("beta"),
          py::arg("truncations"), py::arg("initial"), py::arg("options"),
          py::arg("channel_count") = 2,
          "Steady-state peak synchronization across truncation pairs.");

    // --- measures ------------------------------------------------------------
    py::class_<SpinCoherentState>(m, "SpinCoherentState")
        .def_readonly("theta", &SpinCoherentState::theta)
        .def_readonly("phi", &SpinCoherentState::phi)
        .def_readonly("amplitudes", &SpinCoherentState::amplitudes);
    m.def("spin_coherent_state", &spin_coherent_state, py::arg("theta"),
          py::arg("phi"));
    m.def("husimi_q", &husimi_q, py::arg("rho"), py::arg("theta1"),
          py::arg("theta2"), py::arg("phi1"), py::arg("phi2"),
          "Husimi Q over product spin coherent states.");

    py::class_<SyncCoherences>(m, "SyncCoherences")
        .def_readonly("z1", &SyncCoherences::z1)
        .def_readonly("z2", &SyncCoherences::z2);
    m.def("sync_coherences", &sync_coherences, py::arg("rho"));
    m.def("sync_from_coherences", &sync_from_coherences, py::arg("coherences"),
          py::arg("phi"));
    m.def("sync_measure", &sync_measure_closed, py::arg("rho"), py::arg("phi"),
          "Relative-phase synchronization S_r(phi), closed form.");
    m.def("sync_measure_quadrature", &sync_measure_quadrature, py::arg("rho"),
          py::arg("phi"), py::arg("resolution"),
          "S_r(phi) by direct quadrature of the Husimi distribution.");

    py::class_<MaxSync>(m, "MaxSync")
        .def_readonly("s_r_max", &MaxSync::s_r_max)
        .def_readonly("phi_star", &MaxSync::phi_star);
    m.def("max_sync", &max_sync, py::arg("rho"), py::arg("phi_samples") = 1024,
          "Maximize S_r over the relative phase.");

    m.def("partial_transpose", &partial_transpose, py::arg("rho"),
          py::arg("subsystem"), "Transpose tensor factor 1 or 2.");
    m.def("partial_trace_second", &partial_trace_second, py::arg("rho"));
    m.def("partial_trace_first", &partial_trace_first, py::arg("rho"));

    py::class_<NegativityResult>(m, "NegativityResult")
        .def_readonly("negativity", &NegativityResult::negativity)
        .def_readonly("log_negativity", &NegativityResult::log_negativity);
    m.def("negativity_measures", &negativity_measures, py::arg("rho"),
          "Negativity and logarithmic negativity of the bipartition.");
    m.def("mutual_information", &mutual_information, py::arg("rho"),
          "I = S(rho_1) + S(rho_2) - S(rho), natural logs.");

    py::class_<MeasureReport>(m, "MeasureReport")
        .def_readonly("phi_grid", &MeasureReport::phi_grid)
        .def_readonly("s_r", &MeasureReport::s_r)
        .def_readonly("s_r_max", &MeasureReport::s_r_max)
        .def_readonly("phi_star", &MeasureReport::phi_star)
        .def_readonly("negativity", &MeasureReport::negativity)
        .def_readonly("log_negativity", &MeasureReport::log_negativity)
        .def_readonly("mutual_information", &MeasureReport::mutual_information);
    m.def("measure_report", &measure_report, py::arg("rho"),
          py::arg("phi_grid_size") = 1024,
          "Phase profile plus the correlation measures for one state.");

    m.def(
        "gauss_legendre",
        [](int n) {
            std::vector<double> nodes, weights;
            gauss_legendre(n, nodes, weights);
            return py::make_tuple(std::move(nodes), std::move(weights));
        },
        py::arg("n"), "Nodes and weights of the n-point rule on [-1, 1].");

    // --- sweeps ---------------------------------------------------------------
    py::class_<CellRecord>(m, "CellRecord")
        .def_readonly("delta", &CellRecord::delta)
        .def_readonly("lambda_", &CellRecord::lambda)
        .def_readonly("beta", &CellRecord::beta)
        .def_readonly("s_r_max", &CellRecord::s_r_max)
        .def_readonly("phi_star", &CellRecord::phi_star)
        .def_readonly("mutual_information", &CellRecord::mutual_information)
        .def_readonly("log_negativity", &CellRecord::log_negativity)
        .def_readonly("converged", &CellRecord::converged)
        .def_readonly("t_reached", &CellRecord::t_reached)
        .def_readonly("error", &CellRecord::error);

    py::class_<SweepSettings>(m, "SweepSettings")
        .def(py::init<>())
        .def_readwrite("omega1", &SweepSettings::omega1)
        .def_readwrite("gamma", &SweepSettings::gamma)
        .def_readwrite("beta", &SweepSettings::beta)
        .def_readwrite("h", &SweepSettings::h)
        .def_readwrite("channel_count", &SweepSettings::channel_count)
        .def_readwrite("m_cut", &SweepSettings::m_cut)
        .def_readwrite("tier_cap", &SweepSettings::tier_cap)
        .def_readwrite("preset", &SweepSettings::preset)
        .def_readwrite("custom_initial", &SweepSettings::custom_initial)
        .def_readwrite("steady", &SweepSettings::steady)
        .def_readwrite("phi_samples", &SweepSettings::phi_samples)
        .def_readwrite("warm_start", &SweepSettings::warm_start);

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init<>())
        .def_readwrite("delta_values", &SweepGrid::delta_values)
        .def_readwrite("lambda_values", &SweepGrid::lambda_values)
        .def_readwrite("settings", &SweepGrid::settings)
        .def_readonly("results", &SweepGrid::results);

    m.def("run_cell", &run_cell, py::arg("delta"), py::arg("lambda_"),
          py::arg("beta"), py::arg("settings"),
          py::arg("seed") = std::optional<Mat9>{},
          "One steady-state grid cell; failures land in record.error.");
    m.def("arnold_tongue", &arnold_tongue, py::arg("grid"),
          "Fill the delta x lambda grid with steady-state cells.");
    m.def("fixed_lambda_row", &fixed_lambda_row, py::arg("grid"),
          py::arg("lambda_index"));
    m.def("tongue_width", &tongue_width, py::arg("row"),
          py::arg("threshold") = 0.5,
          "Interpolated width in delta of the synchronized region.");
    m.def("temperature_scan", &temperature_scan, py::arg("deltas"),
          py::arg("betas"), py::arg("lambda_"), py::arg("settings"),
          "Steady-state cells over each (delta, beta) pair at fixed lambda.");
}
