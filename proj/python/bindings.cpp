#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vrs/analytic.hpp"
#include "vrs/dynamics.hpp"
#include "vrs/errors.hpp"
#include "vrs/model.hpp"
#include "vrs/peaks.hpp"
#include "vrs/state.hpp"

namespace py = pybind11;
using namespace vrs;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Qubit-cavity-reservoir emission spectra: variational "
              "coherent-state propagation and closed-form treatments";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError",
                                           PyExc_RuntimeError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def(py::init([](double omega0, double omega_c, double lambda_c, double alpha,
                         double omega_cut) {
                 ModelParams p;
                 p.omega0 = omega0;
                 p.omega_c = omega_c;
                 p.lambda_c = lambda_c;
                 p.alpha = alpha;
                 p.omega_cut = omega_cut;
                 p.validate();
                 return p;
             }),
             py::arg("omega0") = 1.0, py::arg("omega_c") = 1.0,
             py::arg("lambda_c") = 0.0, py::arg("alpha") = 0.1,
             py::arg("omega_cut") = 5.0)
        .def_readwrite("omega0", &ModelParams::omega0)
        .def_readwrite("omega_c", &ModelParams::omega_c)
        .def_readwrite("lambda_c", &ModelParams::lambda_c)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def_readwrite("omega_cut", &ModelParams::omega_cut)
        .def("validate", &ModelParams::validate)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(omega0=" + std::to_string(p.omega0) +
                   ", omega_c=" + std::to_string(p.omega_c) +
                   ", lambda_c=" + std::to_string(p.lambda_c) +
                   ", alpha=" + std::to_string(p.alpha) +
                   ", omega_cut=" + std::to_string(p.omega_cut) + ")";
        });

    py::class_<DiscretizedBath>(m, "DiscretizedBath")
        .def_readonly("n_modes", &DiscretizedBath::n_modes)
        .def_readonly("omega_max", &DiscretizedBath::omega_max)
        .def_readonly("frequencies", &DiscretizedBath::frequencies)
        .def_readonly("couplings", &DiscretizedBath::couplings);

    m.def("spectral_density", &spectral_density, py::arg("omega"), py::arg("params"));
    m.def("discretize_bath", &discretize_bath, py::arg("params"), py::arg("n_modes"),
          py::arg("omega_max"));

    py::class_<MultiD1State>(m, "MultiD1State")
        .def_readwrite("amplitudes_plus", &MultiD1State::amplitudes_plus)
        .def_readwrite("amplitudes_minus", &MultiD1State::amplitudes_minus)
        .def_readwrite("displacements_plus", &MultiD1State::displacements_plus)
        .def_readwrite("displacements_minus", &MultiD1State::displacements_minus)
        .def_readwrite("time", &MultiD1State::time)
        .def_property_readonly("multiplicity", &MultiD1State::multiplicity)
        .def_property_readonly("mode_count", &MultiD1State::mode_count);

    py::class_<ObservableSet>(m, "ObservableSet")
        .def_readonly("sigma_x", &ObservableSet::sigma_x)
        .def_readonly("sigma_y", &ObservableSet::sigma_y)
        .def_readonly("sigma_z", &ObservableSet::sigma_z)
        .def_readonly("excited_population", &ObservableSet::excited_population)
        .def_readonly("norm", &ObservableSet::norm)
        .def_readonly("energy", &ObservableSet::energy)
        .def_readonly("parity", &ObservableSet::parity);

    m.def("initial_state", &initial_state, py::arg("multiplicity"), py::arg("bath"),
          py::arg("noise_scale") = 1.0, py::arg("seed") = 20240901);
    m.def("coherent_overlap", &coherent_overlap, py::arg("d1"), py::arg("d2"));
    m.def("norm", &norm, py::arg("state"));
    m.def("photon_number", &photon_number, py::arg("state"), py::arg("mode_index"));
    m.def("photon_numbers", &photon_numbers, py::arg("state"));
    m.def("qubit_observables", &qubit_observables, py::arg("state"));
    m.def("parity_expectation", &parity_expectation, py::arg("state"));
    m.def("energy", &energy, py::arg("state"), py::arg("params"), py::arg("bath"));
    m.def("h_squared", &h_squared, py::arg("state"), py::arg("params"),
          py::arg("bath"));
    m.def("save_snapshot", &save_snapshot, py::arg("path"), py::arg("state"));
    m.def("load_snapshot", &load_snapshot, py::arg("path"));

    py::class_<MultiD1Derivative>(m, "MultiD1Derivative")
        .def_readonly("amplitudes_plus", &MultiD1Derivative::amplitudes_plus)
        .def_readonly("amplitudes_minus", &MultiD1Derivative::amplitudes_minus)
        .def_readonly("displacements_plus", &MultiD1Derivative::displacements_plus)
        .def_readonly("displacements_minus", &MultiD1Derivative::displacements_minus);

    py::class_<EomSolveReport>(m, "EomSolveReport")
        .def_readonly("derivative", &EomSolveReport::derivative)
        .def_readonly("gram_condition", &EomSolveReport::gram_condition)
        .def_readonly("regularization_used", &EomSolveReport::regularization_used)
        .def_readonly("residual", &EomSolveReport::residual)
        .def_readonly("tangent_norm_sq", &EomSolveReport::tangent_norm_sq)
        .def_readonly("state_norm", &EomSolveReport::state_norm);

    m.def("assemble_eom", &assemble_eom, py::arg("state"), py::arg("params"),
          py::arg("bath"), py::arg("regularization_eps") = 1e-8);
    m.def("step_rk4", &step_rk4, py::arg("state"), py::arg("dt"), py::arg("params"),
          py::arg("bath"), py::arg("regularization_eps") = 1e-8);
    m.def("deviation", &deviation, py::arg("state"), py::arg("derivative"),
          py::arg("params"), py::arg("bath"));

    py::class_<PropagateOptions>(m, "PropagateOptions")
        .def(py::init<>())
        .def_readwrite("t_f", &PropagateOptions::t_f)
        .def_readwrite("dt", &PropagateOptions::dt)
        .def_readwrite("output_stride", &PropagateOptions::output_stride)
        .def_readwrite("regularization_eps", &PropagateOptions::regularization_eps)
        .def_readwrite("snapshot_times", &PropagateOptions::snapshot_times);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("times", &TrajectoryRecord::times)
        .def_readonly("observables", &TrajectoryRecord::observables)
        .def_readonly("sigma2", &TrajectoryRecord::sigma2)
        .def_readonly("sigma2_max", &TrajectoryRecord::sigma2_max)
        .def_readonly("accepted", &TrajectoryRecord::accepted)
        .def_readonly("photon_snapshots", &TrajectoryRecord::photon_snapshots)
        .def_readonly("final_photon_numbers", &TrajectoryRecord::final_photon_numbers)
        .def_readonly("spectrum_tail_change", &TrajectoryRecord::spectrum_tail_change)
        .def_readonly("final_state", &TrajectoryRecord::final_state)
        .def_readonly("aborted", &TrajectoryRecord::aborted)
        .def_readonly("abort_reason", &TrajectoryRecord::abort_reason);

    m.def(
        "propagate",
        [](const MultiD1State& initial, const ModelParams& params,
           const DiscretizedBath& bath, const PropagateOptions& options) {
            return propagate(initial, params, bath, options);
        },
        py::arg("initial"), py::arg("params"), py::arg("bath"), py::arg("options"),
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "propagate",
        [](const MultiD1State& initial, const ModelParams& params,
           const DiscretizedBath& bath, double t_f, double dt, int output_stride,
           double regularization_eps) {
            return propagate(initial, params, bath, t_f, dt, output_stride,
                             regularization_eps);
        },
        py::arg("initial"), py::arg("params"), py::arg("bath"), py::arg("t_f") = 300.0,
        py::arg("dt") = 0.01, py::arg("output_stride") = 10,
        py::arg("regularization_eps") = 1e-8,
        py::call_guard<py::gil_scoped_release>());

    py::enum_<SpectrumMethod>(m, "SpectrumMethod")
        .value("multid1", SpectrumMethod::multid1)
        .value("trwa", SpectrumMethod::trwa)
        .value("rwa", SpectrumMethod::rwa);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("method", &SpectrumResult::method)
        .def_readonly("frequencies", &SpectrumResult::frequencies)
        .def_readonly("values", &SpectrumResult::values)
        .def_readonly("metadata", &SpectrumResult::metadata);

    py::class_<TrwaQuantities>(m, "TrwaQuantities")
        .def_readonly("eta", &TrwaQuantities::eta)
        .def_readonly("lambda_tilde_c", &TrwaQuantities::lambda_tilde_c)
        .def("shift", &TrwaQuantities::shift, py::arg("omega"))
        .def("rate", &TrwaQuantities::rate, py::arg("omega"));

    m.def("solve_eta", &solve_eta, py::arg("params"));
    m.def("make_trwa", &make_trwa, py::arg("params"));
    m.def("trwa_shift", &trwa_shift, py::arg("omega"), py::arg("params"),
          py::arg("eta"));
    m.def("trwa_rate", &trwa_rate, py::arg("omega"), py::arg("params"), py::arg("eta"));
    m.def("rwa_shift", &rwa_shift, py::arg("omega"), py::arg("params"));
    m.def("rwa_rate", &rwa_rate, py::arg("omega"), py::arg("params"));
    m.def("uniform_grid", &uniform_grid, py::arg("upper"), py::arg("n"));

    m.def("trwa_spectrum",
          py::overload_cast<const std::vector<double>&, const ModelParams&>(
              &trwa_spectrum),
          py::arg("grid"), py::arg("params"));
    m.def("trwa_spectrum",
          py::overload_cast<const DiscretizedBath&, const ModelParams&>(&trwa_spectrum),
          py::arg("bath"), py::arg("params"));
    m.def("rwa_spectrum",
          py::overload_cast<const std::vector<double>&, const ModelParams&>(
              &rwa_spectrum),
          py::arg("grid"), py::arg("params"));
    m.def("rwa_spectrum",
          py::overload_cast<const DiscretizedBath&, const ModelParams&>(&rwa_spectrum),
          py::arg("bath"), py::arg("params"));
    m.def("rwa_spectrum_via_trwa_reduction",
          py::overload_cast<const std::vector<double>&, const ModelParams&>(
              &rwa_spectrum_via_trwa_reduction),
          py::arg("grid"), py::arg("params"));

    py::class_<PolaritonPoles>(m, "PolaritonPoles")
        .def_readonly("lower", &PolaritonPoles::lower)
        .def_readonly("upper", &PolaritonPoles::upper);
    m.def("polariton_poles", &polariton_poles, py::arg("params"));

    py::class_<Peak>(m, "Peak")
        .def_readonly("position", &Peak::position)
        .def_readonly("height", &Peak::height)
        .def_readonly("fwhm", &Peak::fwhm)
        .def_readonly("fwhm_complete", &Peak::fwhm_complete);
    m.def("find_peaks", &find_peaks, py::arg("frequencies"), py::arg("values"),
          py::arg("rel_threshold") = 0.05);
}
