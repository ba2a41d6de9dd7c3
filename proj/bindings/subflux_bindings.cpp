// Copyright 2026 The subflux Authors
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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subflux/benchmarking.hpp"
#include "subflux/calibration.hpp"
#include "subflux/circuit.hpp"
#include "subflux/config.hpp"
#include "subflux/effective.hpp"
#include "subflux/errors.hpp"
#include "subflux/noise.hpp"
#include "subflux/propagation.hpp"
#include "subflux/transfer.hpp"
#include "subflux/units.hpp"

namespace py = pybind11;
using namespace subflux;

PYBIND11_MODULE(_subflux, m) {
  m.doc() = "sub-harmonic fluxonium control toolkit";
  m.attr("__version__") = tool_version();
  m.attr("TWO_PI") = kTwoPi;

  py::register_exception<invalid_parameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<convergence_error>(m, "ConvergenceError", PyExc_RuntimeError);

  // circuit
  py::class_<CircuitParams>(m, "CircuitParams")
      .def(py::init<>())
      .def(py::init([](double e_j, double e_c, double e_l, double phi_ext) {
             return CircuitParams{e_j, e_c, e_l, phi_ext};
           }),
           py::arg("e_j"), py::arg("e_c"), py::arg("e_l"), py::arg("phi_ext"))
      .def_readwrite("e_j", &CircuitParams::e_j)
      .def_readwrite("e_c", &CircuitParams::e_c)
      .def_readwrite("e_l", &CircuitParams::e_l)
      .def_readwrite("phi_ext", &CircuitParams::phi_ext);

  py::class_<EigenSystem>(m, "EigenSystem")
      .def_readonly("basis_dim", &EigenSystem::basis_dim)
      .def_readonly("n_levels", &EigenSystem::n_levels)
      .def_readonly("energies", &EigenSystem::energies)
      .def_readonly("phase_elements", &EigenSystem::phase_elements)
      .def("omega_eg", &EigenSystem::omega_eg)
      .def("anharmonicity", &EigenSystem::anharmonicity)
      .def("transition", &EigenSystem::transition);

  py::class_<ThreeLevelReduction>(m, "ThreeLevelReduction")
      .def_readonly("omega_eg", &ThreeLevelReduction::omega_eg)
      .def_readonly("alpha", &ThreeLevelReduction::alpha)
      .def_readonly("beta_1", &ThreeLevelReduction::beta_1)
      .def_readonly("beta_2", &ThreeLevelReduction::beta_2);

  m.def("solve_circuit", &solve_circuit, py::arg("params"), py::arg("basis_dim") = 80,
        py::arg("n_levels") = 20);
  m.def("three_level_reduction", &three_level_reduction);
  m.def("build_hamiltonian", &build_hamiltonian);
  m.def("flux_sweep", [](const CircuitParams& p, const std::vector<double>& grid, int n_levels) {
    std::vector<std::tuple<double, double, double>> rows;
    for (const auto& r : flux_sweep(p, grid, n_levels)) rows.emplace_back(r.phi_ext, r.f_ge, r.f_ef);
    return rows;
  }, py::arg("params"), py::arg("phi_grid"), py::arg("n_levels") = 3);

  // pulses
  py::class_<Envelope>(m, "Envelope")
      .def_static("rectangular", &Envelope::rectangular)
      .def_static("flat_top", &Envelope::flat_top, py::arg("sigma") = 5.0, py::arg("cut") = 2.5)
      .def("value", &Envelope::value)
      .def("plateau", &Envelope::plateau);
  m.def("envelope_moment", &envelope_moment);

  // propagation
  py::class_<ResonanceResult>(m, "ResonanceResult")
      .def_readonly("omega_d", &ResonanceResult::omega_d)
      .def_readonly("t_pi", &ResonanceResult::t_pi)
      .def_readonly("p_e", &ResonanceResult::p_e)
      .def_readonly("iterations", &ResonanceResult::iterations);

  m.def(
      "propagate_populations",
      [](const EigenSystem& eigs, double amplitude, double omega_d, double t_pulse,
         const Envelope& env, double dt) {
        DrivePulse p;
        p.amplitude = amplitude;
        p.omega_d = omega_d;
        p.t_pulse = t_pulse;
        p.envelope = env;
        PropagateOptions o;
        o.dt = dt;
        const auto r = propagate(eigs, p, o);
        Eigen::VectorXd pops(r.state.size());
        for (int i = 0; i < r.state.size(); ++i) pops[i] = std::norm(r.state[i]);
        return pops;
      },
      py::arg("eigs"), py::arg("amplitude"), py::arg("omega_d"), py::arg("t_pulse"),
      py::arg("envelope") = Envelope::rectangular(), py::arg("dt") = 0.1);
  m.def(
      "find_subharmonic_resonance",
      [](const EigenSystem& eigs, int n, double amplitude, double dt) {
        ResonanceSearchOptions opts;
        opts.dt = dt;
        return find_subharmonic_resonance(eigs, n, amplitude, opts);
      },
      py::arg("eigs"), py::arg("n"), py::arg("amplitude"), py::arg("dt") = 0.1);
  m.def(
      "spectroscopy_sweep",
      [](const EigenSystem& eigs, const std::vector<double>& freqs, double amp, double t_pulse,
         const Envelope& env, double dt) {
        std::vector<std::pair<double, double>> out;
        for (const auto& s : spectroscopy_sweep(eigs, freqs, amp, t_pulse, env, dt))
          out.emplace_back(s.f_d, s.p_e);
        return out;
      },
      py::arg("eigs"), py::arg("freqs"), py::arg("amplitude"), py::arg("t_pulse"),
      py::arg("envelope") = Envelope::flat_top(), py::arg("dt") = 0.1);
  m.def("set_sweep_threads", &set_sweep_threads);

  // effective model
  m.def("solve_resonance", &solve_resonance, py::arg("reduction"), py::arg("n"), py::arg("phi_bar"));
  m.def("stark_shift_n3", &stark_shift_n3, py::arg("reduction"), py::arg("omega_d"),
        py::arg("phi_bar"), py::arg("e2") = 1.0, py::arg("e4") = 1.0);
  m.def("stark_shift_n3_series", &stark_shift_n3_series, py::arg("reduction"), py::arg("omega_d"),
        py::arg("delta_cap"), py::arg("phi_bar"), py::arg("e2") = 1.0, py::arg("e4") = 1.0);
  m.def("rabi_rate_n3", &rabi_rate_n3, py::arg("reduction"), py::arg("omega_d"),
        py::arg("delta_cap"), py::arg("phi_bar"), py::arg("envelope"), py::arg("t_pulse"));
  m.def("generic_stark_shift", &generic_stark_shift, py::arg("reduction"), py::arg("n"),
        py::arg("omega_d"), py::arg("phi_bar"), py::arg("order") = 3,
        py::arg("envelope_value") = 1.0);
  m.def("fit_power_law", [](const std::vector<double>& a, const std::vector<double>& v) {
    const auto f = fit_power_law(a, v);
    return py::make_tuple(f.exponent, f.exponent_std_error, f.prefactor);
  });

  // transfer
  py::class_<TransferModel>(m, "TransferModel")
      .def(py::init([](double a0) { return TransferModel{a0}; }), py::arg("a0"))
      .def_readwrite("a0", &TransferModel::a0);
  m.def("attenuate", &attenuate);
  m.def("deattenuate", &deattenuate);
  m.def("fit_a0", [](const std::vector<std::pair<double, double>>& data,
                     const ThreeLevelReduction& red) {
    std::vector<TransferFitPoint> pts;
    for (const auto& [a, f] : data) pts.push_back({a, f});
    const auto fit = fit_a0(pts, red);
    return py::make_tuple(fit.model.a0, fit.a0_std_error, fit.rms_residual);
  });

  // noise budget
  m.def("bose_einstein", &bose_einstein);
  m.def("effective_temperature", &effective_temperature);
  m.def("thermal_population_ratio", &thermal_population_ratio);
  m.def("resonator_dephasing", &resonator_dephasing);
  m.def("t_phi_from_t2", &t_phi_from_t2);
  m.def("infer_resonator_temperature", &infer_resonator_temperature);
  m.def("infer_bath_coupling", &infer_bath_coupling);
  m.def(
      "flux_line_decay",
      [](double mutual_ph, double qubit_l_ph, double phi_ge, double temperature_k, double r_ohm,
         double f_eg) {
        const auto env = NoiseEnvironment::matched_line(temperature_k, r_ohm);
        return flux_line_decay({mutual_ph, qubit_l_ph, phi_ge}, env, f_eg);
      },
      py::arg("mutual_inductance_ph"), py::arg("qubit_inductance_ph"),
      py::arg("phase_matrix_element"), py::arg("temperature_k"), py::arg("resistance_ohm"),
      py::arg("f_eg_ghz"));
  m.def("inductance_from_el", &inductance_from_el);

  // benchmarking
  m.def("coherence_limit", &coherence_limit, py::arg("t_g_ns"), py::arg("t1_us"),
        py::arg("t_phi_us"));
  m.def("clifford_mean_length", []() { return compile_cliffords().mean_length(); });
  m.def(
      "run_rb_fidelity",
      [](double t1_us, double t2_star_us, double t_g_ns, int n_sequences, std::uint64_t seed) {
        const auto table = compile_cliffords(GateSet{t_g_ns});
        NoiseChannel noise{t1_us, t_phi_from_t2(t1_us, t2_star_us), t_g_ns};
        RbOptions opts;
        opts.n_sequences = n_sequences;
        opts.seed = seed;
        const auto fit = fit_rb(run_rb(table, noise, opts));
        return py::make_tuple(fit.f_avg_generator, fit.p);
      },
      py::arg("t1_us"), py::arg("t2_star_us"), py::arg("t_g_ns") = 64.0,
      py::arg("n_sequences") = 30, py::arg("seed") = 1);

  // calibration
  py::class_<CalibratedGate>(m, "CalibratedGate")
      .def_readonly("n", &CalibratedGate::n)
      .def_readonly("omega_d", &CalibratedGate::omega_d)
      .def_readonly("t_pulse", &CalibratedGate::t_pulse)
      .def_readonly("t_pulse_pi_2", &CalibratedGate::t_pulse_pi_2)
      .def_readonly("virtual_z_pi", &CalibratedGate::virtual_z_pi)
      .def_readonly("virtual_z_pi_2", &CalibratedGate::virtual_z_pi_2)
      .def_readonly("padding", &CalibratedGate::padding)
      .def_readonly("f_eg_idle", &CalibratedGate::f_eg_idle);
  m.def(
      "calibrate_gate",
      [](const EigenSystem& eigs, int n, double amplitude, int shots, std::uint64_t seed) {
        PropagationExecutor ex(eigs, 0.1);
        CalibrationOptions copt;
        copt.shots = shots;
        copt.seed = seed;
        const auto rough =
            rough_calibrate(ex, n, amplitude, eigs.omega_eg(), Envelope::rectangular(), copt);
        FineCalibrationOptions fopt;
        fopt.shots = shots;
        fopt.seed = seed + 1;
        return fine_calibrate(ex, rough.gate, fopt).gate;
      },
      py::arg("eigs"), py::arg("n"), py::arg("amplitude"), py::arg("shots") = 1024,
      py::arg("seed") = 7);
  m.def("virtual_z_phase", &virtual_z_phase);
}
