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

#pragma once

#include <functional>
#include <vector>

namespace subflux {

// Dissipative control-channel description. The impedance functions take an
// ordinary frequency in GHz and return Ohm; the default describes a matched
// 50 Ohm line, R/|Z|^2 = 1/50.
struct NoiseEnvironment {
  std::function<double(double)> impedance_re;   // R(f), Ohm
  std::function<double(double)> impedance_abs;  // |Z(f)|, Ohm
  double temperature = 3.0;                     // K
  double filter_power_attenuation = 1.0;        // dimensionless A at f_eg

  static NoiseEnvironment matched_line(double temperature_k, double r_ohm = 50.0,
                                       double power_attenuation = 1.0);
  double r_over_z2(double f_ghz) const;  // 1/Ohm
};

// Flux-line coupling geometry for the golden-rule decay formula.
struct CouplingGeometry {
  double mutual_inductance_ph = 0.0;   // pH
  double qubit_inductance_ph = 0.0;    // pH (from E_L)
  double phase_matrix_element = 0.0;   // |<g|phi|e>|
};

// Current-noise spectral density of the environment at ordinary frequency f:
// S = hbar*omega * R/|Z|^2 * [1 + coth(hbar*omega / 2 kB T)], in A^2/Hz.
double psd(const NoiseEnvironment& env, double f_ghz);

// Golden-rule relaxation rate, returned in 1/us. matrix_element_j_per_a is
// |<g|A|e>| for the coupling operator expressed in joule per unit noise
// current; s_a2_per_hz is the spectral density from psd().
double relaxation_rate(double matrix_element_j_per_a, double s_a2_per_hz);

// Flux-line decay rate in 1/ms:
// gamma = (f_eg) * R_Q*R/|Z|^2 * (M/L)^2 * |<g|phi|e>|^2 * [1 + coth(...)],
// equal to relaxation_rate with the inductive matrix element
// (M/L)*(Phi0/2pi)*|<g|phi|e>|.
double flux_line_decay(const CouplingGeometry& geom, const NoiseEnvironment& env, double f_eg_ghz);

// Mutual inductance (pH) that reproduces a given flux-line decay rate (1/ms).
double invert_mutual_inductance(double gamma_per_ms, const CouplingGeometry& geom_without_m,
                                const NoiseEnvironment& env, double f_eg_ghz);

// Bose-Einstein occupation at frequency f (GHz) and temperature T (K).
double bose_einstein(double f_ghz, double temperature_k);

// Temperature (K) with the given occupation at frequency f.
double invert_bose_einstein(double n_th, double f_ghz);

struct BathCoupling {
  double rate_per_us = 0.0;  // zero-temperature coupling rate gamma_i
  double temperature = 0.0;  // K
};

// Total thermal decay rate (1/us): sum_i gamma_i [2 n_th,i + 1].
double thermal_decay(const std::vector<BathCoupling>& baths, double f_eg_ghz);

// Bath coupling rate gamma_0 (1/ms) from the filtered/unfiltered T1 pair:
// 1/T1_filtered - 1/T1_unfiltered = gamma_0 (A - 1)(2 n_th + 1).
double infer_bath_coupling(double t1_filtered_us, double t1_unfiltered_us, double power_attenuation,
                           double bath_temperature_k, double f_eg_ghz);

// Effective temperature (K) from thermal populations, p_e < p_g.
double effective_temperature(double p_e, double p_g, double f_eg_ghz);

// Thermal population ratio P_e/P_g at temperature T.
double thermal_population_ratio(double temperature_k, double f_eg_ghz);

// Pure dephasing rate 1/T_phi (1/us) from thermal resonator photons:
// 1/T_phi = kappa (2chi)^2 / (kappa^2 + (2chi)^2) * n_th. kappa and two_chi
// are ordinary frequencies in MHz; the Lorentzian factor is evaluated on the
// angular rates, where the 2pi cancels except in the overall kappa.
double resonator_dephasing(double kappa_mhz, double two_chi_mhz, double n_th);

// T_phi (us) from T1/T2: 1/T2 = 1/(2 T1) + 1/T_phi.
double t_phi_from_t2(double t1_us, double t2_us);

// Resonator temperature (mK) that explains the measured T1/T2 pair through
// photon-shot-noise dephasing.
double infer_resonator_temperature(double t1_us, double t2_us, double kappa_mhz, double two_chi_mhz,
                                   double f_res_ghz);

}  // namespace subflux
