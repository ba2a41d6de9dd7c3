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

#include "subflux/noise.hpp"

#include <cmath>

#include "subflux/errors.hpp"
#include "subflux/units.hpp"

namespace subflux {

namespace {

// 1 + coth(hbar*omega / 2 kB T), the stimulated+spontaneous bracket.
double emission_bracket(double f_ghz, double temperature_k) {
  const double x = si::kPlanck * ghz_to_hz(f_ghz) / (2.0 * si::kBoltzmann * temperature_k);
  return 1.0 + 1.0 / std::tanh(x);
}

}  // namespace

NoiseEnvironment NoiseEnvironment::matched_line(double temperature_k, double r_ohm,
                                                double power_attenuation) {
  NoiseEnvironment env;
  env.impedance_re = [r_ohm](double) { return r_ohm; };
  env.impedance_abs = [r_ohm](double) { return r_ohm; };
  env.temperature = temperature_k;
  env.filter_power_attenuation = power_attenuation;
  return env;
}

double NoiseEnvironment::r_over_z2(double f_ghz) const {
  const double r = impedance_re(f_ghz);
  const double z = impedance_abs(f_ghz);
  if (r < 0.0 || z < r) throw invalid_parameter("impedance must satisfy |Z| >= R >= 0");
  return r / (z * z);
}

double psd(const NoiseEnvironment& env, double f_ghz) {
  if (!(f_ghz > 0.0)) throw invalid_parameter("psd: frequency must be positive");
  if (!(env.temperature > 0.0)) throw invalid_parameter("psd: temperature must be positive");
  const double omega = kTwoPi * ghz_to_hz(f_ghz);
  return si::kHbar * omega * env.r_over_z2(f_ghz) * emission_bracket(f_ghz, env.temperature);
}

double relaxation_rate(double matrix_element_j_per_a, double s_a2_per_hz) {
  if (matrix_element_j_per_a < 0.0 || s_a2_per_hz < 0.0) {
    throw invalid_parameter("relaxation_rate: inputs must be >= 0");
  }
  const double rate_per_s =
      matrix_element_j_per_a * matrix_element_j_per_a * s_a2_per_hz / (si::kHbar * si::kHbar);
  return rate_per_s * 1e-6;  // 1/us
}

double flux_line_decay(const CouplingGeometry& geom, const NoiseEnvironment& env, double f_eg_ghz) {
  if (geom.mutual_inductance_ph < 0.0 || !(geom.qubit_inductance_ph > 0.0)) {
    throw invalid_parameter("flux_line_decay: invalid coupling geometry");
  }
  const double m_over_l = geom.mutual_inductance_ph / geom.qubit_inductance_ph;
  const double mel2 = geom.phase_matrix_element * geom.phase_matrix_element;
  const double rate_per_s = ghz_to_hz(f_eg_ghz) * si::kResistanceQuantum * env.r_over_z2(f_eg_ghz) *
                            m_over_l * m_over_l * mel2 * emission_bracket(f_eg_ghz, env.temperature);
  return rate_per_s * 1e-3;  // 1/ms
}

double invert_mutual_inductance(double gamma_per_ms, const CouplingGeometry& geom_without_m,
                                const NoiseEnvironment& env, double f_eg_ghz) {
  CouplingGeometry unit = geom_without_m;
  unit.mutual_inductance_ph = 1.0;
  const double per_unit = flux_line_decay(unit, env, f_eg_ghz);
  if (!(per_unit > 0.0)) throw invalid_parameter("invert_mutual_inductance: degenerate geometry");
  return std::sqrt(gamma_per_ms / per_unit);
}

double bose_einstein(double f_ghz, double temperature_k) {
  if (!(f_ghz > 0.0) || !(temperature_k > 0.0)) {
    throw invalid_parameter("bose_einstein: frequency and temperature must be positive");
  }
  const double x = si::kPlanck * ghz_to_hz(f_ghz) / (si::kBoltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

double invert_bose_einstein(double n_th, double f_ghz) {
  if (!(n_th > 0.0)) throw invalid_parameter("invert_bose_einstein: occupation must be positive");
  const double x = std::log1p(1.0 / n_th);
  return si::kPlanck * ghz_to_hz(f_ghz) / (si::kBoltzmann * x);
}

double thermal_decay(const std::vector<BathCoupling>& baths, double f_eg_ghz) {
  double total = 0.0;
  for (const auto& b : baths) {
    if (b.rate_per_us < 0.0) throw invalid_parameter("thermal_decay: rates must be >= 0");
    const double n = b.temperature > 0.0 ? bose_einstein(f_eg_ghz, b.temperature) : 0.0;
    total += b.rate_per_us * (2.0 * n + 1.0);
  }
  return total;
}

double infer_bath_coupling(double t1_filtered_us, double t1_unfiltered_us, double power_attenuation,
                           double bath_temperature_k, double f_eg_ghz) {
  if (!(t1_unfiltered_us < t1_filtered_us)) {
    throw invalid_parameter("infer_bath_coupling: expected T1_unfiltered < T1_filtered");
  }
  if (!(power_attenuation > 0.0) || !(power_attenuation < 1.0)) {
    throw invalid_parameter("infer_bath_coupling: attenuation must be in (0,1); A -> 1 carries no "
                            "information about the bath");
  }
  const double lhs = 1.0 / t1_filtered_us - 1.0 / t1_unfiltered_us;  // 1/us, negative
  const double n_th = bose_einstein(f_eg_ghz, bath_temperature_k);
  const double gamma0_per_us = lhs / ((power_attenuation - 1.0) * (2.0 * n_th + 1.0));
  return gamma0_per_us * 1e3;  // 1/ms
}

double effective_temperature(double p_e, double p_g, double f_eg_ghz) {
  if (!(p_e > 0.0) || !(p_g > 0.0) || !(p_e < p_g)) {
    throw invalid_parameter("effective_temperature: need 0 < P_e < P_g (otherwise the temperature "
                            "is not positive)");
  }
  return -si::kPlanck * ghz_to_hz(f_eg_ghz) / (si::kBoltzmann * std::log(p_e / p_g));
}

double thermal_population_ratio(double temperature_k, double f_eg_ghz) {
  return std::exp(-si::kPlanck * ghz_to_hz(f_eg_ghz) / (si::kBoltzmann * temperature_k));
}

double resonator_dephasing(double kappa_mhz, double two_chi_mhz, double n_th) {
  if (!(kappa_mhz > 0.0)) throw invalid_parameter("resonator_dephasing: kappa must be positive");
  // Angular rates: kappa_ang = 2pi*kappa, (2chi)_ang = 2pi*(2chi). The
  // Lorentzian ratio is scale-free, so only kappa keeps its 2pi.
  const double kappa_ang_per_us = kTwoPi * kappa_mhz;  // 1/us
  const double k2 = kappa_mhz * kappa_mhz;
  const double x2 = two_chi_mhz * two_chi_mhz;
  return kappa_ang_per_us * x2 / (k2 + x2) * n_th;  // 1/us
}

double t_phi_from_t2(double t1_us, double t2_us) {
  const double inv = 1.0 / t2_us - 1.0 / (2.0 * t1_us);
  if (!(inv > 0.0)) {
    throw invalid_parameter("t_phi_from_t2: T2 >= 2*T1 leaves no dephasing budget");
  }
  return 1.0 / inv;
}

double infer_resonator_temperature(double t1_us, double t2_us, double kappa_mhz, double two_chi_mhz,
                                   double f_res_ghz) {
  const double t_phi = t_phi_from_t2(t1_us, t2_us);
  const double per_photon = resonator_dephasing(kappa_mhz, two_chi_mhz, 1.0);
  const double n_th = 1.0 / (t_phi * per_photon);
  return invert_bose_einstein(n_th, f_res_ghz) * 1e3;  // mK
}

}  // namespace subflux
