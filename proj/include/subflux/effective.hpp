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

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "subflux/circuit.hpp"
#include "subflux/pulse.hpp"

namespace subflux {

// Every closed form below is homogeneous of net degree one in the frequency
// symbols (omega_eg, alpha, beta_m, omega_d, Delta), so it can be evaluated
// with ordinary-frequency GHz inputs and yields ordinary-frequency GHz
// outputs; phi_bar = 2*pi*Phi/Phi0 stays dimensionless.

// Per-order effective-Hamiltonian coefficients for the 3-photon drive, in the
// three-level ladder representation. `number` multiplies b^dag b, `anharmonic`
// multiplies b^dag b^dag b b, `drive` multiplies (b^dag + b). All GHz.
struct HeffN3Terms {
  struct Order {
    double number = 0.0;
    double anharmonic = 0.0;
    double drive = 0.0;
  };
  std::array<Order, 5> order;  // order[k] holds the order-(k+1) contribution

  double total_number() const;
  double total_drive() const;
};

struct PerturbativityReport {
  double detuning_ratio = 0.0;   // |Delta| / (2 omega_d)
  double anharm_ratio = 0.0;     // |alpha| / (4 omega_d)
  double drive_ratio = 0.0;      // max_m |beta_m| phi_bar / (2 omega_d)
  bool within_validity() const { return detuning_ratio < 1.0 && anharm_ratio < 1.0 && drive_ratio < 1.0; }
};

PerturbativityReport perturbativity(const ThreeLevelReduction& red, double delta_cap, double omega_d,
                                    double phi_bar);

// The five order contributions for n = 3, term by term. envelope_value is the
// instantaneous E; the order-k term carries its printed E-power.
HeffN3Terms heff_n3_terms(const ThreeLevelReduction& red, double delta_cap, double omega_d,
                          double phi_bar, double envelope_value = 1.0);

// Six-term truncated series for the drive-induced 3-photon frequency shift,
// orders 1/omega_d .. 1/omega_d^4. e2 and e4 are the time-averaged envelope
// moments <E^2> and <E^4>.
double stark_shift_n3_series(const ThreeLevelReduction& red, double omega_d, double delta_cap,
                             double phi_bar, double e2 = 1.0, double e4 = 1.0);

// Default evaluation used by the resonance solver: the phi_bar^2 part is the
// closed-form second-order shift with exact transition denominators
//   delta = phi^2 [ b1^2 w_eg/(w_eg^2-w_d^2) - (b1+b2)^2 w_ef/(w_ef^2-w_d^2) ]
// (whose expansion in 1/omega_d reproduces the series above order by order),
// plus the phi_bar^4 series terms. The series truncation alone overshoots the
// time-domain shift by 10-25% for alpha/omega_d near 2; the exact-denominator
// form stays within a few percent.
double stark_shift_n3(const ThreeLevelReduction& red, double omega_d, double phi_bar, double e2 = 1.0,
                      double e4 = 1.0);

// Same exact-denominator second-order shift at an arbitrary drive frequency;
// valid for any n-photon resonance since only omega_d enters.
double stark_shift_phi2_exact(const ThreeLevelReduction& red, double omega_d, double phi_bar,
                              double e2 = 1.0);

// Signed sigma_x coefficient of the effective two-level drive (GHz): the
// printed phi^3 blocks plus the phi^5 block, weighted by the envelope moments
// <E^3> and <E^5>.
double rabi_sigma_x_n3(const ThreeLevelReduction& red, double omega_d, double delta_cap, double phi_bar,
                       double e3 = 1.0, double e5 = 1.0);

// Population-oscillation Rabi rate Omega_3 (GHz) for a pulse with the given
// envelope: 2*|sigma_x coefficient|, with the sign of the coefficient kept so
// that Omega_3 is odd in phi_bar. On resonance P_e(t) = sin^2(pi Omega_3 t)
// and the pi-time is 1/(2 Omega_3).
double rabi_rate_n3(const ThreeLevelReduction& red, double omega_d, double delta_cap, double phi_bar,
                    const Envelope& env, double t_pulse);

// Resonant drive frequency for the n=3 sub-harmonic: the root of
// Delta + delta_3(Delta) = 0 with omega_d = (omega_eg - Delta)/3, found by
// bisection plus secant refinement to |f| < 1e-6 GHz (1 kHz). The shift is
// evaluated at the plateau value E = 1.
double solve_resonance(const ThreeLevelReduction& red, int n, double phi_bar);

// Fourier components H_k of the rescaled rotating-frame Hamiltonian
// H(tau) = sum_k e^{i k tau} H_k (dimensionless; tau = 2 omega_d t).
// Hermiticity of H requires H_{-k} = H_k^dagger.
struct FourierHamiltonian {
  std::map<int, Eigen::MatrixXcd> components;
  double omega_d = 0.0;  // GHz, used to rescale results back to energy units

  int dim() const;
  void check_hermitian(double tol = 1e-12) const;  // throws invalid_parameter
};

// Rescaled-frame components of the three-level fluxonium under an n-photon
// drive (n odd): static part at k = 0 and drive terms at k = +-(n-1)/2 and
// +-(n+1)/2 with the raising-operator part on the positive harmonics.
FourierHamiltonian subharmonic_frame_components(const ThreeLevelReduction& red, int n, double omega_d,
                                                double phi_bar, double envelope_value = 1.0);

// Floquet-Magnus effective Hamiltonian summed through `order` (1..3), scaled
// back to GHz. order 1: H_0; order 2: sum_k [H_k,H_-k]/(2k); order 3 adds the
// [[H_k,H_0],H_-k]/(2k^2) terms and the double sum over k' with weights
// 1/(4k) (1/k' + 1/(3(k'-k))). Orders above 3 are rejected.
Eigen::MatrixXcd floquet_magnus_generic(const FourierHamiltonian& fh, int order);

// Drive-induced shift of the 0-1 transition extracted from the generic
// engine: (H_eff[1,1] - H_eff[0,0]) minus the bare detuning Delta.
double generic_stark_shift(const ThreeLevelReduction& red, int n, double omega_d, double phi_bar,
                           int order = 3, double envelope_value = 1.0);

struct PowerLawFit {
  double exponent = 0.0;
  double exponent_std_error = 0.0;
  double prefactor = 0.0;  // value = prefactor * amplitude^exponent
};

// Least-squares fit of log(value) against log(amplitude). Requires >= 4
// strictly positive points.
PowerLawFit fit_power_law(const std::vector<double>& amplitudes, const std::vector<double>& values);

// Per-sub-harmonic derived quantities at one drive amplitude.
struct EffectiveDriveModel {
  int n = 3;
  double omega_d = 0.0;      // GHz, resonant drive frequency
  double delta_cap = 0.0;    // GHz, Delta = omega_eg - n*omega_d
  double delta_n = 0.0;      // GHz, drive-induced shift
  double alpha_n = 0.0;      // GHz, carried for completeness, unused
  double omega_rabi = 0.0;   // GHz, population-oscillation rate
  double phi_bar = 0.0;      // 2*pi*Phi/Phi0
  ThreeLevelReduction reduction;
};

// Solve the resonance and evaluate shift and Rabi rate for one amplitude
// (n = 3 closed forms).
EffectiveDriveModel build_drive_model(const ThreeLevelReduction& red, double amp_phi0,
                                      const Envelope& env, double t_pulse);

}  // namespace subflux
