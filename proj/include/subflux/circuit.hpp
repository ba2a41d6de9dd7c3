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
#include <vector>

namespace subflux {

// Fluxonium circuit energies as ordinary frequencies (E/h, GHz) and the
// external reduced flux phi = 2*pi*Phi/Phi0 in radians. The half-flux sweet
// spot is phi_ext = pi.
struct CircuitParams {
  double e_j = 1.69;
  double e_c = 0.68;
  double e_l = 1.07;
  double phi_ext = 3.14159265358979323846;

  void validate() const;  // throws invalid_parameter
};

// Truncated energy eigenbasis of the static circuit: absolute eigenenergies
// (GHz, ascending) and the phase-operator matrix elements <m|phi|m'> in the
// retained basis. Eigenvector signs are fixed so that <m-1|phi|m> >= 0.
struct EigenSystem {
  CircuitParams params;
  int basis_dim = 0;
  int n_levels = 0;
  Eigen::VectorXd energies;        // GHz, absolute
  Eigen::MatrixXd phase_elements;  // n_levels x n_levels, dimensionless

  double transition(int lower, int upper) const { return energies[upper] - energies[lower]; }
  double omega_eg() const { return transition(0, 1); }
  double anharmonicity() const { return transition(1, 2) - transition(0, 1); }
};

// Three-level drive parameterization. beta_1 is the coefficient of the ladder
// term (b + b^dag) and beta_2 the coefficient of the cubic ladder term
// (b^dag b b + b^dag b^dag b), both in GHz:
//   beta_1 = E_L <0|phi|1>
//   beta_2 = E_L <1|phi|2> / sqrt(2) - beta_1
// so that the two-term expansion reproduces both the 0-1 and the 1-2 matrix
// elements of E_L*phi. With the eigenvector sign convention beta_1 > 0 and
// beta_2 carries a physical sign; for this circuit beta_2 < 0, which makes
// the drive-induced frequency shift positive, as the time-domain propagation
// confirms.
struct ThreeLevelReduction {
  double omega_eg = 0.0;  // GHz
  double alpha = 0.0;     // GHz, signed anharmonicity
  double beta_1 = 0.0;    // GHz
  double beta_2 = 0.0;    // GHz
};

// H/h in the harmonic-oscillator basis of the E_L/E_C oscillator (GHz):
//   4 E_C n^2 + E_L/2 (phi - phi_ext)^2 - E_J cos(phi)
// cos(phi) is evaluated through the spectral decomposition of the truncated
// phi matrix, i.e. the matrix exponentials exp(+i phi) and exp(-i phi), not a
// Taylor series. Requires basis_dim >= 20.
Eigen::MatrixXd build_hamiltonian(const CircuitParams& params, int basis_dim);

// The phase operator phi in the same oscillator basis.
Eigen::MatrixXd phase_operator(const CircuitParams& params, int basis_dim);

// Diagonalize a real-symmetric Hamiltonian and retain the n_levels lowest
// eigenstates. phase_op must be expressed in the same basis as h.
// Requires n_levels <= basis_dim/3 so the retained levels are converged.
EigenSystem diagonalize(const Eigen::MatrixXd& h, const Eigen::MatrixXd& phase_op, int n_levels,
                        const CircuitParams& params);

// build_hamiltonian + diagonalize with the default truncation.
EigenSystem solve_circuit(const CircuitParams& params, int basis_dim = 80, int n_levels = 20);

ThreeLevelReduction three_level_reduction(const EigenSystem& eigs);

struct FluxSweepRow {
  double phi_ext;  // rad
  double f_ge;     // GHz
  double f_ef;     // GHz
};

std::vector<FluxSweepRow> flux_sweep(const CircuitParams& params, const std::vector<double>& phi_grid,
                                     int n_levels = 3, int basis_dim = 80);

}  // namespace subflux
