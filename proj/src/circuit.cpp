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

#include "subflux/circuit.hpp"

#include <cmath>
#include <string>

#include "subflux/errors.hpp"

namespace subflux {

void CircuitParams::validate() const {
  if (!(e_j > 0.0) || !(e_c > 0.0) || !(e_l > 0.0)) {
    throw invalid_parameter("circuit energies must be positive, got E_J=" + std::to_string(e_j) +
                            " E_C=" + std::to_string(e_c) + " E_L=" + std::to_string(e_l));
  }
  if (!std::isfinite(phi_ext)) {
    throw invalid_parameter("phi_ext must be finite");
  }
}

Eigen::MatrixXd phase_operator(const CircuitParams& params, int basis_dim) {
  const double phi_zpf = std::pow(8.0 * params.e_c / params.e_l, 0.25) / std::sqrt(2.0);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(basis_dim, basis_dim);
  for (int m = 1; m < basis_dim; ++m) {
    const double v = phi_zpf * std::sqrt(static_cast<double>(m));
    phi(m - 1, m) = v;
    phi(m, m - 1) = v;
  }
  return phi;
}

Eigen::MatrixXd build_hamiltonian(const CircuitParams& params, int basis_dim) {
  params.validate();
  if (basis_dim < 20) {
    throw invalid_parameter("basis_dim must be >= 20, got " + std::to_string(basis_dim));
  }
  const int d = basis_dim;
  const double n_zpf = std::pow(params.e_l / (8.0 * params.e_c), 0.25) / std::sqrt(2.0);

  // n = i*n_zpf*(a^dag - a); n^2 is real symmetric.
  Eigen::MatrixXd ladder_diff = Eigen::MatrixXd::Zero(d, d);  // a^dag - a
  for (int m = 1; m < d; ++m) {
    const double v = std::sqrt(static_cast<double>(m));
    ladder_diff(m, m - 1) = v;
    ladder_diff(m - 1, m) = -v;
  }
  const Eigen::MatrixXd n_sq = -(n_zpf * n_zpf) * (ladder_diff * ladder_diff);

  const Eigen::MatrixXd phi = phase_operator(params, d);
  // cos(phi) = (exp(i phi) + exp(-i phi))/2, evaluated exactly in the
  // truncated basis via the spectral decomposition of phi.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi);
  const Eigen::VectorXd cosw = es.eigenvalues().array().cos();
  const Eigen::MatrixXd cos_phi = es.eigenvectors() * cosw.asDiagonal() * es.eigenvectors().transpose();

  Eigen::MatrixXd shifted = phi - params.phi_ext * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd h = 4.0 * params.e_c * n_sq + 0.5 * params.e_l * shifted * shifted - params.e_j * cos_phi;
  // symmetrize away rounding noise
  h = 0.5 * (h + h.transpose()).eval();
  return h;
}

EigenSystem diagonalize(const Eigen::MatrixXd& h, const Eigen::MatrixXd& phase_op, int n_levels,
                        const CircuitParams& params) {
  const int d = static_cast<int>(h.rows());
  if (n_levels < 1 || n_levels > d / 3) {
    throw invalid_parameter("n_levels must satisfy 1 <= n_levels <= basis_dim/3");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) {
    throw convergence_error("eigensolver failed on circuit Hamiltonian");
  }
  EigenSystem out;
  out.params = params;
  out.basis_dim = d;
  out.n_levels = n_levels;
  out.energies = es.eigenvalues().head(n_levels);
  if (out.energies[1] - out.energies[0] < 1e-9) {
    throw convergence_error("degenerate lowest levels: E1-E0 = " +
                            std::to_string(out.energies[1] - out.energies[0]) + " GHz");
  }

  Eigen::MatrixXd vecs = es.eigenvectors().leftCols(n_levels);
  // Fix eigenvector signs so <m-1|phi|m> >= 0, chained from the ground state.
  for (int m = 1; m < n_levels; ++m) {
    const double el = vecs.col(m - 1).dot(phase_op * vecs.col(m));
    if (el < 0.0) vecs.col(m) *= -1.0;
  }
  out.phase_elements = vecs.transpose() * phase_op * vecs;
  out.phase_elements = 0.5 * (out.phase_elements + out.phase_elements.transpose()).eval();
  return out;
}

EigenSystem solve_circuit(const CircuitParams& params, int basis_dim, int n_levels) {
  const Eigen::MatrixXd h = build_hamiltonian(params, basis_dim);
  const Eigen::MatrixXd phi = phase_operator(params, basis_dim);
  return diagonalize(h, phi, n_levels, params);
}

ThreeLevelReduction three_level_reduction(const EigenSystem& eigs) {
  if (eigs.n_levels < 3) {
    throw invalid_parameter("three_level_reduction needs n_levels >= 3");
  }
  ThreeLevelReduction red;
  red.omega_eg = eigs.transition(0, 1);
  red.alpha = eigs.anharmonicity();
  red.beta_1 = eigs.params.e_l * eigs.phase_elements(0, 1);
  red.beta_2 = eigs.params.e_l * eigs.phase_elements(1, 2) / std::sqrt(2.0) - red.beta_1;
  return red;
}

std::vector<FluxSweepRow> flux_sweep(const CircuitParams& params, const std::vector<double>& phi_grid,
                                     int n_levels, int basis_dim) {
  if (phi_grid.empty()) {
    throw invalid_parameter("flux_sweep needs a non-empty phi grid");
  }
  std::vector<FluxSweepRow> rows;
  rows.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    CircuitParams p = params;
    p.phi_ext = phi;
    const EigenSystem eigs = solve_circuit(p, basis_dim, std::max(3, n_levels));
    rows.push_back({phi, eigs.transition(0, 1), eigs.transition(1, 2)});
  }
  return rows;
}

}  // namespace subflux
