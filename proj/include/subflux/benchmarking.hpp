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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subflux {

// The nine generators {I, X+-pi, Y+-pi, X+-pi/2, Y+-pi/2} with a common gate
// duration. Their minimal-length products generate the 24 single-qubit
// Cliffords at 1.875 generators per Clifford on average.
struct GateSet {
  double t_g = 64.0;  // ns
  static constexpr int kNumGenerators = 9;
  static const char* generator_name(int g);
  static Eigen::Matrix2cd generator_unitary(int g);
};

struct CliffordDecomposition {
  std::array<int, 3> generators{};  // indices into the gate set
  int length = 0;
};

class CliffordTable {
 public:
  static constexpr int kGroupSize = 24;

  const CliffordDecomposition& decomposition(int c) const { return decomp_[c]; }
  const Eigen::Matrix2cd& unitary(int c) const { return unitary_[c]; }
  int product(int a, int b) const { return product_(a, b); }  // index of C_a * C_b
  int inverse(int c) const { return inverse_[c]; }
  double mean_length() const;
  // Index of the Clifford equal to the given unitary up to global phase, or
  // -1 when it is not a Clifford.
  int find(const Eigen::Matrix2cd& u) const;

 private:
  friend CliffordTable compile_cliffords(const GateSet&);
  std::array<CliffordDecomposition, kGroupSize> decomp_{};
  std::array<Eigen::Matrix2cd, kGroupSize> unitary_{};
  Eigen::Matrix<int, kGroupSize, kGroupSize> product_;
  std::array<int, kGroupSize> inverse_{};
  std::array<std::array<int, 9>, kGroupSize> keys_{};
};

// Exhaustive minimal-length search over generator products (ties broken by
// lexicographic generator order), plus the group product/inverse tables.
CliffordTable compile_cliffords(const GateSet& gs = GateSet{});

// Per-gate decoherence channel: amplitude damping with p1 = 1 - exp(-t_g/T1)
// and pure Z dephasing calibrated so coherences decay by exp(-t_g/T_phi).
struct NoiseChannel {
  double t1 = 0.0;     // us
  double t_phi = 0.0;  // us
  double t_g = 64.0;   // ns

  double p1() const;
  double p_phi() const;
  void validate() const;

  static NoiseChannel noiseless(double t_g_ns = 64.0) { return {1e18, 1e18, t_g_ns}; }
};

// Apply one generator worth of noise (amplitude damping then dephasing) to a
// 2x2 density matrix, in place.
void apply_gate_noise(Eigen::Matrix2cd& rho, const NoiseChannel& noise);

struct RbPoint {
  int length = 0;        // number of random Cliffords m
  double mean = 0.0;     // ground-state population, averaged over sequences
  double stderr_ = 0.0;  // standard error over sequences
};

struct RbOptions {
  std::vector<int> lengths = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  int n_sequences = 30;
  std::optional<int> interleaved_generator;  // gate-set index
  std::uint64_t seed = 1;
};

// Standard / interleaved randomized benchmarking on a single-qubit density
// matrix: per length, sample uniform Cliffords (interleaving the target gate
// when set), append the recovery Clifford, apply the noise channel once per
// generator, and record the ground-state population. Deterministic given the
// seed: sequence s of length index i uses a seed derived from (seed, i, s).
std::vector<RbPoint> run_rb(const CliffordTable& table, const NoiseChannel& noise,
                            const RbOptions& opts);

struct RbFit {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;                   // depolarizing parameter per Clifford
  double p_std_error = 0.0;
  double r_clifford = 0.0;          // (1-p)(d-1)/d
  double f_avg_clifford = 0.0;      // 1 - r_clifford
  double f_avg_generator = 0.0;     // via the 1.875 generators/Clifford ratio
};

// Least-squares fit of A p^m + B to the decay table (d = 2).
RbFit fit_rb(const std::vector<RbPoint>& table, double generators_per_clifford = 1.875);

// Interleaved-RB gate fidelity from the reference and interleaved decays.
double interleaved_fidelity(double p_reference, double p_interleaved, int d = 2);

// F = 1 - (t_g/3)(1/T_phi + 1/T1).
double coherence_limit(double t_g_ns, double t1_us, double t_phi_us);

}  // namespace subflux
