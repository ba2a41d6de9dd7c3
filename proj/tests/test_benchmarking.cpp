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

#include <doctest.h>

#include <cmath>
#include <complex>

#include "subflux/benchmarking.hpp"
#include "subflux/errors.hpp"
#include "subflux/noise.hpp"

using namespace subflux;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE_BEGIN("benchmarking");

TEST_CASE("clifford compilation closes the 24-element group at 1.875") {
  const auto table = compile_cliffords();
  CHECK(table.mean_length() == doctest::Approx(1.875).epsilon(1e-15));

  // identity decomposes as the single I generator
  const int id = table.find(Eigen::Matrix2cd::Identity());
  CHECK(id >= 0);
  CHECK(table.decomposition(id).length == 1);
  CHECK(table.decomposition(id).generators[0] == 0);

  // Hadamard-like element: X_pi then Y_pi/2 up to phase, length 2
  const Eigen::Matrix2cd h_like = GateSet::generator_unitary(7) * GateSet::generator_unitary(1);
  const int h_idx = table.find(h_like);
  CHECK(h_idx >= 0);
  CHECK(table.decomposition(h_idx).length == 2);

  // group closure: every product of two Cliffords is a Clifford, and the
  // product table matches matrix multiplication
  for (int a = 0; a < CliffordTable::kGroupSize; ++a) {
    for (int b = 0; b < CliffordTable::kGroupSize; ++b) {
      const int p = table.product(a, b);
      CHECK(p >= 0);
      CHECK(p < CliffordTable::kGroupSize);
      CHECK(table.find(table.unitary(a) * table.unitary(b)) == p);
    }
    const int inv = table.inverse(a);
    CHECK(table.product(a, inv) == table.find(Eigen::Matrix2cd::Identity()));
  }
}

TEST_CASE("noise channel is trace preserving and decays coherences correctly") {
  NoiseChannel noise{168.0, 96.55, 64.0};
  Eigen::Matrix2cd rho;
  rho << 0.4, std::complex<double>(0.21, -0.13), std::complex<double>(0.21, 0.13), 0.6;
  const std::complex<double> coh0 = rho(0, 1);
  const double pop0 = rho(1, 1).real();
  const int k = 50;
  for (int i = 0; i < k; ++i) {
    apply_gate_noise(rho, noise);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(rho.trace().imag()) < 1e-15);
    // positivity of the 2x2 state
    const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
    CHECK(det > -1e-12);
  }
  const double t = k * noise.t_g * 1e-3;  // us
  const double expected_coh = std::exp(-t * (0.5 / noise.t1 + 1.0 / noise.t_phi));
  CHECK(std::abs(rho(0, 1)) ==
        doctest::Approx(std::abs(coh0) * expected_coh).epsilon(1e-10));
  CHECK(rho(1, 1).real() == doctest::Approx(pop0 * std::exp(-t / noise.t1)).epsilon(1e-10));
}

TEST_CASE("noise-free benchmarking recovers the ground state exactly") {
  const auto table = compile_cliffords();
  RbOptions opts;
  opts.lengths = {1, 8, 64};
  opts.n_sequences = 10;
  opts.seed = 3;
  const auto decay = run_rb(table, NoiseChannel::noiseless(), opts);
  for (const auto& pt : decay) {
    CHECK(std::abs(pt.mean - 1.0) < 1e-10);
  }
}

TEST_CASE("synthetic exponential decay is fitted exactly") {
  std::vector<RbPoint> table;
  const double p_true = 0.999, a = 0.47, b = 0.5;
  for (int m : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
    table.push_back({m, a * std::pow(p_true, m) + b, 1e-4});
  }
  const auto fit = fit_rb(table);
  CHECK(fit.p == doctest::Approx(p_true).epsilon(1e-6));
  CHECK(fit.a == doctest::Approx(a).epsilon(1e-5));
  CHECK(fit.b == doctest::Approx(b).epsilon(1e-5));
}

TEST_CASE("filtered-device channel reproduces the coherence limit") {
  const auto table = compile_cliffords();
  const double t_phi = t_phi_from_t2(168.0, 75.0);
  CHECK(t_phi == doctest::Approx(96.55).epsilon(1e-3));
  NoiseChannel noise{168.0, t_phi, 64.0};
  RbOptions opts;
  opts.seed = 12;
  const auto decay = run_rb(table, noise, opts);
  const auto fit = fit_rb(decay);
  const double limit = coherence_limit(64.0, 168.0, t_phi);
  CHECK(std::abs(fit.f_avg_generator - limit) < 5e-5);  // 0.005 % absolute
  // and the fidelity lands in the reported band
  CHECK(fit.f_avg_generator > 0.999);
  CHECK(fit.f_avg_generator < 0.9998);
}

TEST_CASE("doubling the gate time doubles the per-Clifford error") {
  const auto table = compile_cliffords();
  const double t_phi = t_phi_from_t2(168.0, 75.0);
  RbOptions opts;
  opts.seed = 5;
  opts.lengths = {1, 4, 16, 64, 256};
  const auto fit1 = fit_rb(run_rb(table, NoiseChannel{168.0, t_phi, 64.0}, opts));
  const auto fit2 = fit_rb(run_rb(table, NoiseChannel{168.0, t_phi, 128.0}, opts));
  CHECK(fit2.r_clifford / fit1.r_clifford == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("interleaved identity reports the per-generator fidelity") {
  const auto table = compile_cliffords();
  const double t_phi = t_phi_from_t2(168.0, 75.0);
  NoiseChannel noise{168.0, t_phi, 64.0};
  RbOptions ref;
  ref.seed = 21;
  const auto fit_ref = fit_rb(run_rb(table, noise, ref));
  RbOptions inter = ref;
  inter.interleaved_generator = 0;  // the identity gate, one channel application
  const auto fit_int = fit_rb(run_rb(table, noise, inter));
  const double f_gate = interleaved_fidelity(fit_ref.p, fit_int.p);
  CHECK(f_gate == doctest::Approx(fit_ref.f_avg_generator).epsilon(2e-4));
  // ratio formula sanity: equal decays mean a perfect interleaved gate
  CHECK(interleaved_fidelity(0.995, 0.995) == doctest::Approx(1.0));
}

TEST_CASE("coherence limit formula") {
  const double t_phi_lp = t_phi_from_t2(168.0, 75.0);
  CHECK(coherence_limit(64.0, 168.0, t_phi_lp) == doctest::Approx(0.99965).epsilon(2e-5 / 0.99965));
  const double t_phi_uf = t_phi_from_t2(31.0, 22.0);
  CHECK(coherence_limit(64.0, 31.0, t_phi_uf) == doctest::Approx(0.9987).epsilon(2e-4 / 0.9987));
  CHECK(coherence_limit(1e-6, 31.0, t_phi_uf) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(coherence_limit(-1.0, 31.0, 30.0), invalid_parameter);
}

TEST_SUITE_END();
