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

#include <algorithm>
#include <cmath>

#include "subflux/calibration.hpp"
#include "subflux/circuit.hpp"
#include "subflux/effective.hpp"
#include "subflux/errors.hpp"
#include "subflux/propagation.hpp"
#include "subflux/units.hpp"

using namespace subflux;

namespace {
constexpr double kPi = 3.14159265358979323846;

TwoLevelExecutor::Params true_gate() {
  TwoLevelExecutor::Params p;
  p.n = 3;
  p.f_eg_idle = 1.332377;
  p.f_res_true = 0.4710784;  // the driven resonance, shift included
  p.t_pi_true = 200.0;
  return p;
}

CalibratedGate matching_gate(const TwoLevelExecutor::Params& p) {
  CalibratedGate g;
  g.n = p.n;
  g.omega_d = p.f_res_true;
  g.amplitude = 0.0415;
  g.t_pulse = p.t_pi_true;
  g.t_pulse_pi_2 = 0.5 * p.t_pi_true;
  g.envelope = Envelope::rectangular();
  g.f_eg_idle = p.f_eg_idle;
  // the true per-pulse frame slip: (n f_res - f_eg) * t / n, in LO units
  const double slip = kTwoPi * (p.n * p.f_res_true - p.f_eg_idle) / p.n;
  g.virtual_z_pi = std::remainder(slip * p.t_pi_true, 2.0 * kPi);
  g.virtual_z_pi_2 = std::remainder(slip * 0.5 * p.t_pi_true, 2.0 * kPi);
  g.snap_padding();
  return g;
}
}  // namespace

TEST_SUITE_BEGIN("calibration");

TEST_CASE("virtual-z quadrature") {
  CHECK(virtual_z_phase([](double) { return 0.0; }, 120.0, 3) == 0.0);
  // constant shift: delta * t * 2pi / n exactly (wrapped)
  const double delta = 1.1e-3;  // GHz
  const double t = 150.0;
  const double expect = std::remainder(kTwoPi * delta * t / 3.0, 2.0 * kPi);
  CHECK(virtual_z_phase([&](double) { return delta; }, t, 3) ==
        doctest::Approx(expect).epsilon(1e-9));

  // a flat-top trajectory lands between the plateau-only and full-duration
  // constant-shift bounds
  const Envelope env = Envelope::flat_top();
  const auto traj = [&](double tt) { return delta * std::pow(env.value(tt, t), 2); };
  const double v = virtual_z_phase(traj, t, 3);
  const double lower = kTwoPi * delta * env.plateau(t) / 3.0;
  const double upper = kTwoPi * delta * t / 3.0;
  CHECK(v > lower);
  CHECK(v < upper);
}

TEST_CASE("two-level executor sanity") {
  auto p = true_gate();
  TwoLevelExecutor ex(p);
  const auto g = matching_gate(p);
  SUBCASE("pi pulse inverts the population") {
    std::vector<GateOp> ops = {
        GateOp::Pulse(g.omega_d, g.amplitude, g.t_pulse, 0.0, g.envelope)};
    CHECK(ex.run(ops, 0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("shot sampling is deterministic in the seed") {
    std::vector<GateOp> ops = {
        GateOp::Pulse(g.omega_d, g.amplitude, 0.5 * g.t_pulse, 0.0, g.envelope)};
    const double a = ex.run(ops, 512, 77);
    const double b = ex.run(ops, 512, 77);
    const double c = ex.run(ops, 512, 78);
    CHECK(a == b);
    CHECK(a != doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("grid legality of the emitted gate") {
  CalibratedGate g = matching_gate(true_gate());
  g.t_pulse = 123.4567;
  g.t_pulse_pi_2 = 61.72;
  g.snap_padding();
  const double total_pi = g.t_pulse + g.padding;
  const double total_pi2 = g.t_pulse_pi_2 + g.padding_pi_2;
  CHECK(std::abs(total_pi / g.sampling_time - std::round(total_pi / g.sampling_time)) < 1e-9);
  CHECK(std::abs(total_pi2 / g.sampling_time - std::round(total_pi2 / g.sampling_time)) < 1e-9);
}

TEST_CASE("fine calibration: perfect gate is a fixed point") {
  auto p = true_gate();
  TwoLevelExecutor ex(p);
  const auto g0 = matching_gate(p);
  FineCalibrationOptions opts;
  opts.shots = 0;  // noise-free fixed-point check
  const auto out = fine_calibrate(ex, g0, opts);
  CHECK(out.converged);
  CHECK(std::abs(out.gate.t_pulse - g0.t_pulse) / g0.t_pulse < 2e-4);
  CHECK(std::abs(out.gate.omega_d - g0.omega_d) < 1e-6);
  CHECK(std::abs(std::remainder(out.gate.virtual_z_pi - g0.virtual_z_pi, 2.0 * kPi)) < 5e-3);
  CHECK(std::abs(std::remainder(out.gate.virtual_z_pi_2 - g0.virtual_z_pi_2, 2.0 * kPi)) < 5e-3);
}

TEST_CASE("fine calibration corrects injected faults") {
  auto p = true_gate();
  FineCalibrationOptions opts;
  opts.shots = 1024;
  opts.seed = 5;

  SUBCASE("one percent over-rotation") {
    p.over_rotation = 0.01;
    TwoLevelExecutor ex(p);
    const auto out = fine_calibrate(ex, matching_gate(p), opts);
    CHECK(out.rounds <= 3);
    // residual rotation-angle error below 0.02 %
    const double resid = out.gate.t_pulse * (1.0 + p.over_rotation) / p.t_pi_true - 1.0;
    CHECK(std::abs(resid) < 2e-4);
  }
  SUBCASE("twenty kilohertz drive detuning") {
    TwoLevelExecutor ex(p);
    CalibratedGate g = matching_gate(p);
    g.omega_d += 20e-6;  // GHz
    const auto out = fine_calibrate(ex, g, opts);
    CHECK(out.rounds <= 3);
    CHECK(std::abs(out.gate.omega_d - p.f_res_true) < 1e-6);
  }
  SUBCASE("fifty milliradian phase errors") {
    p.extra_phase_pi = 0.05;
    p.extra_phase_pi_2 = -0.05;
    TwoLevelExecutor ex(p);
    const auto g0 = matching_gate(p);
    const auto out = fine_calibrate(ex, g0, opts);
    CHECK(out.rounds <= 3);
    // the calibrated virtual-Z must absorb the injected per-gate faults
    const double res_pi =
        std::remainder(out.gate.virtual_z_pi - (g0.virtual_z_pi - p.extra_phase_pi), 2.0 * kPi);
    const double res_pi2 =
        std::remainder(out.gate.virtual_z_pi_2 - (g0.virtual_z_pi_2 - p.extra_phase_pi_2), 2.0 * kPi);
    CHECK(std::abs(res_pi) < 5e-3);
    CHECK(std::abs(res_pi2) < 5e-3);
  }
}

TEST_CASE("error amplification frequency is proportional to the injected error") {
  // the oscillation extracted from the N-train grows linearly in the
  // rotation-angle error over two decades
  auto p = true_gate();
  std::vector<double> eps = {1e-4, 1e-3, 1e-2};
  std::vector<double> measured;
  for (double e : eps) {
    p.over_rotation = e / kPi;  // per-gate angle error e rad
    TwoLevelExecutor ex(p);
    const auto g = matching_gate(p);
    // single-N probe: X90 + 16 X180
    std::vector<GateOp> ops;
    ops.push_back(GateOp::Pulse(g.omega_d, g.amplitude, g.t_pulse_pi_2, 0.0, g.envelope));
    for (int i = 0; i < 16; ++i)
      ops.push_back(GateOp::Pulse(g.omega_d, g.amplitude, g.t_pulse, 0.0, g.envelope));
    const double pe = ex.run(ops, 0, 1);
    measured.push_back(std::asin(std::clamp(2.0 * pe - 1.0, -1.0, 1.0)));
  }
  CHECK(measured[1] / measured[0] == doctest::Approx(10.0).epsilon(0.1));
  CHECK(measured[2] / measured[1] == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("rough calibration against the synthetic executor, n = 3 and n = 1") {
  for (int n : {3, 1}) {
    auto p = true_gate();
    p.n = n;
    if (n == 1) p.f_res_true = p.f_eg_idle;  // plain resonant drive
    TwoLevelExecutor ex(p);
    CalibrationOptions opts;
    opts.shots = 1024;
    opts.seed = 3;
    const auto out = rough_calibrate(ex, n, 0.0415, p.f_eg_idle, Envelope::rectangular(), opts);
    CHECK(out.converged);
    CHECK(std::abs(out.gate.omega_d - p.f_res_true) < 5e-5);  // within the Rabi linewidth
    CHECK(out.gate.t_pulse == doctest::Approx(p.t_pi_true).epsilon(0.05));
  }
}

TEST_CASE("rough calibration repeats within shot noise across seeds") {
  auto p = true_gate();
  TwoLevelExecutor ex(p);
  CalibrationOptions a, b;
  a.shots = b.shots = 1024;
  a.seed = 3;
  b.seed = 17;
  const auto ra = rough_calibrate(ex, 3, 0.0415, p.f_eg_idle, Envelope::rectangular(), a);
  const auto rb = rough_calibrate(ex, 3, 0.0415, p.f_eg_idle, Envelope::rectangular(), b);
  CHECK(std::abs(ra.gate.omega_d - rb.gate.omega_d) < 5e-5);
  CHECK(ra.gate.t_pulse == doctest::Approx(rb.gate.t_pulse).epsilon(0.05));
}

TEST_CASE("rough calibration against the time-domain executor matches the optimizer") {
  const auto eigs = solve_circuit(CircuitParams{1.69, 0.68, 1.07, kPi});
  PropagationExecutor ex(eigs, 0.1);
  CalibrationOptions opts;
  opts.shots = 0;  // exact readout keeps this test tight and fast
  const auto out = rough_calibrate(ex, 3, 0.0415, eigs.omega_eg(), Envelope::rectangular(), opts);
  const auto res = find_subharmonic_resonance(eigs, 3, 0.0415);
  CHECK(std::abs(out.gate.omega_d - res.omega_d) < 5e-5);  // 50 kHz
  CHECK(out.gate.t_pulse == doctest::Approx(res.t_pi).epsilon(0.03));
  CHECK(std::abs(out.gate.f_eg_idle - eigs.omega_eg()) < 2e-4);

  // X -> Y is a pulse-phase change of pi/(2n): the x90-y180-x90 Ramsey comes
  // back bright only with the correct quadrature phase
  CalibratedGate g = out.gate;
  PropagationExecutor ex2(eigs, 0.1);
  const auto seq = [&](double y_phase_offset) {
    std::vector<GateOp> ops;
    double frame = 0.0;
    ops.push_back(GateOp::Pulse(g.omega_d, g.amplitude, g.t_pulse_pi_2, frame, g.envelope));
    frame += g.virtual_z_pi_2;
    ops.push_back(
        GateOp::Pulse(g.omega_d, g.amplitude, g.t_pulse, frame + y_phase_offset, g.envelope));
    frame += g.virtual_z_pi;
    ops.push_back(GateOp::Pulse(g.omega_d, g.amplitude, g.t_pulse_pi_2, frame, g.envelope));
    return ex2.run(ops, 0, 1);
  };
  const double bright = seq(kPi / (2.0 * g.n));
  const double off = seq(kPi / 2.0);  // the on-resonance convention is wrong here
  CHECK(bright > 0.93);
  CHECK(off < bright - 0.1);
}

TEST_CASE("rough calibration reports an amplitude out of range") {
  auto p = true_gate();
  p.t_pi_true = 1e9;  // effectively no drive
  TwoLevelExecutor ex(p);
  CalibrationOptions opts;
  opts.shots = 0;
  CHECK_THROWS_AS(rough_calibrate(ex, 3, 1e-6, p.f_eg_idle, Envelope::rectangular(), opts),
                  convergence_error);
}

TEST_SUITE_END();
