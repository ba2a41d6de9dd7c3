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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "subflux/circuit.hpp"
#include "subflux/pulse.hpp"

namespace subflux {

// Phase conventions: with the local oscillator at omega_eg/n, a qubit-frame
// z-rotation of theta corresponds to a pulse-phase change of theta/n. All
// virtual-Z angles in this module are local-oscillator (pulse-phase)
// referenced; translating an X drive into a Y drive is a pulse-phase change
// of pi/(2n).

// Fully parameterized sub-harmonic gate. t_pulse holds the pi-pulse duration
// and t_pulse_pi_2 the pi/2 duration (the flat-top edges make it slightly
// different from t_pulse/2). Durations are continuous; `padding` and
// `padding_pi_2` fill each pulse with zero amplitude up to the next multiple
// of the sampling time.
struct CalibratedGate {
  int n = 3;
  double omega_d = 0.0;        // GHz
  double amplitude = 0.0;      // Phi/Phi0, source-referred
  double t_pulse = 0.0;        // ns, pi pulse
  double t_pulse_pi_2 = 0.0;   // ns, pi/2 pulse
  Envelope envelope;
  double virtual_z_pi = 0.0;    // rad, LO-referenced frame correction per pi pulse
  double virtual_z_pi_2 = 0.0;  // rad, per pi/2 pulse
  double padding = 0.0;         // ns
  double padding_pi_2 = 0.0;    // ns
  double f_eg_idle = 0.0;       // GHz, Ramsey-calibrated idle frequency
  double sampling_time = 0.5;   // ns

  void snap_padding();  // recompute paddings for the sampling grid
};

// One element of an executed sequence: a flux pulse at the shared local
// oscillator frequency, or an idle delay. Virtual-Z bookkeeping is folded
// into the pulse phases by the sequence builders before execution.
struct GateOp {
  enum class Kind { pulse, delay };
  Kind kind = Kind::delay;
  double omega_d = 0.0;    // GHz
  double amplitude = 0.0;  // Phi/Phi0
  double t_pulse = 0.0;    // ns
  double phase = 0.0;      // rad, relative to the coherent LO
  Envelope envelope;
  double duration = 0.0;  // ns, for delays (also trailing pad after pulses)

  static GateOp Pulse(double omega_d, double amplitude, double t_pulse, double phase,
                      const Envelope& env, double pad = 0.0);
  static GateOp Delay(double duration);
};

// Measurement backend for calibration: runs a gate/delay sequence from |g>
// and returns an estimate of P(|e>). shots <= 0 yields the exact population;
// otherwise a binomial estimate with the given seed (deterministic).
class ExperimentExecutor {
 public:
  virtual ~ExperimentExecutor() = default;
  virtual double run(const std::vector<GateOp>& ops, int shots, std::uint64_t seed) = 0;
};

// The real thing: 20-level time-domain propagation with a phase-coherent
// local oscillator across the sequence.
class PropagationExecutor : public ExperimentExecutor {
 public:
  PropagationExecutor(EigenSystem eigs, double dt = 0.1);
  double run(const std::vector<GateOp>& ops, int shots, std::uint64_t seed) override;

 private:
  EigenSystem eigs_;
  double dt_;
};

// Synthetic two-level executor with exactly known gate parameters and
// injectable faults; the fault-injection oracle for fine_calibrate.
class TwoLevelExecutor : public ExperimentExecutor {
 public:
  struct Params {
    int n = 3;
    double f_eg_idle = 1.332;  // GHz, idle qubit frequency
    double f_res_true = 0.0;   // GHz, true driven resonance omega_d*; the
                               // frame slip per pulse follows from
                               // n*f_res_true - f_eg_idle
    double t_pi_true = 200.0;  // ns, true pi time at the working amplitude
    // injected faults
    double over_rotation = 0.0;   // fractional rotation-angle error
    double extra_phase_pi = 0.0;  // rad, LO units, added per pi pulse
    double extra_phase_pi_2 = 0.0;
  };

  explicit TwoLevelExecutor(Params p) : p_(p) {}
  double run(const std::vector<GateOp>& ops, int shots, std::uint64_t seed) override;
  Params& params() { return p_; }

 private:
  Params p_;
};

// Accumulated LO-frame phase for a pulse with a time-dependent frequency
// shift: (1/n) * integral of 2*pi*delta(t) dt with delta in GHz, wrapped to
// (-pi, pi]. Used to seed the virtual-Z corrections from the effective
// model's instantaneous-envelope shift.
double virtual_z_phase(const std::function<double(double)>& delta_ghz_of_t, double t_pulse, int n);

struct CalibrationOptions {
  int shots = 1024;          // <= 0: noise-free executor readout
  std::uint64_t seed = 7;
  double f_window = 0.0;     // GHz; 0 = auto
  int scan_points = 21;
  int max_rabi_rounds = 6;
  double sampling_time = 0.5;  // ns
};

struct ScanRecord {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct CalibrationResult {
  CalibratedGate gate;
  std::vector<ScanRecord> scans;
  int rounds = 0;
  bool converged = false;
};

// Rough tune-up: Rabi time sweep, Rabi frequency sweep (repeated until the
// drive frequency converges), Ramsey idle-frequency calibration, and the
// pi/2 / pi phase calibrations via Ramsey sequences with a swept virtual-Z.
CalibrationResult rough_calibrate(ExperimentExecutor& executor, int n, double amplitude,
                                  double f_eg_estimate, const Envelope& env,
                                  const CalibrationOptions& opts = {});

struct FineCalibrationOptions {
  std::vector<int> n_schedule = {1, 2, 4, 8, 16};
  int max_rounds = 10;
  double angle_tol = 1e-4;  // rad, per-gate rotation-angle error
  double freq_tol = 1e-6;   // GHz (1 kHz)
  double phase_tol = 1e-3;  // rad
  int shots = 1024;         // <= 0: noise-free
  std::uint64_t seed = 11;
};

// Error-amplification fine tune-up. Per round: pi and pi/2 rotation-angle
// trains (duration corrected on the continuous grid), a drive-frequency
// Rabi-lineshape asymmetry probe with odd pulse-length multipliers, then the
// phase trains for the pi/2 and pi virtual-Z corrections. Stops when every
// measured error is inside its tolerance; reports non-convergence with the
// error trace if corrections diverge.
CalibrationResult fine_calibrate(ExperimentExecutor& executor, const CalibratedGate& gate,
                                 const FineCalibrationOptions& opts = {});

}  // namespace subflux
