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

#include <vector>

#include "subflux/circuit.hpp"

namespace subflux {

// Skin-effect attenuation of the flux line: the amplitude arriving at the
// qubit is phi_source / (1 + a0 * sqrt(f in Hz)).
struct TransferModel {
  double a0 = 0.0;  // Hz^(-1/2)

  void validate() const;  // a0 >= 0
};

double attenuate(double phi_source, double f_d_ghz, const TransferModel& model);

// Inverse of attenuate at fixed frequency.
double deattenuate(double phi_qubit, double f_d_ghz, const TransferModel& model);

struct TransferFitPoint {
  double amplitude_source = 0.0;  // Phi/Phi0 at the source
  double omega_d = 0.0;           // GHz, measured resonant drive frequency
};

struct TransferFitResult {
  TransferModel model;
  double a0_std_error = 0.0;
  double rms_residual = 0.0;  // GHz
  int evaluations = 0;
};

// Least-squares fit of a0 against measured 3-photon resonance frequencies:
// residuals are solve_resonance(attenuate(amplitude, f_meas)) - f_meas. The
// measured frequency is used for the attenuation factor, which makes the fit
// an exact inverse of the forward synthesis. Needs >= 3 points.
TransferFitResult fit_a0(const std::vector<TransferFitPoint>& data, const ThreeLevelReduction& red);

enum class DbMode { amplitude, power };

// power dB = 10*log10(power ratio); an amplitude ratio enters as its square,
// i.e. 20*log10(amplitude ratio).
double ratio_to_db(double ratio, DbMode mode);
double db_to_ratio(double db, DbMode mode);

}  // namespace subflux
