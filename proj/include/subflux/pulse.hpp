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

#include <string>

namespace subflux {

// Normalized pulse envelope, peak value 1. The flat-top kind has Gaussian
// edges of width sigma truncated at cut*sigma with the truncation baseline
// subtracted, so E(0) = E(t_pulse) = 0 exactly and the edges join the unit
// plateau smoothly. If t_pulse < 2*cut*sigma the edges shrink to t_pulse/2
// and the plateau vanishes.
struct Envelope {
  enum class Kind { flat_top_gaussian, gaussian, rectangular };

  Kind kind = Kind::flat_top_gaussian;
  double sigma = 5.0;  // ns
  double cut = 2.5;    // edge length in units of sigma

  double value(double t, double t_pulse) const;
  double edge_length(double t_pulse) const;
  double plateau(double t_pulse) const;

  static Envelope rectangular() { return Envelope{Kind::rectangular, 0.0, 0.0}; }
  static Envelope flat_top(double sigma = 5.0, double cut = 2.5) {
    return Envelope{Kind::flat_top_gaussian, sigma, cut};
  }
};

// (1/t_pulse) * integral of E(t)^k over [0, t_pulse], adaptive quadrature to
// relative error < 1e-8. k in {1,...,8}.
double envelope_moment(const Envelope& env, double t_pulse, int k);

std::string to_string(Envelope::Kind kind);
Envelope::Kind envelope_kind_from_string(const std::string& s);

// Flux-drive description. amplitude is the peak drive in units of Phi/Phi0
// (dimensionless); the physical reduced-flux modulation is
//   phi(t) = 2*pi*amplitude * E(t) * cos(2*pi*omega_d*t + phase).
struct DrivePulse {
  double amplitude = 0.0;  // Phi/Phi0
  double omega_d = 0.0;    // GHz, ordinary frequency
  double t_pulse = 0.0;    // ns
  Envelope envelope;
  double phase = 0.0;  // rad, carrier phase

  void validate() const;
};

}  // namespace subflux
