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

#include <cmath>

namespace subflux {

// Domain unit convention: all public energies and frequencies are ordinary
// frequencies in GHz (E/h, omega/2pi), times are in ns. Time propagation
// converts to angular units through the single factor kTwoPi below; CODATA
// constants are used only by the noise-budget formulas, which work in SI.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

namespace si {
inline constexpr double kPlanck = 6.62607015e-34;             // J/Hz (exact)
inline constexpr double kHbar = kPlanck / kTwoPi;             // J s
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K (exact)
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C (exact)
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb
// Superconducting resistance quantum R_Q = h/(2e)^2.
inline constexpr double kResistanceQuantum =
    kPlanck / (4.0 * kElementaryCharge * kElementaryCharge);  // Ohm
}  // namespace si

inline double ghz_to_hz(double f_ghz) { return f_ghz * 1e9; }
inline double hz_to_ghz(double f_hz) { return f_hz * 1e-9; }

// Qubit inductance in henry from the inductive energy E_L/h in GHz,
// E_L = (Phi0/2pi)^2 / L.
inline double inductance_from_el(double e_l_ghz) {
  const double phi0_red = si::kFluxQuantum / kTwoPi;
  return phi0_red * phi0_red / (si::kPlanck * ghz_to_hz(e_l_ghz));
}

}  // namespace subflux
