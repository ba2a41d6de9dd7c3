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
#include <string>
#include <vector>

#include "subflux/circuit.hpp"
#include "subflux/pulse.hpp"

namespace subflux {

// One JSON document drives every subcommand; unknown keys are rejected with
// their field path. All defaults describe the reference device.
struct RunConfig {
  CircuitParams circuit;

  struct Simulation {
    int basis_dim = 80;
    int n_levels = 20;
    double dt = 0.1;  // ns
  } simulation;

  struct Drive {
    double amplitude = 0.0415;  // Phi/Phi0
    double t_pulse = 850.0;     // ns
    Envelope envelope = Envelope::flat_top();
    bool source_referred = false;  // apply the transfer model to amplitudes
  } drive;

  struct Transfer {
    double a0 = 9.49e-5;  // Hz^(-1/2)
  } transfer;

  struct Budget {
    double t1_filtered_us = 168.0;
    double t1_unfiltered_us = 31.0;
    double t2_star_filtered_us = 75.0;
    double t2_star_unfiltered_us = 22.0;
    double kappa_mhz = 1.2;
    double two_chi_mhz = 5.3;
    double f_res_ghz = 6.9;
    double bath_temperature_k = 3.0;
    double filter_attenuation_db_power = -35.5;
    double mutual_inductance_design_ph = 3.2;
    double resistance_ohm = 50.0;
  } budget;

  struct Rb {
    std::vector<int> lengths = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    int n_sequences = 30;
    double t_g_ns = 64.0;
    double t1_us = 168.0;
    double t2_star_us = 75.0;
  } rb;

  struct Output {
    std::string directory = ".";
    int precision = 9;
  } output;

  std::uint64_t seed = 1;

  static RunConfig from_json_text(const std::string& text);  // throws invalid_parameter
  std::string to_json_text(int indent = 2) const;
  // FNV-1a over the canonical JSON echo plus the seed; stable across runs.
  std::string hash() const;
};

std::string tool_version();

}  // namespace subflux
