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

#include "subflux/config.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

#include "subflux/errors.hpp"

namespace subflux {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw invalid_parameter("unknown config key: " + path + "." + key);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& path) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw invalid_parameter("bad value at " + path + "." + key + ": " + e.what());
  }
}

Envelope read_envelope(const json& obj, const std::string& path) {
  reject_unknown(obj, {"kind", "sigma", "cut"}, path);
  Envelope env;
  std::string kind = to_string(env.kind);
  read(obj, "kind", kind, path);
  env.kind = envelope_kind_from_string(kind);
  read(obj, "sigma", env.sigma, path);
  read(obj, "cut", env.cut, path);
  return env;
}

json envelope_json(const Envelope& env) {
  return json{{"kind", to_string(env.kind)}, {"sigma", env.sigma}, {"cut", env.cut}};
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_parameter(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  reject_unknown(root, {"circuit", "simulation", "drive", "transfer", "budget", "rb", "output", "seed"},
                 "$");
  if (root.contains("circuit")) {
    const auto& c = root["circuit"];
    reject_unknown(c, {"e_j", "e_c", "e_l", "phi_ext"}, "$.circuit");
    read(c, "e_j", cfg.circuit.e_j, "$.circuit");
    read(c, "e_c", cfg.circuit.e_c, "$.circuit");
    read(c, "e_l", cfg.circuit.e_l, "$.circuit");
    read(c, "phi_ext", cfg.circuit.phi_ext, "$.circuit");
  }
  if (root.contains("simulation")) {
    const auto& s = root["simulation"];
    reject_unknown(s, {"basis_dim", "n_levels", "dt"}, "$.simulation");
    read(s, "basis_dim", cfg.simulation.basis_dim, "$.simulation");
    read(s, "n_levels", cfg.simulation.n_levels, "$.simulation");
    read(s, "dt", cfg.simulation.dt, "$.simulation");
  }
  if (root.contains("drive")) {
    const auto& d = root["drive"];
    reject_unknown(d, {"amplitude", "t_pulse", "envelope", "source_referred"}, "$.drive");
    read(d, "amplitude", cfg.drive.amplitude, "$.drive");
    read(d, "t_pulse", cfg.drive.t_pulse, "$.drive");
    read(d, "source_referred", cfg.drive.source_referred, "$.drive");
    if (d.contains("envelope")) cfg.drive.envelope = read_envelope(d["envelope"], "$.drive.envelope");
  }
  if (root.contains("transfer")) {
    reject_unknown(root["transfer"], {"a0"}, "$.transfer");
    read(root["transfer"], "a0", cfg.transfer.a0, "$.transfer");
  }
  if (root.contains("budget")) {
    const auto& b = root["budget"];
    reject_unknown(b,
                   {"t1_filtered_us", "t1_unfiltered_us", "t2_star_filtered_us", "t2_star_unfiltered_us",
                    "kappa_mhz", "two_chi_mhz", "f_res_ghz", "bath_temperature_k",
                    "filter_attenuation_db_power", "mutual_inductance_design_ph", "resistance_ohm"},
                   "$.budget");
    read(b, "t1_filtered_us", cfg.budget.t1_filtered_us, "$.budget");
    read(b, "t1_unfiltered_us", cfg.budget.t1_unfiltered_us, "$.budget");
    read(b, "t2_star_filtered_us", cfg.budget.t2_star_filtered_us, "$.budget");
    read(b, "t2_star_unfiltered_us", cfg.budget.t2_star_unfiltered_us, "$.budget");
    read(b, "kappa_mhz", cfg.budget.kappa_mhz, "$.budget");
    read(b, "two_chi_mhz", cfg.budget.two_chi_mhz, "$.budget");
    read(b, "f_res_ghz", cfg.budget.f_res_ghz, "$.budget");
    read(b, "bath_temperature_k", cfg.budget.bath_temperature_k, "$.budget");
    read(b, "filter_attenuation_db_power", cfg.budget.filter_attenuation_db_power, "$.budget");
    read(b, "mutual_inductance_design_ph", cfg.budget.mutual_inductance_design_ph, "$.budget");
    read(b, "resistance_ohm", cfg.budget.resistance_ohm, "$.budget");
  }
  if (root.contains("rb")) {
    const auto& r = root["rb"];
    reject_unknown(r, {"lengths", "n_sequences", "t_g_ns", "t1_us", "t2_star_us"}, "$.rb");
    read(r, "lengths", cfg.rb.lengths, "$.rb");
    read(r, "n_sequences", cfg.rb.n_sequences, "$.rb");
    read(r, "t_g_ns", cfg.rb.t_g_ns, "$.rb");
    read(r, "t1_us", cfg.rb.t1_us, "$.rb");
    read(r, "t2_star_us", cfg.rb.t2_star_us, "$.rb");
  }
  if (root.contains("output")) {
    const auto& o = root["output"];
    reject_unknown(o, {"directory", "precision"}, "$.output");
    read(o, "directory", cfg.output.directory, "$.output");
    read(o, "precision", cfg.output.precision, "$.output");
  }
  read(root, "seed", cfg.seed, "$");

  cfg.circuit.validate();
  if (cfg.simulation.basis_dim < 20) throw invalid_parameter("$.simulation.basis_dim must be >= 20");
  if (cfg.simulation.n_levels < 3 || cfg.simulation.n_levels > cfg.simulation.basis_dim / 3) {
    throw invalid_parameter("$.simulation.n_levels must be in [3, basis_dim/3]");
  }
  if (!(cfg.simulation.dt > 0.0)) throw invalid_parameter("$.simulation.dt must be positive");
  if (cfg.drive.amplitude < 0.0) throw invalid_parameter("$.drive.amplitude must be >= 0");
  if (!(cfg.drive.t_pulse > 0.0)) throw invalid_parameter("$.drive.t_pulse must be positive");
  if (cfg.transfer.a0 < 0.0) throw invalid_parameter("$.transfer.a0 must be >= 0");
  for (int m : cfg.rb.lengths)
    if (m < 1) throw invalid_parameter("$.rb.lengths must all be >= 1");
  if (cfg.rb.n_sequences < 1) throw invalid_parameter("$.rb.n_sequences must be >= 1");
  return cfg;
}

std::string RunConfig::to_json_text(int indent) const {
  json root;
  root["circuit"] = {{"e_j", circuit.e_j},
                     {"e_c", circuit.e_c},
                     {"e_l", circuit.e_l},
                     {"phi_ext", circuit.phi_ext}};
  root["simulation"] = {{"basis_dim", simulation.basis_dim},
                        {"n_levels", simulation.n_levels},
                        {"dt", simulation.dt}};
  root["drive"] = {{"amplitude", drive.amplitude},
                   {"t_pulse", drive.t_pulse},
                   {"envelope", envelope_json(drive.envelope)},
                   {"source_referred", drive.source_referred}};
  root["transfer"] = {{"a0", transfer.a0}};
  root["budget"] = {{"t1_filtered_us", budget.t1_filtered_us},
                    {"t1_unfiltered_us", budget.t1_unfiltered_us},
                    {"t2_star_filtered_us", budget.t2_star_filtered_us},
                    {"t2_star_unfiltered_us", budget.t2_star_unfiltered_us},
                    {"kappa_mhz", budget.kappa_mhz},
                    {"two_chi_mhz", budget.two_chi_mhz},
                    {"f_res_ghz", budget.f_res_ghz},
                    {"bath_temperature_k", budget.bath_temperature_k},
                    {"filter_attenuation_db_power", budget.filter_attenuation_db_power},
                    {"mutual_inductance_design_ph", budget.mutual_inductance_design_ph},
                    {"resistance_ohm", budget.resistance_ohm}};
  root["rb"] = {{"lengths", rb.lengths},
                {"n_sequences", rb.n_sequences},
                {"t_g_ns", rb.t_g_ns},
                {"t1_us", rb.t1_us},
                {"t2_star_us", rb.t2_star_us}};
  root["output"] = {{"directory", output.directory}, {"precision", output.precision}};
  root["seed"] = seed;
  return root.dump(indent);
}

std::string RunConfig::hash() const {
  const std::string canon = to_json_text(-1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (unsigned char c : canon) mix(c);
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string tool_version() {
#ifdef SUBFLUX_VERSION
  return SUBFLUX_VERSION;
#else
  return "dev";
#endif
}

}  // namespace subflux
