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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "subflux/benchmarking.hpp"
#include "subflux/calibration.hpp"
#include "subflux/circuit.hpp"
#include "subflux/config.hpp"
#include "subflux/effective.hpp"
#include "subflux/errors.hpp"
#include "subflux/noise.hpp"
#include "subflux/propagation.hpp"
#include "subflux/transfer.hpp"
#include "subflux/units.hpp"

namespace {

using json = nlohmann::json;
using namespace subflux;

constexpr double kPi = 3.14159265358979323846;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

RunConfig load_config(const CommonArgs& args) {
  json doc;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw invalid_parameter("cannot open config file: " + args.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    doc = json::parse(ss.str());
  } else {
    doc = json::parse(RunConfig{}.to_json_text());
  }
  for (const auto& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw invalid_parameter("--set expects key=value, got: " + kv);
    std::string path = "/" + kv.substr(0, eq);
    for (auto& c : path)
      if (c == '.') c = '/';
    const std::string value = kv.substr(eq + 1);
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (...) {
      parsed = value;  // plain string
    }
    doc[json::json_pointer(path)] = parsed;
  }
  RunConfig cfg = RunConfig::from_json_text(doc.dump());
  if (args.seed_given) cfg.seed = args.seed;
  if (!args.out_dir.empty()) cfg.output.directory = args.out_dir;
  if (args.threads > 0) set_sweep_threads(args.threads);
  return cfg;
}

class OutputWriter {
 public:
  explicit OutputWriter(const RunConfig& cfg) : cfg_(cfg) {
    std::filesystem::create_directories(cfg.output.directory);
  }

  std::ofstream csv(const std::string& name, const std::string& header) const {
    std::ofstream out(path(name));
    out << "# subflux " << tool_version() << " config=" << cfg_.hash() << " seed=" << cfg_.seed
        << "\n";
    out << header << "\n";
    return out;
  }

  void write_json(const std::string& name, json doc) const {
    doc["tool_version"] = tool_version();
    doc["config_hash"] = cfg_.hash();
    doc["seed"] = cfg_.seed;
    std::ofstream out(path(name));
    out << doc.dump(2) << "\n";
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(cfg_.output.directory) / name).string();
  }

 private:
  const RunConfig& cfg_;
};

std::string fmt(double v, int precision = 9) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

double qubit_amplitude(const RunConfig& cfg, double amp, double f_d) {
  if (!cfg.drive.source_referred) return amp;
  return attenuate(amp, f_d, TransferModel{cfg.transfer.a0});
}

int cmd_spectrum(const RunConfig& cfg, int points, double phi_min, double phi_max) {
  if (points < 1) throw invalid_parameter("flux grid must be non-empty");
  OutputWriter out(cfg);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? phi_min : phi_min + (phi_max - phi_min) * i / (points - 1.0);
  }
  const auto rows = flux_sweep(cfg.circuit, grid, 3, cfg.simulation.basis_dim);
  auto f = out.csv("flux_sweep.csv", "phi_ext_rad,f_ge_GHz,f_ef_GHz");
  for (const auto& r : rows) {
    f << fmt(r.phi_ext) << "," << fmt(r.f_ge) << "," << fmt(r.f_ef) << "\n";
  }
  CircuitParams sweet = cfg.circuit;
  sweet.phi_ext = kPi;
  const auto eigs = solve_circuit(sweet, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  std::cout << "f_ge = " << fmt(eigs.omega_eg(), 6) << " GHz at phi_ext = pi (f_ef = "
            << fmt(eigs.transition(1, 2), 6) << " GHz)\n";
  std::cout << "wrote " << out.path("flux_sweep.csv") << "\n";
  return 0;
}

int cmd_spectroscopy(const RunConfig& cfg, double f_min, double f_max, int points) {
  if (points < 1) throw invalid_parameter("frequency grid must be non-empty");
  OutputWriter out(cfg);
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  std::vector<double> freqs(points);
  for (int i = 0; i < points; ++i)
    freqs[i] = points == 1 ? f_min : f_min + (f_max - f_min) * i / (points - 1.0);
  std::vector<SweepPoint> sweep;
  if (cfg.drive.source_referred && cfg.transfer.a0 > 0.0) {
    // the attenuation depends on the drive frequency, so sweep point by point
    sweep.resize(points);
    for (int i = 0; i < points; ++i) {
      const double amp = qubit_amplitude(cfg, cfg.drive.amplitude, freqs[i]);
      sweep[i] = spectroscopy_sweep(eigs, {freqs[i]}, amp, cfg.drive.t_pulse, cfg.drive.envelope,
                                    cfg.simulation.dt)[0];
    }
  } else {
    sweep = spectroscopy_sweep(eigs, freqs, cfg.drive.amplitude, cfg.drive.t_pulse,
                               cfg.drive.envelope, cfg.simulation.dt);
  }
  auto f = out.csv("spectroscopy.csv", "f_d_GHz,t_ns,P_e");
  for (const auto& s : sweep)
    f << fmt(s.f_d) << "," << fmt(cfg.drive.t_pulse) << "," << fmt(s.p_e) << "\n";
  json peaks = json::array();
  for (const auto& p : find_peaks(sweep)) {
    peaks.push_back({{"f_d_GHz", p.f_d}, {"P_e", p.p_e}});
  }
  out.write_json("spectroscopy_peaks.json", {{"peaks", peaks}});
  std::cout << "wrote " << out.path("spectroscopy.csv") << " (" << peaks.size() << " peaks)\n";
  return 0;
}

int cmd_chevron(const RunConfig& cfg, int n, double amp, double span_mhz, int det_points,
                double t_max, int time_points) {
  OutputWriter out(cfg);
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  const double amp_q = qubit_amplitude(cfg, amp, eigs.omega_eg() / n);
  ResonanceSearchOptions ropt;
  ropt.dt = cfg.simulation.dt;
  const auto res = find_subharmonic_resonance(eigs, n, amp_q, ropt);
  if (t_max <= 0.0) t_max = 2.2 * res.t_pi;
  if (span_mhz <= 0.0) span_mhz = 5.0e3 / (n * res.t_pi);
  std::vector<double> dets(det_points), times(time_points);
  for (int i = 0; i < det_points; ++i)
    dets[i] = (-span_mhz + 2.0 * span_mhz * i / (det_points - 1.0)) * 1e-3;
  for (int i = 0; i < time_points; ++i) times[i] = t_max * (i + 1) / time_points;
  const auto map =
      chevron(eigs, res.omega_d, amp_q, dets, times, Envelope::rectangular(), cfg.simulation.dt);
  auto f = out.csv("chevron.csv", "f_d_GHz,t_ns,P_e");
  for (std::size_t i = 0; i < dets.size(); ++i)
    for (std::size_t k = 0; k < times.size(); ++k)
      f << fmt(res.omega_d + dets[i]) << "," << fmt(times[k]) << "," << fmt(map.p_e(i, k)) << "\n";
  out.write_json("chevron_summary.json", {{"n", n},
                                          {"amplitude_phi0", amp},
                                          {"amplitude_qubit_phi0", amp_q},
                                          {"omega_d_GHz", res.omega_d},
                                          {"t_pi_ns", res.t_pi},
                                          {"P_e_at_pi", res.p_e}});
  std::cout << "n=" << n << " resonance " << fmt(res.omega_d, 9) << " GHz, t_pi " << fmt(res.t_pi, 6)
            << " ns\n";
  return 0;
}

int cmd_stark(const RunConfig& cfg, int n, std::vector<double> amps) {
  if (n != 3) throw invalid_parameter("stark: closed forms cover n=3 only");
  if (amps.empty()) amps = {0.01, 0.02, 0.03, 0.0415};
  OutputWriter out(cfg);
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  const auto red = three_level_reduction(eigs);
  auto f = out.csv("stark.csv",
                   "amplitude_phi0,amplitude_qubit_phi0,omega_d_sim_GHz,delta_sim_GHz,"
                   "omega_d_model_GHz,delta_model_GHz");
  ResonanceSearchOptions ropt;
  ropt.dt = cfg.simulation.dt;
  for (double a : amps) {
    const double amp_q = qubit_amplitude(cfg, a, red.omega_eg / 3.0);
    const auto sim = find_subharmonic_resonance(eigs, 3, amp_q, ropt);
    const double f_model = solve_resonance(red, 3, kTwoPi * amp_q);
    f << fmt(a) << "," << fmt(amp_q) << "," << fmt(sim.omega_d) << ","
      << fmt(3.0 * sim.omega_d - red.omega_eg) << "," << fmt(f_model) << ","
      << fmt(3.0 * f_model - red.omega_eg) << "\n";
    std::cout << "amp " << a << ": sim " << fmt(sim.omega_d, 9) << " GHz, model "
              << fmt(f_model, 9) << " GHz\n";
  }
  return 0;
}

int cmd_rabi_scaling(const RunConfig& cfg, std::vector<int> ns, std::vector<double> amps) {
  if (ns.empty()) ns = {3};
  OutputWriter out(cfg);
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  const auto red = three_level_reduction(eigs);
  auto f = out.csv("rabi_scaling.csv",
                   "n,amplitude_phi0,amplitude_qubit_phi0,omega_rabi_sim_GHz,omega_rabi_model_GHz");
  json fits = json::array();
  ResonanceSearchOptions ropt;
  ropt.dt = cfg.simulation.dt;
  for (int n : ns) {
    std::vector<double> amps_n = amps;
    if (amps_n.empty()) {
      amps_n = n == 3 ? std::vector<double>{0.01, 0.02, 0.03, 0.0415}
                      : std::vector<double>{0.06, 0.08, 0.10, 0.12};
    }
    std::vector<double> aq, om;
    for (double a : amps_n) {
      const double amp_q = qubit_amplitude(cfg, a, red.omega_eg / n);
      const auto sim = find_subharmonic_resonance(eigs, n, amp_q, ropt);
      const double om_sim = 1.0 / (2.0 * sim.t_pi);
      double om_model = 0.0;
      if (n == 3) {
        om_model = std::abs(rabi_rate_n3(red, sim.omega_d, red.omega_eg - 3.0 * sim.omega_d,
                                         kTwoPi * amp_q, Envelope::rectangular(), sim.t_pi));
      }
      f << n << "," << fmt(a) << "," << fmt(amp_q) << "," << fmt(om_sim) << "," << fmt(om_model)
        << "\n";
      aq.push_back(amp_q);
      om.push_back(om_sim);
      std::cout << "n=" << n << " amp " << a << ": Omega_sim " << fmt(om_sim * 1e3, 6) << " MHz\n";
    }
    if (aq.size() >= 4) {
      const auto fit = fit_power_law(aq, om);
      fits.push_back({{"n", n},
                      {"exponent", fit.exponent},
                      {"exponent_std_error", fit.exponent_std_error},
                      {"prefactor", fit.prefactor}});
      std::cout << "n=" << n << " exponent " << fmt(fit.exponent, 4) << " +- "
                << fmt(fit.exponent_std_error, 2) << "\n";
    }
  }
  out.write_json("rabi_fit.json", {{"fits", fits}});
  return 0;
}

int cmd_transfer_fit(const RunConfig& cfg, const std::string& data_path) {
  OutputWriter out(cfg);
  std::ifstream in(data_path);
  if (!in) throw invalid_parameter("cannot open data file: " + data_path);
  std::vector<TransferFitPoint> data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream ls(line);
    TransferFitPoint pt;
    char comma;
    if (ls >> pt.amplitude_source >> comma >> pt.omega_d) data.push_back(pt);
  }
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  const auto red = three_level_reduction(eigs);
  const auto fit = fit_a0(data, red);
  const double amp_ratio_1ghz = attenuate(1.0, 1.0, fit.model);
  out.write_json("transfer_fit.json",
                 {{"a0_hz_m12", fit.model.a0},
                  {"a0_std_error", fit.a0_std_error},
                  {"rms_residual_GHz", fit.rms_residual},
                  {"n_points", data.size()},
                  {"amplitude_ratio_at_1GHz", amp_ratio_1ghz},
                  {"power_db_at_1GHz_standard", ratio_to_db(amp_ratio_1ghz, DbMode::amplitude)},
                  {"power_db_at_1GHz_halved_convention",
                   0.5 * ratio_to_db(amp_ratio_1ghz, DbMode::amplitude)}});
  std::cout << "a0 = " << fmt(fit.model.a0, 6) << " +- " << fmt(fit.a0_std_error, 3)
            << " Hz^-1/2 (" << data.size() << " points)\n";
  return 0;
}

int cmd_calibrate(const RunConfig& cfg, int n, double amp) {
  OutputWriter out(cfg);
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  const double amp_q = qubit_amplitude(cfg, amp, eigs.omega_eg() / n);
  PropagationExecutor executor(eigs, cfg.simulation.dt);
  CalibrationOptions copt;
  copt.seed = cfg.seed;
  auto rough = rough_calibrate(executor, n, amp_q, eigs.omega_eg(), cfg.drive.envelope, copt);
  FineCalibrationOptions fopt;
  fopt.seed = cfg.seed + 1;
  auto fine = fine_calibrate(executor, rough.gate, fopt);

  auto scans = out.csv("calibration_scans.csv", "scan,x,y");
  for (const auto* stage : {&rough.scans, &fine.scans}) {
    for (const auto& s : *stage) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        scans << s.name << "," << fmt(s.x[i]) << "," << fmt(s.y[i]) << "\n";
    }
  }
  const auto& g = fine.gate;
  out.write_json("calibrated_gate.json", {{"n", g.n},
                                          {"omega_d_GHz", g.omega_d},
                                          {"amplitude_phi0", g.amplitude},
                                          {"t_pulse_ns", g.t_pulse},
                                          {"t_pulse_pi_2_ns", g.t_pulse_pi_2},
                                          {"envelope", to_string(g.envelope.kind)},
                                          {"envelope_sigma_ns", g.envelope.sigma},
                                          {"virtual_z_pi_rad", g.virtual_z_pi},
                                          {"virtual_z_pi_2_rad", g.virtual_z_pi_2},
                                          {"padding_ns", g.padding},
                                          {"padding_pi_2_ns", g.padding_pi_2},
                                          {"f_eg_idle_GHz", g.f_eg_idle},
                                          {"sampling_time_ns", g.sampling_time},
                                          {"fine_rounds", fine.rounds},
                                          {"converged", fine.converged}});
  std::cout << "calibrated n=" << n << ": omega_d " << fmt(g.omega_d, 9) << " GHz, t_pi "
            << fmt(g.t_pulse, 6) << " ns (+" << fmt(g.padding, 3) << " pad), rounds "
            << fine.rounds << "\n";
  return 0;
}

int cmd_rb(const RunConfig& cfg, const std::string& interleaved, bool noise_free) {
  OutputWriter out(cfg);
  const auto table = compile_cliffords(GateSet{cfg.rb.t_g_ns});
  NoiseChannel noise{cfg.rb.t1_us, 0.0, cfg.rb.t_g_ns};
  if (noise_free) {
    noise = NoiseChannel::noiseless(cfg.rb.t_g_ns);
  } else {
    noise.t_phi = t_phi_from_t2(cfg.rb.t1_us, cfg.rb.t2_star_us);
  }
  RbOptions opts;
  opts.lengths = cfg.rb.lengths;
  opts.n_sequences = cfg.rb.n_sequences;
  opts.seed = cfg.seed;
  if (!interleaved.empty()) {
    int idx = -1;
    for (int gidx = 0; gidx < GateSet::kNumGenerators; ++gidx) {
      if (interleaved == GateSet::generator_name(gidx)) idx = gidx;
    }
    if (idx < 0) throw invalid_parameter("unknown interleaved gate: " + interleaved);
    opts.interleaved_generator = idx;
  }
  const auto decay = run_rb(table, noise, opts);
  auto f = out.csv("rb_decay.csv", "m,P_g_mean,P_g_stderr");
  for (const auto& pt : decay) f << pt.length << "," << fmt(pt.mean) << "," << fmt(pt.stderr_) << "\n";
  const auto fit = fit_rb(decay);
  json doc = {{"p", fit.p},
              {"p_std_error", fit.p_std_error},
              {"A", fit.a},
              {"B", fit.b},
              {"r_clifford", fit.r_clifford},
              {"f_avg_clifford", fit.f_avg_clifford},
              {"f_avg_generator", fit.f_avg_generator},
              {"mean_generators_per_clifford", table.mean_length()},
              {"interleaved", interleaved}};
  if (!noise_free) {
    doc["coherence_limit"] =
        coherence_limit(cfg.rb.t_g_ns, cfg.rb.t1_us, t_phi_from_t2(cfg.rb.t1_us, cfg.rb.t2_star_us));
  }
  out.write_json("rb_fit.json", doc);
  std::cout << "RB fidelity " << fmt(fit.f_avg_generator * 100, 6) << " % per generator (p = "
            << fmt(fit.p, 6) << ")\n";
  return 0;
}

int cmd_noise_budget(const RunConfig& cfg) {
  OutputWriter out(cfg);
  const auto& b = cfg.budget;
  const auto eigs = solve_circuit(cfg.circuit, cfg.simulation.basis_dim, cfg.simulation.n_levels);
  const double f_eg = eigs.omega_eg();
  const double phi_ge = std::abs(eigs.phase_elements(0, 1));
  const double l_qubit_ph = inductance_from_el(cfg.circuit.e_l) * 1e12;

  const double t_phi_lp = t_phi_from_t2(b.t1_filtered_us, b.t2_star_filtered_us);
  const double t_phi_uf = t_phi_from_t2(b.t1_unfiltered_us, b.t2_star_unfiltered_us);
  const double t_res_mk = infer_resonator_temperature(b.t1_filtered_us, b.t2_star_filtered_us,
                                                      b.kappa_mhz, b.two_chi_mhz, b.f_res_ghz);
  const double attenuation = db_to_ratio(b.filter_attenuation_db_power, DbMode::power);
  const double gamma0_per_ms =
      infer_bath_coupling(b.t1_filtered_us, b.t1_unfiltered_us, attenuation, b.bath_temperature_k, f_eg);

  NoiseEnvironment env0 = NoiseEnvironment::matched_line(1e-7, b.resistance_ohm);  // T -> 0 limit
  CouplingGeometry geom{b.mutual_inductance_design_ph, l_qubit_ph, phi_ge};
  const double gamma_design = flux_line_decay(geom, env0, f_eg);
  const double m_exp_ph = invert_mutual_inductance(gamma0_per_ms, geom, env0, f_eg);

  const double f_lp = coherence_limit(cfg.rb.t_g_ns, b.t1_filtered_us, t_phi_lp);
  const double f_uf = coherence_limit(cfg.rb.t_g_ns, b.t1_unfiltered_us, t_phi_uf);

  json doc = {{"f_eg_GHz", f_eg},
              {"phi_ge", phi_ge},
              {"qubit_inductance_ph", l_qubit_ph},
              {"t_phi_filtered_us", t_phi_lp},
              {"t_phi_unfiltered_us", t_phi_uf},
              {"resonator_temperature_mK", t_res_mk},
              {"bath_coupling_1_over_ms", gamma0_per_ms},
              {"bath_decay_time_ms", 1.0 / gamma0_per_ms},
              {"flux_line_decay_design_1_over_ms", gamma_design},
              {"flux_line_decay_time_design_ms", 1.0 / gamma_design},
              {"mutual_inductance_fit_ph", m_exp_ph},
              {"mutual_inductance_design_ph", b.mutual_inductance_design_ph},
              {"coherence_limit_filtered", f_lp},
              {"coherence_limit_unfiltered", f_uf},
              {"n_th_bath_at_f_eg", bose_einstein(f_eg, b.bath_temperature_k)},
              {"improvement_t1", b.t1_filtered_us / b.t1_unfiltered_us},
              {"improvement_t2_star", b.t2_star_filtered_us / b.t2_star_unfiltered_us}};
  out.write_json("noise_budget.json", doc);

  std::cout << "quantity                         value\n"
            << "-------------------------------  -----------\n"
            << "qubit frequency                  " << fmt(f_eg, 6) << " GHz\n"
            << "T_phi (filtered)                 " << fmt(t_phi_lp, 4) << " us\n"
            << "resonator temperature            " << fmt(t_res_mk, 3) << " mK\n"
            << "flux-line bath 1/gamma0          " << fmt(1.0 / gamma0_per_ms, 3) << " ms\n"
            << "flux-line decay (design M)       " << fmt(1.0 / gamma_design, 3) << " ms\n"
            << "mutual inductance (inferred)     " << fmt(m_exp_ph, 3) << " pH\n"
            << "coherence limit (filtered)       " << fmt(f_lp * 100, 6) << " %\n"
            << "coherence limit (unfiltered)     " << fmt(f_uf * 100, 5) << " %\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-harmonic fluxonium control toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "JSON run configuration");
  app.add_option("--out", common.out_dir, "output directory (overrides config)");
  app.add_option("--seed", common.seed, "master seed (overrides config)")
      ->each([&common](const std::string&) { common.seed_given = true; });
  app.add_option("--threads", common.threads, "worker threads for sweeps");
  app.add_option("--set", common.sets, "override a config key, e.g. --set drive.amplitude=0.02");

  auto* spectrum =
      app.add_subcommand("spectrum", "flux dependence of the transition frequencies");
  spectrum->alias("flux-sweep");
  int phi_points = 101;
  double phi_min = 0.0, phi_max = 2.0 * kPi;
  spectrum->add_option("--phi-points", phi_points);
  spectrum->add_option("--phi-min", phi_min);
  spectrum->add_option("--phi-max", phi_max);

  auto* spectroscopy = app.add_subcommand("spectroscopy", "pulsed spectroscopy population sweep");
  double f_min = 0.15, f_max = 0.47;
  int f_points = 161;
  spectroscopy->add_option("--f-min", f_min);
  spectroscopy->add_option("--f-max", f_max);
  spectroscopy->add_option("--f-points", f_points);

  auto* chev = app.add_subcommand("chevron", "population map vs detuning and duration");
  int chev_n = 3;
  double chev_amp = 0.0415, chev_span = 0.0, chev_tmax = 0.0;
  int chev_det_points = 21, chev_time_points = 40;
  chev->add_option("--n", chev_n);
  chev->add_option("--amp", chev_amp);
  chev->add_option("--span-mhz", chev_span);
  chev->add_option("--det-points", chev_det_points);
  chev->add_option("--t-max", chev_tmax);
  chev->add_option("--time-points", chev_time_points);

  auto* stark = app.add_subcommand("stark", "resonance shift vs amplitude, simulation and model");
  int stark_n = 3;
  std::vector<double> stark_amps;
  stark->add_option("--n", stark_n);
  stark->add_option("--amps", stark_amps)->delimiter(',');

  auto* rabi = app.add_subcommand("rabi-scaling", "Rabi rate vs amplitude with power-law fits");
  std::vector<int> rabi_ns;
  std::vector<double> rabi_amps;
  rabi->add_option("--n", rabi_ns)->delimiter(',');
  rabi->add_option("--amps", rabi_amps)->delimiter(',');

  auto* tfit = app.add_subcommand("transfer-fit", "fit the skin-effect attenuation coefficient");
  std::string tfit_data;
  tfit->add_option("--data", tfit_data)->required();

  auto* cal = app.add_subcommand("calibrate", "two-pass gate tune-up against the simulator");
  int cal_n = 3;
  double cal_amp = 0.0415;
  cal->add_option("--n", cal_n);
  cal->add_option("--amp", cal_amp);

  auto* rb = app.add_subcommand("rb", "randomized benchmarking decay and fidelity fit");
  std::string rb_interleaved;
  bool rb_noise_free = false;
  rb->add_option("--interleaved", rb_interleaved, "generator name, e.g. X+pi");
  rb->add_flag("--noise-free", rb_noise_free);

  app.add_subcommand("noise-budget", "decoherence rates, temperatures and coherence limits");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = load_config(common);
    if (app.got_subcommand("spectrum") && phi_points < 1) {
      throw invalid_parameter("flux grid must be non-empty");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand("spectrum")) return cmd_spectrum(cfg, phi_points, phi_min, phi_max);
    if (app.got_subcommand("spectroscopy")) return cmd_spectroscopy(cfg, f_min, f_max, f_points);
    if (app.got_subcommand("chevron"))
      return cmd_chevron(cfg, chev_n, chev_amp, chev_span, chev_det_points, chev_tmax,
                         chev_time_points);
    if (app.got_subcommand("stark")) return cmd_stark(cfg, stark_n, stark_amps);
    if (app.got_subcommand("rabi-scaling")) return cmd_rabi_scaling(cfg, rabi_ns, rabi_amps);
    if (app.got_subcommand("transfer-fit")) return cmd_transfer_fit(cfg, tfit_data);
    if (app.got_subcommand("calibrate")) return cmd_calibrate(cfg, cal_n, cal_amp);
    if (app.got_subcommand("rb")) return cmd_rb(cfg, rb_interleaved, rb_noise_free);
    if (app.got_subcommand("noise-budget")) return cmd_noise_budget(cfg);
  } catch (const invalid_parameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
