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

// End-to-end acceptance suite: each numbered check prints one PASS/FAIL line
// with its measured values; the process exits non-zero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "subflux/benchmarking.hpp"
#include "subflux/calibration.hpp"
#include "subflux/circuit.hpp"
#include "subflux/effective.hpp"
#include "subflux/noise.hpp"
#include "subflux/propagation.hpp"
#include "subflux/transfer.hpp"
#include "subflux/units.hpp"

using namespace subflux;

namespace {

constexpr double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, a...);
  return std::string(buf);
}

struct StarkPoint {
  double amp;
  double omega_d_sim, t_pi_sim;
  double delta_sim, delta_model;
  double omega_rabi_sim, omega_rabi_model;
};

}  // namespace

int main() {
  const CircuitParams params{1.69, 0.68, 1.07, kPi};

  // 1. spectrum
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto eigs = solve_circuit(params);
    const double f_ge = eigs.omega_eg();
    const double dt = seconds_since(t0);
    report(1, std::abs(f_ge - 1.32) <= 0.02 && dt < 1.0,
           fmt("spectrum: f_ge = %.4f GHz (want 1.32 +- 0.02), %.2f s", f_ge, dt));
  }

  const auto eigs = solve_circuit(params);
  const auto red = three_level_reduction(eigs);

  // 2 + 3. stark-shift and Rabi oracle equivalence over the amplitude series
  std::vector<StarkPoint> series;
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool shift_ok = true;
    std::string detail;
    for (double amp : {0.01, 0.02, 0.03, 0.04}) {
      StarkPoint pt;
      pt.amp = amp;
      const auto sim = find_subharmonic_resonance(eigs, 3, amp);
      pt.omega_d_sim = sim.omega_d;
      pt.t_pi_sim = sim.t_pi;
      pt.delta_sim = 3.0 * sim.omega_d - red.omega_eg;
      const double f_model = solve_resonance(red, 3, kTwoPi * amp);
      pt.delta_model = 3.0 * f_model - red.omega_eg;
      pt.omega_rabi_sim = 1.0 / (2.0 * sim.t_pi);
      pt.omega_rabi_model =
          std::abs(rabi_rate_n3(red, sim.omega_d, red.omega_eg - 3.0 * sim.omega_d, kTwoPi * amp,
                                Envelope::rectangular(), sim.t_pi));
      series.push_back(pt);
      const double rel = std::abs(pt.delta_model - pt.delta_sim) / std::abs(pt.delta_sim);
      if (rel >= 0.05) shift_ok = false;
      detail += fmt(" %.0f%%", rel * 100.0 + 0.5);
    }
    const double ratio = series[1].delta_sim / series[0].delta_sim;
    const bool ratio_ok = ratio >= 3.6 && ratio <= 4.0;
    const double dt = seconds_since(t0);
    report(2, shift_ok && ratio_ok && dt < 600.0,
           fmt("stark oracle: |model-sim|/shift =%s (< 5%%), delta ratio %.3f in [3.6, 4.0], %.0f s",
               detail.c_str(), ratio, dt));

    bool rabi_ok = true;
    std::string rdetail;
    for (const auto& pt : series) {
      const double rel = std::abs(pt.omega_rabi_model - pt.omega_rabi_sim) / pt.omega_rabi_sim;
      if (rel >= 0.10) rabi_ok = false;
      rdetail += fmt(" %.1f%%", rel * 100.0);
    }
    // power-law exponent at qubit-referred amplitudes
    std::vector<double> amps_q, oms, amps_src;
    const TransferModel skin{9.49e-5};
    for (const auto& pt : series) {
      amps_q.push_back(pt.amp);
      oms.push_back(pt.omega_rabi_sim);
      amps_src.push_back(deattenuate(pt.amp, pt.omega_d_sim, skin));
    }
    const auto fit_q = fit_power_law(amps_q, oms);
    const auto fit_s = fit_power_law(amps_src, oms);
    const bool exp_ok = fit_q.exponent >= 2.8 && fit_q.exponent <= 3.0;
    const bool bias_ok = fit_s.exponent < fit_q.exponent;
    report(3, rabi_ok && exp_ok && bias_ok,
           fmt("rabi oracle: |model-sim| =%s (< 10%%), exponent %.3f in [2.8, 3.0], "
               "source-referred %.3f biased down",
               rdetail.c_str(), fit_q.exponent, fit_s.exponent));
  }

  // 4. higher sub-harmonics
  {
    const auto t0 = std::chrono::steady_clock::now();
    ResonanceSearchOptions opts;
    const auto r5 = find_subharmonic_resonance(eigs, 5, 0.10, opts);
    const auto r7 = find_subharmonic_resonance(eigs, 7, 0.16, opts);
    const bool contrast_ok = r5.p_e > 0.99 && r7.p_e > 0.99;

    // generic-engine stark shift against the simulated resonance at n = 5
    const auto r5s = find_subharmonic_resonance(eigs, 5, 0.06, opts);
    const double d5_sim = 5.0 * r5s.omega_d - red.omega_eg;
    const double d5_eng = generic_stark_shift(red, 5, r5s.omega_d, kTwoPi * 0.06, 3);
    const double rel5 = std::abs(d5_eng - d5_sim) / std::abs(d5_sim);
    const double dt = seconds_since(t0);
    report(4, contrast_ok && rel5 < 0.15 && dt < 1800.0,
           fmt("n=5/7: P_pi = %.4f / %.4f (> 0.99); engine delta_5 %.1f vs sim %.1f MHz (%.0f%% < "
               "15%%), %.0f s",
               r5.p_e, r7.p_e, d5_eng * 1e3, d5_sim * 1e3, rel5 * 100.0, dt));
  }

  // 5. noise budget numbers
  {
    const double t_res = infer_resonator_temperature(168.0, 75.0, 1.2, 5.3, 6.9);
    const double g0 = infer_bath_coupling(168.0, 31.0, std::pow(10.0, -3.55), 3.0, red.omega_eg);
    const double inv_g0 = 1.0 / g0;
    const double l_ph = inductance_from_el(params.e_l) * 1e12;
    const double phi_ge = std::abs(eigs.phase_elements(0, 1));
    const auto env0 = NoiseEnvironment::matched_line(1e-6, 50.0);
    CouplingGeometry geom{3.2, l_ph, phi_ge};
    const double m_fit = invert_mutual_inductance(1.0 / 3.6, geom, env0, red.omega_eg);
    const double inv_gd = 1.0 / flux_line_decay(geom, env0, red.omega_eg);
    const bool ok = std::abs(t_res - 51.0) <= 1.0 && std::abs(inv_g0 - 3.6) <= 0.5 &&
                    std::abs(m_fit - 3.1) <= 0.2 && std::abs(inv_gd - 3.4) <= 0.2;
    report(5, ok,
           fmt("noise budget: T_res %.1f mK (51+-1), 1/g0 %.2f ms (3.6+-0.5), M %.2f pH "
               "(3.1+-0.2), design 1/g %.2f ms (3.4+-0.2)",
               t_res, inv_g0, m_fit, inv_gd));
  }

  // 6. coherence limits
  {
    const double f_lp = coherence_limit(64.0, 168.0, t_phi_from_t2(168.0, 75.0));
    const double f_uf = coherence_limit(64.0, 31.0, t_phi_from_t2(31.0, 22.0));
    const bool ok = std::abs(f_lp - 0.99965) <= 2e-5 && std::abs(f_uf - 0.9987) <= 2e-4;
    report(6, ok,
           fmt("coherence limit: %.4f%% (99.965+-0.002), %.3f%% (99.87+-0.02)", f_lp * 100.0,
               f_uf * 100.0));
  }

  // 7. RB consistency
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = compile_cliffords();
    const double t_phi = t_phi_from_t2(168.0, 75.0);
    RbOptions opts;
    opts.seed = 12;
    const auto fit = fit_rb(run_rb(table, NoiseChannel{168.0, t_phi, 64.0}, opts));
    const double limit = coherence_limit(64.0, 168.0, t_phi);
    const double dev = std::abs(fit.f_avg_generator - limit);

    RbOptions clean;
    clean.lengths = {1, 8, 64};
    clean.n_sequences = 10;
    clean.seed = 4;
    const auto noise_free = run_rb(table, NoiseChannel::noiseless(), clean);
    bool clean_ok = true;
    for (const auto& pt : noise_free) clean_ok = clean_ok && std::abs(pt.mean - 1.0) < 1e-10;
    const double dt = seconds_since(t0);
    report(7, dev < 5e-5 && clean_ok && dt < 120.0,
           fmt("rb: fidelity %.5f%% vs limit %.5f%% (|diff| %.5f%% < 0.005%%), noise-free exact, "
               "%.1f s",
               fit.f_avg_generator * 100.0, limit * 100.0, dev * 100.0, dt));
  }

  // 8. calibration robustness
  {
    const auto t0 = std::chrono::steady_clock::now();
    TwoLevelExecutor::Params truth;
    truth.n = 3;
    truth.f_eg_idle = red.omega_eg;
    truth.f_res_true = 0.4710784;
    truth.t_pi_true = 200.0;
    const auto base_gate = [&]() {
      CalibratedGate g;
      g.n = 3;
      g.omega_d = truth.f_res_true;
      g.amplitude = 0.0415;
      g.t_pulse = truth.t_pi_true;
      g.t_pulse_pi_2 = 0.5 * truth.t_pi_true;
      g.envelope = Envelope::rectangular();
      g.f_eg_idle = truth.f_eg_idle;
      const double slip = kTwoPi * (3.0 * truth.f_res_true - truth.f_eg_idle) / 3.0;
      g.virtual_z_pi = std::remainder(slip * g.t_pulse, 2.0 * kPi);
      g.virtual_z_pi_2 = std::remainder(slip * g.t_pulse_pi_2, 2.0 * kPi);
      g.snap_padding();
      return g;
    };
    FineCalibrationOptions fopt;
    fopt.shots = 1024;
    fopt.seed = 5;

    bool ok = true;
    std::string detail;

    for (double sign : {+1.0, -1.0}) {
      TwoLevelExecutor::Params p = truth;
      p.over_rotation = sign * 0.01;
      TwoLevelExecutor ex(p);
      const auto out = fine_calibrate(ex, base_gate(), fopt);
      const double resid = std::abs(out.gate.t_pulse * (1.0 + p.over_rotation) / p.t_pi_true - 1.0);
      ok = ok && out.rounds <= 3 && resid < 2e-4;
      if (sign > 0) detail += fmt("amp resid %.4f%%", resid * 100.0);
    }
    for (double sign : {+1.0, -1.0}) {
      TwoLevelExecutor ex(truth);
      CalibratedGate g = base_gate();
      g.omega_d += sign * 20e-6;
      const auto out = fine_calibrate(ex, g, fopt);
      const double ferr = std::abs(out.gate.omega_d - truth.f_res_true);
      ok = ok && out.rounds <= 3 && ferr < 1e-6;
      if (sign > 0) detail += fmt(", freq resid %.2f kHz", ferr * 1e6);
    }
    for (double sign : {+1.0, -1.0}) {
      TwoLevelExecutor::Params p = truth;
      p.extra_phase_pi = sign * 0.05;
      p.extra_phase_pi_2 = -sign * 0.05;
      TwoLevelExecutor ex(p);
      const auto g0 = base_gate();
      const auto out = fine_calibrate(ex, g0, fopt);
      const double rp = std::abs(
          std::remainder(out.gate.virtual_z_pi - (g0.virtual_z_pi - p.extra_phase_pi), 2.0 * kPi));
      const double rp2 = std::abs(std::remainder(
          out.gate.virtual_z_pi_2 - (g0.virtual_z_pi_2 - p.extra_phase_pi_2), 2.0 * kPi));
      ok = ok && out.rounds <= 3 && rp < 5e-3 && rp2 < 5e-3;
      if (sign > 0) detail += fmt(", phase resid %.2f/%.2f mrad", rp * 1e3, rp2 * 1e3);
    }
    {
      TwoLevelExecutor ex(truth);
      FineCalibrationOptions clean = fopt;
      clean.shots = 0;
      const auto g0 = base_gate();
      const auto out = fine_calibrate(ex, g0, clean);
      const bool fixed = std::abs(out.gate.t_pulse - g0.t_pulse) / g0.t_pulse < 2e-4 &&
                         std::abs(out.gate.omega_d - g0.omega_d) < 1e-6 &&
                         std::abs(std::remainder(out.gate.virtual_z_pi - g0.virtual_z_pi,
                                                 2.0 * kPi)) < 5e-3;
      ok = ok && fixed;
      detail += fixed ? ", fixed point holds" : ", fixed point BROKEN";
    }
    const double dt = seconds_since(t0);
    report(8, ok && dt < 600.0, fmt("calibration: %s, %.0f s", detail.c_str(), dt));
  }

  // 9. transfer-fit round trip and the convention-free ratio
  {
    const TransferModel truth{9.49e-5};
    std::vector<TransferFitPoint> data;
    for (double a : {0.04, 0.06, 0.08, 0.10, 0.12}) {
      double f = red.omega_eg / 3.0;
      for (int i = 0; i < 60; ++i) f = solve_resonance(red, 3, kTwoPi * attenuate(a, f, truth));
      data.push_back({a, f});
    }
    const auto fit = fit_a0(data, red);
    const double rel = std::abs(fit.model.a0 - truth.a0) / truth.a0;
    const double ratio = attenuate(1.0, 1.0, truth);
    const bool ok = rel < 0.01 && std::abs(ratio - 0.250) <= 0.001;
    report(9, ok,
           fmt("transfer: a0 recovered to %.3f%% (< 1%%), amplitude ratio at 1 GHz %.4f "
               "(0.250+-0.001)",
               rel * 100.0, ratio));
  }

  // 10. property suite
  {
    bool ok = true;
    std::string detail;

    // unitarity over a strong pulse
    DrivePulse p;
    p.amplitude = 0.0415;
    p.omega_d = series.empty() ? 0.4711 : series.back().omega_d_sim;
    p.t_pulse = 850.0;
    p.envelope = Envelope::flat_top();
    const auto prop = propagate(eigs, p);
    ok = ok && prop.norm_deviation < 1e-10;
    detail += fmt("norm dev %.1e", prop.norm_deviation);

    // Hermiticity on random parameters
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    double herm = 0.0;
    for (int i = 0; i < 5; ++i) {
      CircuitParams q{u(rng), u(rng), u(rng), u(rng)};
      const auto h = build_hamiltonian(q, 40);
      herm = std::max(herm, (h - h.transpose()).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff());
    }
    ok = ok && herm < 1e-12;

    // parity selection at the sweet spot
    double parity = 0.0;
    for (int m = 0; m < 6; ++m)
      for (int mp = 0; mp < 6; ++mp)
        if ((m - mp) % 2 == 0 && m != mp) parity = std::max(parity, std::abs(eigs.phase_elements(m, mp)));
    ok = ok && parity < 1e-8;
    detail += fmt(", parity %.1e", parity);

    // dt convergence
    PropagateOptions o1, o2;
    o1.dt = 0.1;
    o2.dt = 0.05;
    DrivePulse q = p;
    q.t_pulse = 150.0;
    q.envelope = Envelope::rectangular();
    const auto a1 = propagate(eigs, q, o1);
    const auto a2 = propagate(eigs, q, o2);
    double ddt = 0.0;
    for (int m = 0; m < eigs.n_levels; ++m)
      ddt = std::max(ddt, std::abs(std::norm(a1.state[m]) - std::norm(a2.state[m])));
    ok = ok && ddt < 1e-4;
    detail += fmt(", dt conv %.1e", ddt);

    // basis convergence
    const auto e160 = solve_circuit(params, 160, 20);
    double dbasis = 0.0;
    for (int m = 0; m < 20; ++m)
      dbasis = std::max(dbasis, std::abs(eigs.energies[m] - e160.energies[m]));
    ok = ok && dbasis < 1e-6;

    // Clifford closure and the CPTP channel
    const auto table = compile_cliffords();
    bool closure = std::abs(table.mean_length() - 1.875) < 1e-12;
    for (int a = 0; a < 24 && closure; ++a)
      for (int b = 0; b < 24 && closure; ++b)
        closure = table.find(table.unitary(a) * table.unitary(b)) == table.product(a, b);
    ok = ok && closure;

    Eigen::Matrix2cd rho;
    rho << 0.3, std::complex<double>(0.2, 0.1), std::complex<double>(0.2, -0.1), 0.7;
    NoiseChannel noise{168.0, 96.55, 64.0};
    double trace_dev = 0.0;
    for (int i = 0; i < 500; ++i) {
      apply_gate_noise(rho, noise);
      trace_dev = std::max(trace_dev, std::abs(rho.trace().real() - 1.0));
    }
    ok = ok && trace_dev < 1e-12;
    detail += fmt(", trace dev %.1e", trace_dev);

    report(10, ok, "properties: " + detail);
  }

  std::printf("%s (%d/10)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT",
              10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
