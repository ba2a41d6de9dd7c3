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

#include "subflux/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "subflux/errors.hpp"
#include "subflux/propagation.hpp"
#include "subflux/units.hpp"

namespace subflux {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_pi(double x) {
  x = std::fmod(x + kPi, 2.0 * kPi);
  if (x < 0) x += 2.0 * kPi;
  return x - kPi;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double binomial_estimate(double p, int shots, std::uint64_t seed) {
  if (shots <= 0) return p;
  std::uint64_t st = seed;
  int hits = 0;
  for (int i = 0; i < shots; ++i) {
    const double u = (splitmix64(st) >> 11) * 0x1.0p-53;
    if (u < p) ++hits;
  }
  return static_cast<double>(hits) / shots;
}

}  // namespace

void CalibratedGate::snap_padding() {
  const auto pad_for = [this](double t) {
    const double k = std::ceil(t / sampling_time - 1e-9);
    return std::max(0.0, k * sampling_time - t);
  };
  padding = pad_for(t_pulse);
  padding_pi_2 = pad_for(t_pulse_pi_2);
}

GateOp GateOp::Pulse(double omega_d, double amplitude, double t_pulse, double phase,
                     const Envelope& env, double pad) {
  GateOp op;
  op.kind = Kind::pulse;
  op.omega_d = omega_d;
  op.amplitude = amplitude;
  op.t_pulse = t_pulse;
  op.phase = phase;
  op.envelope = env;
  op.duration = pad;
  return op;
}

GateOp GateOp::Delay(double duration) {
  GateOp op;
  op.kind = Kind::delay;
  op.duration = duration;
  return op;
}

PropagationExecutor::PropagationExecutor(EigenSystem eigs, double dt)
    : eigs_(std::move(eigs)), dt_(dt) {}

double PropagationExecutor::run(const std::vector<GateOp>& ops, int shots, std::uint64_t seed) {
  const int nlev = eigs_.n_levels;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(nlev);
  psi[0] = 1.0;
  double t_global = 0.0;
  const auto free_evolve = [&](double tau) {
    if (tau <= 0.0) return;
    for (int m = 0; m < nlev; ++m) {
      const double e = eigs_.energies[m] - eigs_.energies[0];
      psi[m] *= std::polar(1.0, -kTwoPi * e * tau);
    }
    t_global += tau;
  };
  for (const auto& op : ops) {
    if (op.kind == GateOp::Kind::delay) {
      free_evolve(op.duration);
      continue;
    }
    DrivePulse p;
    p.amplitude = op.amplitude;
    p.omega_d = op.omega_d;
    p.t_pulse = op.t_pulse;
    p.envelope = op.envelope;
    p.phase = op.phase;
    PropagateOptions o;
    o.dt = dt_;
    o.initial_state = psi;
    // phase-coherent LO across the sequence
    o.carrier_phase = std::fmod(kTwoPi * op.omega_d * t_global, 2.0 * kPi);
    psi = propagate(eigs_, p, o).state;
    t_global += op.t_pulse;
    free_evolve(op.duration);  // zero-amplitude pad to the sampling grid
  }
  return binomial_estimate(std::norm(psi[1]), shots, seed);
}

double TwoLevelExecutor::run(const std::vector<GateOp>& ops, int shots, std::uint64_t seed) {
  using cd = std::complex<double>;
  cd g{1.0, 0.0}, e{0.0, 0.0};
  double f_lo = 0.0;
  for (const auto& op : ops) {
    if (op.kind == GateOp::Kind::pulse) {
      f_lo = op.omega_d;
      break;
    }
  }
  const auto rz = [&](double angle) {  // qubit-frame z rotation by `angle`
    g *= std::polar(1.0, 0.5 * angle);
    e *= std::polar(1.0, -0.5 * angle);
  };
  for (const auto& op : ops) {
    if (op.kind == GateOp::Kind::delay) {
      // idle frame rotates at n*f_lo; the qubit at f_eg_idle
      rz(-kTwoPi * (p_.f_eg_idle - p_.n * f_lo) * op.duration);
      continue;
    }
    // rotation angle with injected over-rotation
    const double theta = kPi * op.t_pulse / p_.t_pi_true * (1.0 + p_.over_rotation);
    const bool is_pi = op.t_pulse > 0.75 * p_.t_pi_true;
    // effective z rate during drive: n*(f_res_true - f_d)
    const double delta_ang = kTwoPi * p_.n * (p_.f_res_true - op.omega_d);
    const double axis_phase = p_.n * op.phase;
    // H = (omega/2)(cos sx + sin sy) + (delta/2) sz acting for t_pulse
    const double omega_ang = theta / std::max(op.t_pulse, 1e-12);
    const double w = std::sqrt(omega_ang * omega_ang + delta_ang * delta_ang);
    const double a = 0.5 * w * op.t_pulse;
    const double c = std::cos(a), s = w > 0 ? std::sin(a) / w : 0.0;
    const cd ux = omega_ang * std::cos(axis_phase) * s;
    const cd uy = omega_ang * std::sin(axis_phase) * s;
    const cd uz = delta_ang * s;
    // U = c*I - i*(ux sx + uy sy + uz sz)/... with s already divided by w
    const cd g2 = (c - cd(0, 1) * uz) * g + (-cd(0, 1) * ux - uy) * e;
    const cd e2 = (-cd(0, 1) * ux + uy) * g + (c + cd(0, 1) * uz) * e;
    g = g2;
    e = e2;
    // injected per-gate frame fault, LO units -> qubit angle is n times that
    const double fault = is_pi ? p_.extra_phase_pi : p_.extra_phase_pi_2;
    if (fault != 0.0) rz(-p_.n * fault);
    if (op.duration > 0.0) rz(-kTwoPi * (p_.f_eg_idle - p_.n * f_lo) * op.duration);
  }
  const double pe = std::norm(e) / (std::norm(g) + std::norm(e));
  return binomial_estimate(pe, shots, seed);
}

double virtual_z_phase(const std::function<double(double)>& delta_ghz_of_t, double t_pulse, int n) {
  // Simpson quadrature; the shift trajectory is smooth.
  const int steps = 2000;
  const double h = t_pulse / steps;
  double acc = delta_ghz_of_t(0.0) + delta_ghz_of_t(t_pulse);
  for (int i = 1; i < steps; ++i) acc += delta_ghz_of_t(i * h) * (i % 2 ? 4.0 : 2.0);
  const double integral = acc * h / 3.0;  // GHz * ns
  return wrap_pi(kTwoPi * integral / n);
}

namespace {

// Shared sequence builder: emits pulses for the gate with the virtual-Z
// bookkeeping folded into the carrier phases.
class SequenceBuilder {
 public:
  SequenceBuilder(const CalibratedGate& g) : g_(g) {}

  void x90() { pulse(0.0, g_.t_pulse_pi_2, g_.padding_pi_2, g_.virtual_z_pi_2); }
  void xm90() { pulse(kPi / g_.n, g_.t_pulse_pi_2, g_.padding_pi_2, g_.virtual_z_pi_2); }
  void y90() { pulse(kPi / (2.0 * g_.n), g_.t_pulse_pi_2, g_.padding_pi_2, g_.virtual_z_pi_2); }
  void x180() { pulse(0.0, g_.t_pulse, g_.padding, g_.virtual_z_pi); }
  void y180() { pulse(kPi / (2.0 * g_.n), g_.t_pulse, g_.padding, g_.virtual_z_pi); }
  void vz(double lo_angle) { frame_ += lo_angle; }
  void delay(double tau) { ops_.push_back(GateOp::Delay(tau)); }
  // raw pulse with explicit duration (time scans)
  void raw(double t, double phase_offset = 0.0) { pulse(phase_offset, t, 0.0, 0.0); }

  const std::vector<GateOp>& ops() const { return ops_; }

 private:
  void pulse(double axis_phase, double t, double pad, double vz_after) {
    ops_.push_back(GateOp::Pulse(g_.omega_d, g_.amplitude, t, axis_phase + frame_, g_.envelope, pad));
    frame_ += vz_after;
  }
  CalibratedGate g_;
  std::vector<GateOp> ops_;
  double frame_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ssr = 0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  f.slope_stderr = std::sqrt(std::max(0.0, ssr / std::max(1, n - 2) * n / den));
  return f;
}

// cosine fit y = a + b*cos(n phi) + c*sin(n phi); returns the phi maximizing y
double fit_cosine_peak(const std::vector<double>& phi, const std::vector<double>& y, int n) {
  double a = 0, b = 0, c = 0;
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Eigen::Vector3d row(1.0, std::cos(n * phi[i]), std::sin(n * phi[i]));
    m += row * row.transpose();
    v += row * y[i];
  }
  const Eigen::Vector3d sol = m.ldlt().solve(v);
  a = sol[0];
  b = sol[1];
  c = sol[2];
  (void)a;
  return std::atan2(c, b) / n;  // maximum of b cos + c sin at n*phi = atan2(c, b)
}

}  // namespace

CalibrationResult rough_calibrate(ExperimentExecutor& executor, int n, double amplitude,
                                  double f_eg_estimate, const Envelope& env,
                                  const CalibrationOptions& opts) {
  CalibrationResult result;
  CalibratedGate g;
  g.n = n;
  g.amplitude = amplitude;
  g.envelope = env;
  g.omega_d = f_eg_estimate / n;
  g.f_eg_idle = f_eg_estimate;
  g.sampling_time = opts.sampling_time;

  std::uint64_t seed_ctr = opts.seed;
  const auto measure = [&](const SequenceBuilder& sb) {
    return executor.run(sb.ops(), opts.shots, splitmix64(seed_ctr));
  };

  // --- Rabi time sweep, expanding until an oscillation is visible ---
  double t_max = 500.0;
  double t_pi = 0.0;
  for (int attempt = 0; attempt < 7 && t_pi == 0.0; ++attempt, t_max *= 2.5) {
    const int np = 41;
    ScanRecord rec{"rabi_time", {}, {}};
    double best_p = 0.0, best_t = 0.0;
    for (int i = 1; i <= np; ++i) {
      const double t = t_max * i / np;
      SequenceBuilder sb(g);
      sb.raw(t);
      const double p = measure(sb);
      rec.x.push_back(t);
      rec.y.push_back(p);
      if (p > best_p) {
        best_p = p;
        best_t = t;
      }
    }
    result.scans.push_back(std::move(rec));
    if (best_p > 0.6) t_pi = best_t;
  }
  if (t_pi == 0.0) {
    throw convergence_error("rough_calibrate: no Rabi oscillation found, amplitude out of range");
  }
  g.t_pulse = t_pi;

  // --- alternate frequency and time scans until omega_d converges ---
  double window = opts.f_window > 0 ? opts.f_window : 0.08 * g.omega_d;
  for (int round = 0; round < opts.max_rabi_rounds; ++round) {
    ScanRecord rec{"rabi_freq_" + std::to_string(round), {}, {}};
    std::vector<double> fs(opts.scan_points), ps(opts.scan_points);
    for (int i = 0; i < opts.scan_points; ++i) {
      fs[i] = g.omega_d - window + 2.0 * window * i / (opts.scan_points - 1);
      CalibratedGate gf = g;
      gf.omega_d = fs[i];
      SequenceBuilder sb(gf);
      sb.raw(g.t_pulse);
      ps[i] = measure(sb);
      rec.x.push_back(fs[i]);
      rec.y.push_back(ps[i]);
    }
    result.scans.push_back(std::move(rec));
    std::size_t imax = std::max_element(ps.begin(), ps.end()) - ps.begin();
    double f_new = fs[imax];
    if (imax == 0 || imax + 1 == fs.size()) {
      g.omega_d = f_new;
      window *= 2.0;
      continue;
    }
    const double den = ps[imax - 1] - 2 * ps[imax] + ps[imax + 1];
    if (den < 0) f_new += 0.5 * (ps[imax - 1] - ps[imax + 1]) / den * (fs[1] - fs[0]);
    const double df = std::abs(f_new - g.omega_d);
    g.omega_d = f_new;

    // time rescan around the current pi time
    ScanRecord trec{"rabi_time_" + std::to_string(round), {}, {}};
    double best_p = -1.0, best_t = g.t_pulse;
    const int np = 25;
    std::vector<double> ts(np), qs(np);
    for (int i = 0; i < np; ++i) {
      const double t = g.t_pulse * (0.6 + 0.8 * i / (np - 1));
      CalibratedGate gt = g;
      SequenceBuilder sb(gt);
      sb.raw(t);
      const double p = measure(sb);
      ts[i] = t;
      qs[i] = p;
      trec.x.push_back(t);
      trec.y.push_back(p);
      if (p > best_p) {
        best_p = p;
        best_t = t;
      }
    }
    result.scans.push_back(std::move(trec));
    std::size_t tmax_i = std::max_element(qs.begin(), qs.end()) - qs.begin();
    if (tmax_i > 0 && tmax_i + 1 < qs.size()) {
      const double d2 = qs[tmax_i - 1] - 2 * qs[tmax_i] + qs[tmax_i + 1];
      if (d2 < 0) best_t = ts[tmax_i] + 0.5 * (qs[tmax_i - 1] - qs[tmax_i + 1]) / d2 * (ts[1] - ts[0]);
    }
    g.t_pulse = best_t;
    window = std::max(window / 3.0, 2.0 / (n * g.t_pulse) / 4.0);
    if (round >= 1 && df < 5e-5) break;  // 50 kHz rough target
  }
  g.t_pulse_pi_2 = 0.5 * g.t_pulse;
  g.snap_padding();

  // --- Ramsey idle-frequency calibration with artificial detuning ---
  {
    const double f_art = 2.5e-3;  // GHz
    const auto fringe_freq = [&](double sign) {
      const int np = 64;
      const double tau_max = 1600.0;
      ScanRecord rec{sign > 0 ? "ramsey_plus" : "ramsey_minus", {}, {}};
      std::vector<double> taus(np), ys(np);
      for (int i = 0; i < np; ++i) {
        const double tau = tau_max * (i + 1) / np;
        SequenceBuilder sb(g);
        sb.x90();
        sb.delay(tau);
        sb.vz(sign * kTwoPi * f_art * tau / n);
        sb.x90();
        taus[i] = tau;
        ys[i] = measure(sb);
        rec.x.push_back(tau);
        rec.y.push_back(ys[i]);
      }
      result.scans.push_back(std::move(rec));
      // dominant frequency by projection onto a fine grid
      double best_f = 0, best_amp = -1;
      for (double f = 0.1e-3; f < 8e-3; f += 2e-6) {
        double cr = 0, ci = 0;
        for (int i = 0; i < np; ++i) {
          cr += (ys[i] - 0.5) * std::cos(kTwoPi * f * taus[i]);
          ci += (ys[i] - 0.5) * std::sin(kTwoPi * f * taus[i]);
        }
        const double a = cr * cr + ci * ci;
        if (a > best_amp) {
          best_amp = a;
          best_f = f;
        }
      }
      return best_f;
    };
    const double fp = fringe_freq(+1.0);
    const double fm = fringe_freq(-1.0);
    // fringe rate is |Delta_eff + sign*f_art|; recover the signed Delta_eff
    const double delta_eff = 0.5 * (fp - fm);
    g.f_eg_idle = n * g.omega_d + delta_eff;
  }

  // --- pi/2 and pi phase calibration via Ramsey with a swept virtual-Z ---
  {
    const int np = 33;
    std::vector<double> phis(np), ys(np);
    ScanRecord rec{"phase_pi2", {}, {}};
    for (int i = 0; i < np; ++i) {
      phis[i] = -kPi / n + 2.0 * kPi / n * i / (np - 1);
      SequenceBuilder sb(g);
      sb.x90();
      sb.vz(phis[i]);
      sb.x90();
      ys[i] = measure(sb);
      rec.x.push_back(phis[i]);
      rec.y.push_back(ys[i]);
    }
    result.scans.push_back(std::move(rec));
    g.virtual_z_pi_2 = wrap_pi(g.virtual_z_pi_2 + fit_cosine_peak(phis, ys, n));

    std::vector<double> ys2(np);
    ScanRecord rec2{"phase_pi", {}, {}};
    for (int i = 0; i < np; ++i) {
      SequenceBuilder sb(g);
      sb.x90();
      sb.y180();
      sb.vz(phis[i]);
      sb.x90();
      ys2[i] = measure(sb);
      rec2.x.push_back(phis[i]);
      rec2.y.push_back(ys2[i]);
    }
    result.scans.push_back(std::move(rec2));
    g.virtual_z_pi = wrap_pi(g.virtual_z_pi + fit_cosine_peak(phis, ys2, n));
  }

  // check: the phase-calibration sequences should now return the excited state
  {
    SequenceBuilder sb(g);
    sb.x90();
    sb.x90();
    const double p1 = measure(sb);
    SequenceBuilder sb2(g);
    sb2.x90();
    sb2.y180();
    sb2.x90();
    const double p2 = measure(sb2);
    result.converged = p1 > 0.95 && p2 > 0.95;
  }
  result.gate = g;
  return result;
}

CalibrationResult fine_calibrate(ExperimentExecutor& executor, const CalibratedGate& gate,
                                 const FineCalibrationOptions& opts) {
  CalibrationResult result;
  CalibratedGate g = gate;
  g.snap_padding();
  std::uint64_t seed_ctr = opts.seed;
  const auto measure = [&](const SequenceBuilder& sb) {
    return executor.run(sb.ops(), opts.shots, splitmix64(seed_ctr));
  };
  const double noise_floor = opts.shots > 0 ? 2.0 / std::sqrt(static_cast<double>(opts.shots)) : 0.0;

  // rotation-angle trains: z_N = (2P-1)(-1)^N ~ sin(k N eps)
  const auto angle_error = [&](bool pi_gate, ScanRecord& rec) {
    std::vector<double> xs, zs;
    for (int N : opts.n_schedule) {
      SequenceBuilder sb(g);
      sb.x90();
      for (int i = 0; i < (pi_gate ? N : 2 * N); ++i) {
        if (pi_gate)
          sb.x180();
        else
          sb.x90();
      }
      const double p = measure(sb);
      rec.x.push_back(N);
      rec.y.push_back(p);
      const double z = std::clamp((2.0 * p - 1.0) * ((N % 2) ? 1.0 : -1.0), -1.0, 1.0);
      xs.push_back(static_cast<double>(N));
      zs.push_back(std::asin(z));
    }
    // least squares through the origin: eps = sum(N z)/sum(N^2)
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += xs[i] * zs[i];
      den += xs[i] * xs[i];
    }
    return num / den;
  };

  // drive-frequency error via the Rabi-lineshape asymmetry at odd multiples
  // of the pi time
  const auto freq_error = [&](int mult, ScanRecord& rec) {
    const double t_probe = mult * g.t_pulse;
    const double omega_pop = 1.0 / (2.0 * g.t_pulse);
    const double h = omega_pop / (2.0 * g.n * mult);  // GHz, quarter-ish linewidth
    const auto probe = [&](double off) {
      CalibratedGate gf = g;
      gf.omega_d = g.omega_d + off;
      SequenceBuilder sb(gf);
      sb.raw(t_probe);
      return measure(sb);
    };
    const double p_plus = probe(+h);
    const double p_minus = probe(-h);
    rec.x.push_back(mult);
    rec.y.push_back(p_plus - p_minus);
    // invert the two-level lineshape model for the frequency offset
    const auto model_asym = [&](double d0) {
      const auto pe = [&](double d) {
        const double zz = g.n * d;
        const double gg = std::sqrt(omega_pop * omega_pop + zz * zz);
        const double amp = omega_pop * omega_pop / (gg * gg);
        const double s = std::sin(kPi * gg * t_probe);
        return amp * s * s;
      };
      return pe(d0 + h) - pe(d0 - h);
    };
    double lo = -h, hi = h;
    double flo = model_asym(lo) - (p_plus - p_minus);
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = model_asym(mid) - (p_plus - p_minus);
      if ((flo <= 0) == (fm <= 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);  // the measured drive appears at f* + d0, so subtract
  };

  // phase trains: pi/2 via [X90 X-90] pairs, pi via [X90 X180 X90] blocks
  const auto phase_error = [&](bool pi_gate, ScanRecord& rec) {
    std::vector<double> xs, ys;
    for (int N : opts.n_schedule) {
      SequenceBuilder sb(g);
      if (pi_gate) {
        sb.y90();
        for (int i = 0; i < N; ++i) {
          sb.x90();
          sb.x180();
          sb.x90();
        }
      } else {
        sb.x90();
        for (int i = 0; i < N; ++i) {
          sb.x90();
          sb.xm90();
        }
        sb.y90();
      }
      const double p = measure(sb);
      rec.x.push_back(N);
      rec.y.push_back(p);
      xs.push_back(static_cast<double>(N));
      ys.push_back(2.0 * p - 1.0);
    }
    return fit_line(xs, ys);  // slope ~ qubit-frame phase error per repetition
  };

  bool converged = false;
  double prev_total = 1e9;
  int round = 0;
  for (; round < opts.max_rounds && !converged; ++round) {
    const std::string tag = "_" + std::to_string(round);

    ScanRecord rec_pi{"amp_train_pi" + tag, {}, {}};
    double eps_pi = angle_error(true, rec_pi);
    result.scans.push_back(rec_pi);
    g.t_pulse *= kPi / (kPi + eps_pi);

    ScanRecord rec_pi2{"amp_train_pi2" + tag, {}, {}};
    double eps_pi2 = angle_error(false, rec_pi2);
    result.scans.push_back(rec_pi2);
    g.t_pulse_pi_2 *= (kPi / 2.0) / (kPi / 2.0 + 0.5 * eps_pi2);
    g.snap_padding();

    ScanRecord rec_f{"freq_asym" + tag, {}, {}};
    const int mult = std::min(1 + 2 * round * 4, 17);
    double df = freq_error(mult, rec_f);
    result.scans.push_back(rec_f);
    g.omega_d -= df;

    // re-run the pi time train after the frequency move
    ScanRecord rec_pi_b{"amp_train_pi_b" + tag, {}, {}};
    const double eps_pi_b = angle_error(true, rec_pi_b);
    result.scans.push_back(rec_pi_b);
    g.t_pulse *= kPi / (kPi + eps_pi_b);
    g.snap_padding();

    ScanRecord rec_ph2{"phase_train_pi2" + tag, {}, {}};
    const LinearFit ph2 = phase_error(false, rec_ph2);
    result.scans.push_back(rec_ph2);
    if (std::abs(ph2.slope) > 2.0 * ph2.slope_stderr + 1e-12) {
      g.virtual_z_pi_2 = wrap_pi(g.virtual_z_pi_2 - ph2.slope / g.n);
    }

    ScanRecord rec_ph{"phase_train_pi" + tag, {}, {}};
    const LinearFit ph = phase_error(true, rec_ph);
    result.scans.push_back(rec_ph);
    if (std::abs(ph.slope) > 2.0 * ph.slope_stderr + 1e-12) {
      g.virtual_z_pi = wrap_pi(g.virtual_z_pi - ph.slope / g.n);
    }

    const double angle_err = std::max(std::abs(eps_pi_b), 0.5 * std::abs(eps_pi2));
    const double phase_err = std::max(std::abs(ph2.slope), std::abs(ph.slope));
    const double total = std::abs(angle_err) + std::abs(df) * 1e3 + phase_err;
    converged = std::abs(angle_err) < opts.angle_tol + noise_floor * 0.1 &&
                std::abs(df) < opts.freq_tol + noise_floor * 1e-6 &&
                phase_err < opts.phase_tol + noise_floor;
    if (total > 4.0 * prev_total + 1.0) {
      std::ostringstream msg;
      msg << "fine_calibrate: corrections diverging at round " << round << " (angle " << angle_err
          << " rad, freq " << df * 1e6 << " kHz, phase " << phase_err << " rad)";
      throw convergence_error(msg.str());
    }
    prev_total = total;
  }
  result.gate = g;
  result.rounds = round;
  result.converged = converged;
  return result;
}

}  // namespace subflux
