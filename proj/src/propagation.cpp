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

#include "subflux/propagation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "subflux/effective.hpp"
#include "subflux/errors.hpp"
#include "subflux/units.hpp"

namespace subflux {

namespace {

std::atomic<int> g_sweep_threads{0};

template <typename F>
void parallel_for(int count, F&& body) {
  const int workers = std::min(count, sweep_threads());
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void set_sweep_threads(int n) { g_sweep_threads.store(n); }

int sweep_threads() {
  const int n = g_sweep_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

PropagationResult propagate(const EigenSystem& eigs, const DrivePulse& pulse,
                            const PropagateOptions& opts) {
  pulse.validate();
  if (pulse.omega_d > 0.0 && opts.dt > 0.2 / pulse.omega_d) {
    throw invalid_parameter("propagate: dt must satisfy dt <= 0.2 / f_d to resolve the drive");
  }
  const int n = eigs.n_levels;
  Eigen::VectorXd psi_re = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd psi_im = Eigen::VectorXd::Zero(n);
  if (opts.initial_state) {
    if (opts.initial_state->size() != n) {
      throw invalid_parameter("propagate: initial state dimension mismatch");
    }
    const double nrm = opts.initial_state->norm();
    if (std::abs(nrm - 1.0) > 1e-9) {
      throw invalid_parameter("propagate: initial state must be normalized");
    }
    psi_re = opts.initial_state->real();
    psi_im = opts.initial_state->imag();
  } else {
    if (opts.initial_level < 0 || opts.initial_level >= n) {
      throw invalid_parameter("propagate: initial level out of range");
    }
    psi_re[opts.initial_level] = 1.0;
  }

  const Eigen::VectorXd level_energy = eigs.energies.array() - eigs.energies[0];
  const Eigen::MatrixXd drive_op = eigs.params.e_l * eigs.phase_elements;
  const double phibar = kTwoPi * pulse.amplitude;

  const int nsteps = std::max(1, static_cast<int>(std::llround(pulse.t_pulse / opts.dt)));
  const double dt = pulse.t_pulse / nsteps;

  PropagationResult res;
  if (opts.record_trajectory) {
    res.trajectory.times.reserve(nsteps / opts.trajectory_stride + 1);
    res.trajectory.populations.reserve(nsteps / opts.trajectory_stride + 1);
  }

  Eigen::MatrixXd h(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::VectorXd c_re(n), c_im(n), r_re(n), r_im(n);
  double max_norm_dev = 0.0;

  // fourth-order commutator-free Magnus step: two Hermitian exponentials per
  // step with the drive sampled at the Gauss-Legendre nodes. A single
  // midpoint exponential leaves a percent-scale Rabi-rate bias at dt = 0.1;
  // this scheme keeps halving-dt population changes below 1e-4 at the same
  // step size. Both factors are exactly unitary.
  const double kSqrt3 = 1.7320508075688772;
  const double node1 = 0.5 - kSqrt3 / 6.0, node2 = 0.5 + kSqrt3 / 6.0;
  const double a1 = (3.0 - 2.0 * kSqrt3) / 12.0, a2 = (3.0 + 2.0 * kSqrt3) / 12.0;

  const auto apply_exp = [&](double drive_coeff, double time_frac) {
    h = drive_op * drive_coeff;
    h.diagonal() += level_energy * time_frac;
    es.compute(h);
    const auto& v = es.eigenvectors();
    c_re.noalias() = v.transpose() * psi_re;
    c_im.noalias() = v.transpose() * psi_im;
    for (int m = 0; m < n; ++m) {
      const double theta = -kTwoPi * es.eigenvalues()[m] * dt;
      const double cs = std::cos(theta), sn = std::sin(theta);
      r_re[m] = c_re[m] * cs - c_im[m] * sn;
      r_im[m] = c_re[m] * sn + c_im[m] * cs;
    }
    psi_re.noalias() = v * r_re;
    psi_im.noalias() = v * r_im;
  };

  const auto drive_at = [&](double t) {
    return phibar * pulse.envelope.value(t, pulse.t_pulse) *
           std::cos(kTwoPi * pulse.omega_d * t + pulse.phase + opts.carrier_phase);
  };

  for (int j = 0; j < nsteps; ++j) {
    const double t0 = j * dt;
    const double d1 = drive_at(t0 + node1 * dt);
    const double d2 = drive_at(t0 + node2 * dt);
    apply_exp(a2 * d1 + a1 * d2, a1 + a2);
    apply_exp(a1 * d1 + a2 * d2, a1 + a2);

    if (opts.record_trajectory && (j % opts.trajectory_stride == 0 || j == nsteps - 1)) {
      res.trajectory.times.push_back((j + 1) * dt);
      res.trajectory.populations.emplace_back(psi_re.array().square() + psi_im.array().square());
    }
  }
  const double norm = std::sqrt(psi_re.squaredNorm() + psi_im.squaredNorm());
  max_norm_dev = std::abs(norm - 1.0);

  res.state.resize(n);
  res.state.real() = psi_re;
  res.state.imag() = psi_im;
  res.norm_deviation = max_norm_dev;
  return res;
}

std::vector<SweepPoint> spectroscopy_sweep(const EigenSystem& eigs, const std::vector<double>& freqs,
                                           double amplitude, double t_pulse, const Envelope& env,
                                           double dt) {
  if (freqs.empty()) throw invalid_parameter("spectroscopy_sweep: empty frequency grid");
  std::vector<SweepPoint> out(freqs.size());
  parallel_for(static_cast<int>(freqs.size()), [&](int i) {
    DrivePulse p;
    p.amplitude = amplitude;
    p.omega_d = freqs[i];
    p.t_pulse = t_pulse;
    p.envelope = env;
    PropagateOptions o;
    o.dt = dt;
    const auto r = propagate(eigs, p, o);
    out[i] = {freqs[i], std::norm(r.state[1])};
  });
  return out;
}

std::vector<SpectroscopyPeak> find_peaks(const std::vector<SweepPoint>& sweep, double threshold) {
  std::vector<SpectroscopyPeak> peaks;
  for (std::size_t i = 1; i + 1 < sweep.size(); ++i) {
    const double a = sweep[i - 1].p_e, b = sweep[i].p_e, c = sweep[i + 1].p_e;
    if (b < threshold || b < a || b < c) continue;
    double f = sweep[i].f_d;
    const double den = a - 2.0 * b + c;
    if (den < 0.0) {
      f += 0.5 * (a - c) / den * (sweep[i + 1].f_d - sweep[i].f_d);
    }
    peaks.push_back({f, b});
  }
  return peaks;
}

ChevronMap chevron(const EigenSystem& eigs, double omega_d_center, double amplitude,
                   const std::vector<double>& detunings, const std::vector<double>& times,
                   const Envelope& env, double dt) {
  if (detunings.empty() || times.empty()) throw invalid_parameter("chevron: empty grid");
  ChevronMap map;
  map.omega_d_center = omega_d_center;
  map.detunings = detunings;
  map.times = times;
  map.p_e.resize(detunings.size(), times.size());
  const double t_total = *std::max_element(times.begin(), times.end());

  parallel_for(static_cast<int>(detunings.size()), [&](int i) {
    DrivePulse p;
    p.amplitude = amplitude;
    p.omega_d = omega_d_center + detunings[i];
    p.t_pulse = t_total;
    p.envelope = env;
    PropagateOptions o;
    o.dt = dt;
    o.record_trajectory = true;
    const auto r = propagate(eigs, p, o);
    const auto& tt = r.trajectory.times;
    for (std::size_t k = 0; k < times.size(); ++k) {
      // nearest recorded step; the trajectory is dense in dt
      const auto it = std::lower_bound(tt.begin(), tt.end(), times[k]);
      std::size_t idx = it == tt.end() ? tt.size() - 1 : static_cast<std::size_t>(it - tt.begin());
      if (idx > 0 && std::abs(tt[idx - 1] - times[k]) < std::abs(tt[idx] - times[k])) --idx;
      map.p_e(i, k) = r.trajectory.populations[idx][1];
    }
  });
  return map;
}

namespace {

struct PeakRefinement {
  double x = 0.0;
  double y = 0.0;
  bool at_edge = false;
};

PeakRefinement refine_peak(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (ys[i] > ys[imax]) imax = i;
  PeakRefinement r;
  r.x = xs[imax];
  r.y = ys[imax];
  r.at_edge = (imax == 0 || imax + 1 == ys.size());
  if (!r.at_edge) {
    const double a = ys[imax - 1], b = ys[imax], c = ys[imax + 1];
    const double den = a - 2.0 * b + c;
    if (den < 0.0) r.x += 0.5 * (a - c) / den * (xs[1] - xs[0]);
  }
  return r;
}

double population_e(const EigenSystem& eigs, double f, double amp, double t, const Envelope& env,
                    double dt) {
  DrivePulse p;
  p.amplitude = amp;
  p.omega_d = f;
  p.t_pulse = t;
  p.envelope = env;
  PropagateOptions o;
  o.dt = dt;
  return std::norm(propagate(eigs, p, o).state[1]);
}

}  // namespace

ResonanceResult find_subharmonic_resonance(const EigenSystem& eigs, int n, double amplitude,
                                           const ResonanceSearchOptions& opts) {
  if (n < 3 || n % 2 == 0) throw invalid_parameter("find_subharmonic_resonance: n must be odd >= 3");
  if (!(amplitude > 0.0)) throw invalid_parameter("find_subharmonic_resonance: amplitude must be > 0");

  const ThreeLevelReduction red = three_level_reduction(eigs);
  const double phibar = kTwoPi * amplitude;

  // Seed the search from the closed-form shift; the loop below only trusts
  // simulated populations, so the seeds affect runtime, not the result.
  double f = opts.omega_d_seed;
  if (std::isnan(f)) {
    f = red.omega_eg / n;
    for (int i = 0; i < 6; ++i) f = (red.omega_eg + stark_shift_phi2_exact(red, f, phibar)) / n;
  }
  double t_pi = opts.t_pi_seed;
  if (std::isnan(t_pi)) {
    if (n == 3) {
      const double sx = std::abs(rabi_sigma_x_n3(red, f, red.omega_eg - 3.0 * f, phibar));
      t_pi = sx > 0.0 ? 1.0 / (4.0 * sx) : 1e4;
    } else {
      // No closed form for the n >= 5 Rabi rate; bootstrap from an expanding
      // trajectory until an interior population maximum appears.
      double horizon = 400.0;
      t_pi = 0.0;
      for (int tries = 0; tries < 12 && t_pi == 0.0; ++tries, horizon *= 2.5) {
        DrivePulse p;
        p.amplitude = amplitude;
        p.omega_d = f;
        p.t_pulse = horizon;
        p.envelope = opts.envelope;
        PropagateOptions o;
        o.dt = opts.dt;
        o.record_trajectory = true;
        const auto r = propagate(eigs, p, o);
        std::size_t imax = 0;
        double pmax = 0.0;
        for (std::size_t j = 0; j < r.trajectory.times.size(); ++j) {
          const double pe = r.trajectory.populations[j][1];
          if (pe > pmax) {
            pmax = pe;
            imax = j;
          }
        }
        if (pmax > 0.5 && imax + 20 < r.trajectory.times.size()) t_pi = r.trajectory.times[imax];
      }
      if (t_pi == 0.0) {
        throw convergence_error("find_subharmonic_resonance: no Rabi maximum within the search "
                                "horizon; amplitude too small for n=" + std::to_string(n));
      }
    }
  }

  // Initial window: wide enough for the expected shift plus the Rabi
  // linewidth; the loop widens on edge peaks or weak contrast and shrinks
  // only while the estimate is stabilizing, so a sidelobe lock cannot trap it.
  double shift_scale = std::abs(stark_shift_phi2_exact(red, red.omega_eg / n, phibar));
  double span =
      std::max({0.35 * shift_scale / n, 2.0 / (n * t_pi), 10.0 * opts.tol});
  double p_now = 0.0;
  double last_move = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    std::vector<double> fs(opts.scan_points), ps(opts.scan_points);
    for (int i = 0; i < opts.scan_points; ++i)
      fs[i] = f - span + 2.0 * span * i / (opts.scan_points - 1);
    parallel_for(opts.scan_points,
                 [&](int i) { ps[i] = population_e(eigs, fs[i], amplitude, t_pi, opts.envelope, opts.dt); });
    const PeakRefinement pk = refine_peak(fs, ps);
    if (pk.at_edge) {
      f = pk.x;
      span *= 2.0;
      continue;
    }
    const double f_new = pk.x;

    // duration scan: trajectory argmax with parabolic refinement
    DrivePulse p;
    p.amplitude = amplitude;
    p.omega_d = f_new;
    p.t_pulse = 2.2 * t_pi;
    p.envelope = opts.envelope;
    PropagateOptions o;
    o.dt = opts.dt;
    o.record_trajectory = true;
    const auto traj = propagate(eigs, p, o).trajectory;
    std::size_t imax = 0;
    for (std::size_t j = 1; j < traj.times.size(); ++j)
      if (traj.populations[j][1] > traj.populations[imax][1]) imax = j;
    double t_new = traj.times[imax];
    if (imax > 0 && imax + 1 < traj.times.size()) {
      const double a = traj.populations[imax - 1][1], b = traj.populations[imax][1],
                   c = traj.populations[imax + 1][1];
      const double den = a - 2.0 * b + c;
      if (den < 0.0) t_new += 0.5 * (a - c) / den * (traj.times[1] - traj.times[0]);
    }
    const double p_peak = traj.populations[imax][1];

    const double move = std::abs(f_new - f);
    const bool freq_converged = move < opts.tol && last_move < 10.0 * opts.tol;
    last_move = move;
    f = f_new;
    t_pi = t_new;
    if (p_peak < 0.5) {
      // weak contrast: the duration guess was off, rescan wider
      span = std::max(span * 1.5, 2.0 / (n * t_pi));
    } else {
      span = std::clamp(std::max(4.0 * move, span / 3.0), 5.0 * opts.tol, span);
    }
    if (freq_converged) {
      p_now = population_e(eigs, f, amplitude, t_pi, opts.envelope, opts.dt);
      if (p_now > opts.min_p_e) break;
    }
  }
  if (it >= opts.max_iter) {
    std::ostringstream msg;
    msg << "find_subharmonic_resonance: not converged after " << opts.max_iter
        << " iterations; last iterate omega_d = " << f << " GHz, t_pi = " << t_pi
        << " ns, P_e = " << p_now;
    throw convergence_error(msg.str());
  }
  ResonanceResult res;
  res.omega_d = f;
  res.t_pi = t_pi;
  res.p_e = p_now;
  res.iterations = it + 1;
  return res;
}

}  // namespace subflux
