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

#include "subflux/effective.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "subflux/errors.hpp"
#include "subflux/units.hpp"

namespace subflux {

double HeffN3Terms::total_number() const {
  double s = 0.0;
  for (const auto& o : order) s += o.number;
  return s;
}

double HeffN3Terms::total_drive() const {
  double s = 0.0;
  for (const auto& o : order) s += o.drive;
  return s;
}

PerturbativityReport perturbativity(const ThreeLevelReduction& red, double delta_cap, double omega_d,
                                    double phi_bar) {
  PerturbativityReport rep;
  rep.detuning_ratio = std::abs(delta_cap) / (2.0 * omega_d);
  rep.anharm_ratio = std::abs(red.alpha) / (4.0 * omega_d);
  const double bmax = std::max(std::abs(red.beta_1), std::abs(red.beta_2));
  rep.drive_ratio = bmax * std::abs(phi_bar) / (2.0 * omega_d);
  return rep;
}

HeffN3Terms heff_n3_terms(const ThreeLevelReduction& red, double delta_cap, double omega_d,
                          double phi_bar, double envelope_value) {
  const double b1 = red.beta_1;
  const double b2 = red.beta_2;
  const double al = red.alpha;
  const double dc = delta_cap;
  const double wd = omega_d;
  const double e = envelope_value;
  const double p2 = phi_bar * phi_bar * e * e;
  const double p3 = p2 * phi_bar * e;
  const double p4 = p3 * phi_bar * e;
  const double p5 = p4 * phi_bar * e;
  const double wd2 = wd * wd;
  const double wd3 = wd2 * wd;
  const double wd4 = wd3 * wd;
  const double s1 = b1 + b2;
  const double s2 = 2.0 * b1 + b2;

  HeffN3Terms t;
  t.order[0].number = dc;
  t.order[0].anharmonic = 0.5 * al;

  t.order[1].number = -3.0 * b2 * s2 / (8.0 * wd) * p2;

  t.order[2].number = 5.0 * (al * s1 * s1 + b2 * s2 * dc) / (32.0 * wd2) * p2;
  t.order[2].drive = b1 * b2 * s2 / (32.0 * wd2) * p3;

  t.order[3].number = -21.0 * b2 * b2 * (7.0 * b1 * b1 + 10.0 * b1 * b2 + 4.0 * b2 * b2) / (512.0 * wd3) * p4 -
                      9.0 * (al * s1 * s1 * (al + 2.0 * dc) + b2 * s2 * dc * dc) / (128.0 * wd3) * p2;
  t.order[3].drive = -b1 * (6.0 * al * s1 * s1 + 13.0 * b2 * s2 * dc) / (768.0 * wd3) * p3;

  t.order[4].number =
      al * b2 * (313.0 * b1 + 527.0 * b2) * s1 * s1 / (2048.0 * wd4) * p4 +
      107.0 * b2 * b2 * (7.0 * b1 * b1 - 10.0 * b1 * b2 + 4.0 * b2 * b2) * dc / (2048.0 * wd4) * p4 +
      17.0 * (al * s1 * s1 * (al * al + 3.0 * al * dc + 3.0 * dc * dc) + b2 * s2 * dc * dc * dc) /
          (512.0 * wd4) * p2;
  t.order[4].drive = (b1 * (29.0 * b2 * s2 * dc * dc + 6.0 * al * s1 * s1 * (al + 3.0 * dc)) /
                      (3072.0 * wd4)) * p3 +
                     b1 * b2 * b2 * (29.0 * b1 * b1 + 38.0 * b1 * b2 + 14.0 * b2 * b2) / (1024.0 * wd4) * p5;
  return t;
}

double stark_shift_n3_series(const ThreeLevelReduction& red, double omega_d, double delta_cap,
                             double phi_bar, double e2, double e4) {
  // The b^dag b coefficients of orders 2..5; phi^2 terms carry <E^2>, phi^4
  // terms carry <E^4>.
  const double b1 = red.beta_1, b2 = red.beta_2, al = red.alpha, dc = delta_cap, wd = omega_d;
  const double s1 = b1 + b2, s2 = 2.0 * b1 + b2;
  const double p2 = phi_bar * phi_bar, p4 = p2 * p2;
  const double wd2 = wd * wd, wd3 = wd2 * wd, wd4 = wd3 * wd;
  const double phi2_part = -3.0 * b2 * s2 / (8.0 * wd) * p2 +
                           5.0 * (al * s1 * s1 + b2 * s2 * dc) / (32.0 * wd2) * p2 -
                           9.0 * (al * s1 * s1 * (al + 2.0 * dc) + b2 * s2 * dc * dc) / (128.0 * wd3) * p2 +
                           17.0 * (al * s1 * s1 * (al * al + 3.0 * al * dc + 3.0 * dc * dc) + b2 * s2 * dc * dc * dc) /
                               (512.0 * wd4) * p2;
  const double phi4_part =
      -21.0 * b2 * b2 * (7.0 * b1 * b1 + 10.0 * b1 * b2 + 4.0 * b2 * b2) / (512.0 * wd3) * p4 +
      (al * b2 * (313.0 * b1 + 527.0 * b2) * s1 * s1 +
       107.0 * b2 * b2 * (7.0 * b1 * b1 - 10.0 * b1 * b2 + 4.0 * b2 * b2) * dc) /
          (2048.0 * wd4) * p4;
  return phi2_part * e2 + phi4_part * e4;
}

double stark_shift_phi2_exact(const ThreeLevelReduction& red, double omega_d, double phi_bar, double e2) {
  const double b1 = red.beta_1;
  const double s1 = red.beta_1 + red.beta_2;
  const double weg = red.omega_eg;
  const double wef = red.omega_eg + red.alpha;  // 1 -> 2 transition
  const double wd2 = omega_d * omega_d;
  const double coeff = b1 * b1 * weg / (weg * weg - wd2) - s1 * s1 * wef / (wef * wef - wd2);
  return coeff * phi_bar * phi_bar * e2;
}

double stark_shift_n3(const ThreeLevelReduction& red, double omega_d, double phi_bar, double e2,
                      double e4) {
  const double dc = red.omega_eg - 3.0 * omega_d;
  const double b1 = red.beta_1, b2 = red.beta_2, al = red.alpha, wd = omega_d;
  const double s1 = b1 + b2;
  const double p4 = phi_bar * phi_bar * phi_bar * phi_bar;
  const double wd3 = wd * wd * wd, wd4 = wd3 * wd;
  const double phi4_part =
      -21.0 * b2 * b2 * (7.0 * b1 * b1 + 10.0 * b1 * b2 + 4.0 * b2 * b2) / (512.0 * wd3) * p4 +
      (al * b2 * (313.0 * b1 + 527.0 * b2) * s1 * s1 +
       107.0 * b2 * b2 * (7.0 * b1 * b1 - 10.0 * b1 * b2 + 4.0 * b2 * b2) * dc) /
          (2048.0 * wd4) * p4;
  return stark_shift_phi2_exact(red, omega_d, phi_bar, e2) + phi4_part * e4;
}

double rabi_sigma_x_n3(const ThreeLevelReduction& red, double omega_d, double delta_cap, double phi_bar,
                       double e3, double e5) {
  const double b1 = red.beta_1, b2 = red.beta_2, al = red.alpha, dc = delta_cap, wd = omega_d;
  const double s1 = b1 + b2, s2 = 2.0 * b1 + b2;
  const double p3 = phi_bar * phi_bar * phi_bar;
  const double p5 = p3 * phi_bar * phi_bar;
  const double wd2 = wd * wd, wd3 = wd2 * wd, wd4 = wd3 * wd;
  const double alpha_block =
      (-b1 * 6.0 * al * s1 * s1 / (768.0 * wd3) + b1 * 6.0 * al * s1 * s1 * (al + 3.0 * dc) / (3072.0 * wd4)) * p3;
  const double beta_block = (b1 * b2 * s2 / (32.0 * wd2) - 13.0 * b1 * b2 * s2 * dc / (768.0 * wd3) +
                             29.0 * b1 * b2 * s2 * dc * dc / (3072.0 * wd4)) * p3;
  const double phi5_block =
      b1 * b2 * b2 * (29.0 * b1 * b1 + 38.0 * b1 * b2 + 14.0 * b2 * b2) / (1024.0 * wd4) * p5;
  return (alpha_block + beta_block) * e3 + phi5_block * e5;
}

double rabi_rate_n3(const ThreeLevelReduction& red, double omega_d, double delta_cap, double phi_bar,
                    const Envelope& env, double t_pulse) {
  const double e3 = envelope_moment(env, t_pulse, 3);
  const double e5 = envelope_moment(env, t_pulse, 5);
  return 2.0 * rabi_sigma_x_n3(red, omega_d, delta_cap, phi_bar, e3, e5);
}

double solve_resonance(const ThreeLevelReduction& red, int n, double phi_bar) {
  if (n % 2 == 0 || n < 3) throw invalid_parameter("solve_resonance: n must be an odd integer >= 3");
  const auto shift = [&](double delta) {
    const double wd = (red.omega_eg - delta) / static_cast<double>(n);
    if (n == 3) return stark_shift_n3(red, wd, phi_bar);
    return stark_shift_phi2_exact(red, wd, phi_bar);
  };
  const auto f = [&](double delta) { return delta + shift(delta); };
  if (phi_bar == 0.0) return red.omega_eg / static_cast<double>(n);

  // Bracket around -shift(0); the shift is smooth and near-linear in Delta.
  const double scale = std::max(std::abs(shift(0.0)), 1e-6);
  double lo = -5.0 * scale, hi = 5.0 * scale;
  double flo = f(lo), fhi = f(hi);
  int expand = 0;
  while (flo * fhi > 0.0 && expand++ < 40) {
    lo *= 2.0;
    hi *= 2.0;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo * fhi > 0.0) {
    throw convergence_error("solve_resonance: no sign change in bracket (outside validity range)");
  }
  // Bisection to a coarse root, then secant refinement.
  for (int i = 0; i < 60 && (hi - lo) > 1e-9; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
  for (int i = 0; i < 30 && std::abs(f1) > 1e-12; ++i) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
  }
  if (std::abs(f1) > 1e-6) {
    throw convergence_error("solve_resonance: residual " + std::to_string(f1) + " GHz above 1 kHz");
  }
  return (red.omega_eg - x1) / static_cast<double>(n);
}

int FourierHamiltonian::dim() const {
  for (const auto& [k, m] : components) {
    (void)k;
    return static_cast<int>(m.rows());
  }
  return 0;
}

void FourierHamiltonian::check_hermitian(double tol) const {
  for (const auto& [k, m] : components) {
    const auto it = components.find(-k);
    if (it == components.end() || (it->second - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw invalid_parameter("FourierHamiltonian: H_{-k} != H_k^dagger for k = " + std::to_string(k));
    }
  }
}

namespace {

Eigen::MatrixXcd lowering3() {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(3, 3);
  b(0, 1) = 1.0;
  b(1, 2) = std::sqrt(2.0);
  return b;
}

}  // namespace

FourierHamiltonian subharmonic_frame_components(const ThreeLevelReduction& red, int n, double omega_d,
                                                double phi_bar, double envelope_value) {
  if (n < 3 || n % 2 == 0) throw invalid_parameter("subharmonic frame requires odd n >= 3");
  const Eigen::MatrixXcd b = lowering3();
  const Eigen::MatrixXcd bd = b.adjoint();
  const Eigen::MatrixXcd num = bd * b;
  const Eigen::MatrixXcd anh = bd * bd * b * b;
  const double delta_cap = red.omega_eg - n * omega_d;

  FourierHamiltonian fh;
  fh.omega_d = omega_d;
  fh.components[0] = delta_cap / (2.0 * omega_d) * num + red.alpha / (4.0 * omega_d) * anh;

  // Drive harmonics in tau = 2 omega_d t units: the raising part rotates at
  // +n omega_d and beats against e^{+-i omega_d t}, giving k = (n-1)/2 and
  // (n+1)/2.
  const Eigen::MatrixXcd raise_op = red.beta_1 * bd + red.beta_2 * (bd * bd * b);
  const Eigen::MatrixXcd lower_op = raise_op.adjoint();
  const double c = phi_bar * envelope_value / (4.0 * omega_d);
  const int k1 = (n - 1) / 2;
  const int k2 = (n + 1) / 2;
  fh.components[k1] = c * raise_op;
  fh.components[k2] = c * raise_op;
  fh.components[-k1] = c * lower_op;
  fh.components[-k2] = c * lower_op;
  return fh;
}

Eigen::MatrixXcd floquet_magnus_generic(const FourierHamiltonian& fh, int order) {
  if (order < 1 || order > 3) {
    throw invalid_parameter("floquet_magnus_generic: order must be 1..3 (closed forms beyond 3 exist "
                            "only for the 3-photon drive)");
  }
  fh.check_hermitian(1e-10);
  const int d = fh.dim();
  if (d == 0) throw invalid_parameter("floquet_magnus_generic: empty component map");
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(d, d);
  const auto comp = [&](int k) -> Eigen::MatrixXcd {
    const auto it = fh.components.find(k);
    return it == fh.components.end() ? zero : it->second;
  };
  const auto comm = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) -> Eigen::MatrixXcd {
    return a * b - b * a;
  };

  Eigen::MatrixXcd heff = comp(0);
  if (order >= 2) {
    for (const auto& [k, hk] : fh.components) {
      if (k == 0) continue;
      heff += comm(hk, comp(-k)) / (2.0 * k);
    }
  }
  if (order >= 3) {
    const Eigen::MatrixXcd h0 = comp(0);
    for (const auto& [k, hk] : fh.components) {
      if (k == 0) continue;
      heff += comm(comm(hk, h0), comp(-k)) / (2.0 * k * k);
    }
    for (const auto& [kp, hkp] : fh.components) {
      if (kp == 0) continue;
      for (const auto& [k, hmk_entry] : fh.components) {
        (void)hmk_entry;
        if (k == 0 || k == kp) continue;
        const auto mid = fh.components.find(k - kp);
        if (mid == fh.components.end()) continue;
        const double w = 1.0 / (4.0 * k) * (1.0 / kp + 1.0 / (3.0 * (kp - k)));
        heff += w * comm(comm(hkp, mid->second), comp(-k));
      }
    }
  }
  // Back to energy units.
  Eigen::MatrixXcd out = 2.0 * fh.omega_d * heff;
  if ((out - out.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, out.cwiseAbs().maxCoeff())) {
    throw convergence_error("floquet_magnus_generic: result lost Hermiticity");
  }
  return 0.5 * (out + out.adjoint().eval());
}

double generic_stark_shift(const ThreeLevelReduction& red, int n, double omega_d, double phi_bar,
                           int order, double envelope_value) {
  const FourierHamiltonian fh = subharmonic_frame_components(red, n, omega_d, phi_bar, envelope_value);
  const Eigen::MatrixXcd heff = floquet_magnus_generic(fh, order);
  const double delta_cap = red.omega_eg - n * omega_d;
  return (heff(1, 1) - heff(0, 0)).real() - delta_cap;
}

PowerLawFit fit_power_law(const std::vector<double>& amplitudes, const std::vector<double>& values) {
  if (amplitudes.size() != values.size() || amplitudes.size() < 4) {
    throw invalid_parameter("fit_power_law: need >= 4 paired points");
  }
  const int n = static_cast<int>(amplitudes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(amplitudes[i] > 0.0) || !(values[i] > 0.0)) {
      throw invalid_parameter("fit_power_law: all points must be positive");
    }
    const double x = std::log(amplitudes[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = std::log(values[i]) - (intercept + fit.exponent * std::log(amplitudes[i]));
    ssr += r * r;
  }
  const double var = ssr / std::max(1, n - 2);
  fit.exponent_std_error = std::sqrt(var * n / denom);
  return fit;
}

EffectiveDriveModel build_drive_model(const ThreeLevelReduction& red, double amp_phi0,
                                      const Envelope& env, double t_pulse) {
  EffectiveDriveModel m;
  m.n = 3;
  m.reduction = red;
  m.phi_bar = kTwoPi * amp_phi0;
  m.omega_d = solve_resonance(red, 3, m.phi_bar);
  m.delta_cap = red.omega_eg - 3.0 * m.omega_d;
  m.delta_n = stark_shift_n3(red, m.omega_d, m.phi_bar);
  m.alpha_n = 0.0;
  m.omega_rabi = rabi_rate_n3(red, m.omega_d, m.delta_cap, m.phi_bar, env, t_pulse);
  return m;
}

}  // namespace subflux
