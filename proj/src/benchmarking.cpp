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

#include "subflux/benchmarking.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "subflux/errors.hpp"

namespace subflux {

namespace {

using Eigen::Matrix2cd;
using std::complex;

constexpr complex<double> kI{0.0, 1.0};

Matrix2cd pauli(int axis) {
  Matrix2cd m;
  switch (axis) {
    case 0:
      m << 0, 1, 1, 0;
      break;
    case 1:
      m << 0, -kI, kI, 0;
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Matrix2cd rotation(int axis, double angle) {
  return std::cos(0.5 * angle) * Matrix2cd::Identity() - kI * std::sin(0.5 * angle) * pauli(axis);
}

// Signed-permutation (SO(3)) representation of a Clifford unitary; entries
// are exactly 0 or +-1, which gives an exact group key.
std::array<int, 9> bloch_key(const Matrix2cd& u) {
  std::array<int, 9> key{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const complex<double> tr = (pauli(i) * u * pauli(j) * u.adjoint()).trace();
      key[3 * i + j] = static_cast<int>(std::lround(0.5 * tr.real()));
    }
  }
  return key;
}

// splitmix64: deterministic, platform-independent stream for RB sampling.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int uniform_below(std::uint64_t& state, int bound) {
  // multiply-shift; bias is < 2^-32 for small bounds
  const std::uint64_t r = splitmix64(state) >> 32;
  return static_cast<int>((r * static_cast<std::uint64_t>(bound)) >> 32);
}

}  // namespace

const char* GateSet::generator_name(int g) {
  static const char* names[kNumGenerators] = {"I",      "X+pi",   "X-pi",   "Y+pi",  "Y-pi",
                                              "X+pi/2", "X-pi/2", "Y+pi/2", "Y-pi/2"};
  return names[g];
}

Eigen::Matrix2cd GateSet::generator_unitary(int g) {
  constexpr double kPi = 3.14159265358979323846;
  switch (g) {
    case 0:
      return Matrix2cd::Identity();
    case 1:
      return rotation(0, kPi);
    case 2:
      return rotation(0, -kPi);
    case 3:
      return rotation(1, kPi);
    case 4:
      return rotation(1, -kPi);
    case 5:
      return rotation(0, kPi / 2);
    case 6:
      return rotation(0, -kPi / 2);
    case 7:
      return rotation(1, kPi / 2);
    default:
      return rotation(1, -kPi / 2);
  }
}

double CliffordTable::mean_length() const {
  double s = 0.0;
  for (const auto& d : decomp_) s += d.length;
  return s / kGroupSize;
}

int CliffordTable::find(const Eigen::Matrix2cd& u) const {
  const auto key = bloch_key(u);
  for (int c = 0; c < kGroupSize; ++c) {
    if (keys_[c] == key) return c;
  }
  return -1;
}

CliffordTable compile_cliffords(const GateSet& gs) {
  CliffordTable t;
  std::map<std::array<int, 9>, int> index_of;
  int found = 0;

  // Lexicographic breadth-first enumeration of generator products; the first
  // sequence reaching a new group element is its minimal, tie-broken
  // decomposition.
  for (int len = 1; len <= 3 && found < CliffordTable::kGroupSize; ++len) {
    std::array<int, 3> seq{};
    const int total = static_cast<int>(std::pow(GateSet::kNumGenerators, len));
    for (int code = 0; code < total; ++code) {
      int c = code;
      Matrix2cd u = Matrix2cd::Identity();
      for (int k = len - 1; k >= 0; --k) {
        seq[k] = c % GateSet::kNumGenerators;
        c /= GateSet::kNumGenerators;
      }
      // Apply left to right: U = G_last * ... * G_first.
      for (int k = 0; k < len; ++k) u = gs.generator_unitary(seq[k]) * u;
      const auto key = bloch_key(u);
      if (index_of.contains(key)) continue;
      const int idx = found++;
      index_of[key] = idx;
      t.decomp_[idx].generators = seq;
      t.decomp_[idx].length = len;
      t.unitary_[idx] = u;
      t.keys_[idx] = key;
      if (found == CliffordTable::kGroupSize) break;
    }
  }
  if (found != CliffordTable::kGroupSize) {
    throw convergence_error("compile_cliffords: generator set does not close the Clifford group");
  }
  for (int a = 0; a < CliffordTable::kGroupSize; ++a) {
    for (int b = 0; b < CliffordTable::kGroupSize; ++b) {
      const int p = index_of.at(bloch_key(t.unitary_[a] * t.unitary_[b]));
      t.product_(a, b) = p;
    }
    t.inverse_[a] = index_of.at(bloch_key(t.unitary_[a].adjoint()));
  }
  return t;
}

double NoiseChannel::p1() const { return 1.0 - std::exp(-t_g * 1e-3 / t1); }
double NoiseChannel::p_phi() const { return 1.0 - std::exp(-t_g * 1e-3 / t_phi); }

void NoiseChannel::validate() const {
  if (!(t1 > 0.0) || !(t_phi > 0.0) || !(t_g > 0.0)) {
    throw invalid_parameter("NoiseChannel: t1, t_phi, t_g must be positive");
  }
}

void apply_gate_noise(Eigen::Matrix2cd& rho, const NoiseChannel& noise) {
  const double g = noise.p1();
  // amplitude damping: K0 = diag(1, sqrt(1-g)), K1 = |0><1| sqrt(g)
  const double s = std::sqrt(1.0 - g);
  Matrix2cd out;
  out(0, 0) = rho(0, 0) + g * rho(1, 1);
  out(1, 1) = (1.0 - g) * rho(1, 1);
  out(0, 1) = s * rho(0, 1);
  out(1, 0) = s * rho(1, 0);
  // pure dephasing: Z flip with probability q, so coherences shrink by
  // (1 - 2q) = exp(-t_g/T_phi)
  const double q = 0.5 * noise.p_phi();
  out(0, 1) *= (1.0 - 2.0 * q);
  out(1, 0) *= (1.0 - 2.0 * q);
  rho = out;
}

std::vector<RbPoint> run_rb(const CliffordTable& table, const NoiseChannel& noise,
                            const RbOptions& opts) {
  noise.validate();
  if (opts.lengths.empty()) throw invalid_parameter("run_rb: empty length list");
  for (int m : opts.lengths)
    if (m < 1) throw invalid_parameter("run_rb: lengths must be >= 1");

  const GateSet gs;
  std::vector<RbPoint> out;
  out.reserve(opts.lengths.size());

  int interleaved_clifford = -1;
  if (opts.interleaved_generator) {
    interleaved_clifford = table.find(gs.generator_unitary(*opts.interleaved_generator));
  }

  for (std::size_t li = 0; li < opts.lengths.size(); ++li) {
    const int m = opts.lengths[li];
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < opts.n_sequences; ++s) {
      std::uint64_t rng = opts.seed * 0x2545f4914f6cdd1dULL + 1000003ULL * li + s;
      Eigen::Matrix2cd rho;
      rho << 1, 0, 0, 0;
      int net = -1;  // group index of the accumulated product; -1 = identity unknown yet
      auto apply_clifford = [&](int c) {
        for (int k = 0; k < table.decomposition(c).length; ++k) {
          const Matrix2cd u = gs.generator_unitary(table.decomposition(c).generators[k]);
          rho = (u * rho * u.adjoint()).eval();
          apply_gate_noise(rho, noise);
        }
        net = net < 0 ? c : table.product(c, net);
      };
      for (int j = 0; j < m; ++j) {
        apply_clifford(uniform_below(rng, CliffordTable::kGroupSize));
        if (interleaved_clifford >= 0) apply_clifford(interleaved_clifford);
      }
      apply_clifford(table.inverse(net));
      const double pg = rho(0, 0).real();
      sum += pg;
      sum_sq += pg * pg;
    }
    RbPoint pt;
    pt.length = m;
    pt.mean = sum / opts.n_sequences;
    const double var = std::max(0.0, sum_sq / opts.n_sequences - pt.mean * pt.mean);
    pt.stderr_ = std::sqrt(var / std::max(1, opts.n_sequences - 1));
    out.push_back(pt);
  }
  return out;
}

RbFit fit_rb(const std::vector<RbPoint>& table, double generators_per_clifford) {
  if (table.size() < 3) throw invalid_parameter("fit_rb: need at least 3 lengths");
  // Gauss-Newton on (A, B, p) for A p^m + B.
  double a = table.front().mean - table.back().mean;
  double b = table.back().mean;
  double p = 0.999;
  if (table.size() >= 2 && a > 1e-12) {
    const double y0 = table.front().mean - b;
    const double y1 = table[table.size() / 2].mean - b;
    if (y0 > 0 && y1 > 0 && table[table.size() / 2].length > table.front().length) {
      p = std::pow(y1 / y0, 1.0 / (table[table.size() / 2].length - table.front().length));
      p = std::clamp(p, 0.5, 1.0 - 1e-12);
    }
  }
  const int n = static_cast<int>(table.size());
  Eigen::Matrix3d jtj;
  Eigen::Vector3d jtr;
  for (int it = 0; it < 200; ++it) {
    jtj.setZero();
    jtr.setZero();
    double ssr = 0.0;
    for (const auto& pt : table) {
      const double pm = std::pow(p, pt.length);
      const double r = pt.mean - (a * pm + b);
      Eigen::Vector3d jac(pm, 1.0, a * pt.length * std::pow(p, pt.length - 1));
      jtj += jac * jac.transpose();
      jtr += jac * r;
      ssr += r * r;
    }
    jtj.diagonal().array() += 1e-12;
    const Eigen::Vector3d step = jtj.ldlt().solve(jtr);
    a += step[0];
    b += step[1];
    p += step[2];
    p = std::clamp(p, 1e-6, 1.0 - 1e-15);
    if (step.cwiseAbs().maxCoeff() < 1e-14) break;
    (void)ssr;
  }
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw convergence_error("fit_rb: depolarizing parameter outside (0, 1]");
  }
  RbFit fit;
  fit.a = a;
  fit.b = b;
  fit.p = p;
  // standard error of p from the linearized fit
  double ssr = 0.0;
  for (const auto& pt : table) {
    const double r = pt.mean - (a * std::pow(p, pt.length) + b);
    ssr += r * r;
  }
  const double var = ssr / std::max(1, n - 3);
  Eigen::Matrix3d cov = jtj.inverse();
  fit.p_std_error = std::sqrt(std::max(0.0, var * cov(2, 2)));
  fit.r_clifford = 0.5 * (1.0 - p);
  fit.f_avg_clifford = 1.0 - fit.r_clifford;
  const double p_gen = std::pow(p, 1.0 / generators_per_clifford);
  fit.f_avg_generator = 1.0 - 0.5 * (1.0 - p_gen);
  return fit;
}

double interleaved_fidelity(double p_reference, double p_interleaved, int d) {
  if (!(p_reference > 0.0)) throw invalid_parameter("interleaved_fidelity: reference p must be > 0");
  const double r = (1.0 - p_interleaved / p_reference) * (d - 1) / d;
  return 1.0 - r;
}

double coherence_limit(double t_g_ns, double t1_us, double t_phi_us) {
  if (!(t_g_ns > 0.0) || !(t1_us > 0.0) || !(t_phi_us > 0.0)) {
    throw invalid_parameter("coherence_limit: inputs must be positive");
  }
  const double t_g_us = t_g_ns * 1e-3;
  return 1.0 - (t_g_us / 3.0) * (1.0 / t_phi_us + 1.0 / t1_us);
}

}  // namespace subflux
