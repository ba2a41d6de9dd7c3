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

#include "subflux/transfer.hpp"

#include <cmath>
#include <functional>

#include "subflux/effective.hpp"
#include "subflux/errors.hpp"
#include "subflux/units.hpp"

namespace subflux {

void TransferModel::validate() const {
  if (a0 < 0.0 || !std::isfinite(a0)) throw invalid_parameter("transfer model needs a0 >= 0");
}

double attenuate(double phi_source, double f_d_ghz, const TransferModel& model) {
  model.validate();
  if (f_d_ghz < 0.0) throw invalid_parameter("attenuate: frequency must be >= 0");
  return phi_source / (1.0 + model.a0 * std::sqrt(ghz_to_hz(f_d_ghz)));
}

double deattenuate(double phi_qubit, double f_d_ghz, const TransferModel& model) {
  model.validate();
  return phi_qubit * (1.0 + model.a0 * std::sqrt(ghz_to_hz(f_d_ghz)));
}

namespace {

double sum_sq_residual(const std::vector<TransferFitPoint>& data, const ThreeLevelReduction& red,
                       double a0, int* evals) {
  TransferModel m{a0};
  double ssr = 0.0;
  for (const auto& pt : data) {
    const double amp_q = attenuate(pt.amplitude_source, pt.omega_d, m);
    const double f_model = solve_resonance(red, 3, kTwoPi * amp_q);
    const double r = f_model - pt.omega_d;
    ssr += r * r;
    if (evals) ++(*evals);
  }
  return ssr;
}

}  // namespace

TransferFitResult fit_a0(const std::vector<TransferFitPoint>& data, const ThreeLevelReduction& red) {
  if (data.size() < 3) throw invalid_parameter("fit_a0: need at least 3 points");
  TransferFitResult out;
  int evals = 0;
  const auto f = [&](double a0) { return sum_sq_residual(data, red, a0, &evals); };

  // Bracket the minimum on a geometric ladder, then golden-section.
  double best_a0 = 0.0, best = f(0.0);
  for (double a0 = 1e-7; a0 < 3e-3; a0 *= 1.6) {
    const double v = f(a0);
    if (v < best) {
      best = v;
      best_a0 = a0;
    }
  }
  double lo = best_a0 / 1.6, hi = std::max(best_a0 * 1.6, 1e-7);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 80 && (hi - lo) > 1e-12 + 1e-9 * hi; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
  }
  const double a0 = 0.5 * (lo + hi);
  const double ssr = f(a0);
  if (!std::isfinite(ssr)) throw convergence_error("fit_a0: residual not finite at the fitted a0");

  out.model.a0 = a0;
  out.rms_residual = std::sqrt(ssr / data.size());
  // Standard error from the local curvature of the residuals: sigma^2 =
  // SSR/(N-1) / sum (d r_i/d a0)^2, derivatives by central differences.
  const double h = std::max(1e-8, 1e-4 * a0);
  double grad_sq = 0.0;
  TransferModel mp{a0 + h}, mm{std::max(0.0, a0 - h)};
  for (const auto& pt : data) {
    const double rp = solve_resonance(red, 3, kTwoPi * attenuate(pt.amplitude_source, pt.omega_d, mp)) -
                      pt.omega_d;
    const double rm = solve_resonance(red, 3, kTwoPi * attenuate(pt.amplitude_source, pt.omega_d, mm)) -
                      pt.omega_d;
    const double dr = (rp - rm) / (2.0 * h);
    grad_sq += dr * dr;
  }
  const int dof = std::max(1, static_cast<int>(data.size()) - 1);
  out.a0_std_error = grad_sq > 0.0 ? std::sqrt(ssr / dof / grad_sq) : 0.0;
  out.evaluations = evals;
  return out;
}

double ratio_to_db(double ratio, DbMode mode) {
  if (!(ratio > 0.0)) throw invalid_parameter("ratio_to_db: ratio must be positive");
  return mode == DbMode::power ? 10.0 * std::log10(ratio) : 20.0 * std::log10(ratio);
}

double db_to_ratio(double db, DbMode mode) {
  return mode == DbMode::power ? std::pow(10.0, db / 10.0) : std::pow(10.0, db / 20.0);
}

}  // namespace subflux
