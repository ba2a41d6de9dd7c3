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

#include "subflux/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "subflux/errors.hpp"

namespace subflux {

namespace {

double truncated_gaussian(double u, double cut) {
  // exp(-u^2/2) with the value at |u| = cut subtracted and renormalized to 1
  // at u = 0.
  const double base = std::exp(-0.5 * cut * cut);
  return (std::exp(-0.5 * u * u) - base) / (1.0 - base);
}

}  // namespace

double Envelope::edge_length(double t_pulse) const {
  if (kind == Kind::rectangular) return 0.0;
  if (kind == Kind::gaussian) return t_pulse / 2.0;
  return std::min(cut * sigma, t_pulse / 2.0);
}

double Envelope::plateau(double t_pulse) const { return t_pulse - 2.0 * edge_length(t_pulse); }

double Envelope::value(double t, double t_pulse) const {
  if (t <= 0.0 || t >= t_pulse) return 0.0;
  switch (kind) {
    case Kind::rectangular:
      return 1.0;
    case Kind::gaussian: {
      const double center = 0.5 * t_pulse;
      const double c = center / sigma;  // truncation at the pulse ends
      return std::max(0.0, truncated_gaussian((t - center) / sigma, c));
    }
    case Kind::flat_top_gaussian: {
      const double edge = edge_length(t_pulse);
      const double eff_sigma = edge / cut;
      if (t < edge) return std::max(0.0, truncated_gaussian((t - edge) / eff_sigma, cut));
      if (t > t_pulse - edge)
        return std::max(0.0, truncated_gaussian((t - (t_pulse - edge)) / eff_sigma, cut));
      return 1.0;
    }
  }
  return 0.0;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double envelope_moment(const Envelope& env, double t_pulse, int k) {
  if (k < 1 || k > 8) throw invalid_parameter("envelope_moment: k must be in [1,8]");
  if (!(t_pulse > 0.0)) throw invalid_parameter("envelope_moment: t_pulse must be positive");
  if (env.kind == Envelope::Kind::rectangular) return 1.0;

  const auto f = [&](double t) { return std::pow(env.value(t, t_pulse), k); };
  if (env.kind == Envelope::Kind::flat_top_gaussian) {
    // Plateau integrates exactly; quadrature only on the edges.
    const double edge = env.edge_length(t_pulse);
    const double plateau = t_pulse - 2.0 * edge;
    const double tol = 1e-10 * t_pulse;
    const double edges = integrate(f, 0.0, edge, tol) + integrate(f, t_pulse - edge, t_pulse, tol);
    return (edges + plateau) / t_pulse;
  }
  return integrate(f, 0.0, t_pulse, 1e-10 * t_pulse) / t_pulse;
}

std::string to_string(Envelope::Kind kind) {
  switch (kind) {
    case Envelope::Kind::flat_top_gaussian:
      return "flat_top_gaussian";
    case Envelope::Kind::gaussian:
      return "gaussian";
    case Envelope::Kind::rectangular:
      return "rectangular";
  }
  return "?";
}

Envelope::Kind envelope_kind_from_string(const std::string& s) {
  if (s == "flat_top_gaussian") return Envelope::Kind::flat_top_gaussian;
  if (s == "gaussian") return Envelope::Kind::gaussian;
  if (s == "rectangular") return Envelope::Kind::rectangular;
  throw invalid_parameter("unknown envelope kind: " + s);
}

void DrivePulse::validate() const {
  if (amplitude < 0.0) throw invalid_parameter("pulse amplitude must be >= 0");
  if (!(t_pulse > 0.0)) throw invalid_parameter("pulse duration must be positive");
  if (!(omega_d >= 0.0)) throw invalid_parameter("drive frequency must be >= 0");
}

}  // namespace subflux
