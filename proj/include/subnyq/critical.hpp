// Copyright 2026 The subnyq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>

#include "subnyq/errors.hpp"
#include "subnyq/psd.hpp"
#include "subnyq/sampled_drf.hpp"
#include "subnyq/waterfill.hpp"

namespace subnyq {

/// An operating point on the distortion-rate curve and the smallest
/// sampling frequency f_dr at which sub-Nyquist sampling still attains it.
struct CriticalFrequencyPoint {
  double rate = 0.0;
  double distortion = 0.0;
  double f_dr = 0.0;
  double theta = 0.0;
};

/// f_dr is the measure of {S > theta(R)}, theta solving the unrestricted
/// waterfilling at `rate`.
template <SpectralDensity S>
CriticalFrequencyPoint fdr_from_rate(const S& psd, double rate) {
  const auto p = theta_from_rate(psd, rate);
  return {p.rate, p.distortion, psd.superlevel_set(p.theta).measure(), p.theta};
}

/// Same operating point, parametrized by the distortion D in (0, variance).
template <SpectralDensity S>
CriticalFrequencyPoint fdr_from_distortion(const S& psd, double distortion) {
  if (!(distortion > 0.0) || !(distortion < psd.variance()))
    throw DomainError("distortion must lie strictly between 0 and the variance");
  // D(theta) = integral min{S, theta} is strictly increasing below ess_sup.
  double lo = 0.0, hi = psd.ess_sup();
  double theta = 0.5 * hi;
  for (int i = 0; i < 400; ++i) {
    theta = 0.5 * (lo + hi);
    if (!(theta > lo && theta < hi)) break;
    const double d = drf_from_theta(psd, theta).distortion;
    if (std::abs(d - distortion) <= 1e-15 * std::max(1.0, distortion)) break;
    if (d > distortion) hi = theta;
    else lo = theta;
  }
  const auto p = drf_from_theta(psd, theta);
  return {p.rate, p.distortion, psd.superlevel_set(theta).measure(), theta};
}

/// Measure of the symmetric difference between F*(f_dr) and {S > theta(R)}.
/// The two sets coincide, so the result should vanish.
template <SpectralDensity S>
double verify_set_coincidence(const S& psd, double rate) {
  if (!(rate > 0.0)) throw DomainError("rate must be positive");
  const auto p = fdr_from_rate(psd, rate);
  const auto f_theta = psd.superlevel_set(p.theta);
  const auto f_star = optimal_fstar(psd, p.f_dr);
  return symmetric_difference_measure(f_star, f_theta);
}

/// Closed-form rate as a function of f_dr for the analytic models, derived by
/// integrating the waterfilling rate over the interval |f| < f_dr / 2.
namespace closed_form {

/// Triangle of bandwidth f_B, 0 <= f_dr < 2 f_B:
/// R = f_B log2(1 / (1 - f_dr/(2 f_B))) - f_dr / (2 ln 2).
inline double triangle_rate(double f_b, double f_dr) {
  const double c = 1.0 - f_dr / (2.0 * f_b);
  return f_b * std::log2(1.0 / c) - f_dr / (2.0 * std::numbers::ln2);
}

/// Gauss-Markov with corner f_0:
/// R = (1/ln 2) (f_dr - f_0 atan(pi f_dr / (2 f_0)) / (pi/2)).
inline double gauss_markov_rate(double f_0, double f_dr) {
  using std::numbers::pi;
  return (f_dr - f_0 * std::atan(pi * f_dr / (2.0 * f_0)) / (pi / 2.0)) / std::numbers::ln2;
}

/// Triangle: f_dr = 2 f_B sqrt(1 - D) for unit variance.
inline double triangle_fdr(double f_b, double distortion) { return 2.0 * f_b * std::sqrt(1.0 - distortion); }

/// Gauss-Markov: f_dr = (2 f_0 / pi) sqrt(1/(theta f_0) - 1).
inline double gauss_markov_fdr(double f_0, double theta) {
  return 2.0 * f_0 / std::numbers::pi * std::sqrt(1.0 / (theta * f_0) - 1.0);
}

/// Widely circulated variants of the same two relations, with ln 2 and f_B
/// swapped in the triangle form and a factor of two missing in the arctangent.
/// Neither reproduces direct waterfilling (the triangle form gives R ~ 1.34 at
/// f_B = f_dr = 1 where the true rate is ~ 0.279); for comparison only.
namespace legacy {

inline double triangle_rate(double f_b, double f_dr) {
  return f_b * std::log2(1.0 / (1.0 - f_dr / (2.0 * std::numbers::ln2))) - f_dr / (2.0 * f_b);
}

inline double gauss_markov_rate(double f_0, double f_dr) {
  using std::numbers::pi;
  return (f_dr - f_0 * std::atan(pi * f_dr / f_0) / (pi / 2.0)) / std::numbers::ln2;
}

}  // namespace legacy
}  // namespace closed_form

}  // namespace subnyq
