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
#include <optional>

#include "subnyq/errors.hpp"
#include "subnyq/psd.hpp"
#include "subnyq/quadrature.hpp"
#include "subnyq/spectral_set.hpp"

// Reverse waterfilling over a spectral density, optionally restricted to a
// frequency set. Rates are in bits per unit time throughout.

namespace subnyq {

struct WaterfillPoint {
  double theta = 0.0;       ///< water level, PSD units
  double rate = 0.0;        ///< bits per unit time
  double distortion = 0.0;  ///< MSE, power units
  SpectralSet domain;       ///< set the integrals run over
};

namespace waterfill_detail {

template <SpectralDensity S>
SpectralSet active_set(const S& psd, double theta, const std::optional<SpectralSet>& domain) {
  auto above = psd.superlevel_set(theta);
  return domain ? set_intersection(above, *domain) : above;
}

/// (1/2) integral of log2(S/theta) over `active`, where S > theta.
template <SpectralDensity S>
double rate_over(const S& psd, double theta, const SpectralSet& active) {
  const double nats = quadrature::integrate(
      [&](double f) {
        const double s = psd(f);
        // log1p keeps full precision when s is just above theta
        return s > theta ? std::log1p((s - theta) / theta) : 0.0;
      },
      active, psd.breakpoints());
  return 0.5 * nats / std::numbers::ln2;
}

/// integral of [S - theta]^+ over `active`.
template <SpectralDensity S>
double excess_over(const S& psd, double theta, const SpectralSet& active) {
  return quadrature::integrate([&](double f) { return std::max(psd(f) - theta, 0.0); }, active,
                               psd.breakpoints());
}

template <SpectralDensity S>
WaterfillPoint evaluate(const S& psd, double theta, const std::optional<SpectralSet>& domain) {
  const auto active = active_set(psd, theta, domain);
  WaterfillPoint p;
  p.theta = theta;
  p.rate = rate_over(psd, theta, active);
  p.distortion = psd.variance() - excess_over(psd, theta, active);
  p.domain = domain ? *domain : active;
  return p;
}

template <SpectralDensity S>
WaterfillPoint solve(const S& psd, double rate, const std::optional<SpectralSet>& domain) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("rate must be a finite nonnegative number");
  const double top = psd.ess_sup();
  if (rate == 0.0) return evaluate(psd, top, domain);

  double measure = psd.landau_rate();
  if (domain) {
    measure = set_intersection(*domain, psd.support()).measure();
    if (!(measure > 0.0)) throw DomainError("positive rate is not achievable on a null frequency set");
  }
  const double tol = 1e-13 * std::max(1.0, rate);
  auto rate_at = [&](double theta) { return rate_over(psd, theta, active_set(psd, theta, domain)); };

  // Flat-spectrum start: exact when S is constant on the domain.
  double hi = top;
  double lo = std::isfinite(measure) ? top * std::exp2(-2.0 * rate / measure) : 0.5 * top;
  if (!(lo > 0.0)) lo = std::numeric_limits<double>::min();
  double r_lo = rate_at(lo);
  for (int i = 0; r_lo < rate - tol; ++i) {
    if (i > 2000 || lo < 1e-300) throw ConvergenceError("waterfill: cannot bracket the water level");
    hi = lo;
    lo *= 0.5;
    r_lo = rate_at(lo);
  }
  if (std::abs(r_lo - rate) <= tol) return evaluate(psd, lo, domain);

  // Geometric bisection; R(theta) is continuous and non-increasing.
  for (int i = 0; i < 400; ++i) {
    const double mid = std::sqrt(lo * hi);
    const double r = rate_at(mid);
    if (std::abs(r - rate) <= tol || hi / lo - 1.0 < 1e-15) return evaluate(psd, mid, domain);
    if (r > rate) lo = mid;
    else hi = mid;
  }
  throw ConvergenceError("waterfill: bisection did not converge");
}

}  // namespace waterfill_detail

/// Waterfilling at a given level over the whole line:
/// R = (1/2) integral log2+[S/theta], D = integral min{S, theta}.
template <SpectralDensity S>
WaterfillPoint drf_from_theta(const S& psd, double theta) {
  if (!(theta > 0.0)) throw DomainError("water level must be positive");
  return waterfill_detail::evaluate(psd, theta, std::nullopt);
}

/// As drf_from_theta, with every integral restricted to `domain`;
/// D = variance - integral_domain [S - theta]^+.
template <SpectralDensity S>
WaterfillPoint waterfill_on(const S& psd, double theta, const SpectralSet& domain) {
  if (!(theta > 0.0)) throw DomainError("water level must be positive");
  return waterfill_detail::evaluate(psd, theta, domain);
}

/// Finds the water level that spends `rate` bits over the whole line.
template <SpectralDensity S>
WaterfillPoint theta_from_rate(const S& psd, double rate) {
  return waterfill_detail::solve(psd, rate, std::nullopt);
}

/// Finds the water level that spends `rate` bits on `domain` only.
template <SpectralDensity S>
WaterfillPoint theta_from_rate(const S& psd, double rate, const SpectralSet& domain) {
  return waterfill_detail::solve(psd, rate, domain);
}

/// Distortion-rate function D_X(R) of the process (Pinsker).
template <SpectralDensity S>
double drf(const S& psd, double rate) {
  return theta_from_rate(psd, rate).distortion;
}

}  // namespace subnyq
