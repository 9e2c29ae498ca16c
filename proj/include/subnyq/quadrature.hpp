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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "subnyq/spectral_set.hpp"

namespace subnyq::quadrature {

/// Relative tolerance requested from the adaptive Gauss-Kronrod rule.
inline constexpr double kRelTol = 1e-12;
inline constexpr unsigned kMaxDepth = 15;

/// Adaptive Gauss-Kronrod (G15/K31) on [a, b]. Infinite limits are accepted.
template <class F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (std::isinf(a) || std::isinf(b)) return Rule::integrate(f, a, b, kMaxDepth, kRelTol);
  // The rule tests its unscaled local error against a width-scaled
  // tolerance, so narrow panels never terminate early. Map onto [0, 1].
  const double width = b - a;
  return width * Rule::integrate([&](double t) { return f(a + width * t); }, 0.0, 1.0, kMaxDepth, kRelTol);
}

/// Integrates piecewise over [a, b], splitting at every breakpoint strictly
/// inside so that kinks of the integrand sit on panel edges.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breakpoints) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += integrate(f, cuts[i], cuts[i + 1]);
  return sum;
}

template <class F>
double integrate(F&& f, const SpectralSet& set, std::span<const double> breakpoints = {}) {
  double sum = 0.0;
  for (const auto& iv : set.intervals()) sum += integrate(f, iv.lo, iv.hi, breakpoints);
  return sum;
}

}  // namespace subnyq::quadrature
