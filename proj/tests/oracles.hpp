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

// Reference computations for the tests. Everything here is deliberately
// naive (uniform grids, closed forms) and shares no code with the library
// beyond evaluating S(f).

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Composite Simpson rule on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// S(f) = (1/f0) / ((pi f/f0)^2 + 1) integrated over |f| < a.
inline double gauss_markov_energy(double f0, double a) {
  return 2.0 / std::numbers::pi * std::atan(std::numbers::pi * a / f0);
}

/// Pinsker waterfilling at level theta by midpoint rule on [lo, hi].
struct GridPoint {
  double rate;
  double distortion;
};
inline GridPoint grid_waterfill(const std::function<double(double)>& s, double lo, double hi, double theta,
                                double variance, int n = 200000) {
  const double h = (hi - lo) / n;
  double r = 0.0, excess = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = s(lo + (i + 0.5) * h);
    if (v > theta) {
      r += 0.5 * std::log2(v / theta) * h;
      excess += (v - theta) * h;
    }
  }
  return {r, variance - excess};
}

/// Energy of the best set of measure f_s: top cells of a midpoint grid.
inline double grid_best_energy(const std::function<double(double)>& s, double lo, double hi, double f_s,
                               int n = 200000) {
  const double h = (hi - lo) / n;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = s(lo + (i + 0.5) * h);
  std::sort(v.begin(), v.end(), std::greater<>());
  const int take = std::min(n, static_cast<int>(std::lround(f_s / h)));
  double e = 0.0;
  for (int i = 0; i < take; ++i) e += v[i] * h;
  return e;
}

/// Rect sampled DRF: 1 - (f_s / 2f_B)(1 - 2^{-2R/f_s}) below Nyquist.
inline double rect_sampled_drf(double f_b, double f_s, double rate) {
  const double fs = std::min(f_s, 2.0 * f_b);
  return 1.0 - fs / (2.0 * f_b) * (1.0 - std::exp2(-2.0 * rate / fs));
}

}  // namespace oracle
