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
#include <limits>
#include <variant>
#include <vector>

#include "subnyq/critical.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/psd.hpp"
#include "subnyq/quadrature.hpp"
#include "subnyq/sampled_drf.hpp"
#include "subnyq/waterfill.hpp"

namespace subnyq {

/// Additive white noise: constant PSD level on the whole line.
struct WhiteNoise {
  double level = 0.0;
};

using NoiseModel = std::variant<WhiteNoise, Psd>;

/// PSD of the Wiener estimate of a signal from signal + independent noise,
/// S_X^2 / (S_X + S_eps). Satisfies SpectralDensity, so every waterfilling
/// routine runs on it unchanged.
class EffectivePsd {
 public:
  EffectivePsd(Psd signal, NoiseModel noise) : signal_(std::move(signal)), noise_(std::move(noise)) {
    if (const auto* w = std::get_if<WhiteNoise>(&noise_)) {
      if (!(w->level >= 0.0) || !std::isfinite(w->level)) throw ConfigError("noise level must be finite and >= 0");
    }
    const auto sb = signal_.breakpoints();
    breakpoints_.assign(sb.begin(), sb.end());
    if (const auto* n = std::get_if<Psd>(&noise_)) {
      const auto nb = n->breakpoints();
      breakpoints_.insert(breakpoints_.end(), nb.begin(), nb.end());
      std::sort(breakpoints_.begin(), breakpoints_.end());
      breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
    }
    const auto f = [this](double x) { return eval(x); };
    const auto& supp = signal_.support();
    if (supp.is_bounded()) {
      variance_ = quadrature::integrate(f, supp, breakpoints_);
    } else {
      constexpr double inf = std::numeric_limits<double>::infinity();
      variance_ = quadrature::integrate(f, -inf, inf, breakpoints_);
    }
    if (is_white()) {
      ess_sup_ = gain(signal_.ess_sup());
    } else {
      ess_sup_ = scan_max();
    }
  }

  double operator()(double f) const { return eval(f); }

  [[nodiscard]] double eval(double f) const {
    const double s = signal_(f);
    const double denom = s + noise_at(f);
    return denom > 0.0 ? s * s / denom : 0.0;
  }

  [[nodiscard]] double noise_at(double f) const {
    if (const auto* w = std::get_if<WhiteNoise>(&noise_)) return w->level;
    return std::get<Psd>(noise_)(f);
  }

  [[nodiscard]] bool is_white() const { return std::holds_alternative<WhiteNoise>(noise_); }
  [[nodiscard]] const Psd& signal() const { return signal_; }
  [[nodiscard]] const NoiseModel& noise() const { return noise_; }

  /// integral of S_X^2/(S_X + S_eps), the power of the Wiener estimate.
  [[nodiscard]] double variance() const { return variance_; }
  [[nodiscard]] double ess_sup() const { return ess_sup_; }
  [[nodiscard]] SpectralSet support() const { return signal_.support(); }
  [[nodiscard]] double landau_rate() const { return signal_.landau_rate(); }
  [[nodiscard]] std::span<const double> breakpoints() const { return breakpoints_; }

  [[nodiscard]] SpectralSet superlevel_set(double theta) const {
    if (const auto* w = std::get_if<WhiteNoise>(&noise_)) {
      // s^2/(s + n) > theta  <=>  s > (theta + sqrt(theta^2 + 4 theta n)) / 2
      const double t = std::max(theta, 0.0);
      const double level = 0.5 * (t + std::sqrt(t * t + 4.0 * t * w->level));
      return signal_.superlevel_set(level);
    }
    return scan_superlevel(theta);
  }

 private:
  /// Monotone map s -> s^2/(s + n) for white noise.
  [[nodiscard]] double gain(double s) const {
    const double n = std::get<WhiteNoise>(noise_).level;
    return s + n > 0.0 ? s * s / (s + n) : 0.0;
  }

  // Colored noise: the effective PSD is no longer a monotone function of S_X.
  // Since S_eff <= S_X, {S_eff > theta} lies inside {S_X > theta}; scan that
  // window and refine every crossing by bisection.
  static constexpr int kScanPoints = 4096;

  [[nodiscard]] SpectralSet scan_superlevel(double theta) const {
    const auto window = signal_.superlevel_set(std::max(theta, 0.0));
    std::vector<Interval> out;
    for (const auto& iv : window.intervals()) {
      const double lo = std::isfinite(iv.lo) ? iv.lo : -1e6 * signal_.frequency_scale();
      const double hi = std::isfinite(iv.hi) ? iv.hi : 1e6 * signal_.frequency_scale();
      std::vector<double> xs;
      for (int i = 0; i <= kScanPoints; ++i) xs.push_back(lo + (hi - lo) * i / kScanPoints);
      for (double b : breakpoints_)
        if (b > lo && b < hi) xs.push_back(b);
      std::sort(xs.begin(), xs.end());
      auto above = [&](double x) { return eval(x) > theta; };
      bool inside = above(xs.front());
      double start = xs.front();
      for (std::size_t i = 1; i < xs.size(); ++i) {
        const bool now = above(xs[i]);
        if (now == inside) continue;
        double a = xs[i - 1], c = xs[i];
        for (int it = 0; it < 80 && c - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
          const double m = 0.5 * (a + c);
          (above(m) == inside ? a : c) = m;
        }
        const double cross = 0.5 * (a + c);
        if (inside) out.push_back({start, cross});
        else start = cross;
        inside = now;
      }
      if (inside) out.push_back({start, xs.back()});
    }
    return SpectralSet(std::move(out));
  }

  [[nodiscard]] double scan_max() const {
    const auto& supp = signal_.support();
    const auto h = supp.hull();
    const double lo = std::isfinite(h.lo) ? h.lo : -50.0 * signal_.frequency_scale();
    const double hi = std::isfinite(h.hi) ? h.hi : 50.0 * signal_.frequency_scale();
    double best = 0.0;
    for (int i = 0; i <= kScanPoints; ++i) best = std::max(best, eval(lo + (hi - lo) * i / kScanPoints));
    for (double b : breakpoints_) best = std::max(best, eval(b));
    return best;
  }

  Psd signal_;
  NoiseModel noise_;
  std::vector<double> breakpoints_;
  double variance_ = 0.0;
  double ess_sup_ = 0.0;
};

static_assert(SpectralDensity<EffectivePsd>);

/// A signal observed through additive independent Gaussian noise.
class NoisySource {
 public:
  NoisySource(Psd signal, NoiseModel noise) : effective_(std::move(signal), std::move(noise)) {}
  static NoisySource white(Psd signal, double noise_level) {
    return NoisySource(std::move(signal), WhiteNoise{noise_level});
  }

  [[nodiscard]] const Psd& signal() const { return effective_.signal(); }
  [[nodiscard]] const EffectivePsd& effective() const { return effective_; }
  /// Error of the noncausal Wiener filter: variance_X - integral S_eff.
  [[nodiscard]] double mmse_floor() const {
    return std::clamp(signal().variance() - effective_.variance(), 0.0, signal().variance());
  }

 private:
  EffectivePsd effective_;
};

inline double effective_psd(const NoisySource& source, double f) { return source.effective()(f); }

struct IndirectDrfPoint {
  double distortion = 0.0;
  double theta = 0.0;
};

/// Indirect DRF of the signal given its noisy version: waterfilling on the
/// effective PSD plus the Wiener floor.
inline IndirectDrfPoint dt_idrf(const NoisySource& source, double rate) {
  const auto p = theta_from_rate(source.effective(), rate);
  return {source.mmse_floor() + p.distortion, p.theta};
}

/// Sampled version: F* maximizes the effective energy, and the result is
/// measured against the clean signal variance.
inline SampledDrfResult noisy_sampled_drf(const NoisySource& source, double f_s, double rate) {
  auto r = sampled_drf(source.effective(), f_s, rate);
  r.distortion += source.mmse_floor();
  r.mmse_component += source.mmse_floor();
  return r;
}

/// Critical frequency under noise: measure of {S_eff > theta(R)}.
inline CriticalFrequencyPoint noisy_fdr(const NoisySource& source, double rate) {
  auto p = fdr_from_rate(source.effective(), rate);
  p.distortion += source.mmse_floor();
  return p;
}

}  // namespace subnyq
