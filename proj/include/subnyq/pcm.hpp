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
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/psd.hpp"
#include "subnyq/quadrature.hpp"
#include "subnyq/sampled_drf.hpp"

// Pulse-code modulation: uniform sampling, a q-bit scalar quantizer modeled
// as additive white noise of variance c0 / (2^q - 1)^2, and a linear MMSE
// decoder. At a fixed bitrate R the resolution is q = R / f_s.

namespace subnyq {

/// c0 / sigma_in^2 for a Gaussian input under ideal Lloyd point density.
inline constexpr double kLloydNoiseConstant = std::numbers::pi * std::numbers::sqrt3 / 2.0;

struct PcmConfig {
  double rate = 0.0;         ///< R, bits per unit time
  double c0 = 0.0;           ///< quantizer noise constant, power units
  double sigma_in_sq = 0.0;  ///< quantizer input variance used to derive c0
  double fs_max = 0.0;       ///< upper end of the f_s search, <= R
  /// Rescale c0 with the in-band power sigma_X^2 - mmse(f_s) instead of
  /// holding sigma_in^2 at sigma_X^2.
  bool exact_sigma_in = false;

  static PcmConfig for_source(const Psd& psd, double rate) {
    PcmConfig c;
    c.rate = rate;
    c.sigma_in_sq = psd.variance();
    c.c0 = kLloydNoiseConstant * c.sigma_in_sq;
    c.fs_max = rate;
    c.validate();
    return c;
  }

  void validate() const {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("PCM bitrate must be positive");
    if (!(c0 > 0.0)) throw ConfigError("PCM noise constant c0 must be positive");
    if (!(sigma_in_sq > 0.0)) throw ConfigError("PCM input variance must be positive");
    if (!(fs_max > 0.0) || fs_max > rate) throw ConfigError("PCM f_s search bound must lie in (0, R]");
  }
};

/// Variance of the quantization noise at sampling rate f_s:
/// c0 / (2^{R/f_s} - 1)^2. Needs at least one bit per sample.
inline double quantizer_noise_var(const PcmConfig& config, double f_s) {
  if (!(f_s > 0.0)) throw DomainError("sampling frequency must be positive");
  if (f_s > config.rate) throw DomainError("f_s > R leaves fewer than one bit per sample");
  const double levels = std::exp2(config.rate / f_s) - 1.0;
  return config.c0 / (levels * levels);
}

/// Pre-sampling filter: a complex frequency response that vanishes for
/// |f| > bandwidth (bandwidth may be infinite).
struct Prefilter {
  std::function<std::complex<double>(double)> gain;
  double bandwidth = std::numeric_limits<double>::infinity();
  std::vector<double> edges;

  static Prefilter lowpass(double cutoff) {
    return {[cutoff](double f) { return std::complex<double>(std::abs(f) <= cutoff ? 1.0 : 0.0); },
            cutoff,
            {-cutoff, cutoff}};
  }
  static Prefilter allpass() {
    return {[](double) { return std::complex<double>(1.0); }, std::numeric_limits<double>::infinity(), {}};
  }
  static Prefilter zero() { return {[](double) { return std::complex<double>(0.0); }, 0.0, {}}; }
};

namespace pcm_detail {

inline constexpr int kMaxAliases = 1 << 14;
inline constexpr double kAliasTailTol = 1e-10;

/// Calls visit(k) for every alias index that can contribute at a frequency
/// in the fundamental cell. Bandlimited products get the exact index range;
/// otherwise terms are added until both new terms are negligible.
template <class Visit>
void for_each_alias(double extent, double f_s, Visit&& visit) {
  if (std::isfinite(extent)) {
    const int k_max = static_cast<int>(std::ceil((extent + 0.5 * f_s) / f_s));
    for (int k = -k_max; k <= k_max; ++k) visit(k);
    return;
  }
  double running = visit(0);
  for (int k = 1; k <= kMaxAliases; ++k) {
    const double added = visit(k) + visit(-k);
    running += added;
    if (added <= kAliasTailTol * running) break;
  }
}

template <SpectralDensity S>
double extent(const S& psd, const Prefilter& h) {
  const auto supp = psd.support();
  double e = h.bandwidth;
  if (supp.is_bounded() && !supp.empty()) {
    const auto hull = supp.hull();
    e = std::min(e, std::max(std::abs(hull.lo), std::abs(hull.hi)));
  }
  return e;
}

}  // namespace pcm_detail

/// Linear MMSE of the process from quantized samples with an arbitrary
/// pre-sampling filter:
/// variance - integral over the cell of
///   sum_k S^2 |H|^2 (f - k f_s) / (sum_k S |H|^2 (f - k f_s) + sigma_eta^2 / f_s).
template <SpectralDensity S>
double pcm_mmse_general(const S& psd, const Prefilter& h, double f_s, double sigma_eta_sq) {
  if (!(f_s > 0.0)) throw DomainError("sampling frequency must be positive");
  if (!(sigma_eta_sq >= 0.0)) throw DomainError("noise variance must be nonnegative");
  const double ext = pcm_detail::extent(psd, h);
  const double floor = sigma_eta_sq / f_s;
  auto integrand = [&](double f) {
    double num = 0.0, den = 0.0;
    pcm_detail::for_each_alias(ext, f_s, [&](int k) {
      const double g = f - k * f_s;
      const double s = psd(g);
      const double w = std::norm(h.gain(g)) * s;
      num += w * s;
      den += w;
      return w;
    });
    den += floor;
    return den > 0.0 ? num / den : 0.0;
  };
  std::vector<double> cuts;
  const double half = 0.5 * f_s;
  auto add_folded = [&](double x) {
    // fold x into the cell so that alias kinks land on panel edges
    const double y = x - std::round(x / f_s) * f_s;
    if (y > -half && y < half) cuts.push_back(y);
  };
  for (double b : psd.breakpoints()) add_folded(b);
  for (double b : h.edges) add_folded(b);
  return psd.variance() - quadrature::integrate(integrand, -half, half, cuts);
}

/// c0 in effect at f_s: fixed, or rescaled by the in-band power.
inline double effective_c0(const Psd& psd, const PcmConfig& config, double f_s) {
  if (!config.exact_sigma_in) return config.c0;
  const double in_band = psd.variance() - sub_sampling_mmse(psd, f_s);
  return config.c0 * in_band / config.sigma_in_sq;
}

/// PCM distortion with the ideal low-pass pre-filter at f_s/2:
/// mmse(f_s) + integral_{|f|<f_s/2} S / (1 + snr), snr = f_s (2^{R/f_s}-1)^2 S / c0.
/// Only valid for unimodal densities.
inline double pcm_distortion(const Psd& psd, const PcmConfig& config, double f_s) {
  if (!psd.is_unimodal())
    throw DomainError("pcm_distortion assumes a unimodal PSD; use pcm_mmse_general with an explicit pre-filter");
  if (!(f_s > 0.0)) throw DomainError("sampling frequency must be positive");
  if (f_s > config.rate) throw DomainError("f_s > R leaves fewer than one bit per sample");
  const double c0 = effective_c0(psd, config, f_s);
  const double levels = std::exp2(config.rate / f_s) - 1.0;
  const double snr_per_unit = f_s * levels * levels / c0;
  auto quant = [snr_per_unit, &psd](double f) {
    const double s = psd(f);
    return s > 0.0 ? s / (1.0 + snr_per_unit * s) : 0.0;
  };
  const auto cell = set_intersection(SpectralSet::symmetric(0.5 * f_s), psd.support());
  return sub_sampling_mmse(psd, f_s) + quadrature::integrate(quant, cell, psd.breakpoints());
}

struct PcmOptimum {
  double f_s_star = 0.0;
  double distortion = 0.0;
};

/// Minimizes pcm_distortion over f_s in (0, min(R, fs_max)]: a 256-point
/// scan, then golden-section search around the best scan point.
inline PcmOptimum optimal_pcm_fs(const Psd& psd, const PcmConfig& config) {
  config.validate();
  constexpr int kScan = 256;
  const double hi = std::min(config.rate, config.fs_max);
  auto d = [&](double f_s) { return pcm_distortion(psd, config, f_s); };

  int best = 1;
  double best_d = d(hi / kScan);
  for (int i = 2; i <= kScan; ++i) {
    const double v = d(hi * i / kScan);
    if (v < best_d) {
      best_d = v;
      best = i;
    }
  }
  double a = hi * (best - 1) / kScan;
  double b = hi * std::min(best + 1, kScan) / kScan;
  if (a <= 0.0) a = 1e-3 * hi / kScan;

  const double tol = 1e-6 * psd.frequency_scale();
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double d1 = d(x1), d2 = d(x2);
  while (b - a > tol) {
    if (d1 <= d2) {
      b = x2;
      x2 = x1;
      d2 = d1;
      x1 = b - inv_phi * (b - a);
      d1 = d(x1);
    } else {
      a = x1;
      x1 = x2;
      d1 = d2;
      x2 = a + inv_phi * (b - a);
      d2 = d(x2);
    }
  }
  PcmOptimum out{0.5 * (a + b), 0.0};
  out.distortion = d(out.f_s_star);
  if (best_d < out.distortion) out = {hi * best / kScan, best_d};
  return out;
}

/// Condition under which Nyquist sampling is PCM-optimal for a flat
/// spectrum of bandwidth f_B: 1 > (c0 / sigma^2) (2^{R/(2 f_B)} - 1)^{-2}.
inline bool flat_nyquist_condition(const Psd& psd, const PcmConfig& config) {
  const double levels = std::exp2(0.5 * config.rate / psd.frequency_scale()) - 1.0;
  return 1.0 > config.c0 / psd.variance() / (levels * levels);
}

/// Reconstruction filter of the linear MMSE decoder:
/// W(f) = conj(H(f)) S(f) / (sum_k |H(f - k f_s)|^2 S(f - k f_s) + sigma_eta^2 / f_s).
template <SpectralDensity S>
std::complex<double> wiener_filter(const S& psd, const Prefilter& h, double f_s, double sigma_eta_sq, double f) {
  if (!(f_s > 0.0)) throw DomainError("sampling frequency must be positive");
  const std::complex<double> num = std::conj(h.gain(f)) * psd(f);
  if (num == 0.0) return 0.0;
  double den = sigma_eta_sq / f_s;
  // Aliases of f itself, which need not lie in the fundamental cell.
  const double center = std::round(f / f_s);
  const double ext = pcm_detail::extent(psd, h);
  pcm_detail::for_each_alias(std::isfinite(ext) ? ext + std::abs(f) : ext, f_s, [&](int k) {
    const double g = f - (k + center) * f_s;
    const double w = std::norm(h.gain(g)) * psd(g);
    den += w;
    return w;
  });
  return den > 0.0 ? num / den : std::complex<double>(0.0);
}

}  // namespace subnyq
